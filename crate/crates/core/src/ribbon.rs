//! Integer ribbons and the attachment bookkeeping that assembles them.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::BuildError;
use crate::geom::{contact, q, qr, serde_q, Contact, Point, Q};
use crate::tangle::ConwayNotation;

/// Ribbon width and end margin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeomParams {
    #[serde(with = "serde_q")]
    pub w: Q,
    #[serde(with = "serde_q")]
    pub eps: Q,
}

impl GeomParams {
    /// Checks `0 < eps ≤ eps_max(m, w)`.
    pub fn new(w: Q, eps: Q, m: usize) -> Result<Self, BuildError> {
        let p = Self::unchecked(w, eps)?;
        let max = eps_max(m, &p.w);
        if p.eps > max {
            return Err(BuildError::Epsilon {
                eps: crate::geom::format_q(&p.eps),
                max: crate::geom::format_q(&max),
            });
        }
        Ok(p)
    }

    /// Positivity only; used for fault-injection fixtures.
    pub fn unchecked(w: Q, eps: Q) -> Result<Self, BuildError> {
        if !w.is_positive() {
            return Err(BuildError::Width);
        }
        if !eps.is_positive() {
            return Err(BuildError::Epsilon {
                eps: crate::geom::format_q(&eps),
                max: "?".into(),
            });
        }
        Ok(GeomParams { w, eps })
    }

    /// `w = 1`, `eps = 1/(16(m+1))`.
    pub fn standard(m: usize) -> Self {
        Self::for_width(q(1), m)
    }

    /// `eps = w/(16(m+1))`, half the admissible maximum.
    pub fn for_width(w: Q, m: usize) -> Self {
        let eps = &w / q(16 * (m as i64 + 1));
        GeomParams { w, eps }
    }
}

/// Largest admissible margin, `w/(8(m+1))`.
pub fn eps_max(m: usize, w: &Q) -> Q {
    w / q(8 * (m as i64 + 1))
}

/// `r_i^j`: end line `j` of integer ribbon `i` (both 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EndLabel {
    pub ribbon: usize,
    pub j: u8,
}

impl fmt::Display for EndLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r_{}^{}", self.ribbon, self.j)
    }
}

fn r(ribbon: usize, j: u8) -> EndLabel {
    EndLabel { ribbon, j }
}

/// The construction step a crossing is attributed to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepTag {
    /// Inside integer ribbon `ribbon`.
    Internal { ribbon: usize },
    /// Added while attaching ribbon `ribbon` to its predecessors.
    Connect { ribbon: usize },
    /// Added by the denominator closure.
    Close,
}

/// A labelled end line: a width-`w` segment across the ribbon at a strip end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndLine {
    pub label: EndLabel,
    pub from: Point,
    pub to: Point,
}

/// One flat strip of an integer ribbon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strip {
    /// Open core polyline, margins included.
    pub core: Vec<Point>,
}

impl Strip {
    pub fn length(&self) -> Q {
        self.core.windows(2).map(|p| p[0].l1(&p[1])).sum()
    }
}

/// Internal crossing of an integer ribbon: `over` and `under` index strips.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InternalCrossing {
    pub position: Point,
    pub over: usize,
    pub under: usize,
}

/// The folded-ribbon version of one integer tangle, in local coordinates.
///
/// Strips are unit-pitch staircases whose unmargined ends lie on the line
/// `x + y = 0`; everything except the end margins sits inside the right
/// isosceles triangle returned by [`IntegerRibbon::triangle`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerRibbon {
    pub index: usize,
    pub n: u64,
    pub strips: Vec<Strip>,
    pub end_lines: Vec<EndLine>,
    pub crossings: Vec<InternalCrossing>,
    pub params: GeomParams,
}

/// Staircase of `steps` unit steps starting downward from `start`, with an
/// `eps` margin at each end.
fn staircase(start: &Point, steps: u64, w: &Q, eps: &Q) -> Vec<Point> {
    let mut pts = vec![start.translate(&Q::zero(), eps), start.clone()];
    let mut cur = start.clone();
    for k in 0..steps {
        cur = if k % 2 == 0 {
            cur.translate(&Q::zero(), &-w)
        } else {
            cur.translate(w, &Q::zero())
        };
        pts.push(cur.clone());
    }
    // the last step is horizontal iff steps is even
    let tail = if steps.is_multiple_of(2) {
        cur.translate(eps, &Q::zero())
    } else {
        cur.translate(&Q::zero(), &-eps)
    };
    pts.push(tail);
    pts
}

/// Builds `R_i` for a negative twist count `a`.
pub fn build_integer_ribbon(
    i: usize,
    a: i64,
    p: &GeomParams,
) -> Result<IntegerRibbon, BuildError> {
    if a >= 0 {
        return Err(BuildError::Twist(a));
    }
    let n = a.unsigned_abs();
    let (w, eps) = (&p.w, &p.eps);
    let half = w / q(2);
    let origin = Point::new(Q::zero(), Q::zero());
    let inner = Point::new(half.clone(), -half.clone());
    let strips: Vec<Strip> = if n == 1 {
        vec![Strip {
            core: staircase(&origin, 2, w, eps),
        }]
    } else if n.is_multiple_of(2) {
        vec![
            Strip {
                core: staircase(&origin, n, w, eps),
            },
            Strip {
                core: staircase(&inner, n, w, eps),
            },
        ]
    } else {
        vec![
            Strip {
                core: staircase(&origin, n + 1, w, eps),
            },
            Strip {
                core: staircase(&inner, n - 1, w, eps),
            },
        ]
    };

    // internal crossings, alternating along the first strip
    let mut found: Vec<(Q, Point)> = Vec::new();
    if strips.len() == 2 {
        let (s0, s1) = (&strips[0].core, &strips[1].core);
        let mut along = Q::zero();
        for a in s0.windows(2) {
            for b in s1.windows(2) {
                if let Contact::Transversal(pt) = contact(&a[0], &a[1], &b[0], &b[1]) {
                    found.push((&along + a[0].l1(&pt), pt));
                }
            }
            along += a[0].l1(&a[1]);
        }
    }
    found.sort();
    let crossings = found
        .into_iter()
        .enumerate()
        .map(|(k, (_, position))| InternalCrossing {
            position,
            over: k % 2,
            under: 1 - k % 2,
        })
        .collect();

    // end lines, ordered along the hypotenuse
    let mut ends: Vec<(Point, Point)> = Vec::new();
    for s in &strips {
        let c = &s.core;
        ends.push((c[1].clone(), c[0].clone()));
        let k = c.len();
        ends.push((c[k - 2].clone(), c[k - 1].clone()));
    }
    // right to left for odd i, left to right for even i
    ends.sort_by(|a, b| a.0.x.cmp(&b.0.x));
    if i % 2 == 1 {
        ends.reverse();
    }
    let labels: Vec<u8> = if n == 1 { vec![1, 4] } else { vec![1, 2, 3, 4] };
    let end_lines = ends
        .into_iter()
        .zip(labels)
        .map(|((inner_pt, tip), j)| {
            // across the strip at the margin tip
            let (from, to) = if inner_pt.x == tip.x {
                (tip.translate(&-half.clone(), &Q::zero()), tip.translate(&half, &Q::zero()))
            } else {
                (tip.translate(&Q::zero(), &-half.clone()), tip.translate(&Q::zero(), &half))
            };
            EndLine {
                label: r(i, j),
                from,
                to,
            }
        })
        .collect();

    Ok(IntegerRibbon {
        index: i,
        n,
        strips,
        end_lines,
        crossings,
        params: p.clone(),
    })
}

impl IntegerRibbon {
    pub fn total_length(&self) -> Q {
        self.strips.iter().map(|s| s.length()).sum()
    }

    /// Vertices `(0,0)`, `(0,−L)`, `(L,−L)` with `L = (n+1)w/2`.
    pub fn triangle(&self) -> [Point; 3] {
        let l = &self.params.w * qr(self.n as i64 + 1, 2);
        [
            Point::new(Q::zero(), Q::zero()),
            Point::new(Q::zero(), -l.clone()),
            Point::new(l.clone(), -l),
        ]
    }

    /// Whether every core vertex other than the margin tips lies in the triangle.
    pub fn inside_triangle(&self) -> bool {
        let l = &self.params.w * qr(self.n as i64 + 1, 2);
        self.strips.iter().all(|s| {
            let k = s.core.len();
            s.core[1..k - 1].iter().all(|p| {
                !p.x.is_negative() && p.y >= -l.clone() && !(&p.x + &p.y).is_positive()
            })
        })
    }

    pub fn labels(&self) -> BTreeSet<EndLabel> {
        self.end_lines.iter().map(|e| e.label).collect()
    }
}

/// Ribbons attached so far, tracked at the level of end-line labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialLayout {
    pub notation: Vec<i64>,
    pub params: GeomParams,
    /// Unattached end lines, under their current names.
    pub open: BTreeSet<EndLabel>,
    pub attachments: Vec<(EndLabel, EndLabel)>,
    /// Renamings `(old, new)` applied to open ends.
    pub relabels: Vec<(EndLabel, EndLabel)>,
    /// Crossing attribution in construction order.
    pub ledger: Vec<StepTag>,
}

impl PartialLayout {
    pub fn connected(&self) -> usize {
        self.notation.len()
    }

    /// Attaches `a` to `b` if both exist, otherwise renames whichever is open.
    fn attach_or_rename(&mut self, a: EndLabel, b: EndLabel, rename: Option<(EndLabel, EndLabel)>) {
        if self.open.contains(&a) && self.open.contains(&b) {
            self.open.remove(&a);
            self.open.remove(&b);
            self.attachments.push((a, b));
        } else if let Some((old, new)) = rename {
            if self.open.remove(&old) {
                self.open.insert(new);
                self.relabels.push((old, new));
            }
        }
    }

    fn add_ribbon(&mut self, ri: &IntegerRibbon) {
        self.notation.push(-(ri.n as i64));
        self.open.extend(ri.labels());
        for _ in 1..ri.n {
            self.ledger.push(StepTag::Internal { ribbon: ri.index });
        }
    }
}

fn check_params(a: &GeomParams, b: &GeomParams) -> Result<(), BuildError> {
    if a != b {
        return Err(BuildError::Construction(
            "integer ribbons built with different width or margin".into(),
        ));
    }
    Ok(())
}

/// Attaches `r_1^1` to `r_2^2` and `r_1^3` to `r_2^1`.
pub fn connect_first_pair(r1: &IntegerRibbon, r2: &IntegerRibbon) -> Result<PartialLayout, BuildError> {
    if r1.index != 1 || r2.index != 2 {
        return Err(BuildError::Construction(format!(
            "first pair must be ribbons 1 and 2, got {} and {}",
            r1.index, r2.index
        )));
    }
    check_params(&r1.params, &r2.params)?;
    let mut pl = start(r1);
    pl.add_ribbon(r2);
    // a_2 = −1: r_1^1 stays open as r_2^3
    pl.attach_or_rename(r(1, 1), r(2, 2), Some((r(1, 1), r(2, 3))));
    // a_1 = −1: r_2^1 stays open as r_1^2
    pl.attach_or_rename(r(1, 3), r(2, 1), Some((r(2, 1), r(1, 2))));
    pl.ledger.push(StepTag::Connect { ribbon: 2 });
    Ok(pl)
}

/// Starts a layout from `R_1` alone.
pub fn start(r1: &IntegerRibbon) -> PartialLayout {
    let mut pl = PartialLayout {
        notation: Vec::new(),
        params: r1.params.clone(),
        open: BTreeSet::new(),
        attachments: Vec::new(),
        relabels: Vec::new(),
        ledger: Vec::new(),
    };
    pl.add_ribbon(r1);
    pl
}

/// Attaches `r_{i−1}^3` to `r_i^1` and `r_{i−2}^4` to `r_i^2`.
///
/// `R_i` sits to the left of `r_{i−2}^4` for odd `i`, to the right for even `i`.
pub fn connect_next(mut pl: PartialLayout, ri: &IntegerRibbon) -> Result<PartialLayout, BuildError> {
    let i = ri.index;
    if i < 3 || i != pl.connected() + 1 {
        return Err(BuildError::Construction(format!(
            "ribbon {i} cannot follow {} connected ribbons",
            pl.connected()
        )));
    }
    check_params(&pl.params, &ri.params)?;
    pl.add_ribbon(ri);
    pl.attach_or_rename(r(i - 1, 3), r(i, 1), None);
    // a_i = −1: r_{i−2}^4 stays open as r_i^3
    pl.attach_or_rename(r(i - 2, 4), r(i, 2), Some((r(i - 2, 4), r(i, 3))));
    pl.ledger.push(StepTag::Connect { ribbon: i });
    Ok(pl)
}

/// Which side of `r_{i−2}^4` ribbon `i` is placed on.
pub fn attachment_side(i: usize) -> Side {
    if i % 2 == 1 {
        Side::Left
    } else {
        Side::Right
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// End lines joined by the closure: one pair through a new `2w` connector
/// ribbon and one pair attached directly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosurePlan {
    pub via_connector: (EndLabel, EndLabel),
    pub direct: Option<(EndLabel, EndLabel)>,
    pub ledger: Vec<StepTag>,
    pub notation: Vec<i64>,
}

/// Label-level denominator closure; the geometric realization happens in
/// [`crate::layout::close_denominator`].
pub fn closure_plan(pl: &PartialLayout) -> Result<ClosurePlan, BuildError> {
    let m = pl.connected();
    let expected: BTreeSet<EndLabel> = if m == 1 {
        if pl.notation[0] == -1 {
            [r(1, 1), r(1, 4)].into()
        } else {
            [r(1, 1), r(1, 2), r(1, 3), r(1, 4)].into()
        }
    } else {
        [r(1, 2), r(m - 1, 4), r(m, 3), r(m, 4)].into()
    };
    if pl.open != expected {
        let names: Vec<String> = pl.open.iter().map(|e| e.to_string()).collect();
        return Err(BuildError::Construction(format!(
            "unexpected open end lines before closure: {{{}}}",
            names.join(", ")
        )));
    }
    let (via_connector, direct) = if m == 1 {
        if pl.notation[0] == -1 {
            ((r(1, 1), r(1, 4)), None)
        } else {
            ((r(1, 1), r(1, 3)), Some((r(1, 2), r(1, 4))))
        }
    } else {
        ((r(m - 1, 4), r(m, 3)), Some((r(1, 2), r(m, 4))))
    };
    let mut ledger = pl.ledger.clone();
    ledger.push(StepTag::Close);
    Ok(ClosurePlan {
        via_connector,
        direct,
        ledger,
        notation: pl.notation.clone(),
    })
}

/// Runs the attachment bookkeeping for a negative normal-form notation.
pub fn assemble(n: &ConwayNotation, p: &GeomParams) -> Result<ClosurePlan, BuildError> {
    let ribbons = n
        .entries()
        .iter()
        .enumerate()
        .map(|(k, &a)| build_integer_ribbon(k + 1, a, p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut pl = if ribbons.len() == 1 {
        start(&ribbons[0])
    } else {
        connect_first_pair(&ribbons[0], &ribbons[1])?
    };
    for ri in ribbons.iter().skip(2) {
        pl = connect_next(pl, ri)?;
    }
    closure_plan(&pl)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> GeomParams {
        GeomParams::new(q(1), qr(1, 64), 5).unwrap()
    }

    fn labels(v: &[(usize, u8)]) -> BTreeSet<EndLabel> {
        v.iter().map(|&(i, j)| r(i, j)).collect()
    }

    #[test]
    fn strip_lengths() {
        let p = params();
        let e2 = &p.eps * q(2);
        for (n, want) in [(4i64, vec![4, 4]), (3, vec![4, 2]), (1, vec![2]), (5, vec![6, 4])] {
            let rb = build_integer_ribbon(1, -n, &p).unwrap();
            let got: Vec<Q> = rb.strips.iter().map(|s| s.length()).collect();
            let want: Vec<Q> = want.iter().map(|&k| q(k) + &e2).collect();
            assert_eq!(got, want, "n = {n}");
            if n > 1 {
                assert_eq!(got.iter().cloned().sum::<Q>(), q(2 * n) + q(2) * &e2);
            }
            assert_eq!(rb.crossings.len() as i64, n - 1);
            assert!(rb.inside_triangle());
            let total: Q = want.iter().cloned().sum();
            assert_eq!(rb.total_length(), total);
            assert_eq!(rb.end_lines.len(), if n == 1 { 2 } else { 4 });
        }
    }

    #[test]
    fn rejects_nonnegative() {
        assert!(matches!(build_integer_ribbon(1, 2, &params()), Err(BuildError::Twist(2))));
    }

    #[test]
    fn eps_range() {
        assert!(GeomParams::new(q(1), qr(1, 16), 1).is_ok());
        assert!(GeomParams::new(q(1), qr(1, 15), 1).is_err());
        assert!(GeomParams::new(q(0), qr(1, 64), 1).is_err());
    }

    #[test]
    fn first_pair() {
        let p = params();
        let r1 = build_integer_ribbon(1, -5, &p).unwrap();
        let r2 = build_integer_ribbon(2, -3, &p).unwrap();
        let pl = connect_first_pair(&r1, &r2).unwrap();
        assert_eq!(pl.open, labels(&[(1, 2), (1, 4), (2, 3), (2, 4)]));
        assert_eq!(pl.ledger.len(), 4 + 2 + 1);

        let r1 = build_integer_ribbon(1, -1, &p).unwrap();
        let r2 = build_integer_ribbon(2, -2, &p).unwrap();
        let pl = connect_first_pair(&r1, &r2).unwrap();
        assert!(pl.relabels.contains(&(r(2, 1), r(1, 2))));
        assert_eq!(pl.open, labels(&[(1, 2), (1, 4), (2, 3), (2, 4)]));
    }

    #[test]
    fn full_assembly() {
        let p = params();
        let n = ConwayNotation::new(vec![-5, -3, -4, -1, -2]).unwrap();
        let plan = assemble(&n, &p).unwrap();
        assert_eq!(plan.ledger.len(), 15);
        assert_eq!(plan.via_connector, (r(4, 4), r(5, 3)));
        assert_eq!(plan.direct, Some((r(1, 2), r(5, 4))));
        assert_eq!(attachment_side(3), Side::Left);
        assert_eq!(attachment_side(4), Side::Right);
    }
}
