//! Exact folded-ribbon layouts of 2-bridge closures.
//!
//! The core of the ribbon is a set of closed axis-aligned polylines. Every
//! corner is a 45° fold and every core self-intersection carries over/under
//! data in the crossing ledger.
//!
//! Two realizations are used. The *plat* runs the twist regions as a braid
//! word in a thin box of three parallel strands, closed by three caps whose
//! common scale absorbs the whole length budget. The *loop* is a two-strand
//! twist band closed by two nested rectangles, used for single twist regions
//! and for torus-type closures whose plat frame would be too short.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::BuildError;
use crate::geom::{axis_dir, contact, q, serde_q, Contact, Point, Q};
use crate::ribbon::{self, GeomParams, PartialLayout, StepTag};
use crate::tangle::{fraction, normalize, torus_handedness, ConwayNotation};

/// Which closed-form realization produced the layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Plat,
    Loop,
}

/// A segment of one closed core polyline: `segment` runs from vertex
/// `segment` to vertex `segment + 1` (cyclically).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrandRef {
    pub component: usize,
    pub segment: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingRecord {
    pub position: Point,
    pub over: StrandRef,
    pub under: StrandRef,
    pub step: StepTag,
}

/// The 45° fold line at a corner of the core.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldLine {
    pub component: usize,
    pub vertex: usize,
    pub from: Point,
    pub to: Point,
    /// `+1` for a left (counterclockwise) turn, `−1` for a right turn.
    pub turn: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub component: usize,
    pub index: usize,
    pub from: Point,
    pub to: Point,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonLayout {
    /// Notation as requested.
    pub notation: ConwayNotation,
    /// Normal form actually realized.
    pub built: ConwayNotation,
    pub params: GeomParams,
    pub method: Method,
    /// Built as the reflection `x → −x` of the negative construction.
    pub mirrored: bool,
    /// Closed core polylines as vertex cycles.
    pub loops: Vec<Vec<Point>>,
    pub folds: Vec<FoldLine>,
    pub crossings: Vec<CrossingRecord>,
}

#[derive(Serialize, Deserialize)]
struct LayoutRepr {
    notation: ConwayNotation,
    built: ConwayNotation,
    params: GeomParams,
    method: Method,
    mirrored: bool,
    #[serde(with = "serde_q")]
    length: Q,
    loops: Vec<Vec<Point>>,
    segments: Vec<Segment>,
    folds: Vec<FoldLine>,
    crossings: Vec<CrossingRecord>,
}

impl Serialize for RibbonLayout {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LayoutRepr {
            notation: self.notation.clone(),
            built: self.built.clone(),
            params: self.params.clone(),
            method: self.method,
            mirrored: self.mirrored,
            length: total_core_length(self),
            loops: self.loops.clone(),
            segments: self.segments(),
            folds: self.folds.clone(),
            crossings: self.crossings.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RibbonLayout {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = LayoutRepr::deserialize(d)?;
        let l = RibbonLayout {
            notation: r.notation,
            built: r.built,
            params: r.params,
            method: r.method,
            mirrored: r.mirrored,
            loops: r.loops,
            folds: r.folds,
            crossings: r.crossings,
        };
        if l.segments() != r.segments {
            return Err(serde::de::Error::custom("segments disagree with loops"));
        }
        Ok(l)
    }
}

impl RibbonLayout {
    pub fn segments(&self) -> Vec<Segment> {
        let mut out = Vec::new();
        for (c, lp) in self.loops.iter().enumerate() {
            let k = lp.len();
            for i in 0..k {
                out.push(Segment {
                    component: c,
                    index: i,
                    from: lp[i].clone(),
                    to: lp[(i + 1) % k].clone(),
                });
            }
        }
        out
    }

    pub fn segment(&self, s: StrandRef) -> (&Point, &Point) {
        let lp = &self.loops[s.component];
        (&lp[s.segment], &lp[(s.segment + 1) % lp.len()])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("layout serialization")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Crossing count of the realized normal form.
    pub fn crossing_number(&self) -> u64 {
        self.built.entries().iter().map(|a| a.unsigned_abs()).sum()
    }

    /// Reflection `x → −x`; over/under data is kept, so the knot is mirrored.
    pub fn reflected(&self) -> RibbonLayout {
        let loops: Vec<Vec<Point>> = self
            .loops
            .iter()
            .map(|lp| lp.iter().map(Point::reflect_x).collect())
            .collect();
        let crossings = self
            .crossings
            .iter()
            .map(|c| CrossingRecord {
                position: c.position.reflect_x(),
                ..c.clone()
            })
            .collect();
        let folds = fold_lines(&loops, &self.params.w);
        RibbonLayout {
            loops,
            folds,
            crossings,
            mirrored: !self.mirrored,
            built: self.built.mirror(),
            notation: self.notation.mirror(),
            ..self.clone()
        }
    }
}

/// Sum of the core segment lengths.
pub fn total_core_length(l: &RibbonLayout) -> Q {
    loops_length(&l.loops)
}

fn loops_length(loops: &[Vec<Point>]) -> Q {
    let mut t = Q::zero();
    for lp in loops {
        let k = lp.len();
        for i in 0..k {
            t += lp[i].l1(&lp[(i + 1) % k]);
        }
    }
    t
}

/// The upper bound `2c + 2` on folded ribbonlength.
pub fn ribbonlength_bound(c: u64) -> Q {
    q(2 * c as i64 + 2)
}

/// `2(c+1)w + (4m+2)ε`.
pub fn expected_length(c: u64, m: usize, p: &GeomParams) -> Q {
    q(2 * (c as i64 + 1)) * &p.w + q(4 * m as i64 + 2) * &p.eps
}

// ---------------------------------------------------------------------------
// construction

type Pieces = Vec<Vec<Point>>;

fn pt(x: &Q, y: &Q) -> Point {
    Point::new(x.clone(), y.clone())
}

/// Twist regions as a 3-strand braid in the box `0 ≤ x ≤ (c+1)g`, closed by
/// a left cap, an arc over the top and a right cap of scale `s`.
fn plat_pieces(ns: &[u64], s: &Q, g: &Q, d: &Q) -> (Pieces, Vec<Point>) {
    // region i uses σ2 for even i (0-based), σ1 for odd i
    let word: Vec<usize> = ns
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| std::iter::repeat_n(if i % 2 == 0 { 2 } else { 1 }, a as usize))
        .collect();
    let c = word.len() as i64;
    let mut lev = [Q::zero(), d.clone(), d * q(2)];
    let mut path: Vec<Vec<Point>> = (0..3).map(|k| vec![pt(&Q::zero(), &lev[k])]).collect();
    let mut order = [0usize, 1, 2];
    let mut jogs = Vec::new();
    for (k, &j) in word.iter().enumerate() {
        let x = g * q(k as i64 + 1);
        let lo = order[j - 1];
        let up = order[j];
        let yn = if j + 1 < 3 {
            (&lev[up] + &lev[order[j + 1]]) / q(2)
        } else {
            &lev[up] + d
        };
        path[lo].push(pt(&x, &lev[lo]));
        path[lo].push(pt(&x, &yn));
        jogs.push(pt(&x, &lev[up]));
        lev[lo] = yn;
        order.swap(j - 1, j);
    }
    let b = g * q(c + 1);
    for k in 0..3 {
        path[k].push(pt(&b, &lev[k]));
    }
    let (y1, y2, y3) = (lev[order[0]].clone(), lev[order[1]].clone(), lev[order[2]].clone());
    let z = Q::zero();
    let ms = -s.clone();
    let mut pieces = path;
    pieces.push(vec![pt(&z, d), pt(&ms, d), pt(&ms, &ms), pt(&z, &ms), pt(&z, &z)]);
    let x3 = &b + g;
    let d2 = d * q(2);
    pieces.push(vec![
        pt(&z, &d2),
        pt(&ms, &d2),
        pt(&ms, s),
        pt(&x3, s),
        pt(&x3, &y3),
        pt(&b, &y3),
    ]);
    let x2 = &b + g * q(2);
    let x2s = &x2 + s;
    pieces.push(vec![
        pt(&b, &y2),
        pt(&x2, &y2),
        pt(&x2, s),
        pt(&x2s, s),
        pt(&x2s, &y1),
        pt(&b, &y1),
    ]);
    (pieces, jogs)
}

/// Two-strand twist band of `n` jogs closed by nested rectangles reaching
/// `x = xr` and `y = ytop`.
fn loop_pieces(n: u64, xr: &Q, ytop: &Q, g: &Q, d: &Q, s0: &Q) -> (Pieces, Vec<Point>) {
    let z = Q::zero();
    let mut lev = [Q::zero(), d.clone()];
    let mut path = vec![vec![pt(&z, &z)], vec![pt(d, d)]];
    let mut order = [0usize, 1];
    let mut jogs = Vec::new();
    for k in 0..n {
        let x = s0 + g * q(k as i64);
        let (lo, up) = (order[0], order[1]);
        let yn = &lev[up] + d;
        path[lo].push(pt(&x, &lev[lo]));
        path[lo].push(pt(&x, &yn));
        jogs.push(pt(&x, &lev[up]));
        lev[lo] = yn;
        order = [up, lo];
    }
    let (lo, up) = (order[0], order[1]);
    let xi = xr - d;
    path[lo].push(pt(xr, &lev[lo]));
    path[up].push(pt(&xi, &lev[up]));
    let yi = ytop - d;
    let mut pieces = path;
    pieces.push(vec![pt(xr, &lev[lo]), pt(xr, ytop), pt(&z, ytop), pt(&z, &z)]);
    pieces.push(vec![pt(&xi, &lev[up]), pt(&xi, &yi), pt(d, &yi), pt(d, d)]);
    (pieces, jogs)
}

/// Joins open pieces end to end into closed loops.
fn stitch(pieces: Pieces) -> Result<Vec<Vec<Point>>, BuildError> {
    let mut ends: HashMap<Point, Vec<(usize, bool)>> = HashMap::new();
    for (i, p) in pieces.iter().enumerate() {
        ends.entry(p[0].clone()).or_default().push((i, false));
        ends.entry(p[p.len() - 1].clone()).or_default().push((i, true));
    }
    let mut used = vec![false; pieces.len()];
    let mut loops = Vec::new();
    for i in 0..pieces.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut pts = pieces[i].clone();
        loop {
            let tail = pts[pts.len() - 1].clone();
            let next = ends[&tail].iter().find(|(j, _)| !used[*j]).copied();
            let Some((j, at_end)) = next else { break };
            used[j] = true;
            let mut seg = pieces[j].clone();
            if at_end {
                seg.reverse();
            }
            pts.extend(seg.into_iter().skip(1));
        }
        if pts[0] != pts[pts.len() - 1] {
            return Err(BuildError::Construction("core pieces do not close up".into()));
        }
        pts.pop();
        loops.push(simplify(pts));
    }
    Ok(loops)
}

/// Drops repeated vertices and straight-through vertices of a closed polyline.
fn simplify(mut pts: Vec<Point>) -> Vec<Point> {
    pts.dedup();
    while pts.len() > 1 && pts[0] == pts[pts.len() - 1] {
        pts.pop();
    }
    loop {
        let k = pts.len();
        let mut removed = false;
        for i in 0..k {
            let (a, b, c) = (&pts[(i + k - 1) % k], &pts[i], &pts[(i + 1) % k]);
            if (a.x == b.x && b.x == c.x) || (a.y == b.y && b.y == c.y) {
                pts.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return pts;
        }
    }
}

/// Turn direction at each vertex: `+1` left, `−1` right, `0` straight.
pub fn turns(lp: &[Point]) -> Vec<i8> {
    let k = lp.len();
    (0..k)
        .map(|i| {
            let u = axis_dir(&lp[(i + k - 1) % k], &lp[i]).unwrap_or((0, 0));
            let v = axis_dir(&lp[i], &lp[(i + 1) % k]).unwrap_or((0, 0));
            u.0 * v.1 - u.1 * v.0
        })
        .collect()
}

/// Fold segments through every corner, parallel to `u + v`.
pub fn fold_lines(loops: &[Vec<Point>], w: &Q) -> Vec<FoldLine> {
    let half = w / q(2);
    let mut out = Vec::new();
    for (c, lp) in loops.iter().enumerate() {
        let k = lp.len();
        let t = turns(lp);
        for i in 0..k {
            let u = axis_dir(&lp[(i + k - 1) % k], &lp[i]).unwrap_or((0, 0));
            let v = axis_dir(&lp[i], &lp[(i + 1) % k]).unwrap_or((0, 0));
            let dx = &half * q((u.0 + v.0) as i64);
            let dy = &half * q((u.1 + v.1) as i64);
            out.push(FoldLine {
                component: c,
                vertex: i,
                from: lp[i].translate(&-dx.clone(), &-dy.clone()),
                to: lp[i].translate(&dx, &dy),
                turn: t[i],
            });
        }
    }
    out
}

/// Segment containing `p` in its relative interior, per loop.
fn strands_through(loops: &[Vec<Point>], p: &Point) -> Vec<(StrandRef, Q)> {
    let mut out = Vec::new();
    for (c, lp) in loops.iter().enumerate() {
        let k = lp.len();
        for i in 0..k {
            let (a, b) = (&lp[i], &lp[(i + 1) % k]);
            let inside = if a.x == b.x {
                p.x == a.x && p.y > a.y.clone().min(b.y.clone()) && p.y < a.y.clone().max(b.y.clone())
            } else {
                p.y == a.y && p.x > a.x.clone().min(b.x.clone()) && p.x < a.x.clone().max(b.x.clone())
            };
            if inside {
                out.push((
                    StrandRef {
                        component: c,
                        segment: i,
                    },
                    a.l1(p),
                ));
            }
        }
    }
    out
}

/// Chooses over/under so that every component alternates, anchored at the
/// first crossing: its vertical (jogging) strand passes over iff `jog_over`.
fn layer(
    loops: &[Vec<Point>],
    jogs: &[Point],
    steps: &[StepTag],
    jog_over: bool,
) -> Result<Vec<CrossingRecord>, BuildError> {
    let err = |m: String| BuildError::Construction(m);
    // the two strands at each crossing, vertical first
    let mut strands: Vec<[StrandRef; 2]> = Vec::new();
    let mut visits: Vec<Vec<(usize, Q, usize, usize)>> = vec![Vec::new(); loops.len()];
    for (k, p) in jogs.iter().enumerate() {
        let mut th = strands_through(loops, p);
        if th.len() != 2 {
            return Err(err(format!("crossing at {p} lies on {} strands", th.len())));
        }
        let vertical = |s: &StrandRef| {
            let lp = &loops[s.component];
            lp[s.segment].x == lp[(s.segment + 1) % lp.len()].x
        };
        if !vertical(&th[0].0) {
            th.swap(0, 1);
        }
        if !vertical(&th[0].0) || vertical(&th[1].0) {
            return Err(err(format!("crossing at {p} is not transversal")));
        }
        for (slot, (s, t)) in th.iter().enumerate() {
            visits[s.component].push((s.segment, t.clone(), k, slot));
        }
        strands.push([th[0].0, th[1].0]);
    }
    // over[k][slot]
    let mut over: Vec<[Option<bool>; 2]> = vec![[None, None]; jogs.len()];
    let mut adj: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for v in visits.iter_mut() {
        v.sort();
        let n = v.len();
        for i in 0..n {
            let a = (v[i].2, v[i].3);
            let b = (v[(i + 1) % n].2, v[(i + 1) % n].3);
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
    }
    for k in 0..jogs.len() {
        adj.entry((k, 0)).or_default().push((k, 1));
        adj.entry((k, 1)).or_default().push((k, 0));
    }
    for k in 0..jogs.len() {
        if over[k][0].is_some() {
            continue;
        }
        let seed = if k == 0 { jog_over } else { true };
        over[k][0] = Some(seed);
        let mut stack = vec![(k, 0usize)];
        while let Some((c, s)) = stack.pop() {
            let val = over[c][s].unwrap();
            for &(c2, s2) in adj.get(&(c, s)).map(|v| v.as_slice()).unwrap_or(&[]) {
                match over[c2][s2] {
                    None => {
                        over[c2][s2] = Some(!val);
                        stack.push((c2, s2));
                    }
                    Some(x) if x == val => {
                        return Err(err("core admits no alternating crossing assignment".into()))
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(jogs
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let vo = over[k][0].unwrap();
            let (o, u) = if vo { (0, 1) } else { (1, 0) };
            CrossingRecord {
                position: p.clone(),
                over: strands[k][o],
                under: strands[k][u],
                step: steps.get(k).copied().unwrap_or(StepTag::Close),
            }
        })
        .collect())
}

/// Over/under anchor for the plat: the first jog passes under.
const PLAT_JOG_OVER: bool = false;
/// Over/under anchor for the loop with the handedness of `(−p)`.
const LOOP_JOG_OVER: bool = false;

/// Scale solving for a construction whose length is affine in one parameter.
fn solve_affine<F>(build: F, budget: &Q) -> Result<Q, BuildError>
where
    F: Fn(&Q) -> Result<Vec<Vec<Point>>, BuildError>,
{
    let l1 = loops_length(&build(&q(1))?);
    let l2 = loops_length(&build(&q(2))?);
    let slope = &l2 - &l1;
    if !slope.is_positive() {
        return Err(BuildError::Construction("length does not grow with scale".into()));
    }
    Ok(q(1) + (budget - &l1) / slope)
}

type Realized = (Method, Vec<Vec<Point>>, Vec<CrossingRecord>);

/// Geometry for a negative normal form, with the crossing attribution `steps`.
fn realize(
    ns: &[u64],
    p: &GeomParams,
    steps: &[StepTag],
) -> Result<Realized, BuildError> {
    let c: u64 = ns.iter().sum();
    let m = ns.len();
    let budget = expected_length(c, m, p);
    let tiny = &p.eps / q(64 * c.max(1) as i64);
    let (g, d) = (tiny.clone(), tiny.clone());
    let neg = ConwayNotation::new(ns.iter().map(|&a| -(a as i64)).collect())?;
    let f = fraction(&neg);
    let torus = if m == 1 { Some(true) } else { torus_handedness(f) };
    let use_loop = m == 1 || (torus.is_some() && c < 5);
    if use_loop {
        let n = f.numer().unsigned_abs();
        let s0 = &p.w + &d * q(2);
        let xr = &s0 + &g * q(n as i64 + 1);
        let build = |y: &Q| stitch(loop_pieces(n, &xr, y, &g, &d, &s0).0);
        let ytop = solve_affine(build, &budget)?;
        if ytop <= &d * q(n as i64 + 3) {
            return Err(BuildError::Construction("length budget too small for the loop".into()));
        }
        let (pieces, jogs) = loop_pieces(n, &xr, &ytop, &g, &d, &s0);
        let loops = stitch(pieces)?;
        let jog_over = LOOP_JOG_OVER == torus.unwrap();
        let recs = layer(&loops, &jogs, steps, jog_over)?;
        Ok((Method::Loop, loops, recs))
    } else {
        let build = |s: &Q| stitch(plat_pieces(ns, s, &g, &d).0);
        let s = solve_affine(build, &budget)?;
        if s <= &d * q(2 * c as i64 + 4) {
            return Err(BuildError::Construction("length budget too small for the plat".into()));
        }
        let (pieces, jogs) = plat_pieces(ns, &s, &g, &d);
        let loops = stitch(pieces)?;
        let recs = layer(&loops, &jogs, steps, PLAT_JOG_OVER)?;
        Ok((Method::Plat, loops, recs))
    }
}

/// Realizes a fully connected partial layout and closes it up.
pub fn close_denominator(pl: &PartialLayout) -> Result<RibbonLayout, BuildError> {
    let plan = ribbon::closure_plan(pl)?;
    let built = ConwayNotation::new(plan.notation.clone())?;
    let ns: Vec<u64> = plan.notation.iter().map(|a| a.unsigned_abs()).collect();
    let (method, loops, crossings) = realize(&ns, &pl.params, &plan.ledger)?;
    let folds = fold_lines(&loops, &pl.params.w);
    Ok(RibbonLayout {
        notation: built.clone(),
        built,
        params: pl.params.clone(),
        method,
        mirrored: false,
        loops,
        folds,
        crossings,
    })
}

/// Full pipeline: normalize, build the negative form, mirror if needed.
pub fn build_ribbon_knot(n: &ConwayNotation, p: &GeomParams) -> Result<RibbonLayout, BuildError> {
    let normal = normalize(n)?;
    let positive = !normal.is_negative();
    let neg = if positive { normal.mirror() } else { normal };
    let max = ribbon::eps_max(neg.len(), &p.w);
    if p.eps > max {
        return Err(BuildError::Epsilon {
            eps: crate::geom::format_q(&p.eps),
            max: crate::geom::format_q(&max),
        });
    }
    let plan_layout = build_negative(&neg, p)?;
    let mut l = if positive {
        plan_layout.reflected()
    } else {
        plan_layout
    };
    l.notation = n.clone();
    Ok(l)
}

/// Builds a negative normal form without the `eps` range check.
pub fn build_negative(neg: &ConwayNotation, p: &GeomParams) -> Result<RibbonLayout, BuildError> {
    let ribbons = neg
        .entries()
        .iter()
        .enumerate()
        .map(|(k, &a)| ribbon::build_integer_ribbon(k + 1, a, p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut pl = if ribbons.len() == 1 {
        ribbon::start(&ribbons[0])
    } else {
        ribbon::connect_first_pair(&ribbons[0], &ribbons[1])?
    };
    for ri in ribbons.iter().skip(2) {
        pl = ribbon::connect_next(pl, ri)?;
    }
    close_denominator(&pl)
}

// ---------------------------------------------------------------------------
// validation

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub folds_disjoint: bool,
    pub closed_axis_aligned: bool,
    pub crossings_match: bool,
    pub length_identity: bool,
    pub problems: Vec<String>,
}

impl ValidityReport {
    pub fn ok(&self) -> bool {
        self.folds_disjoint && self.closed_axis_aligned && self.crossings_match && self.length_identity
    }
}

/// Checks, exactly: disjoint folds, closed axis-aligned core, transversal
/// crossings matching the ledger, and the length identity.
pub fn validate_layout(l: &RibbonLayout) -> ValidityReport {
    let mut r = ValidityReport::default();
    r.closed_axis_aligned = check_closed(l, &mut r.problems);
    r.folds_disjoint = r.closed_axis_aligned && check_folds(l, &mut r.problems);
    r.crossings_match = r.closed_axis_aligned && check_crossings(l, &mut r.problems);
    let c = l.crossing_number();
    let want = expected_length(c, l.built.len(), &l.params);
    let got = total_core_length(l);
    r.length_identity = got == want;
    if !r.length_identity {
        r.problems.push(format!("core length {got} differs from {want}"));
    }
    r
}

fn check_closed(l: &RibbonLayout, problems: &mut Vec<String>) -> bool {
    let mut ok = true;
    if l.loops.is_empty() {
        problems.push("layout has no core".into());
        return false;
    }
    for (c, lp) in l.loops.iter().enumerate() {
        if lp.len() < 4 {
            problems.push(format!("component {c} has only {} corners", lp.len()));
            ok = false;
            continue;
        }
        let k = lp.len();
        for i in 0..k {
            if axis_dir(&lp[i], &lp[(i + 1) % k]).is_none() {
                problems.push(format!("component {c} segment {i} is not axis-aligned"));
                ok = false;
            }
        }
        if ok && turns(lp).contains(&0) {
            problems.push(format!("component {c} has a straight or reversing corner"));
            ok = false;
        }
    }
    if ok && fold_lines(&l.loops, &l.params.w) != l.folds {
        problems.push("fold records disagree with the core".into());
        ok = false;
    }
    ok
}

/// Folds live on the developed strip of each component: a fold's slant
/// there is its turn times the parity of earlier folds. Two folds meet iff
/// their slants differ and they are at most `w` apart along the core.
fn check_folds(l: &RibbonLayout, problems: &mut Vec<String>) -> bool {
    let w = &l.params.w;
    let mut ok = true;
    for (c, lp) in l.loops.iter().enumerate() {
        let k = lp.len();
        let t = turns(lp);
        let mut pos = Vec::with_capacity(k);
        let mut acc = Q::zero();
        for i in 0..k {
            pos.push(acc.clone());
            acc += lp[i].l1(&lp[(i + 1) % k]);
        }
        let total = acc;
        for i in 0..k {
            for j in i + 1..k {
                let fwd = &pos[j] - &pos[i];
                let back = &total - &fwd;
                let tt = t[i] * t[j];
                let par_f = if (j - i) % 2 == 0 { 1 } else { -1 };
                let par_b = if (k - (j - i)) % 2 == 0 { 1 } else { -1 };
                if (tt * par_f == -1 && &fwd <= w) || (tt * par_b == -1 && &back <= w) {
                    problems.push(format!(
                        "component {c}: folds at corners {i} and {j} intersect on the ribbon"
                    ));
                    ok = false;
                }
            }
        }
    }
    ok
}

fn check_crossings(l: &RibbonLayout, problems: &mut Vec<String>) -> bool {
    let segs = l.segments();
    let mut ok = true;
    let mut found: Vec<(Point, StrandRef, StrandRef)> = Vec::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (a, b) = (&segs[i], &segs[j]);
            let k = l.loops[a.component].len();
            let adjacent = a.component == b.component
                && ((a.index + 1) % k == b.index || (b.index + 1) % k == a.index);
            match contact(&a.from, &a.to, &b.from, &b.to) {
                Contact::Disjoint => {}
                Contact::Transversal(p) => found.push((
                    p,
                    StrandRef {
                        component: a.component,
                        segment: a.index,
                    },
                    StrandRef {
                        component: b.component,
                        segment: b.index,
                    },
                )),
                Contact::Degenerate(p) => {
                    let shared = if (a.index + 1) % k == b.index { &a.to } else { &a.from };
                    if !(adjacent && &p == shared) {
                        problems.push(format!("non-transversal contact at {p}"));
                        ok = false;
                    }
                }
            }
        }
    }
    if found.len() != l.crossings.len() {
        problems.push(format!(
            "geometry has {} crossings, ledger has {}",
            found.len(),
            l.crossings.len()
        ));
        ok = false;
    }
    let mut by_pos: HashMap<&Point, Vec<&CrossingRecord>> = HashMap::new();
    for rec in &l.crossings {
        by_pos.entry(&rec.position).or_default().push(rec);
    }
    if by_pos.values().any(|v| v.len() > 1) {
        problems.push("ledger positions are not distinct".into());
        ok = false;
    }
    for (p, s1, s2) in &found {
        match by_pos.get(p) {
            None => {
                problems.push(format!("crossing at {p} missing from the ledger"));
                ok = false;
            }
            Some(recs) => {
                let rec = recs[0];
                let pair = (rec.over == *s1 && rec.under == *s2) || (rec.over == *s2 && rec.under == *s1);
                if !pair {
                    problems.push(format!("ledger strands at {p} do not match the geometry"));
                    ok = false;
                }
            }
        }
    }
    let found_pos: Vec<&Point> = found.iter().map(|f| &f.0).collect();
    for rec in &l.crossings {
        if !found_pos.contains(&&rec.position) {
            problems.push(format!("ledger crossing at {} has no geometric crossing", rec.position));
            ok = false;
        }
    }
    ok
}
