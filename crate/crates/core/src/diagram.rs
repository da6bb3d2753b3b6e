//! Reference diagrams of 2-bridge closures and their polynomial invariants.

use std::collections::HashMap;

use crate::error::{DiagramError, TangleError};
use crate::pd::{PDCode, PdCrossing};
use crate::poly::LaurentPolynomial;
use crate::tangle::{crossing_number, ConwayNotation};

/// Largest crossing count accepted by the state sum.
pub const DEFAULT_STATE_BUDGET: usize = 20;

// Tangle corners; crossings store their slots counterclockwise from NE.
const NE: usize = 0;
const NW: usize = 1;
const SW: usize = 2;
const SE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum End {
    Slot(usize, usize),
    /// Pass-through point on one of the two initial strands of `T_∞`.
    Term(usize),
}

/// Unoriented rational tangle under construction.
struct TangleBuilder {
    /// Per crossing: is the NE–SW strand the over-strand?
    over_ne_sw: Vec<bool>,
    edges: Vec<(End, End)>,
    /// Free ends at NE, NW, SW, SE.
    corner: [End; 4],
}

impl TangleBuilder {
    /// `T_∞`: two vertical strands NW–SW and NE–SE.
    fn infinity() -> Self {
        TangleBuilder {
            over_ne_sw: Vec::new(),
            edges: vec![(End::Term(NW), End::Term(SW)), (End::Term(NE), End::Term(SE))],
            corner: [End::Term(NE), End::Term(NW), End::Term(SW), End::Term(SE)],
        }
    }

    fn crossing(&mut self, over_ne_sw: bool) -> usize {
        self.over_ne_sw.push(over_ne_sw);
        self.over_ne_sw.len() - 1
    }

    /// One half twist of the two bottom ends.
    fn vertical_twist(&mut self, positive: bool) {
        let x = self.crossing(!positive);
        self.edges.push((self.corner[SW], End::Slot(x, NW)));
        self.edges.push((self.corner[SE], End::Slot(x, NE)));
        self.corner[SW] = End::Slot(x, SW);
        self.corner[SE] = End::Slot(x, SE);
    }

    /// One half twist of the two right ends.
    fn horizontal_twist(&mut self, positive: bool) {
        let x = self.crossing(!positive);
        self.edges.push((self.corner[NE], End::Slot(x, NW)));
        self.edges.push((self.corner[SE], End::Slot(x, SW)));
        self.corner[NE] = End::Slot(x, NE);
        self.corner[SE] = End::Slot(x, SE);
    }

    /// Denominator closure: NE to SE and NW to SW.
    fn close(mut self) -> Result<PDCode, DiagramError> {
        self.edges.push((self.corner[NE], self.corner[SE]));
        self.edges.push((self.corner[NW], self.corner[SW]));
        self.into_pd()
    }

    fn into_pd(self) -> Result<PDCode, DiagramError> {
        let mut incident: HashMap<End, Vec<usize>> = HashMap::new();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            incident.entry(a).or_default().push(e);
            incident.entry(b).or_default().push(e);
        }
        let other = |e: usize, from: End| {
            let (a, b) = self.edges[e];
            if a == from {
                b
            } else {
                a
            }
        };
        let n = self.over_ne_sw.len();
        let mut used = vec![false; self.edges.len()];
        let mut strand_done = vec![[false; 4]; n];
        // visits per component: (crossing, entry slot)
        let mut components: Vec<Vec<(usize, usize)>> = Vec::new();
        for c in 0..n {
            for s in 0..4 {
                if strand_done[c][s] {
                    continue;
                }
                let mut visits = Vec::new();
                let (mut cx, mut sx) = (c, s);
                loop {
                    visits.push((cx, sx));
                    strand_done[cx][sx] = true;
                    strand_done[cx][(sx + 2) % 4] = true;
                    let mut at = End::Slot(cx, (sx + 2) % 4);
                    let mut e = incident[&at][0];
                    loop {
                        used[e] = true;
                        at = other(e, at);
                        match at {
                            End::Slot(c2, s2) => {
                                cx = c2;
                                sx = s2;
                                break;
                            }
                            End::Term(_) => {
                                let inc = &incident[&at];
                                e = if inc[0] == e { inc[1] } else { inc[0] };
                            }
                        }
                    }
                    if (cx, sx) == (c, s) {
                        break;
                    }
                }
                components.push(visits);
            }
        }
        // crossing-free loops run through terminals only
        let mut free_loops = 0;
        for e0 in 0..self.edges.len() {
            if used[e0] {
                continue;
            }
            free_loops += 1;
            let (mut at, _) = self.edges[e0];
            let mut e = e0;
            while !used[e] {
                used[e] = true;
                at = other(e, at);
                let inc = &incident[&at];
                e = if inc[0] == e { inc[1] } else { inc[0] };
            }
        }

        let mut label = vec![[usize::MAX; 4]; n];
        let mut incoming = vec![[false; 4]; n];
        let mut base = 0;
        for visits in &components {
            let k = visits.len();
            for (i, &(c, s)) in visits.iter().enumerate() {
                label[c][s] = base + i;
                incoming[c][s] = true;
                label[c][(s + 2) % 4] = base + (i + 1) % k;
            }
            base += k;
        }
        let crossings = (0..n)
            .map(|c| {
                let under = if self.over_ne_sw[c] { [NW, SE] } else { [NE, SW] };
                let u_in = if incoming[c][under[0]] { under[0] } else { under[1] };
                let arcs = [0, 1, 2, 3].map(|k| label[c][(u_in + k) % 4]);
                let o_in = if incoming[c][(u_in + 1) % 4] {
                    (u_in + 1) % 4
                } else {
                    (u_in + 3) % 4
                };
                let sign = if o_in == (u_in + 3) % 4 { 1 } else { -1 };
                PdCrossing { arcs, sign }
            })
            .collect();
        PDCode::new(crossings, free_loops)
    }
}

/// Alternating PD code of the denominator closure of `T(a_1,…,a_m)`.
///
/// Starting from `T_∞`, odd-indexed entries twist the bottom ends and
/// even-indexed entries twist the right ends, then NE is joined to SE and NW
/// to SW.
pub fn build_reference_diagram(n: &ConwayNotation) -> Result<PDCode, DiagramError> {
    if !n.is_normal() {
        return Err(TangleError::NotNormal(n.clone()).into());
    }
    let expected = crossing_number(n)? as usize;
    let mut t = TangleBuilder::infinity();
    for (i, &a) in n.entries().iter().enumerate() {
        for _ in 0..a.unsigned_abs() {
            if i % 2 == 0 {
                t.vertical_twist(a > 0);
            } else {
                t.horizontal_twist(a > 0);
            }
        }
    }
    let pd = t.close()?;
    debug_assert_eq!(pd.len(), expected);
    Ok(pd)
}

/// Kauffman bracket in `A`, normalized so a single loop has bracket 1.
pub fn kauffman_bracket(d: &PDCode) -> Result<LaurentPolynomial, DiagramError> {
    kauffman_bracket_with_budget(d, DEFAULT_STATE_BUDGET)
}

pub fn kauffman_bracket_with_budget(
    d: &PDCode,
    budget: usize,
) -> Result<LaurentPolynomial, DiagramError> {
    let n = d.len();
    if n > budget {
        return Err(DiagramError::Budget {
            crossings: n,
            budget,
        });
    }
    // dense arc indices
    let mut index: HashMap<usize, usize> = HashMap::new();
    for x in d.crossings() {
        for a in x.arcs {
            let k = index.len();
            index.entry(a).or_insert(k);
        }
    }
    let arcs: Vec<[usize; 4]> = d
        .crossings()
        .iter()
        .map(|x| x.arcs.map(|a| index[&a]))
        .collect();
    let m = index.len();
    // tally[(number of A-smoothings, loops)]
    let mut tally: HashMap<(usize, usize), i64> = HashMap::new();
    let mut parent = vec![0usize; m];
    for state in 0u64..(1u64 << n) {
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i;
        }
        let mut loops = m;
        for (c, x) in arcs.iter().enumerate() {
            let pairs = if state >> c & 1 == 0 {
                [(x[0], x[1]), (x[2], x[3])]
            } else {
                [(x[0], x[3]), (x[1], x[2])]
            };
            for (u, v) in pairs {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru] = rv;
                    loops -= 1;
                }
            }
        }
        let a_count = n - state.count_ones() as usize;
        *tally.entry((a_count, loops)).or_insert(0) += 1;
    }
    let delta = LaurentPolynomial::from_terms([(2, -1), (-2, -1)]);
    let mut out = LaurentPolynomial::zero();
    for ((a_count, loops), count) in tally {
        let loops = loops + d.free_loops();
        let exp = 2 * a_count as i64 - n as i64;
        let term = &LaurentPolynomial::monomial(count, exp) * &delta.pow(loops as u32 - 1);
        out = &out + &term;
    }
    Ok(out)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Jones polynomial in the variable `t^{1/2}` (exponent `k` means `t^{k/2}`).
///
/// `V = (−A³)^{−w} ⟨D⟩` with `t = A^{−4}`; mirror images negate exponents.
pub fn jones_polynomial(d: &PDCode) -> Result<LaurentPolynomial, DiagramError> {
    let bracket = kauffman_bracket(d)?;
    Ok(jones_from_bracket(&bracket, d.writhe()))
}

pub fn jones_from_bracket(bracket: &LaurentPolynomial, writhe: i64) -> LaurentPolynomial {
    let sign = if writhe % 2 == 0 { 1 } else { -1 };
    let f = bracket.shift(-3 * writhe);
    let f = LaurentPolynomial::from_terms(f.terms().map(|(e, c)| (e, c * sign)));
    f.divide_exponents(-2)
        .expect("bracket exponents of a diagram are even")
}

/// Jones polynomials over every relative orientation of the components.
pub fn jones_all_orientations(d: &PDCode) -> Result<Vec<LaurentPolynomial>, DiagramError> {
    let bracket = kauffman_bracket(d)?;
    let k = d.components().len();
    let mut out = Vec::new();
    // reversing every component at once changes nothing, so fix the first
    for mask in 0u32..(1u32 << k.saturating_sub(1)) {
        let mut pd = d.clone();
        for j in 1..k {
            if mask >> (j - 1) & 1 == 1 {
                pd = pd.reverse_component(j);
            }
        }
        let v = jones_from_bracket(&bracket, pd.writhe());
        if !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

/// `|V(−1)|`, read off the bracket at a primitive eighth root of unity.
pub fn determinant(d: &PDCode) -> Result<u64, DiagramError> {
    let b = kauffman_bracket(d)?;
    determinant_from_bracket(&b)
}

pub fn determinant_from_bracket(b: &LaurentPolynomial) -> Result<u64, DiagramError> {
    let e0 = match b.min_exp() {
        Some(e) => e,
        None => return Ok(0),
    };
    let mut sum: i64 = 0;
    for (e, c) in b.terms() {
        if (e - e0) % 4 != 0 {
            return Err(DiagramError::Malformed(
                "bracket exponents not congruent mod 4".into(),
            ));
        }
        // A^4 = −1
        if ((e - e0) / 4) % 2 == 0 {
            sum += c;
        } else {
            sum -= c;
        }
    }
    Ok(sum.unsigned_abs())
}

/// Alternating, connected, and free of nugatory crossings.
pub fn reduced_alternating_check(d: &PDCode) -> bool {
    if d.is_empty() {
        return d.free_loops() <= 1;
    }
    if d.free_loops() > 0 {
        return false;
    }
    let alternating = d.gauss_sequences().iter().all(|seq| {
        let k = seq.len();
        (0..k).all(|i| seq[i].1 != seq[(i + 1) % k].1)
    });
    alternating && connected_without(d, None) && (0..d.len()).all(|c| connected_without(d, Some(c)))
}

/// Connectivity of the crossing/arc incidence graph with one crossing removed.
fn connected_without(d: &PDCode, removed: Option<usize>) -> bool {
    let n = d.len();
    let mut arc_index: HashMap<usize, usize> = HashMap::new();
    for x in d.crossings() {
        for a in x.arcs {
            let k = arc_index.len();
            arc_index.entry(a).or_insert(k);
        }
    }
    // nodes: crossings 0..n, arcs n..
    let total = n + arc_index.len();
    let mut adj = vec![Vec::new(); total];
    for (c, x) in d.crossings().iter().enumerate() {
        if Some(c) == removed {
            continue;
        }
        for a in x.arcs {
            let v = n + arc_index[&a];
            adj[c].push(v);
            adj[v].push(c);
        }
    }
    let alive: Vec<usize> = (0..total).filter(|&v| Some(v) != removed).collect();
    let mut seen = vec![false; total];
    let mut stack = vec![alive[0]];
    seen[alive[0]] = true;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    alive.iter().all(|&v| seen[v])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::{fraction, parse_notation};

    fn reference(s: &str) -> PDCode {
        build_reference_diagram(&parse_notation(s).unwrap()).unwrap()
    }

    #[test]
    fn unknot_is_one() {
        let u = PDCode::unknot();
        assert_eq!(kauffman_bracket(&u).unwrap(), LaurentPolynomial::one());
        assert_eq!(jones_polynomial(&u).unwrap(), LaurentPolynomial::one());
        assert_eq!(determinant(&u).unwrap(), 1);
    }

    #[test]
    fn trefoil_and_figure_eight() {
        let t = reference("-3");
        assert_eq!(t.len(), 3);
        assert_eq!(t.component_count(), 1);
        assert_eq!(determinant(&t).unwrap(), 3);
        let j = jones_polynomial(&t).unwrap();
        assert_ne!(j, j.mirror());
        assert_eq!(jones_polynomial(&reference("3")).unwrap(), j.mirror());

        let e = reference("-1,-1,-2");
        assert_eq!(determinant(&e).unwrap(), 5);
        let j8 = jones_polynomial(&e).unwrap();
        assert_eq!(j8, j8.mirror());
    }

    #[test]
    fn big_example() {
        let d = reference("-5,-3,-4,-1,-2");
        assert_eq!(d.len(), 15);
        assert!(reduced_alternating_check(&d));
        assert_eq!(determinant(&d).unwrap(), 239);
    }

    #[test]
    fn links_and_kinks() {
        let h = reference("-2");
        assert_eq!(h.component_count(), 2);
        assert_eq!(determinant(&h).unwrap(), 2);
        // a single crossing is a kink
        let k = reference("-1");
        assert!(!reduced_alternating_check(&k));
        assert_eq!(determinant(&k).unwrap(), 1);
        assert_eq!(jones_polynomial(&k).unwrap(), LaurentPolynomial::one());
        let f = fraction(&parse_notation("-2").unwrap());
        assert_eq!(f.numer(), -2);
    }

    #[test]
    fn budget_enforced() {
        let d = reference("-5,-3,-4,-1,-2");
        assert!(matches!(
            kauffman_bracket_with_budget(&d, 10),
            Err(DiagramError::Budget { .. })
        ));
    }
}
