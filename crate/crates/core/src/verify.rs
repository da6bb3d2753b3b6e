//! Closing the loop: diagrams read back from layouts, knot-type and bound checks.

use serde::{Deserialize, Serialize};

use crate::diagram::{
    build_reference_diagram, determinant_from_bracket, jones_all_orientations, jones_from_bracket,
    kauffman_bracket, reduced_alternating_check,
};
use crate::error::VerifyError;
use crate::geom::{axis_dir, format_q, q, serde_q, Q};
use crate::layout::{
    build_ribbon_knot, ribbonlength_bound, total_core_length, validate_layout, RibbonLayout,
    ValidityReport,
};
use crate::pd::{PDCode, PdCrossing};
use crate::ribbon::GeomParams;
use crate::tangle::{crossing_number, fraction, normalize, ConwayNotation, ExtFraction};

fn rot((x, y): (i8, i8)) -> (i8, i8) {
    (-y, x)
}

fn neg((x, y): (i8, i8)) -> (i8, i8) {
    (-x, -y)
}

/// Reads the PD code off the core, taking over/under from the ledger.
pub fn extract_pd(l: &RibbonLayout) -> Result<PDCode, VerifyError> {
    let v = validate_layout(l);
    if !v.closed_axis_aligned || !v.crossings_match {
        return Err(VerifyError::Extraction(v.problems.join("; ")));
    }
    // visits per component: (segment, distance along it, crossing, is_over)
    let mut visits: Vec<Vec<(usize, Q, usize, bool)>> = vec![Vec::new(); l.loops.len()];
    for (k, rec) in l.crossings.iter().enumerate() {
        for (s, is_over) in [(rec.over, true), (rec.under, false)] {
            let (a, _) = l.segment(s);
            visits[s.component].push((s.segment, a.l1(&rec.position), k, is_over));
        }
    }
    let n = l.crossings.len();
    // arcs[k]: (in, out) for the over and under passes
    let mut over_arcs = vec![(0usize, 0usize); n];
    let mut under_arcs = vec![(0usize, 0usize); n];
    let mut free_loops = 0;
    let mut base = 0;
    for vs in visits.iter_mut() {
        if vs.is_empty() {
            free_loops += 1;
            continue;
        }
        vs.sort();
        let m = vs.len();
        for (i, (_, _, k, is_over)) in vs.iter().enumerate() {
            let arcs = (base + i, base + (i + 1) % m);
            if *is_over {
                over_arcs[*k] = arcs;
            } else {
                under_arcs[*k] = arcs;
            }
        }
        base += m;
    }
    let dir = |s| {
        let (a, b) = l.segment(s);
        axis_dir(a, b).expect("validated axis-aligned segment")
    };
    let crossings = l
        .crossings
        .iter()
        .enumerate()
        .map(|(k, rec)| {
            let u = dir(rec.under);
            let o = dir(rec.over);
            let arms = [neg(u), rot(neg(u)), u, rot(u)];
            let arcs = arms.map(|arm| {
                if arm == neg(u) {
                    under_arcs[k].0
                } else if arm == u {
                    under_arcs[k].1
                } else if arm == neg(o) {
                    over_arcs[k].0
                } else {
                    over_arcs[k].1
                }
            });
            let sign = if o == rot(neg(u)) { 1 } else { -1 };
            PdCrossing { arcs, sign }
        })
        .collect();
    PDCode::new(crossings, free_loops).map_err(VerifyError::from)
}

/// Outcome of comparing a layout with its reference diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotCheck {
    pub jones_match: bool,
    pub determinant: u64,
    pub expected_determinant: u64,
    pub crossings: usize,
    pub components: usize,
}

impl KnotCheck {
    pub fn ok(&self) -> bool {
        self.jones_match && self.determinant == self.expected_determinant
    }
}

/// Jones and determinant comparison against the reference diagram of `n`.
///
/// For two-component links the Jones polynomial depends on the relative
/// orientation, so every relative orientation of the extracted diagram is
/// tried against the reference.
pub fn check_knot_type(l: &RibbonLayout, n: &ConwayNotation) -> Result<KnotCheck, VerifyError> {
    let normal = normalize(n)?;
    let reference = build_reference_diagram(&normal)?;
    let ref_bracket = kauffman_bracket(&reference)?;
    let ref_jones = jones_from_bracket(&ref_bracket, reference.writhe());
    let pd = extract_pd(l)?;
    let bracket = kauffman_bracket(&pd)?;
    let jones_match = if pd.components().len() > 1 {
        jones_all_orientations(&pd)?.contains(&ref_jones)
    } else {
        jones_from_bracket(&bracket, pd.writhe()) == ref_jones
    };
    Ok(KnotCheck {
        jones_match,
        determinant: determinant_from_bracket(&bracket)?,
        expected_determinant: fraction(n).numer().unsigned_abs(),
        crossings: pd.len(),
        components: pd.component_count(),
    })
}

/// True iff the extracted Jones polynomial and determinant match `n`.
pub fn verify_knot_type(l: &RibbonLayout, n: &ConwayNotation) -> Result<bool, VerifyError> {
    Ok(check_knot_type(l, n)?.ok())
}

/// Length accounting against `2c + 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub crossing_number: u64,
    #[serde(with = "serde_q")]
    pub length: Q,
    #[serde(with = "serde_q")]
    pub length_over_width: Q,
    #[serde(with = "serde_q")]
    pub bound: Q,
    /// `Len/w − (2c+2)`.
    #[serde(with = "serde_q")]
    pub gap: Q,
    /// `(4m+2)ε/w`.
    #[serde(with = "serde_q")]
    pub expected_gap: Q,
    pub gap_exact: bool,
    /// Whether the closure's reference diagram is reduced; if not, `2c+2`
    /// is not a statement about the knot's crossing number.
    pub reduced: bool,
    pub note: Option<String>,
    /// Earlier upper bounds, reported for comparison only.
    pub comparison: Comparison,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    /// `6c − 2`.
    pub linear: i64,
    /// `2c² + 6c + 4`.
    pub quadratic: i64,
}

pub fn verify_bound(l: &RibbonLayout) -> BoundReport {
    let c = l.crossing_number();
    let m = l.built.len();
    let length = total_core_length(l);
    let length_over_width = &length / &l.params.w;
    let bound = ribbonlength_bound(c);
    let gap = &length_over_width - &bound;
    let expected_gap = q(4 * m as i64 + 2) * &l.params.eps / &l.params.w;
    let reduced = build_reference_diagram(&l.built)
        .map(|d| reduced_alternating_check(&d))
        .unwrap_or(false);
    let ci = c as i64;
    BoundReport {
        crossing_number: c,
        gap_exact: gap == expected_gap,
        length,
        length_over_width,
        bound,
        gap,
        expected_gap,
        reduced,
        note: (!reduced).then(|| "diagram not reduced; bound not tight".to_string()),
        comparison: Comparison {
            linear: 6 * ci - 2,
            quadratic: 2 * ci * ci + 6 * ci + 4,
        },
    }
}

/// One row of verification output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub notation: ConwayNotation,
    pub normal_form: ConwayNotation,
    pub fraction: ExtFraction,
    pub crossing_number: u64,
    #[serde(with = "serde_q")]
    pub length: Q,
    #[serde(with = "serde_q")]
    pub bound: Q,
    #[serde(with = "serde_q")]
    pub gap: Q,
    pub knot_type_ok: bool,
    pub layout_ok: bool,
    pub length_ok: bool,
    pub determinant: u64,
    pub expected_determinant: u64,
    pub bound_report: BoundReport,
    pub validity: ValidityReport,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.knot_type_ok && self.layout_ok && self.length_ok
    }
}

/// Builds, validates and checks one notation.
pub fn verify_notation(n: &ConwayNotation, p: &GeomParams) -> Result<Report, VerifyError> {
    let normal = normalize(n)?;
    let layout = build_ribbon_knot(n, p).map_err(|e| VerifyError::Extraction(e.to_string()))?;
    verify_layout(&layout, n, &normal)
}

pub fn verify_layout(
    layout: &RibbonLayout,
    n: &ConwayNotation,
    normal: &ConwayNotation,
) -> Result<Report, VerifyError> {
    let validity = validate_layout(layout);
    let kc = check_knot_type(layout, n)?;
    let br = verify_bound(layout);
    Ok(Report {
        notation: n.clone(),
        normal_form: normal.clone(),
        fraction: fraction(n),
        crossing_number: crossing_number(normal)?,
        length: br.length.clone(),
        bound: br.bound.clone(),
        gap: br.gap.clone(),
        knot_type_ok: kc.ok(),
        layout_ok: validity.ok(),
        length_ok: br.gap_exact,
        determinant: kc.determinant,
        expected_determinant: kc.expected_determinant,
        bound_report: br,
        validity,
    })
}

/// Every negative normal form with `Σ|a_i| ≤ max_crossings`, ordered by
/// crossing number and then lexicographically by twist counts.
pub fn sweep_corpus(max_crossings: u64) -> Vec<ConwayNotation> {
    let mut out = Vec::new();
    for c in 1..=max_crossings {
        let mut level = Vec::new();
        compositions(c, &mut Vec::new(), &mut level);
        level.retain(|v: &Vec<u64>| v.len() % 2 == 1);
        level.sort();
        out.extend(
            level
                .into_iter()
                .map(|v| ConwayNotation::new(v.into_iter().map(|a| -(a as i64)).collect()).unwrap()),
        );
    }
    out
}

fn compositions(rest: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if rest == 0 {
        out.push(prefix.clone());
        return;
    }
    for a in 1..=rest {
        prefix.push(a);
        compositions(rest - a, prefix, out);
        prefix.pop();
    }
}

/// Human-readable summary line for a report.
pub fn summary_line(r: &Report) -> String {
    format!(
        "{:<20} {:>10} c={:<3} len={:<12} bound={:<3} gap={:<10} knot={} layout={} length={}",
        format!("({})", r.notation),
        r.fraction.to_string(),
        r.crossing_number,
        format_q(&r.length),
        format_q(&r.bound),
        format_q(&r.gap),
        pass(r.knot_type_ok),
        pass(r.layout_ok),
        pass(r.length_ok),
    )
}

fn pass(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}
