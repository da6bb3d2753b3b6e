use std::collections::BTreeSet;

use proptest::prelude::*;
use ribbonknot::error::BuildError;
use ribbonknot::geom::{q, qr};
use ribbonknot::layout::{expected_length, fold_lines, total_core_length, ribbonlength_bound};
use ribbonknot::ribbon::{
    assemble, attachment_side, connect_first_pair, connect_next, eps_max, EndLabel, Side, StepTag,
};
use ribbonknot::verify::{check_knot_type, sweep_corpus};
use ribbonknot::{
    build_integer_ribbon, build_ribbon_knot, crossing_number, determinant, extract_pd,
    parse_notation, validate_layout, verify_bound, verify_knot_type, ConwayNotation, GeomParams,
    Point, RibbonLayout, Q,
};

fn cn(s: &str) -> ConwayNotation {
    parse_notation(s).unwrap()
}

fn r(ribbon: usize, j: u8) -> EndLabel {
    EndLabel { ribbon, j }
}

fn std_layout(s: &str) -> RibbonLayout {
    let n = cn(s);
    build_ribbon_knot(&n, &GeomParams::standard(n.len())).unwrap()
}

fn unit(eps: Q) -> GeomParams {
    GeomParams::unchecked(q(1), eps).unwrap()
}

#[test]
fn integer_ribbon_strips() {
    let p = unit(qr(1, 64));
    let (w, e) = (q(1), qr(1, 64));
    let lengths = |a| -> Vec<Q> {
        let mut v: Vec<Q> = build_integer_ribbon(1, a, &p)
            .unwrap()
            .strips
            .iter()
            .map(|s| s.length())
            .collect();
        v.sort();
        v
    };
    let two_e = q(2) * &e;
    assert_eq!(lengths(-4), vec![q(4) * &w + &two_e, q(4) * &w + &two_e]);
    assert_eq!(lengths(-3), vec![q(2) * &w + &two_e, q(4) * &w + &two_e]);
    assert_eq!(lengths(-1), vec![q(2) * &w + &two_e]);
    for (a, k) in [(-4, 3), (-3, 2), (-1, 0)] {
        let ri = build_integer_ribbon(1, a, &p).unwrap();
        assert_eq!(ri.crossings.len(), k);
        assert!(ri.inside_triangle());
    }
    assert!(matches!(build_integer_ribbon(1, 2, &p), Err(BuildError::Twist(2))));
}

#[test]
fn attachment_bookkeeping() {
    let p = unit(qr(1, 96));
    let ri = |i, a| build_integer_ribbon(i, a, &p).unwrap();

    let pl = connect_first_pair(&ri(1, -5), &ri(2, -3)).unwrap();
    assert_eq!(pl.open, BTreeSet::from([r(1, 2), r(1, 4), r(2, 3), r(2, 4)]));
    assert_eq!(pl.ledger.len(), 4 + 2 + 1);
    assert_eq!(pl.ledger.last(), Some(&StepTag::Connect { ribbon: 2 }));

    // a_1 = −1 renames the unattached end
    let pl = connect_first_pair(&ri(1, -1), &ri(2, -2)).unwrap();
    assert!(pl.relabels.contains(&(r(2, 1), r(1, 2))));
    assert!(pl.open.contains(&r(1, 2)));

    assert_eq!(attachment_side(3), Side::Left);
    assert_eq!(attachment_side(4), Side::Right);

    let pl = connect_first_pair(&ri(1, -5), &ri(2, -3)).unwrap();
    let pl = connect_next(pl, &ri(3, -4)).unwrap();
    let pl4 = connect_next(pl.clone(), &ri(4, -1)).unwrap();
    assert!(pl4.relabels.contains(&(r(2, 4), r(4, 3))));
    let pl5 = connect_next(pl4, &ri(5, -2)).unwrap();
    assert_eq!(pl5.open, BTreeSet::from([r(1, 2), r(4, 4), r(5, 3), r(5, 4)]));
    // out-of-order attachment is rejected
    assert!(connect_next(pl, &ri(5, -2)).is_err());

    let plan = assemble(&cn("-5,-3,-4,-1,-2"), &p).unwrap();
    assert_eq!(plan.ledger.len(), 15);
    assert_eq!(plan.ledger.last(), Some(&StepTag::Close));
}

#[test]
fn named_lengths() {
    let w = q(1);
    for (s, c, m) in [("-3", 3, 1), ("-1,-1,-2", 4, 3), ("-5,-3,-4,-1,-2", 15, 5)] {
        let l = std_layout(s);
        let e = &l.params.eps;
        assert_eq!(
            total_core_length(&l),
            q(2 * (c + 1)) * &w + q(4 * m + 2) * e,
            "({s})"
        );
        assert_eq!(l.crossings.len() as i64, c);
    }
    let l = build_ribbon_knot(&cn("-3"), &unit(qr(1, 64))).unwrap();
    assert_eq!(total_core_length(&l), q(8) + qr(6, 64));
    assert_eq!(ribbonlength_bound(3), q(8));
    assert_eq!(ribbonlength_bound(15), q(32));
}

#[test]
fn mirror_layout_mirrors_jones() {
    let neg = std_layout("-3");
    let pos = std_layout("3");
    let jn = ribbonknot::jones_polynomial(&extract_pd(&neg).unwrap()).unwrap();
    let jp = ribbonknot::jones_polynomial(&extract_pd(&pos).unwrap()).unwrap();
    assert_eq!(jp, jn.mirror());
    assert_ne!(jp, jn);
}

#[test]
fn epsilon_guard() {
    let n = cn("-2,-1,-3");
    let too_big = GeomParams::unchecked(q(1), eps_max(3, &q(1)) + qr(1, 1000)).unwrap();
    assert!(matches!(build_ribbon_knot(&n, &too_big), Err(BuildError::Epsilon { .. })));
    assert!(matches!(build_ribbon_knot(&n, &unit(q(1))), Err(BuildError::Epsilon { .. })));
    assert!(GeomParams::new(q(1), q(0), 3).is_err());
    assert!(GeomParams::new(q(0), qr(1, 100), 3).is_err());
    assert!(GeomParams::new(q(1), eps_max(3, &q(1)), 3).is_ok());
}

#[test]
fn non_reducible_inputs_rejected() {
    let p = GeomParams::standard(1);
    assert!(build_ribbon_knot(&cn("1,-1"), &p).is_err());
    assert!(build_ribbon_knot(&cn("3,-1"), &p).is_err());
}

#[test]
fn verification_examples() {
    let l = std_layout("-3");
    let pd = extract_pd(&l).unwrap();
    assert_eq!(pd.len(), 3);
    assert!(verify_knot_type(&l, &cn("-3")).unwrap());
    assert!(!verify_knot_type(&l, &cn("3")).unwrap());

    let unknot = extract_pd(&std_layout("-1")).unwrap();
    assert_eq!(unknot.len(), 1);
    assert_eq!(determinant(&unknot).unwrap(), 1);

    let fig8 = std_layout("-1,-1,-2");
    assert_eq!(determinant(&extract_pd(&fig8).unwrap()).unwrap(), 5);
    assert!(verify_knot_type(&fig8, &cn("-2,3")).unwrap());

    let b = verify_bound(&std_layout("-5,-3,-4,-1,-2"));
    assert_eq!(b.bound, q(32));
    assert_eq!(b.gap, q(22) * qr(1, 96));
    assert!(b.gap_exact && b.reduced);

    let b = verify_bound(&std_layout("-1"));
    assert_eq!(b.bound, q(4));
    assert!(!b.reduced && b.note.is_some());
}

#[test]
fn gap_vanishes_with_epsilon() {
    let n = cn("-3");
    let mut last = None;
    for k in [16, 64, 256, 1024] {
        let l = build_ribbon_knot(&n, &unit(qr(1, k))).unwrap();
        let b = verify_bound(&l);
        assert_eq!(b.gap, qr(6, k));
        if let Some(prev) = last {
            assert!(b.gap < prev);
        }
        last = Some(b.gap);
    }
}

// --- injected faults ---

#[test]
fn missing_ledger_entry_detected() {
    let mut l = std_layout("-2,-1,-3");
    l.crossings.pop();
    let v = validate_layout(&l);
    assert!(!v.crossings_match);
    assert!(v.folds_disjoint);
    assert!(extract_pd(&l).is_err());
}

#[test]
fn phantom_ledger_entry_detected() {
    let mut l = std_layout("-3");
    let mut extra = l.crossings[0].clone();
    extra.position = Point::new(qr(-1000, 1), qr(-1000, 1));
    l.crossings.push(extra);
    assert!(!validate_layout(&l).crossings_match);
}

#[test]
fn flipped_crossing_changes_knot_type() {
    let mut l = std_layout("-3");
    let c = &mut l.crossings[1];
    std::mem::swap(&mut c.over, &mut c.under);
    // the geometry is untouched, the knot is not
    assert!(validate_layout(&l).ok());
    let kc = check_knot_type(&l, &cn("-3")).unwrap();
    assert!(!kc.ok());
    assert_eq!(kc.determinant, 1);
}

#[test]
fn compressed_core_breaks_folds() {
    // shrinking the core by 8 while keeping w squeezes every U-turn below w
    let mut l = std_layout("-2,-1,-3");
    let k = qr(1, 8);
    l.loops = l.loops.iter().map(|lp| lp.iter().map(|p| p.scale(&k)).collect()).collect();
    for c in &mut l.crossings {
        c.position = c.position.scale(&k);
    }
    l.folds = fold_lines(&l.loops, &l.params.w);
    let v = validate_layout(&l);
    assert!(v.closed_axis_aligned);
    assert!(v.crossings_match);
    assert!(!v.folds_disjoint);
    assert!(!v.length_identity);
}

#[test]
fn stale_fold_records_detected() {
    let mut l = std_layout("-3");
    l.folds.pop();
    assert!(!validate_layout(&l).closed_axis_aligned);
}

#[test]
fn tampered_json_rejected() {
    let l = std_layout("-3");
    let mut v: serde_json::Value = serde_json::from_str(&l.to_json()).unwrap();
    v["loops"][0][0] = serde_json::json!(["1/0", "0/1"]);
    assert!(RibbonLayout::from_json(&v.to_string()).is_err());
}

// --- properties over the corpus ---

fn corpus_entry() -> impl Strategy<Value = ConwayNotation> {
    let all = sweep_corpus(10);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn width() -> impl Strategy<Value = Q> {
    prop::sample::select(vec![q(1), qr(1, 2), q(3)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn exact_length_identity(n in corpus_entry(), w in width(), k in 1i64..=16) {
        let m = n.len();
        let eps = eps_max(m, &w) * qr(k, 16);
        let p = GeomParams::new(w.clone(), eps.clone(), m).unwrap();
        let l = build_ribbon_knot(&n, &p).unwrap();
        let c = crossing_number(&n).unwrap();
        let len = total_core_length(&l);
        prop_assert_eq!(&len, &expected_length(c, m, &p));
        prop_assert_eq!(&len, &(q(2 * (c as i64 + 1)) * &w + q(4 * m as i64 + 2) * &eps));
        let b = verify_bound(&l);
        prop_assert_eq!(&b.gap, &(q(4 * m as i64 + 2) * &eps / &w));
        prop_assert!(b.gap > q(0));
        prop_assert_eq!(l.crossings.len() as u64, c);
    }

    #[test]
    fn positions_distinct(n in corpus_entry()) {
        let l = build_ribbon_knot(&n, &GeomParams::standard(n.len())).unwrap();
        let set: BTreeSet<&Point> = l.crossings.iter().map(|c| &c.position).collect();
        prop_assert_eq!(set.len(), l.crossings.len());
    }

    #[test]
    fn mirror_is_reflection(n in corpus_entry(), w in width()) {
        let p = GeomParams::for_width(w, n.len());
        let neg = build_ribbon_knot(&n, &p).unwrap();
        let pos = build_ribbon_knot(&n.mirror(), &p).unwrap();
        prop_assert_eq!(&pos.loops, &neg.reflected().loops);
        prop_assert_eq!(&pos.crossings, &neg.reflected().crossings);
    }

    #[test]
    fn layout_json_round_trip(n in corpus_entry()) {
        let l = build_ribbon_knot(&n, &GeomParams::standard(n.len())).unwrap();
        prop_assert_eq!(RibbonLayout::from_json(&l.to_json()).unwrap(), l);
    }

    #[test]
    fn extraction_matches_crossing_number(n in corpus_entry()) {
        let l = build_ribbon_knot(&n, &GeomParams::standard(n.len())).unwrap();
        let pd = extract_pd(&l).unwrap();
        prop_assert_eq!(pd.len() as u64, crossing_number(&n).unwrap());
        prop_assert!(verify_knot_type(&l, &n).unwrap());
    }
}
