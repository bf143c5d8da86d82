use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use singer_core::matgroup::ProjMat;
use singer_core::singer::{
    classify_abelian_quotients, commuting_vector, cross_line_overlap, directions_of_set, enumerate_bl,
    even_char_invariant_count, explicit_total_count, fiber_bound, h2_bruteforce, h2_order_paper, heisenberg,
    hr_estimate, lift_all, lift_eta, line_count, linear_set_of, partition_count, partition_witness_search, partitions,
    schur_multiplier_order, total_count, zeta, BLCandidate, Direction,
};
use singer_core::{Field, FieldElem};

fn field(q: u32) -> Arc<Field> {
    Arc::new(Field::of_order(q).unwrap())
}

/// Indices of candidates whose φ is multiplication by a field element.
fn scalar_indices(f: &Field, cands: &[BLCandidate]) -> Vec<u64> {
    cands
        .iter()
        .filter(|c| {
            f.elements()
                .any(|lambda| f.elements().all(|t| c.apply(f, t) == f.mul(lambda, t)))
        })
        .map(|c| c.index)
        .collect()
}

#[test]
fn candidate_counts() {
    for (q, n) in [(3, 3), (4, 16), (9, 81)] {
        assert_eq!(enumerate_bl(&field(q), 0).unwrap().len(), n);
    }
}

#[test]
fn translation_candidate_lifts_to_the_elation_group() {
    let f = field(3);
    let r = lift_eta(&f, &BLCandidate::from_index(&f, 0, 0).unwrap()).unwrap();
    assert!(r.candidate.is_zero());
    assert_eq!(r.s_group.order(), 27);
    assert_eq!(r.certificate.images.len(), 27);
    assert_eq!(r.commuting.dims[0], 1);
}

#[test]
fn all_q4_lifts_are_distinct_singer_groups() {
    let f = field(4);
    let groups = lift_all(&f, 0).unwrap();
    assert_eq!(groups.len(), 16);
    assert!(groups.iter().all(|g| g.order() == 64));
    let distinct: HashSet<Vec<ProjMat>> = groups.iter().map(|g| g.elements().to_vec()).collect();
    assert_eq!(distinct.len(), 16);
}

#[test]
fn abelian_quotients_are_the_scalar_candidates() {
    for q in [3, 4, 5, 8, 9] {
        let f = field(q);
        let cands = enumerate_bl(&f, 0).unwrap();
        let counts = classify_abelian_quotients(&f, 0).unwrap();
        assert_eq!(counts.abelian_indices, scalar_indices(&f, &cands), "q={q}");
        assert_eq!(counts.abelian, q as usize);
    }
}

#[test]
fn overlaps_between_lines() {
    for q in [3, 4] {
        let f = field(q);
        let n = enumerate_bl(&f, 0).unwrap().len();
        assert_eq!(cross_line_overlap(&f, 1, 1).unwrap(), n);
        assert_eq!(cross_line_overlap(&f, 0, line_count(&f) - 1).unwrap(), 1);
    }
}

#[test]
fn closed_form_totals() {
    assert_eq!(total_count(&field(9)), BigInt::from(720));
    assert_eq!(total_count(&field(4)), BigInt::from(74));
    assert_eq!(total_count(&field(3)), BigInt::from(0));
}

#[test]
fn explicit_totals_count_nonabelian_lifts() {
    // Every line contributes its p^{h²} − q nonabelian-quotient lifts.
    for q in [3u32, 4] {
        let f = field(q);
        let per_line = enumerate_bl(&f, 0).unwrap().len() - q as usize;
        assert_eq!(explicit_total_count(&f).unwrap(), (q as usize + 1) * per_line);
    }
}

#[test]
fn commuting_vectors() {
    let f = field(9);
    let h = heisenberg(&f, 0).unwrap();
    let a = commuting_vector(&f, h.a(), 0).unwrap();
    assert_eq!(a.dims[0], 2);
    assert!(a.dims[1..].iter().all(|&d| d == 0));

    let cands = enumerate_bl(&f, 0).unwrap();
    for idx in classify_abelian_quotients(&f, 0).unwrap().abelian_indices {
        let r = lift_eta(&f, &cands[idx as usize]).unwrap();
        assert_eq!(r.commuting.multiset, vec![2], "index {idx}");
    }

    let f4 = field(4);
    let cands = enumerate_bl(&f4, 0).unwrap();
    let ab: HashSet<u64> = classify_abelian_quotients(&f4, 0)
        .unwrap()
        .abelian_indices
        .into_iter()
        .collect();
    for c in cands.iter().filter(|c| !ab.contains(&c.index)) {
        let r = lift_eta(&f4, c).unwrap();
        assert_eq!(r.commuting.multiset, vec![1, 1, 1]);
        let dirs = directions_of_set(&f4, &linear_set_of(&f4, c)).unwrap();
        assert_eq!(dirs.len(), r.commuting.multiset.len(), "index {}", c.index);
    }
}

#[test]
fn directions_of_lines() {
    let f = field(5);
    let line: Vec<(FieldElem, FieldElem)> = f.elements().map(|x| (x, f.mul(f.from_int(2), x))).collect();
    assert_eq!(directions_of_set(&f, &line).unwrap().len(), 1);
    let shifted: Vec<(FieldElem, FieldElem)> = f.elements().map(|x| (x, f.one())).collect();
    assert_eq!(
        directions_of_set(&f, &shifted).unwrap().into_iter().collect::<Vec<_>>(),
        vec![Direction::Slope(0)]
    );
    assert!(directions_of_set(&f, &shifted[..3]).is_err());
}

#[test]
fn zeta_values() {
    let z22 = zeta(2, 2).unwrap();
    assert_eq!((z22.examined, z22.zeta), (30, 1));
    let z32 = zeta(3, 2).unwrap();
    assert_eq!((z32.examined, z32.zeta), (120, 1));
    let z23 = zeta(2, 3).unwrap();
    assert_eq!((z23.examined, z23.zeta), (1386, 2));
}

#[test]
fn even_characteristic_counts() {
    for (n, expected) in [(3, 1), (4, 2), (5, 2)] {
        assert_eq!(even_char_invariant_count(n).unwrap().count, expected);
    }
}

#[test]
fn partition_numbers() {
    assert_eq!(partition_count(5), 7);
    assert_eq!(partition_count(1), 1);
    assert_eq!(partitions(5).len(), 7);
    let ratio = hr_estimate(50) / partition_count(50) as f64;
    assert!((1.0..1.15).contains(&ratio), "ratio {ratio}");
}

#[test]
fn partition_witnesses_for_small_cases() {
    let w = partition_witness_search(2, 2).unwrap();
    assert!(w[&vec![1, 1]].is_some());
    let w = partition_witness_search(3, 3).unwrap();
    assert!(w[&vec![2, 1]].is_some());
    assert!(w[&vec![1, 1, 1]].is_some());
    assert!(!w.contains_key(&vec![3]));
}

#[test]
fn cohomology_numbers() {
    assert_eq!(schur_multiplier_order(2, 9), BigUint::from(2u32).pow(36));
    assert_eq!(h2_order_paper(3, 2), BigUint::from(81u32));
    let fb = fiber_bound(3, 2).unwrap();
    assert_eq!(
        (fb.num.clone(), fb.den.clone()),
        (BigUint::from(72u32), BigUint::from(80u32))
    );
    assert!(fb.value() < 1.0);
    assert_eq!(h2_bruteforce(2, 1).unwrap(), BigUint::from(2u32));
    assert_eq!(h2_bruteforce(3, 1).unwrap(), BigUint::from(3u32));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn candidate_indices_round_trip(q in prop::sample::select(vec![4u32, 8, 9, 16]), raw in 0u64..u64::MAX) {
        let f = field(q);
        let n = (f.p() as u64).pow(f.h() * f.h());
        let index = raw % n;
        let c = BLCandidate::from_index(&f, 0, index).unwrap();
        prop_assert_eq!(BLCandidate::from_matrix(&f, 0, c.matrix.clone()).unwrap().index, index);
        let t = f.elem((raw % q as u64) as u32).unwrap();
        let u = f.elem((raw / 7 % q as u64) as u32).unwrap();
        prop_assert_eq!(c.apply(&f, f.add(t, u)), f.add(c.apply(&f, t), c.apply(&f, u)));
    }

    #[test]
    fn sampled_lifts_are_singer_groups(q in prop::sample::select(vec![8u32, 9]), raw in 0u64..512) {
        let f = field(q);
        let n = (f.p() as u64).pow(f.h() * f.h());
        let r = lift_eta(&f, &BLCandidate::from_index(&f, 0, raw % n).unwrap()).unwrap();
        prop_assert_eq!(r.s_group.order(), (q as usize).pow(3));
        let h = f.h() as usize;
        prop_assert!(r.commuting.multiset.iter().all(|&d| d <= h));
        prop_assert_eq!(r.abelian_quotient, r.commuting.multiset == vec![h]);
    }
}
