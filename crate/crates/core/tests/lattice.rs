use std::sync::Arc;

use num_bigint::BigUint;
use singer_core::hyperoval::{regular_hyperoval, t2star, translation_singer};
use singer_core::lattice::{
    abelianization_report, check_local_iso, export_presentation, gamma1, h2_of, homology_metadata, local_data,
    parse_gap, parse_plain, ExportFormat, H2Value, LatticeError, LocalData, Presentation,
};
use singer_core::matgroup::{fingerprint_equal, generate, ProjMat};
use singer_core::singer::{enumerate_bl, lift_eta, BLCandidate, SingerGroupRecord};
use singer_core::symplectic::build_wq;
use singer_core::Field;

fn field(q: u32) -> Arc<Field> {
    Arc::new(Field::of_order(q).unwrap())
}

struct Payne {
    field: Arc<Field>,
    gq: singer_core::incidence::IncidenceStructure,
    pts: singer_core::matgroup::PointSet,
}

impl Payne {
    fn new(q: u32) -> Payne {
        let field = field(q);
        let w = build_wq(&field).unwrap();
        let gq = w.payne_derive().unwrap();
        let pts = w.derived_coordinates(&gq).unwrap();
        Payne { field, gq, pts }
    }

    fn record(&self, index: u64) -> SingerGroupRecord {
        lift_eta(&self.field, &BLCandidate::from_index(&self.field, 0, index).unwrap()).unwrap()
    }

    fn local(&self, index: u64) -> LocalData {
        local_data(&self.gq, &self.record(index).s_group, &self.pts, 0).unwrap()
    }
}

fn check_orbit_stabilizer(l: &LocalData) {
    for p in &l.profile {
        assert_eq!(l.group.order(), p.order * p.orbit_size, "line {}", p.line);
    }
}

#[test]
fn classical_lift_on_p3() {
    let p3 = Payne::new(3);
    let l = p3.local(0);
    assert_eq!(l.lambda.len(), 5);
    assert!(l
        .profile
        .iter()
        .all(|s| s.order == 3 && s.invariant_factors == Some(vec![3])));
    check_orbit_stabilizer(&l);

    let m = check_local_iso(&l, &l).unwrap();
    assert_eq!(m.sigma, (0..5).collect::<Vec<_>>());
    let p = gamma1(&l, &l, &m).unwrap();
    assert_eq!(p.generators.len(), 26 + 26);
    assert_eq!(p.commutator_relators, 5 * 2 * 2);
    assert_eq!(p.table_relators + p.commutator_relators, p.relators.len());

    let ab = abelianization_report(&p, 26).unwrap();
    assert_eq!(ab.commutator_rank_contribution, 0);
    assert!(ab.gamma1.is_finite());
    assert_eq!(ab.gamma1.invariant_factors, vec![3; 4]);
}

#[test]
fn translation_lift_on_p4() {
    let p4 = Payne::new(4);
    let l = p4.local(0);
    assert_eq!(l.stabilizers.len(), 6);
    for s in &l.stabilizers {
        assert!(s.is_abelian());
        assert!(s.abelian_invariant_factors().unwrap().iter().all(|&d| d == 2));
    }
    check_orbit_stabilizer(&l);
    let p = gamma1(&l, &l, &check_local_iso(&l, &l).unwrap()).unwrap();
    let expected: usize = l.profile.iter().map(|s| (s.order - 1) * (s.order - 1)).sum();
    assert_eq!(p.commutator_relators, expected);
}

#[test]
fn matching_follows_the_first_commuting_entry() {
    let p4 = Payne::new(4);
    let recs: Vec<SingerGroupRecord> = [1, 2, 6].iter().map(|&i| p4.record(i)).collect();
    let locals: Vec<LocalData> = [1, 2, 6].iter().map(|&i| p4.local(i)).collect();
    assert_eq!(recs[0].commuting.dims[0], recs[1].commuting.dims[0]);
    assert_ne!(recs[0].commuting.dims[0], recs[2].commuting.dims[0]);
    assert!(check_local_iso(&locals[0], &locals[1]).is_ok());
    assert!(matches!(
        check_local_iso(&locals[0], &locals[2]),
        Err(LatticeError::NoMatching { .. })
    ));
}

#[test]
fn classical_lifts_on_p5_match_by_the_identity() {
    let p5 = Payne::new(5);
    let (l, l2) = (p5.local(0), p5.local(0));
    assert!(l.profile.iter().all(|s| s.invariant_factors == Some(vec![5])));
    let m = check_local_iso(&l, &l2).unwrap();
    assert_eq!(m.sigma, (0..7).collect::<Vec<_>>());
    assert!(!m.fingerprint_only);

    // The other lifts have ν₀ = 0: only the two special lines keep a stabilizer.
    let other = p5.local(3);
    assert_eq!(p5.record(3).commuting.dims[0], 0);
    let orders: Vec<usize> = other.profile.iter().map(|s| s.order).collect();
    assert_eq!(orders, vec![5, 1, 1, 1, 1, 1, 5]);
    assert!(matches!(
        check_local_iso(&l, &other),
        Err(LatticeError::NoMatching { .. })
    ));
    assert!(check_local_iso(&other, &p5.local(4)).is_ok());
}

#[test]
fn mixed_lifts_on_p9_give_a_presentation() {
    let p9 = Payne::new(9);
    let recs: Vec<SingerGroupRecord> = enumerate_bl(&p9.field, 0)
        .unwrap()
        .iter()
        .map(|c| lift_eta(&p9.field, c).unwrap())
        .collect();
    let invs: Vec<_> = recs.iter().map(|r| r.invariants().unwrap()).collect();
    let (a, b) = (0..recs.len())
        .flat_map(|i| (i + 1..recs.len()).map(move |j| (i, j)))
        .find(|&(i, j)| {
            recs[i].commuting.dims[0] == recs[j].commuting.dims[0] && !fingerprint_equal(&invs[i], &invs[j])
        })
        .expect("nonisomorphic lifts with equal first commuting entry");
    let la = local_data(&p9.gq, &recs[a].s_group, &p9.pts, 0).unwrap();
    let lb = local_data(&p9.gq, &recs[b].s_group, &p9.pts, 0).unwrap();
    let m = check_local_iso(&la, &lb).unwrap();
    let p = gamma1(&la, &lb, &m).unwrap();
    assert_eq!(p.generators.len(), 2 * (729 - 1));
    assert!(p.commutator_relators > 0);
}

#[test]
fn t2star_local_profile() {
    let f = field(4);
    let model = t2star(&regular_hyperoval(&f).unwrap()).unwrap();
    let g = translation_singer(&f, 1).unwrap();
    let l = local_data(model.structure(), &g, model.points(), 0).unwrap();
    assert_eq!(l.lambda.len(), 6);
    check_orbit_stabilizer(&l);
}

#[test]
fn homology_of_the_factors() {
    let p8 = Payne::new(8);
    let s = p8.record(0).s_group;
    let meta = homology_metadata(&s, &s);
    assert_eq!(meta.gamma1, Some(BigUint::from(2u32).pow(72)));

    // Pairwise commuting unipotent matrices I + aE₀₃ + bE₁₃ + cE₂₃.
    let f3 = field(3);
    let corner =
        |a, b, c| ProjMat::from_ints(&f3, &[&[1, 0, 0, a], &[0, 1, 0, b], &[0, 0, 1, c], &[0, 0, 0, 1]]).unwrap();
    let c3 = generate(&f3, 4, &[corner(1, 0, 0), corner(0, 1, 0), corner(0, 0, 1)], 100).unwrap();
    assert_eq!(h2_of(&c3).order(), Some(&BigUint::from(27u32)));

    let h5 = Payne::new(5).record(1).s_group;
    assert!(!h5.is_abelian());
    assert!(matches!(h2_of(&h5), H2Value::Unknown { .. }));
    assert_eq!(homology_metadata(&h5, &c3).gamma1, None);
}

#[test]
fn exports_are_deterministic_and_parse_back() {
    let p3 = Payne::new(3);
    let build = || {
        let l = p3.local(0);
        gamma1(&l, &l, &check_local_iso(&l, &l).unwrap()).unwrap()
    };
    let (p, again) = (build(), build());
    for fmt in [ExportFormat::Gap, ExportFormat::Magma, ExportFormat::Plain] {
        assert_eq!(
            export_presentation(&p, fmt).unwrap(),
            export_presentation(&again, fmt).unwrap()
        );
    }
    let plain = export_presentation(&p, ExportFormat::Plain).unwrap();
    assert!(plain.starts_with("presentation\ngenerators 52\nrelators 1372\n"));
    assert_eq!(parse_plain(&plain).unwrap(), p);
    let gap = parse_gap(&export_presentation(&p, ExportFormat::Gap).unwrap()).unwrap();
    assert_eq!(
        (gap.generators, gap.relators),
        (p.generators.clone(), p.relators.clone())
    );
}

#[test]
fn malformed_presentations_are_rejected() {
    assert_eq!(
        Presentation::new(vec!["a1".into()], vec![], 0),
        Err(LatticeError::EmptyRelators)
    );
    assert!(matches!(
        parse_plain("presentation\ngenerators two\n"),
        Err(LatticeError::Parse { .. })
    ));
    assert!(parse_gap("F := FreeGroup(\"a1\");;\nrels := [ ];;").is_err());
}
