use std::sync::Arc;

use proptest::prelude::*;
use singer_core::gf::frac_exponent;
use singer_core::incidence::IncidenceStructure;
use singer_core::projgeom::{
    desarguesian_spread, enumerate_points, normalize, span, ProjSpace, Subspace, SymplecticForm,
};
use singer_core::symplectic::{base_point, build_wq, derived_points};
use singer_core::{Field, FieldElem};

fn field(q: u32) -> Arc<Field> {
    Arc::new(Field::of_order(q).unwrap())
}

fn ints(f: &Field, v: &[i64]) -> Vec<FieldElem> {
    v.iter().map(|&x| f.from_int(x)).collect()
}

#[test]
fn small_field_moduli_and_arithmetic() {
    let f4 = field(4);
    assert_eq!(f4.modulus(), &[1, 1, 1]);
    let w = f4.basis_element(1);
    assert_eq!(f4.mul(w, w), f4.add(w, f4.one()));
    assert_eq!(f4.pow(w, 3).unwrap(), f4.one());

    let f8 = Field::with_modulus(2, vec![1, 1, 0, 1]).unwrap();
    let x = f8.basis_element(1);
    let x2_plus_1 = f8.add(f8.mul(x, x), f8.one());
    assert_eq!(f8.inv(x).unwrap(), x2_plus_1);
    assert_eq!(f8.pow(x, 7).unwrap(), f8.one());

    let f9 = field(9);
    assert_eq!((f9.p(), f9.h(), f9.modulus().len()), (3, 2, 3));
    assert!(f9.nonzero_elements().all(|a| f9.pow(a, 0).unwrap() == f9.one()));
}

#[test]
fn payne_exponents_for_32() {
    assert_eq!(
        [
            frac_exponent(1, 6, 32),
            frac_exponent(3, 6, 32),
            frac_exponent(5, 6, 32)
        ]
        .map(Result::unwrap),
        [26, 16, 6]
    );
}

#[test]
fn projective_point_counts() {
    assert_eq!(enumerate_points(3, &field(3)).unwrap().len(), 40);
    assert_eq!(enumerate_points(2, &field(4)).unwrap().len(), 21);
    assert_eq!(enumerate_points(1, &field(2)).unwrap().len(), 3);
}

#[test]
fn meets_of_lines() {
    let f = field(5);
    let l1 = span(&f, &[ints(&f, &[1, 0, 0]), ints(&f, &[0, 1, 0])]).unwrap();
    let l2 = span(&f, &[ints(&f, &[1, 0, 1]), ints(&f, &[0, 1, 3])]).unwrap();
    assert_eq!(l1.meet(&f, &l2).unwrap().projdim(), 0);
    assert_eq!(span(&f, &[ints(&f, &[2, 3, 4])]).unwrap().projdim(), 0);

    let f2 = field(2);
    let spread = desarguesian_spread(2, 2).unwrap();
    assert_eq!(spread.len(), 5);
    assert_eq!(spread[0].meet(&f2, &spread[1]).unwrap().projdim(), -1);
}

#[test]
fn isotropy_of_lines() {
    let f = field(3);
    let form = SymplecticForm::new(f.clone());
    let iso = span(&f, &[ints(&f, &[1, 0, 0, 0]), ints(&f, &[0, 0, 1, 0])]).unwrap();
    let hyp = span(&f, &[ints(&f, &[1, 0, 0, 0]), ints(&f, &[0, 1, 0, 0])]).unwrap();
    assert!(form.is_isotropic_line(&iso));
    assert!(!form.is_isotropic_line(&hyp));
    assert_eq!(build_wq(&f).unwrap().lines().len(), 40);
}

#[test]
fn grid_is_a_thin_quadrangle() {
    let grid = IncidenceStructure::grid(3);
    let cert = grid.verify_gq().unwrap();
    assert_eq!((cert.s, cert.t, cert.thick), (2, 1, false));
    assert!(grid.is_regular_point(&cert, 0).unwrap());
}

#[test]
fn symplectic_quadrangles() {
    for (q, n) in [(2, 15), (3, 40)] {
        let w = build_wq(&field(q)).unwrap();
        let cert = w.certificate().unwrap();
        assert_eq!(
            (cert.npoints, cert.nlines, cert.s, cert.t),
            (n, n, q as usize, q as usize)
        );
        assert!(w.structure().is_regular_point(&cert, w.x()).unwrap());
    }
}

#[test]
fn perps_in_w3() {
    let w = build_wq(&field(3)).unwrap();
    let gq = w.structure();
    let x = w.x();
    assert_eq!(gq.perp(&[x]).unwrap().len(), 1 + 3 * 4);
    let far = (0..gq.npoints()).find(|&y| !gq.are_collinear(x, y)).unwrap();
    assert_eq!(gq.perp(&[x, far]).unwrap().len(), 4);
    let near = (0..gq.npoints()).find(|&y| y != x && gq.are_collinear(x, y)).unwrap();
    let line = gq.point_lines(x).find(|&l| gq.incident(near, l)).unwrap();
    let mut expected: Vec<usize> = gq.line_points(line).collect();
    expected.sort_unstable();
    assert_eq!(gq.find_line(&expected), Some(line));
    assert_eq!(gq.perp_perp(&[x, near]).unwrap(), expected);
}

#[test]
fn payne_derivatives() {
    let w3 = build_wq(&field(3)).unwrap();
    let cert = w3.certificate().unwrap();
    assert_eq!(w3.structure().hyperbolic_lines(&cert, w3.x()).unwrap().len(), 9);
    let d3 = w3.payne_derive().unwrap().verify_gq().unwrap();
    assert_eq!((d3.npoints, d3.nlines, d3.s, d3.t), (27, 45, 2, 4));

    let d4 = build_wq(&field(4))
        .unwrap()
        .payne_derive()
        .unwrap()
        .verify_gq()
        .unwrap();
    assert_eq!((d4.npoints, d4.s, d4.t), (64, 3, 5));
}

#[test]
fn derived_points_are_the_affine_part() {
    let f = field(3);
    let w = build_wq(&f).unwrap();
    let d = w.payne_derive().unwrap();
    let coords = w.derived_coordinates(&d).unwrap();
    assert_eq!(coords.len(), 27);
    let x = base_point();
    let form = w.form();
    assert!(coords.points().iter().all(|p| !form.eval(&x, p).is_zero()));
    let mut ours: Vec<_> = coords.points().to_vec();
    let mut reference: Vec<_> = derived_points(&f).points().to_vec();
    ours.sort();
    reference.sort();
    assert_eq!(ours, reference);
}

#[test]
fn affine_planes_at_regular_points() {
    for (q, npts, nlines) in [(3usize, 9, 12), (4, 16, 20)] {
        let w = build_wq(&field(q as u32)).unwrap();
        let cert = w.certificate().unwrap();
        let plane = w.structure().affine_plane_from_regular_point(&cert, w.x()).unwrap();
        assert_eq!((plane.npoints(), plane.nlines()), (npts, nlines));
        let classes = plane.parallel_classes();
        assert_eq!(classes.len(), q + 1);
        assert!(classes.iter().all(|c| c.len() == q));
    }
}

#[test]
fn csv_round_trip_preserves_the_certificate() {
    let d = build_wq(&field(3)).unwrap().payne_derive().unwrap();
    let back = IncidenceStructure::from_csv(&d.to_csv()).unwrap();
    assert_eq!(back.verify_gq().unwrap(), d.verify_gq().unwrap());
}

fn order_strategy() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32])
}

proptest! {
    #[test]
    fn frobenius_is_additive_and_multiplicative(q in order_strategy(), a in 0u32..1024, b in 0u32..1024) {
        let f = field(q);
        let (a, b) = (f.elem(a % q).unwrap(), f.elem(b % q).unwrap());
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.from_digits(&f.digits(a)), a);
    }

    #[test]
    fn normalize_is_idempotent_and_scale_invariant(q in order_strategy(), raw in prop::collection::vec(0u32..1024, 4), k in 1u32..1024) {
        let f = field(q);
        let v: Vec<FieldElem> = raw.iter().map(|&x| f.elem(x % q).unwrap()).collect();
        let k = f.elem(1 + k % (q - 1)).unwrap();
        let scaled: Vec<FieldElem> = v.iter().map(|&x| f.mul(k, x)).collect();
        let n = normalize(&f, &v);
        prop_assert_eq!(&n, &normalize(&f, &scaled));
        if let Some(p) = n {
            prop_assert_eq!(normalize(&f, &p), Some(p.clone()));
            let space = ProjSpace::new(f.clone(), 3);
            prop_assert_eq!(space.point_at(space.index_of(&p).unwrap()), p);
        }
    }

    #[test]
    fn join_and_meet_dimensions_add_up(seed in prop::collection::vec(0u32..5, 16)) {
        let f = field(5);
        let a: Vec<Vec<FieldElem>> = seed[..8].chunks(4).map(|c| c.iter().map(|&x| f.elem(x).unwrap()).collect()).collect();
        let b: Vec<Vec<FieldElem>> = seed[8..].chunks(4).map(|c| c.iter().map(|&x| f.elem(x).unwrap()).collect()).collect();
        let (u, w) = (Subspace::from_vectors(&f, 4, &a).unwrap(), Subspace::from_vectors(&f, 4, &b).unwrap());
        let join = u.join(&f, &w).unwrap();
        let meet = u.meet(&f, &w).unwrap();
        prop_assert_eq!(join.dim() + meet.dim(), u.dim() + w.dim());
    }
}
