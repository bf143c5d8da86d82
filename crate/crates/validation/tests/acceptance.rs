//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use singer_core::hyperoval::{
    elation_singer, payne_hyperoval, regular_hyperoval, swap_xy, t2star, translation, translation_singer,
    TranslationHyperplane,
};
use singer_core::lattice::{check_local_iso, gamma1, homology_metadata, local_data};
use singer_core::matgroup::{FinGroup, ProjMat};
use singer_core::singer::{
    classify_abelian_quotients, cross_line_overlap, enumerate_bl, even_char_invariant_count, explicit_total_count,
    h2_bruteforce, h2_order_paper, heisenberg, lift_eta, line_count, prime_case_census, total_count, BLCandidate,
};
use singer_core::symplectic::{
    build_wq, centralized_by_symmetries, check_singer_contains_s, index_report, symmetry_group,
};
use singer_core::{Field, FieldElem};

type Outcome = Result<Vec<String>, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn field(q: u32) -> Arc<Field> {
    Arc::new(Field::of_order(q).expect("prime power"))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Collects per-case notes; a case that disagrees is reported as a failure
/// together with every other case.
struct Cases {
    notes: Vec<String>,
    bad: bool,
}

impl Cases {
    fn new() -> Self {
        Cases {
            notes: Vec::new(),
            bad: false,
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, label: impl Into<String>, expected: T, observed: T) {
        let label = label.into();
        if expected == observed {
            self.notes.push(format!("{label}: {observed:?}"));
        } else {
            self.bad = true;
            self.notes
                .push(format!("{label}: expected {expected:?}, observed {observed:?}"));
        }
    }

    fn done(self) -> Outcome {
        if self.bad {
            Err(self.notes.join("; "))
        } else {
            Ok(self.notes)
        }
    }
}

fn c01_payne_order() -> Outcome {
    let mut c = Cases::new();
    for q in [3, 4, 5, 7, 8] {
        let w = build_wq(&field(q)).map_err(err)?;
        let cert = w.payne_derive().map_err(err)?.verify_gq().map_err(err)?;
        c.eq(format!("q={q}"), (q as usize - 1, q as usize + 1), (cert.s, cert.t));
    }
    c.done()
}

fn c02_regularity() -> Outcome {
    let mut c = Cases::new();
    for q in [2, 3, 4, 5] {
        let w = build_wq(&field(q)).map_err(err)?;
        let cert = w.certificate().map_err(err)?;
        let gq = w.structure();
        let mut irregular = 0;
        for x in 0..gq.npoints() {
            if !gq.is_regular_point(&cert, x).map_err(err)? {
                irregular += 1;
            }
        }
        c.eq(format!("q={q} irregular points"), 0, irregular);
    }
    c.done()
}

fn c03_bl_count() -> Outcome {
    let mut c = Cases::new();
    for (q, n) in [(3, 3), (4, 16), (5, 5), (8, 512), (9, 81)] {
        let f = field(q);
        let cands = enumerate_bl(&f, 0).map_err(err)?;
        let p_h2 = (f.p() as usize).pow(f.h() * f.h());
        c.eq(format!("q={q}"), (n, n), (cands.len(), p_h2));
    }
    c.done()
}

fn c04_lift_validity() -> Outcome {
    let mut c = Cases::new();
    for q in [3, 4, 5, 8, 9] {
        let f = field(q);
        let cands = enumerate_bl(&f, 0).map_err(err)?;
        let chosen: Vec<&BLCandidate> = if q <= 5 {
            cands.iter().collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + q as u64);
            sample(&mut rng, cands.len(), 10).iter().map(|i| &cands[i]).collect()
        };
        let q3 = (q as usize).pow(3);
        let mut good = 0;
        for cand in &chosen {
            // lift_eta returns an error unless the action on 𝒫(q) is sharply transitive.
            if let Ok(r) = lift_eta(&f, cand) {
                if r.s_group.order() == q3 && r.certificate.images.len() == q3 {
                    good += 1;
                }
            }
        }
        c.eq(format!("q={q} sharply transitive of order q³"), chosen.len(), good);
    }
    c.done()
}

fn c05_abelian_quotients() -> Outcome {
    let mut c = Cases::new();
    for q in [3, 4, 5, 8, 9] {
        let r = classify_abelian_quotients(&field(q), 0).map_err(err)?;
        let expected = if q % 2 == 1 { q as usize } else { 1 };
        c.eq(format!("q={q}"), expected, r.abelian);
    }
    c.done()
}

fn c06_cross_line_overlap() -> Outcome {
    let mut c = Cases::new();
    for q in [3, 4] {
        let f = field(q);
        let n = line_count(&f);
        let mut off = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let o = cross_line_overlap(&f, a, b).map_err(err)?;
                if o != 1 {
                    off.push((a, b, o));
                }
            }
        }
        c.eq(
            format!("q={q} pairs with overlap ≠ 1"),
            Vec::<(usize, usize, usize)>::new(),
            off,
        );
    }
    c.done()
}

fn c07_prime_case() -> Outcome {
    let mut c = Cases::new();
    for p in [3, 5, 7] {
        let r = prime_case_census(p).map_err(err)?;
        c.eq(
            format!("p={p} (groups, elementary abelian, Heisenberg fingerprint)"),
            (p as usize, 1, p as usize - 1),
            (r.groups, r.elementary_abelian, r.heisenberg_fingerprint),
        );
    }
    c.done()
}

fn c08_central_symmetries() -> Outcome {
    let mut c = Cases::new();
    for q in [3, 5, 7] {
        let f = field(q);
        let sym = symmetry_group(&f);
        let sym_elems: HashSet<&ProjMat> = sym.elements().iter().collect();
        let mut good = 0;
        let cands = enumerate_bl(&f, 0).map_err(err)?;
        for cand in &cands {
            let s = lift_eta(&f, cand).map_err(err)?.s_group;
            let z = s.center();
            let center_is_sym = z.order() == sym.order() && z.elements().iter().all(|e| sym_elems.contains(e));
            if check_singer_contains_s(&f, &s) && centralized_by_symmetries(&f, &s) && center_is_sym {
                good += 1;
            }
        }
        c.eq(
            format!("q={q} lifts with 𝕊 ≤ S, [𝕊, S] = 1, Z(S) = 𝕊"),
            cands.len(),
            good,
        );
    }
    c.done()
}

fn c09_index_two() -> Outcome {
    let mut c = Cases::new();
    for q in [3, 5] {
        let r = index_report(&field(q)).map_err(err)?;
        c.eq(
            format!("q={q} index of H in the PSL₄ part"),
            (2, true),
            (r.index(), r.d_one_in_psl),
        );
    }
    let r = index_report(&field(4)).map_err(err)?;
    c.eq(
        "q=4 |H| against the full linear stabilizer",
        r.stabilizer_order,
        r.d_one_order,
    );
    c.done()
}

fn c10_maximal_abelians() -> Outcome {
    let mut c = Cases::new();
    for q in [3, 4, 5, 8, 9] {
        let h = heisenberg(&field(q), 0).map_err(err)?;
        let q2 = (q as usize).pow(2);
        let count = h
            .h()
            .maximal_elementary_abelian_subgroups()
            .map_err(err)?
            .iter()
            .filter(|g| g.order() == q2)
            .count();
        let expected = if q % 2 == 1 { q as usize + 1 } else { 2 };
        c.eq(format!("q={q}"), expected, count);
    }
    c.done()
}

fn c11_even_char() -> Outcome {
    let mut c = Cases::new();
    for n in 2..=5u32 {
        let r = even_char_invariant_count(n).map_err(err)?;
        let expected = (n as usize - 1).div_ceil(2);
        let mode = if r.exhaustive { "exhaustive" } else { "sampled" };
        c.eq(format!("n={n} ({mode}, {} subspaces)", r.examined), expected, r.count);
    }
    c.done()
}

fn c12_cohomology() -> Outcome {
    let mut c = Cases::new();
    for p in [2u32, 3, 5] {
        c.eq(
            format!("|H²(C_{p}, C_{p})|"),
            BigUint::from(p),
            h2_bruteforce(p, 1).map_err(err)?,
        );
    }
    for (p, n) in [(2u32, 2u32), (3, 2)] {
        let v = h2_bruteforce(p, n).map_err(err)?;
        // dim H²((F_p)ⁿ, F_p) = n(n+1)/2, one copy per coordinate of the module.
        c.eq(
            format!("|H²(C_{p}^{n}, C_{p}^{n})|"),
            BigUint::from(p).pow(n * n * (n + 1) / 2),
            v.clone(),
        );
        let closed = h2_order_paper(p, n);
        let verdict = if closed == v { "match" } else { "mismatch" };
        c.notes.push(format!(
            "closed form p^(n(n−1)(n+2)/2) at (p,n)=({p},{n}) gives {closed}: {verdict}"
        ));
    }
    c.done()
}

fn group_cases(c: &mut Cases, label: &str, q: u32, g: &FinGroup) {
    c.eq(format!("{label} q={q} order"), (q as usize).pow(3), g.order());
    c.eq(format!("{label} q={q} exponent"), 4, g.exponent());
}

fn c13_hyperoval_singer() -> Outcome {
    let mut c = Cases::new();
    for q in [4, 8] {
        let f = field(q);
        let model = t2star(&regular_hyperoval(&f).map_err(err)?).map_err(err)?;
        let s = translation_singer(&f, 1).map_err(err)?;
        group_cases(&mut c, "translation_singer", q, &s);
        c.eq(
            format!("translation_singer q={q} center"),
            (q as usize).pow(2),
            s.center().order(),
        );
        c.eq(
            format!("translation_singer q={q} sharply transitive"),
            true,
            model.singer_certificate(&s).is_ok(),
        );
    }
    let f = field(32);
    let h = payne_hyperoval(&f).map_err(err)?;
    let model = t2star(&h).map_err(err)?;
    let s = elation_singer(&h, &swap_xy(&f), &TranslationHyperplane::digit_sum(f.h())).map_err(err)?;
    group_cases(&mut c, "elation_singer", 32, &s.group);
    let (o, z) = (FieldElem::ONE, FieldElem::ZERO);
    c.eq(
        "elation_singer q=32 g² = h(1,1,0)",
        true,
        s.g.mul(&f, &s.g) == translation(&f, o, o, z),
    );
    c.eq("elation_singer q=32 |S ∩ T|", 1usize << 14, s.translation_intersection);
    c.eq(
        "elation_singer q=32 sharply transitive",
        true,
        model.singer_certificate(&s.group).is_ok(),
    );
    c.done()
}

fn c14_t2star() -> Outcome {
    let mut c = Cases::new();
    for q in [4, 8] {
        let f = field(q);
        let cert = t2star(&regular_hyperoval(&f).map_err(err)?)
            .map_err(err)?
            .certify()
            .map_err(err)?;
        c.eq(format!("q={q}"), (q as usize - 1, q as usize + 1), (cert.s, cert.t));
    }
    c.done()
}

fn c15_gamma1() -> Outcome {
    let mut c = Cases::new();
    let f = field(3);
    let w = build_wq(&f).map_err(err)?;
    let d = w.payne_derive().map_err(err)?;
    let pts = w.derived_coordinates(&d).map_err(err)?;
    let s = lift_eta(&f, &BLCandidate::from_index(&f, 0, 0).map_err(err)?)
        .map_err(err)?
        .s_group;
    let l = local_data(&d, &s, &pts, 0).map_err(err)?;
    let stabs: Vec<Option<Vec<u64>>> = l.profile.iter().map(|p| p.invariant_factors.clone()).collect();
    c.eq("q=3 line stabilizers", vec![Some(vec![3u64]); 5], stabs);
    let m = check_local_iso(&l, &l).map_err(err)?;
    let p = gamma1(&l, &l, &m).map_err(err)?;
    c.eq("q=3 generators", 52, p.generators.len());
    c.eq("q=3 commutator relators", 20, p.commutator_relators);
    let f8 = field(8);
    let s8 = lift_eta(&f8, &BLCandidate::from_index(&f8, 0, 0).map_err(err)?)
        .map_err(err)?
        .s_group;
    c.eq("q=8 S", Some(vec![2u64; 9]), s8.abelian_invariant_factors());
    let meta = homology_metadata(&s8, &s8);
    c.eq("q=8 |H₂(Γ₁)|", Some(BigUint::from(2u32).pow(72)), meta.gamma1);
    c.done()
}

fn c16_total_count() -> Outcome {
    let mut c = Cases::new();
    for q in [3, 4] {
        let f = field(q);
        let closed = total_count(&f);
        let explicit = explicit_total_count(&f).map_err(err)?;
        c.eq(
            format!("q={q} closed form against explicit count"),
            closed.to_string(),
            explicit.to_string(),
        );
    }
    c.done()
}

fn main() -> ExitCode {
    let criteria: [Criterion; 16] = [
        ("payne order", c01_payne_order),
        ("regularity", c02_regularity),
        ("B(ℓ) count", c03_bl_count),
        ("lift validity", c04_lift_validity),
        ("abelian-quotient counts", c05_abelian_quotients),
        ("cross-line overlap", c06_cross_line_overlap),
        ("prime case census", c07_prime_case),
        ("central symmetries", c08_central_symmetries),
        ("index of the d = 1 family", c09_index_two),
        ("Heisenberg maximal abelians", c10_maximal_abelians),
        ("even-characteristic invariants", c11_even_char),
        ("cohomology oracle", c12_cohomology),
        ("hyperoval Singer groups", c13_hyperoval_singer),
        ("T₂* certification", c14_t2star),
        ("lattice Γ₁", c15_gamma1),
        ("count formula consistency", c16_total_count),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(notes) => println!("PASS {:>2} {name} ({secs:.1}s): {}", i + 1, notes.join("; ")),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
