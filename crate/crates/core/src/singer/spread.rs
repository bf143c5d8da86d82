use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::heisenberg::{line_conjugator, unitriangular, BLCandidate};
use super::partitions::partitions;
use super::SingerError;
use crate::gf::{Field, FieldElem};
use crate::matgroup::FinGroup;
use crate::projgeom::{for_each_subspace, rref, spread_of_field, Subspace, Vector};

/// Largest ambient vector count p^{2n} for exhaustive spread enumerations.
pub const MAX_ZETA_POINTS: u64 = 1 << 16;

/// Intersection dimensions of the subspace α ≤ H/Z of a group T with the
/// elements of the Desarguesian spread of H/Z.
///
/// Index 0 is A/Z, index 1 is B/Z and index `1 + m` is the graph of
/// multiplication by the nonzero field element encoded by `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CommutingVector {
    pub dims: Vec<usize>,
    /// Nonzero entries of `dims`, largest first.
    pub multiset: Vec<usize>,
    pub alpha: Subspace,
}

impl CommutingVector {
    fn new(alpha: Subspace, spread: &[Subspace], f: &Field) -> CommutingVector {
        let dims: Vec<usize> = spread.iter().map(|s| meet_dim(f, &alpha, s)).collect();
        let mut multiset: Vec<usize> = dims.iter().copied().filter(|&d| d > 0).collect();
        multiset.sort_unstable_by(|a, b| b.cmp(a));
        CommutingVector { dims, multiset, alpha }
    }

    /// Intersections counted as projective point sets, largest first.
    pub fn point_multiset(&self, p: u32) -> Vec<u64> {
        self.multiset.iter().map(|&d| point_count(p, d)).collect()
    }
}

fn point_count(p: u32, d: usize) -> u64 {
    let p = p as u64;
    (p.pow(d as u32) - 1) / (p - 1)
}

fn meet_dim(f: &Field, a: &Subspace, b: &Subspace) -> usize {
    let mut rows: Vec<Vector> = a.basis().iter().chain(b.basis()).cloned().collect();
    a.dim() + b.dim() - rref(f, &mut rows)
}

/// Coordinates `(digits(t), digits(α))` of an element of H(ℓ) in H/Z, read in
/// the frame of line 0.
fn hz_vector(f: &Field, conj: &crate::matgroup::ProjMat, g: &crate::matgroup::ProjMat) -> Vector {
    let base = g.conjugate_by(f, conj);
    f.digits(base.entry(1, 2))
        .into_iter()
        .chain(f.digits(base.entry(0, 1)))
        .map(FieldElem::from_encoding)
        .collect()
}

/// The commuting vector of a subgroup T of H(ℓ) of order q² containing Z.
pub fn commuting_vector(field: &Arc<Field>, t: &FinGroup, line: usize) -> Result<CommutingVector, SingerError> {
    let f = field.as_ref();
    let q = f.q() as usize;
    let (c3, _) = line_conjugator(f, line)?;
    let back = c3.inverse(f);
    let center_ok = (0..f.h()).all(|i| {
        let z = unitriangular(f, FieldElem::ZERO, f.basis_element(i), FieldElem::ZERO);
        t.contains(&z.conjugate_by(f, &back))
    });
    if t.order() != q * q || !center_ok {
        return Err(SingerError::NotContainingCenter);
    }
    let prime = Field::new(f.p(), 1)?;
    let vecs: Vec<Vector> = t.generators().iter().map(|g| hz_vector(f, &c3, g)).collect();
    let alpha = Subspace::from_vectors(&prime, 2 * f.h() as usize, &vecs)?;
    let spread = spread_of_field(f)?;
    Ok(CommutingVector::new(alpha, &spread, &prime))
}

/// Multisets of nonzero intersection sizes of the n-spaces of GF(p)^{2n} not
/// in the Desarguesian spread.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaReport {
    pub p: u32,
    pub n: u32,
    pub examined: u64,
    /// Number of distinct point-count multisets.
    pub zeta: usize,
    pub point_multisets: BTreeSet<Vec<u64>>,
    pub dim_multisets: BTreeSet<Vec<usize>>,
}

fn check_space(p: u32, n: u32) -> Result<(Field, Vec<Subspace>), SingerError> {
    let total = (p as u64).checked_pow(2 * n).unwrap_or(u64::MAX);
    if n == 0 || total > MAX_ZETA_POINTS {
        return Err(SingerError::SpaceTooLarge(total));
    }
    let ext = Field::new(p, n)?;
    Ok((Field::new(p, 1)?, spread_of_field(&ext)?))
}

/// Visits every n-space of GF(p)^{2n} outside the spread with its intersection
/// dimensions.
fn for_each_off_spread<F>(prime: &Field, spread: &[Subspace], n: u32, mut visit: F)
where
    F: FnMut(&Subspace, &[usize]) -> bool,
{
    let len = 2 * n as usize;
    let mut dims = vec![0usize; spread.len()];
    for_each_subspace(prime, len, n as usize, |alpha| {
        if spread.contains(alpha) {
            return true;
        }
        for (d, s) in dims.iter_mut().zip(spread) {
            *d = meet_dim(prime, alpha, s);
        }
        visit(alpha, &dims)
    });
}

/// Exhaustive count ζ(p, n) of distinct intersection multisets.
pub fn zeta(p: u32, n: u32) -> Result<ZetaReport, SingerError> {
    let (prime, spread) = check_space(p, n)?;
    let mut report = ZetaReport {
        p,
        n,
        examined: 0,
        zeta: 0,
        point_multisets: BTreeSet::new(),
        dim_multisets: BTreeSet::new(),
    };
    for_each_off_spread(&prime, &spread, n, |_, dims| {
        let mut ms: Vec<usize> = dims.iter().copied().filter(|&d| d > 0).collect();
        ms.sort_unstable_by(|a, b| b.cmp(a));
        report
            .point_multisets
            .insert(ms.iter().map(|&d| point_count(p, d)).collect());
        report.dim_multisets.insert(ms);
        report.examined += 1;
        true
    });
    report.zeta = report.point_multisets.len();
    Ok(report)
}

/// The distinct dimension multisets found by `zeta`.
pub fn distinct_multisets(p: u32, n: u32) -> Result<BTreeSet<Vec<usize>>, SingerError> {
    Ok(zeta(p, n)?.dim_multisets)
}

/// Distinct pairs `{dim(α∩π), dim(α∩π′)}` over n-spaces α of GF(2)^{2n}
/// meeting both of two fixed complementary n-spaces π, π′ nontrivially with
/// `dim(α∩π) + dim(α∩π′) = n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvenCharReport {
    pub n: u32,
    pub exhaustive: bool,
    pub examined: u64,
    pub pairs: BTreeSet<(usize, usize)>,
    pub count: usize,
    /// ⌈(n − 1)/2⌉.
    pub expected: usize,
}

fn even_char_setup(n: u32) -> Result<(Field, Subspace, Subspace), SingerError> {
    if !(2..=10).contains(&n) {
        return Err(SingerError::SpaceTooLarge(1u64 << (2 * n.min(32))));
    }
    let f = Field::new(2, 1)?;
    let len = 2 * n as usize;
    let unit = |i: usize| {
        let mut v = vec![FieldElem::ZERO; len];
        v[i] = FieldElem::ONE;
        v
    };
    let pi: Vec<Vector> = (0..n as usize).map(unit).collect();
    let pi2: Vec<Vector> = (n as usize..len).map(unit).collect();
    let (a, b) = (
        Subspace::from_vectors(&f, len, &pi)?,
        Subspace::from_vectors(&f, len, &pi2)?,
    );
    Ok((f, a, b))
}

fn classify_pair(f: &Field, n: u32, alpha: &Subspace, pi: &Subspace, pi2: &Subspace) -> Option<(usize, usize)> {
    if alpha == pi || alpha == pi2 {
        return None;
    }
    let d1 = meet_dim(f, alpha, pi);
    let d2 = meet_dim(f, alpha, pi2);
    (d1 > 0 && d2 > 0 && d1 + d2 == n as usize).then(|| (d1.min(d2), d1.max(d2)))
}

fn expected_pairs(n: u32) -> usize {
    (n as usize - 1).div_ceil(2)
}

/// Exhaustive for n ≤ 4; larger n fall back to `even_char_sampled` with a
/// fixed seed.
pub fn even_char_invariant_count(n: u32) -> Result<EvenCharReport, SingerError> {
    if n > 4 {
        return even_char_sampled(n, 20_000, 0x5eed);
    }
    let (f, pi, pi2) = even_char_setup(n)?;
    let mut pairs = BTreeSet::new();
    let mut examined = 0u64;
    for_each_subspace(&f, 2 * n as usize, n as usize, |alpha| {
        examined += 1;
        if let Some(pair) = classify_pair(&f, n, alpha, &pi, &pi2) {
            pairs.insert(pair);
        }
        true
    });
    Ok(EvenCharReport {
        n,
        exhaustive: true,
        examined,
        count: pairs.len(),
        pairs,
        expected: expected_pairs(n),
    })
}

fn random_subspace_of(f: &Field, space: &Subspace, dim: usize, rng: &mut ChaCha8Rng) -> Vec<Vector> {
    let len = space.ambient_len();
    loop {
        let vecs: Vec<Vector> = (0..dim)
            .map(|_| {
                let mut v = vec![FieldElem::ZERO; len];
                for b in space.basis() {
                    if rng.gen::<bool>() {
                        for (x, &y) in v.iter_mut().zip(b) {
                            *x = f.add(*x, y);
                        }
                    }
                }
                v
            })
            .collect();
        let mut check = vecs.clone();
        if rref(f, &mut check) == dim {
            return vecs;
        }
    }
}

/// Samples n-spaces: half are sums of random subspaces of π and π′, half are
/// uniformly random spans. Each sample is classified from its computed
/// intersections.
pub fn even_char_sampled(n: u32, samples: usize, seed: u64) -> Result<EvenCharReport, SingerError> {
    let (f, pi, pi2) = even_char_setup(n)?;
    let len = 2 * n as usize;
    let whole = Subspace::whole(len);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = BTreeSet::new();
    let mut examined = 0u64;
    for i in 0..samples {
        let vecs = if i % 2 == 0 {
            let d = rng.gen_range(1..n as usize);
            let mut v = random_subspace_of(&f, &pi, d, &mut rng);
            v.extend(random_subspace_of(&f, &pi2, n as usize - d, &mut rng));
            v
        } else {
            random_subspace_of(&f, &whole, n as usize, &mut rng)
        };
        let alpha = Subspace::from_vectors(&f, len, &vecs)?;
        examined += 1;
        if let Some(pair) = classify_pair(&f, n, &alpha, &pi, &pi2) {
            pairs.insert(pair);
        }
    }
    Ok(EvenCharReport {
        n,
        exhaustive: false,
        examined,
        count: pairs.len(),
        pairs,
        expected: expected_pairs(n),
    })
}

/// An n-space spanned by its intersections with the listed spread elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub alpha: Subspace,
    pub spread_indices: Vec<usize>,
    pub dims: Vec<usize>,
}

/// For every partition of n into at least two parts, the first n-space α
/// outside the spread (in enumeration order) that is the direct sum of its
/// intersections with distinct spread elements of those dimensions; `None`
/// if none exists.
pub fn partition_witness_search(p: u32, n: u32) -> Result<BTreeMap<Vec<usize>, Option<Witness>>, SingerError> {
    let (prime, spread) = check_space(p, n)?;
    let mut found: BTreeMap<Vec<usize>, Option<Witness>> = partitions(n as usize)
        .into_iter()
        .filter(|part| part.len() >= 2)
        .map(|part| (part, None))
        .collect();
    let mut missing = found.len();
    if missing == 0 {
        return Ok(found);
    }
    let len = 2 * n as usize;
    for_each_off_spread(&prime, &spread, n, |alpha, dims| {
        let meets: Vec<(usize, usize, Subspace)> = dims
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(i, &d)| (i, d, alpha.meet(&prime, &spread[i]).expect("same ambient space")))
            .collect();
        let mut chosen = Vec::new();
        direct_sums(&prime, &meets, 0, n as usize, &mut Vec::new(), &mut chosen);
        for pick in chosen {
            let mut parts: Vec<(usize, usize)> = pick.iter().map(|&k| (meets[k].1, meets[k].0)).collect();
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let key: Vec<usize> = parts.iter().map(|&(d, _)| d).collect();
            if let Some(slot @ None) = found.get_mut(&key) {
                *slot = Some(Witness {
                    alpha: Subspace::from_vectors(&prime, len, alpha.basis()).expect("valid"),
                    spread_indices: parts.iter().map(|&(_, i)| i).collect(),
                    dims: key,
                });
                missing -= 1;
            }
        }
        missing > 0
    });
    Ok(found)
}

/// Collects index sets of at least two intersections whose direct sum has
/// dimension `remaining` more than the rows already chosen.
fn direct_sums(
    f: &Field,
    meets: &[(usize, usize, Subspace)],
    from: usize,
    remaining: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if remaining == 0 {
        if current.len() >= 2 {
            out.push(current.clone());
        }
        return;
    }
    for k in from..meets.len() {
        let d = meets[k].1;
        if d > remaining {
            continue;
        }
        let mut rows: Vec<Vector> = current
            .iter()
            .chain(std::iter::once(&k))
            .flat_map(|&j| meets[j].2.basis().iter().cloned())
            .collect();
        let expected = rows.len();
        if rref(f, &mut rows) == expected {
            current.push(k);
            direct_sums(f, meets, k + 1, remaining - d, current, out);
            current.pop();
        }
    }
}

/// A direction of AG(2, q): the slope `dy/dx` (by encoding) or vertical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    Slope(u32),
    Vertical,
}

/// Directions determined by pairs of distinct points of a q-set in AG(2, q).
pub fn directions_of_set(field: &Field, points: &[(FieldElem, FieldElem)]) -> Result<BTreeSet<Direction>, SingerError> {
    let q = field.q() as usize;
    let distinct: BTreeSet<(u32, u32)> = points.iter().map(|(x, y)| (x.encoding(), y.encoding())).collect();
    if points.len() != q || distinct.len() != q {
        return Err(SingerError::WrongSize {
            expected: q,
            got: distinct.len(),
        });
    }
    let mut out = BTreeSet::new();
    for (i, &(x1, y1)) in points.iter().enumerate() {
        for &(x2, y2) in &points[i + 1..] {
            let dx = field.sub(x2, x1);
            let dy = field.sub(y2, y1);
            out.insert(if dx.is_zero() {
                Direction::Vertical
            } else {
                Direction::Slope(field.div(dy, dx)?.encoding())
            });
        }
    }
    Ok(out)
}

/// The GF(p)-linear set `{(t, φ(t))}` of a candidate, as q points of AG(2, q).
pub fn linear_set_of(field: &Field, cand: &BLCandidate) -> Vec<(FieldElem, FieldElem)> {
    field.elements().map(|t| (t, cand.apply(field, t))).collect()
}
