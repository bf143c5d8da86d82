//! Projective spaces PG(n, q), subspaces in reduced echelon form, the symplectic
//! form on GF(q)^4 and Desarguesian spreads of PG(2n−1, p).

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{Field, FieldElem, GfError};

/// Largest number of points `enumerate_points` will materialize.
pub const MAX_POINTS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("space has {0} points, above the enumeration limit")]
    SpaceTooLarge(u64),
    #[error("dimension mismatch: expected vectors of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero vector does not define a projective point")]
    ZeroVector,
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A vector over a field, stored as encoded elements.
pub type Vector = Vec<FieldElem>;

/// Scales `v` so that its first nonzero coordinate is 1; `None` for the zero vector.
pub fn normalize(f: &Field, v: &[FieldElem]) -> Option<Vector> {
    let lead = *v.iter().find(|c| !c.is_zero())?;
    if lead == FieldElem::ONE {
        return Some(v.to_vec());
    }
    let inv = f.inv(lead).ok()?;
    Some(v.iter().map(|&c| f.mul(c, inv)).collect())
}

pub fn dot(f: &Field, u: &[FieldElem], v: &[FieldElem]) -> FieldElem {
    u.iter()
        .zip(v)
        .fold(FieldElem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
}

/// A point of PG(n, q) with its normalized coordinates and canonical index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ProjPoint {
    pub coords: Vector,
    pub index: usize,
}

/// The point set of PG(n, q) with the canonical lexicographic indexing.
///
/// Normalized vectors are ordered lexicographically by encoded coordinates, so
/// points with more leading zeros come first.
#[derive(Debug, Clone)]
pub struct ProjSpace {
    field: Arc<Field>,
    n: usize,
}

impl ProjSpace {
    pub fn new(field: Arc<Field>, n: usize) -> Self {
        ProjSpace { field, n }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Projective dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn point_count(&self) -> u64 {
        let q = self.field.q() as u64;
        (q.pow(self.n as u32 + 1) - 1) / (q - 1)
    }

    /// Index of the point spanned by `v` (any nonzero representative).
    pub fn index_of(&self, v: &[FieldElem]) -> Result<usize, GeomError> {
        let len = self.n + 1;
        if v.len() != len {
            return Err(GeomError::DimensionMismatch {
                expected: len,
                got: v.len(),
            });
        }
        let v = normalize(&self.field, v).ok_or(GeomError::ZeroVector)?;
        let q = self.field.q() as u64;
        let lead = v.iter().position(|c| !c.is_zero()).unwrap();
        let tail = len - 1 - lead;
        let mut idx = (q.pow(tail as u32) - 1) / (q - 1);
        let mut offset = 0u64;
        for c in &v[lead + 1..] {
            offset = offset * q + c.encoding() as u64;
        }
        idx += offset;
        Ok(idx as usize)
    }

    /// Normalized coordinates of the point with the given index.
    pub fn point_at(&self, index: usize) -> Vector {
        let q = self.field.q() as u64;
        let len = self.n + 1;
        let mut idx = index as u64;
        let mut tail = 0usize;
        loop {
            let block = q.pow(tail as u32);
            if idx < block {
                break;
            }
            idx -= block;
            tail += 1;
        }
        let mut v = vec![FieldElem::ZERO; len];
        let lead = len - 1 - tail;
        v[lead] = FieldElem::ONE;
        for pos in (lead + 1..len).rev() {
            v[pos] = FieldElem::from_encoding((idx % q) as u32);
            idx /= q;
        }
        v
    }
}

/// All points of PG(n, q) in canonical order.
pub fn enumerate_points(n: usize, field: &Arc<Field>) -> Result<Vec<ProjPoint>, GeomError> {
    let space = ProjSpace::new(field.clone(), n);
    let count = space.point_count();
    if count > MAX_POINTS {
        return Err(GeomError::SpaceTooLarge(count));
    }
    Ok((0..count as usize)
        .map(|index| ProjPoint {
            coords: space.point_at(index),
            index,
        })
        .collect())
}

/// Reduces `rows` to reduced row echelon form in place and returns the rank.
/// Zero rows are dropped.
pub fn rref(f: &Field, rows: &mut Vec<Vector>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = f.inv(rows[rank][col]).expect("pivot is nonzero");
        for c in rows[rank].iter_mut() {
            *c = f.mul(*c, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (c, &p) in row.iter_mut().zip(&pivot_row) {
                *c = f.sub(*c, f.mul(factor, p));
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rank
}

/// Basis of `{v : row · v = 0 for every row}` in a space of dimension `ncols`.
pub fn annihilator(f: &Field, rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    rref(f, &mut m);
    let pivots: Vec<usize> = m.iter().map(|r| r.iter().position(|c| !c.is_zero()).unwrap()).collect();
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![FieldElem::ZERO; ncols];
        v[free] = FieldElem::ONE;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = f.neg(row[free]);
        }
        out.push(v);
    }
    out
}

/// A linear subspace of GF(q)^len, stored by its reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subspace {
    len: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(len: usize) -> Self {
        Subspace { len, basis: Vec::new() }
    }

    pub fn whole(len: usize) -> Self {
        let basis = (0..len)
            .map(|i| {
                let mut v = vec![FieldElem::ZERO; len];
                v[i] = FieldElem::ONE;
                v
            })
            .collect();
        Subspace { len, basis }
    }

    /// The span of arbitrary vectors of length `len`.
    pub fn from_vectors(f: &Field, len: usize, vectors: &[Vector]) -> Result<Self, GeomError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != len) {
            return Err(GeomError::DimensionMismatch {
                expected: len,
                got: v.len(),
            });
        }
        let mut basis = vectors.to_vec();
        rref(f, &mut basis);
        Ok(Subspace { len, basis })
    }

    /// Wraps rows already in reduced echelon form.
    pub(crate) fn from_rref_unchecked(len: usize, basis: Vec<Vector>) -> Self {
        Subspace { len, basis }
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Vector-space dimension.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Projective dimension; −1 for the zero subspace.
    pub fn projdim(&self) -> i64 {
        self.basis.len() as i64 - 1
    }

    pub fn contains(&self, f: &Field, v: &[FieldElem]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref(f, &mut rows) == self.basis.len()
    }

    pub fn join(&self, f: &Field, other: &Subspace) -> Result<Subspace, GeomError> {
        self.check_len(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::from_vectors(f, self.len, &rows)
    }

    /// Intersection, computed as the annihilator of the sum of annihilators.
    pub fn meet(&self, f: &Field, other: &Subspace) -> Result<Subspace, GeomError> {
        self.check_len(other)?;
        let mut ann = annihilator(f, &self.basis, self.len);
        ann.extend(annihilator(f, &other.basis, self.len));
        let meet = annihilator(f, &ann, self.len);
        Subspace::from_vectors(f, self.len, &meet)
    }

    /// Every vector of the subspace, including zero, in coefficient order.
    pub fn vectors(&self, f: &Field) -> Vec<Vector> {
        let q = f.q() as usize;
        let k = self.basis.len();
        let total = q.pow(k as u32);
        let mut out = Vec::with_capacity(total);
        for mut idx in 0..total {
            let mut v = vec![FieldElem::ZERO; self.len];
            for row in &self.basis {
                let c = FieldElem::from_encoding((idx % q) as u32);
                idx /= q;
                if c.is_zero() {
                    continue;
                }
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(c, r));
                }
            }
            out.push(v);
        }
        out
    }

    /// Normalized projective points of the subspace, sorted.
    pub fn points(&self, f: &Field) -> Vec<Vector> {
        let mut pts: Vec<Vector> = self
            .vectors(f)
            .into_iter()
            .filter(|v| v.iter().any(|c| !c.is_zero()))
            .filter_map(|v| {
                let n = normalize(f, &v)?;
                (n == v).then_some(n)
            })
            .collect();
        pts.sort();
        pts
    }

    fn check_len(&self, other: &Subspace) -> Result<(), GeomError> {
        if self.len != other.len {
            return Err(GeomError::DimensionMismatch {
                expected: self.len,
                got: other.len,
            });
        }
        Ok(())
    }
}

/// Span of projective points (all of the same length).
pub fn span(f: &Field, points: &[Vector]) -> Result<Subspace, GeomError> {
    let len = points.first().map_or(0, |p| p.len());
    Subspace::from_vectors(f, len, points)
}

/// Number of `k`-dimensional subspaces of GF(q)^n (Gaussian binomial).
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// Calls `visit` on every `k`-dimensional subspace of GF(q)^len, in order of
/// pivot columns and then free-entry encodings. Stops early when `visit` returns false.
pub fn for_each_subspace<F>(f: &Field, len: usize, k: usize, mut visit: F)
where
    F: FnMut(&Subspace) -> bool,
{
    if k > len {
        return;
    }
    let q = f.q() as u64;
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // Free positions: (row, col) with col > pivot[row] and col not a pivot.
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pv = &pivots;
                (pv[r] + 1..len).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let total = q.pow(free.len() as u32);
        for mut idx in 0..total {
            let mut rows = vec![vec![FieldElem::ZERO; len]; k];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = FieldElem::ONE;
            }
            for &(r, c) in &free {
                rows[r][c] = FieldElem::from_encoding((idx % q) as u32);
                idx /= q;
            }
            if !visit(&Subspace::from_rref_unchecked(len, rows)) {
                return;
            }
        }
        // Next k-combination of pivot columns.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pivots[i] < len - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
        if k == 0 {
            return;
        }
    }
}

/// All `k`-dimensional subspaces of GF(q)^len.
pub fn subspaces(f: &Field, len: usize, k: usize, limit: u64) -> Result<Vec<Subspace>, GeomError> {
    let count = gaussian_binomial(len as u32, k as u32, f.q() as u64);
    if count > limit as u128 {
        return Err(GeomError::SpaceTooLarge(count.min(u64::MAX as u128) as u64));
    }
    let mut out = Vec::with_capacity(count as usize);
    for_each_subspace(f, len, k, |s| {
        out.push(s.clone());
        true
    });
    Ok(out)
}

/// The alternating form `B(u, v) = uᵀ P v` on GF(q)^4 with
/// `P = [[0,1,0,0],[−1,0,0,0],[0,0,0,1],[0,0,−1,0]]`.
#[derive(Debug, Clone)]
pub struct SymplecticForm {
    field: Arc<Field>,
    gram: [[FieldElem; 4]; 4],
}

impl SymplecticForm {
    pub fn new(field: Arc<Field>) -> Self {
        let z = FieldElem::ZERO;
        let one = FieldElem::ONE;
        let m1 = field.neg(one);
        let gram = [[z, one, z, z], [m1, z, z, z], [z, z, z, one], [z, z, m1, z]];
        SymplecticForm { field, gram }
    }

    pub fn gram(&self) -> &[[FieldElem; 4]; 4] {
        &self.gram
    }

    pub fn eval(&self, u: &[FieldElem], v: &[FieldElem]) -> FieldElem {
        let f = &self.field;
        let mut acc = FieldElem::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                let g = self.gram[i][j];
                if !g.is_zero() {
                    acc = f.add(acc, f.mul(f.mul(u[i], g), v[j]));
                }
            }
        }
        acc
    }

    /// Whether a 2-dimensional subspace is totally isotropic.
    pub fn is_isotropic_line(&self, line: &Subspace) -> bool {
        line.dim() == 2 && self.eval(&line.basis()[0], &line.basis()[1]).is_zero()
    }

    /// The subspace `v^⊥`.
    pub fn perp(&self, v: &[FieldElem]) -> Subspace {
        let f = &self.field;
        let row: Vector = (0..4)
            .map(|j| (0..4).fold(FieldElem::ZERO, |acc, i| f.add(acc, f.mul(v[i], self.gram[i][j]))))
            .collect();
        let ann = annihilator(f, &[row], 4);
        Subspace::from_vectors(f, 4, &ann).expect("length 4")
    }
}

/// Reads GF(p)^{2n} as GF(p^n)^2 and returns the p^n + 1 points of PG(1, p^n)
/// as (n−1)-spaces of PG(2n−1, p).
///
/// Element 0 is `{(x, 0)}`, element 1 is `{(0, y)}`, and element `1 + enc(m)`
/// is `{(x, m·x)}` for nonzero `m`. Coordinates are the polynomial-basis digits
/// of the two GF(p^n) components, first component first.
pub fn desarguesian_spread(p: u32, n: u32) -> Result<Vec<Subspace>, GeomError> {
    let total = (p as u64).pow(2 * n);
    if total > 1 << 20 {
        return Err(GeomError::SpaceTooLarge(total));
    }
    spread_of_field(&Field::new(p, n)?)
}

/// The Desarguesian spread built from a given extension field GF(p^n).
pub fn spread_of_field(ext: &Field) -> Result<Vec<Subspace>, GeomError> {
    let prime = Field::new(ext.p(), 1)?;
    let n = ext.h();
    let len = 2 * n as usize;
    let basis: Vec<FieldElem> = (0..n).map(|i| ext.basis_element(i)).collect();
    let embed = |x: FieldElem, y: FieldElem| -> Vector {
        ext.digits(x)
            .into_iter()
            .chain(ext.digits(y))
            .map(FieldElem::from_encoding)
            .collect()
    };
    let mut out = Vec::with_capacity(ext.q() as usize + 1);
    let rows: Vec<Vector> = basis.iter().map(|&b| embed(b, FieldElem::ZERO)).collect();
    out.push(Subspace::from_vectors(&prime, len, &rows)?);
    let rows: Vec<Vector> = basis.iter().map(|&b| embed(FieldElem::ZERO, b)).collect();
    out.push(Subspace::from_vectors(&prime, len, &rows)?);
    for m in ext.nonzero_elements() {
        let rows: Vec<Vector> = basis.iter().map(|&b| embed(b, ext.mul(m, b))).collect();
        out.push(Subspace::from_vectors(&prime, len, &rows)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u32, h: u32) -> Arc<Field> {
        Arc::new(Field::new(p, h).unwrap())
    }

    #[test]
    fn point_counts() {
        assert_eq!(enumerate_points(3, &field(3, 1)).unwrap().len(), 40);
        assert_eq!(enumerate_points(2, &field(2, 2)).unwrap().len(), 21);
        assert_eq!(enumerate_points(1, &field(2, 1)).unwrap().len(), 3);
        assert!(matches!(
            enumerate_points(5, &field(2, 5)),
            Err(GeomError::SpaceTooLarge(_))
        ));
    }

    #[test]
    fn indexing_round_trips_and_is_lexicographic() {
        for (p, h, n) in [(2, 1, 3), (3, 1, 3), (2, 2, 2), (5, 1, 2)] {
            let f = field(p, h);
            let space = ProjSpace::new(f.clone(), n);
            let pts = enumerate_points(n, &f).unwrap();
            for w in pts.windows(2) {
                assert!(w[0].coords < w[1].coords);
            }
            for pt in &pts {
                assert_eq!(space.index_of(&pt.coords).unwrap(), pt.index);
                assert_eq!(normalize(&f, &pt.coords).unwrap(), pt.coords);
                let scaled: Vector = pt.coords.iter().map(|&c| f.mul(c, f.from_int(-1))).collect();
                assert_eq!(space.index_of(&scaled).unwrap(), pt.index);
            }
        }
    }

    #[test]
    fn span_and_meet() {
        let f = field(3, 1);
        let e = |i: usize| {
            let mut v = vec![FieldElem::ZERO; 3];
            v[i] = FieldElem::ONE;
            v
        };
        let pt = span(&f, &[e(0)]).unwrap();
        assert_eq!(pt.projdim(), 0);
        let l1 = span(&f, &[e(0), e(1)]).unwrap();
        let l2 = span(&f, &[e(1), e(2)]).unwrap();
        let m = l1.meet(&f, &l2).unwrap();
        assert_eq!(m.projdim(), 0);
        assert!(m.contains(&f, &e(1)));
        assert_eq!(l1.join(&f, &l2).unwrap().dim(), 3);
        assert!(matches!(
            l1.meet(&f, &Subspace::zero(4)),
            Err(GeomError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn isotropy_examples() {
        let f = field(3, 1);
        let form = SymplecticForm::new(f.clone());
        let v = |a: [i64; 4]| a.iter().map(|&x| f.from_int(x)).collect::<Vector>();
        let l = span(&f, &[v([1, 0, 0, 0]), v([0, 0, 1, 0])]).unwrap();
        assert!(form.is_isotropic_line(&l));
        let l = span(&f, &[v([1, 0, 0, 0]), v([0, 1, 0, 0])]).unwrap();
        assert!(!form.is_isotropic_line(&l));
        assert_eq!(form.eval(&v([1, 0, 0, 0]), &v([0, 1, 0, 0])), FieldElem::ONE);
    }

    #[test]
    fn isotropic_line_counts_and_point_degrees() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let f = Arc::new(Field::of_order(q).unwrap());
            let form = SymplecticForm::new(f.clone());
            let space = ProjSpace::new(f.clone(), 3);
            let mut deg = vec![0u32; space.point_count() as usize];
            let mut lines = 0u64;
            for_each_subspace(&f, 4, 2, |s| {
                if form.is_isotropic_line(s) {
                    lines += 1;
                    for p in s.points(&f) {
                        deg[space.index_of(&p).unwrap()] += 1;
                    }
                }
                true
            });
            let q = q as u64;
            assert_eq!(lines, (q + 1) * (q * q + 1));
            assert!(deg.iter().all(|&d| d as u64 == q + 1));
        }
    }

    #[test]
    fn subspace_enumeration_counts() {
        let f = field(2, 1);
        assert_eq!(subspaces(&f, 4, 2, 1000).unwrap().len(), 35);
        assert_eq!(subspaces(&f, 6, 3, 10_000).unwrap().len(), 1395);
        let f3 = field(3, 1);
        assert_eq!(subspaces(&f3, 4, 2, 1000).unwrap().len(), 130);
        assert_eq!(gaussian_binomial(4, 2, 3), 130);
        assert_eq!(subspaces(&f, 3, 0, 10).unwrap().len(), 1);
    }

    fn check_spread(p: u32, n: u32) {
        let spread = desarguesian_spread(p, n).unwrap();
        let f = Field::new(p, 1).unwrap();
        assert_eq!(spread.len() as u32, p.pow(n) + 1);
        let mut seen = std::collections::HashSet::new();
        for s in &spread {
            assert_eq!(s.dim() as u32, n);
            for pt in s.points(&f) {
                assert!(seen.insert(pt), "spread elements overlap");
            }
        }
        let total = (p.pow(2 * n) - 1) / (p - 1);
        assert_eq!(seen.len() as u32, total);
        for i in 0..spread.len() {
            for j in i + 1..spread.len() {
                assert_eq!(spread[i].meet(&f, &spread[j]).unwrap().projdim(), -1);
            }
        }
    }

    #[test]
    fn desarguesian_spreads_partition() {
        check_spread(2, 2);
        check_spread(3, 2);
        check_spread(2, 3);
        check_spread(5, 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn normalize_is_idempotent(v in prop::collection::vec(0u32..9, 4)) {
                let f = Field::new(3, 2).unwrap();
                let v: Vector = v.into_iter().map(FieldElem::from_encoding).collect();
                if let Some(n) = normalize(&f, &v) {
                    prop_assert_eq!(normalize(&f, &n).unwrap(), n);
                }
            }

            #[test]
            fn dimension_formula(a in prop::collection::vec(prop::collection::vec(0u32..5, 5), 1..4),
                                 b in prop::collection::vec(prop::collection::vec(0u32..5, 5), 1..4)) {
                let f = Field::new(5, 1).unwrap();
                let conv = |rows: Vec<Vec<u32>>| rows.into_iter()
                    .map(|r| r.into_iter().map(FieldElem::from_encoding).collect::<Vector>())
                    .collect::<Vec<_>>();
                let sa = Subspace::from_vectors(&f, 5, &conv(a)).unwrap();
                let sb = Subspace::from_vectors(&f, 5, &conv(b)).unwrap();
                let join = sa.join(&f, &sb).unwrap();
                let meet = sa.meet(&f, &sb).unwrap();
                prop_assert_eq!(sa.dim() + sb.dim(), join.dim() + meet.dim());
                for v in meet.basis() {
                    prop_assert!(sa.contains(&f, v) && sb.contains(&f, v));
                }
            }
        }
    }
}
