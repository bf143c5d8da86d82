use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::spread::{commuting_vector, CommutingVector};
use super::SingerError;
use crate::gf::{Field, FieldElem};
use crate::matgroup::{act_on_points, generate, FinGroup, GroupInvariants, PointSet, ProjMat, SharpCertificate};
use crate::projgeom::Vector;
use crate::symplectic::{derived_points, symmetry};

/// Largest q for which Heisenberg models are built.
pub const MAX_HEISENBERG_Q: u32 = 64;

/// Largest number of B(ℓ) candidates `enumerate_bl` will list.
pub const MAX_CANDIDATES: u64 = 1 << 20;

/// Number of lines of Π(x) through the point at infinity, i.e. q + 1.
pub fn line_count(field: &Field) -> usize {
    field.q() as usize + 1
}

/// Direction `(u, w)` of line `k` of Π(x): line 0 is (1, 0) and line `k ≥ 1`
/// is `(m, 1)` with `m` the field element encoded by `k − 1`.
///
/// As a line of W(q) through x this is the span of x and (0, 0, u, w).
pub fn line_direction(field: &Field, k: usize) -> Result<(FieldElem, FieldElem), SingerError> {
    if k >= line_count(field) {
        return Err(SingerError::BadLine(k));
    }
    if k == 0 {
        Ok((FieldElem::ONE, FieldElem::ZERO))
    } else {
        Ok((field.elem(k as u32 - 1)?, FieldElem::ONE))
    }
}

/// Matrices carrying line 0 to line `k`: the 3×3 affine map of Π(x) and the
/// 4×4 element of the d = 1 stabilizer family inducing it.
pub fn line_conjugator(field: &Field, k: usize) -> Result<(ProjMat, ProjMat), SingerError> {
    let (u, w) = line_direction(field, k)?;
    let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
    // First column sends (1, 0) to (u, w); the second is any complement.
    let (c, d) = if w.is_zero() { (z, o) } else { (field.neg(o), z) };
    let m3 = ProjMat::new(field, 3, vec![u, c, z, w, d, z, z, z, o])?;
    let m4 = ProjMat::new(field, 4, vec![o, z, z, z, z, o, z, z, z, z, u, c, z, z, w, d])?;
    Ok((m3, m4))
}

/// `[[1, α, s], [0, 1, t], [0, 0, 1]]`, acting on `(u, w, 1)` as
/// `(u + αw + s, w + t)`.
pub fn unitriangular(field: &Field, alpha: FieldElem, s: FieldElem, t: FieldElem) -> ProjMat {
    let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
    ProjMat::new(field, 3, vec![o, alpha, s, z, o, t, z, z, o]).expect("unipotent")
}

/// The element of the d = 1 stabilizer family inducing
/// `unitriangular(α, s, t)` on Π(x), composed with the symmetry `I + a·E₀₁`.
pub fn lift_matrix(field: &Field, a: FieldElem, alpha: FieldElem, s: FieldElem, t: FieldElem) -> ProjMat {
    let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
    let c = field.sub(s, field.mul(t, alpha));
    ProjMat::new(
        field,
        4,
        vec![o, a, field.neg(t), c, z, o, z, z, z, s, o, alpha, z, t, z, o],
    )
    .expect("unipotent")
}

/// The affine map of Π(x) induced by a matrix of the stabilizer family
/// `[[1,a,b,c],[0,d,0,0],[0,e,f,g],[0,h,i,j]]`.
pub fn quotient_matrix(field: &Field, m: &ProjMat) -> Result<ProjMat, SingerError> {
    if m.dim() != 4 {
        return Err(SingerError::Group(crate::matgroup::GroupError::DimensionMismatch));
    }
    let e = |i, j| m.entry(i, j);
    let z = FieldElem::ZERO;
    Ok(ProjMat::new(
        field,
        3,
        vec![e(2, 2), e(2, 3), e(2, 1), e(3, 2), e(3, 3), e(3, 1), z, z, e(1, 1)],
    )?)
}

/// The q² affine points `(u, w, 1)` of Π(x), normalized, ordered by `(u, w)`.
pub fn pi_points(field: &Field) -> PointSet {
    let mut pts = Vec::with_capacity((field.q() as usize).pow(2));
    for u in field.elements() {
        for w in field.elements() {
            let v: Vector = vec![u, w, FieldElem::ONE];
            pts.push(crate::projgeom::normalize(field, &v).expect("nonzero"));
        }
    }
    PointSet::new(pts)
}

fn check_q(field: &Field) -> Result<(), SingerError> {
    if field.q() > MAX_HEISENBERG_Q {
        return Err(SingerError::GroupTooLarge(field.q()));
    }
    Ok(())
}

fn basis(field: &Field) -> Vec<FieldElem> {
    (0..field.h()).map(|i| field.basis_element(i)).collect()
}

/// The Heisenberg group H(ℓ) of 3×3 unitriangular matrices acting on Π(x),
/// with the translation groups A of the point at infinity and B of the line ℓ.
#[derive(Debug, Clone)]
pub struct HeisenbergModel {
    field: Arc<Field>,
    line: usize,
    h: FinGroup,
    a: FinGroup,
    b: FinGroup,
    z: FinGroup,
}

/// Builds H(ℓ) for line `line` of Π(x).
pub fn heisenberg(field: &Arc<Field>, line: usize) -> Result<HeisenbergModel, SingerError> {
    check_q(field)?;
    let f = field.as_ref();
    let (c3, _) = line_conjugator(f, line)?;
    let back = c3.inverse(f);
    let tr = |m: ProjMat| m.conjugate_by(f, &back);
    let o = FieldElem::ZERO;
    let bs = basis(f);
    let z_gens: Vec<ProjMat> = bs.iter().map(|&x| tr(unitriangular(f, o, x, o))).collect();
    let mut a_gens = z_gens.clone();
    a_gens.extend(bs.iter().map(|&x| tr(unitriangular(f, o, o, x))));
    let mut b_gens = z_gens.clone();
    b_gens.extend(bs.iter().map(|&x| tr(unitriangular(f, x, o, o))));
    let q = f.q() as usize;
    let z = generate(field, 3, &z_gens, q)?;
    let a = generate(field, 3, &a_gens, q * q)?;
    let b = generate(field, 3, &b_gens, q * q)?;
    let mut h_gens = a_gens;
    h_gens.extend(b_gens.into_iter().skip(bs.len()));
    let h = generate(field, 3, &h_gens, q * q * q)?;
    Ok(HeisenbergModel {
        field: field.clone(),
        line,
        h,
        a,
        b,
        z,
    })
}

impl HeisenbergModel {
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn line(&self) -> usize {
        self.line
    }

    pub fn h(&self) -> &FinGroup {
        &self.h
    }

    /// Translations of Π(x) with center the point at infinity, order q².
    pub fn a(&self) -> &FinGroup {
        &self.a
    }

    /// Translations of Π(x) with axis ℓ, order q².
    pub fn b(&self) -> &FinGroup {
        &self.b
    }

    /// The center A ∩ B, order q.
    pub fn z(&self) -> &FinGroup {
        &self.z
    }

    /// Checks `[H, H] = Z = Z(H) = A ∩ B` and the orders of A, B and H.
    pub fn check_invariants(&self) -> bool {
        let q = self.field.q() as usize;
        self.h.order() == q * q * q
            && self.a.order() == q * q
            && self.b.order() == q * q
            && self.a.is_abelian()
            && self.b.is_abelian()
            && self.a.intersection(&self.b) == self.z
            && self.h.center() == self.z
            && self.h.derived_subgroup() == self.z
    }

    /// H(ℓ) realized in the d = 1 stabilizer family: lifts of H together with
    /// the symmetries about x, order q⁴.
    pub fn embedded(&self) -> Result<FinGroup, SingerError> {
        let f = self.field.as_ref();
        let q = f.q() as usize;
        if q > 32 {
            return Err(SingerError::GroupTooLarge(f.q()));
        }
        let (c3, c4) = line_conjugator(f, self.line)?;
        let mut gens: Vec<ProjMat> = basis(f).into_iter().map(|x| symmetry(f, x)).collect();
        let c4i = c4.inverse(f);
        for g in self.h.generators() {
            let base = g.conjugate_by(f, &c3);
            let (alpha, s, t) = (base.entry(0, 1), base.entry(0, 2), base.entry(1, 2));
            gens.push(lift_matrix(f, FieldElem::ZERO, alpha, s, t).conjugate_by(f, &c4i));
        }
        Ok(generate(&self.field, 4, &gens, q.pow(4))?)
    }
}

/// An element of B(ℓ): the graph `{(t, φ(t))}` of a GF(p)-linear map
/// φ: A/Z → B/Z, recorded as an h×h matrix over GF(p) acting on digit vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BLCandidate {
    pub line: usize,
    pub matrix: Vec<Vec<u32>>,
    /// Row-major base-p reading of `matrix`, first entry most significant.
    pub index: u64,
}

impl BLCandidate {
    pub fn from_index(field: &Field, line: usize, index: u64) -> Result<BLCandidate, SingerError> {
        let (p, h) = (field.p() as u64, field.h() as usize);
        let total = p
            .checked_pow((h * h) as u32)
            .ok_or(SingerError::TooManyCandidates(u64::MAX))?;
        if index >= total || line >= line_count(field) {
            return Err(SingerError::BadCandidate);
        }
        let mut digits = vec![0u32; h * h];
        let mut rest = index;
        for d in digits.iter_mut().rev() {
            *d = (rest % p) as u32;
            rest /= p;
        }
        let matrix = digits.chunks(h).map(|r| r.to_vec()).collect();
        Ok(BLCandidate { line, matrix, index })
    }

    pub fn from_matrix(field: &Field, line: usize, matrix: Vec<Vec<u32>>) -> Result<BLCandidate, SingerError> {
        let (p, h) = (field.p(), field.h() as usize);
        if matrix.len() != h || matrix.iter().any(|r| r.len() != h || r.iter().any(|&x| x >= p)) {
            return Err(SingerError::BadCandidate);
        }
        if line >= line_count(field) {
            return Err(SingerError::BadLine(line));
        }
        let index = matrix.iter().flatten().fold(0u64, |acc, &d| acc * p as u64 + d as u64);
        Ok(BLCandidate { line, matrix, index })
    }

    /// φ(t) for t ∈ F_q.
    pub fn apply(&self, field: &Field, t: FieldElem) -> FieldElem {
        let p = field.p();
        let td = field.digits(t);
        let out: Vec<u32> = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(&td).map(|(&a, &b)| a * b).sum::<u32>() % p)
            .collect();
        field.from_digits(&out)
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }

    /// Generators of T = preimage of the graph of φ in H(ℓ), as 3×3 matrices.
    pub fn t_generators(&self, field: &Field) -> Result<Vec<ProjMat>, SingerError> {
        let (c3, _) = line_conjugator(field, self.line)?;
        let back = c3.inverse(field);
        let o = FieldElem::ZERO;
        let bs = basis(field);
        let mut gens: Vec<ProjMat> = bs.iter().map(|&x| unitriangular(field, o, x, o)).collect();
        gens.extend(bs.iter().map(|&x| unitriangular(field, self.apply(field, x), o, x)));
        Ok(gens.into_iter().map(|g| g.conjugate_by(field, &back)).collect())
    }

    /// Generators of S = ⟨lifts of T, 𝕊⟩ in the d = 1 stabilizer family.
    pub fn s_generators(&self, field: &Field) -> Result<Vec<ProjMat>, SingerError> {
        let (_, c4) = line_conjugator(field, self.line)?;
        let back = c4.inverse(field);
        let o = FieldElem::ZERO;
        let bs = basis(field);
        let mut gens: Vec<ProjMat> = bs.iter().map(|&x| symmetry(field, x)).collect();
        gens.extend(
            bs.iter()
                .map(|&x| lift_matrix(field, o, o, x, o).conjugate_by(field, &back)),
        );
        gens.extend(
            bs.iter()
                .map(|&x| lift_matrix(field, o, self.apply(field, x), o, x).conjugate_by(field, &back)),
        );
        Ok(gens)
    }
}

/// All p^{h²} candidates of B(ℓ) in index order.
pub fn enumerate_bl(field: &Field, line: usize) -> Result<Vec<BLCandidate>, SingerError> {
    check_q(field)?;
    if line >= line_count(field) {
        return Err(SingerError::BadLine(line));
    }
    let (p, h) = (field.p() as u64, field.h());
    let total = p.checked_pow(h * h).unwrap_or(u64::MAX);
    if total > MAX_CANDIDATES {
        return Err(SingerError::TooManyCandidates(total));
    }
    (0..total).map(|i| BLCandidate::from_index(field, line, i)).collect()
}

/// S for a candidate, without verification.
pub fn lift_group(field: &Arc<Field>, cand: &BLCandidate) -> Result<FinGroup, SingerError> {
    let q = field.q() as usize;
    let s = generate(field, 4, &cand.s_generators(field)?, q * q * q)?;
    if s.order() != q * q * q {
        return Err(SingerError::LiftWrongOrder {
            line: cand.line,
            index: cand.index,
            order: s.order(),
        });
    }
    Ok(s)
}

/// Element sets of the lifts of every candidate on `line`, in index order.
pub fn lift_all(field: &Arc<Field>, line: usize) -> Result<Vec<FinGroup>, SingerError> {
    let cands = enumerate_bl(field, line)?;
    cands.par_iter().map(|c| lift_group(field, c)).collect()
}

/// A lifted Singer group of 𝒫(q) with its Heisenberg data.
#[derive(Debug, Clone)]
pub struct SingerGroupRecord {
    pub candidate: BLCandidate,
    pub t_group: FinGroup,
    pub s_group: FinGroup,
    pub commuting: CommutingVector,
    pub abelian_quotient: bool,
    pub certificate: SharpCertificate,
}

/// Flat summary of a record for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingerSummary {
    pub ell: usize,
    pub matrix_coord: Vec<Vec<u32>>,
    pub index: u64,
    pub order: usize,
    pub abelian_quotient: bool,
    pub center_order: usize,
    pub derived_order: usize,
    pub exponent: u64,
    pub class: Option<usize>,
    pub commuting_dims: Vec<usize>,
    pub sharply_transitive: bool,
}

impl SingerGroupRecord {
    pub fn line(&self) -> usize {
        self.candidate.line
    }

    pub fn invariants(&self) -> Result<GroupInvariants, SingerError> {
        Ok(self.s_group.invariants()?)
    }

    pub fn summary(&self) -> SingerSummary {
        SingerSummary {
            ell: self.candidate.line,
            matrix_coord: self.candidate.matrix.clone(),
            index: self.candidate.index,
            order: self.s_group.order(),
            abelian_quotient: self.abelian_quotient,
            center_order: self.s_group.center().order(),
            derived_order: self.s_group.derived_subgroup().order(),
            exponent: self.s_group.exponent(),
            class: self.s_group.nilpotency_class(),
            commuting_dims: self.commuting.dims.clone(),
            sharply_transitive: true,
        }
    }
}

/// Lifts a candidate to a Singer group of 𝒫(q) and certifies that it acts
/// sharply transitively on the q³ points.
pub fn lift_eta(field: &Arc<Field>, cand: &BLCandidate) -> Result<SingerGroupRecord, SingerError> {
    check_q(field)?;
    let f = field.as_ref();
    let q = f.q() as usize;
    let t_group = generate(field, 3, &cand.t_generators(f)?, q * q)?;
    let s_group = lift_group(field, cand)?;
    let action = act_on_points(&s_group, &derived_points(f))?;
    let certificate = action
        .sharply_transitive()
        .ok_or(SingerError::LiftNotSharplyTransitive {
            line: cand.line,
            index: cand.index,
        })?;
    let commuting = commuting_vector(field, &t_group, cand.line)?;
    let abelian_quotient = t_group.is_abelian();
    Ok(SingerGroupRecord {
        candidate: cand.clone(),
        t_group,
        s_group,
        commuting,
        abelian_quotient,
        certificate,
    })
}
