//! The symplectic quadrangle W(q) on PG(3, q), the symmetries about
//! x = (1,0,0,0), and the matrix family stabilizing x.
//!
//! The form is `B(u, v) = u₀v₁ − u₁v₀ + u₂v₃ − u₃v₂`, so `x^⊥` is the plane
//! `X₁ = 0`. Matrices act on column vectors.

use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Field, FieldElem, GfError};
use crate::incidence::{GQCertificate, IncidenceError, IncidenceStructure, Label};
use crate::matgroup::{generate, FinGroup, GroupError, PointSet, ProjMat};
use crate::projgeom::{for_each_subspace, normalize, GeomError, ProjSpace, Subspace, SymplecticForm, Vector};

/// Largest q for which W(q) is constructed.
pub const MAX_CONSTRUCT_Q: u32 = 32;
/// Largest q for which W(q) is certified as a quadrangle on construction.
pub const MAX_VERIFY_Q: u32 = 9;
/// Largest q for which the stabilizer family is iterated exhaustively.
pub const MAX_FAMILY_Q: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplecticError {
    #[error("q = {0} is beyond the supported range")]
    SpaceTooLarge(u32),
    #[error("matrix does not have the shape of the stabilizer of (1,0,0,0)")]
    WrongShape,
    #[error("point {0} of the derivative does not carry its original index")]
    UnlabelledPoint(usize),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// W(q) as an incidence structure on all points of PG(3, q).
#[derive(Debug, Clone)]
pub struct WqModel {
    field: Arc<Field>,
    space: ProjSpace,
    structure: IncidenceStructure,
    lines: Vec<Subspace>,
    certificate: Option<GQCertificate>,
    x: usize,
    form: SymplecticForm,
}

/// Builds W(q). The quadrangle axioms are certified when `q ≤ 9`.
pub fn build_wq(field: &Arc<Field>) -> Result<WqModel, SymplecticError> {
    let q = field.q();
    if q > MAX_CONSTRUCT_Q {
        return Err(SymplecticError::SpaceTooLarge(q));
    }
    let mut model = build_wq_unverified(field)?;
    if q <= MAX_VERIFY_Q {
        model.certificate = Some(model.structure.verify_gq()?);
    }
    Ok(model)
}

fn build_wq_unverified(field: &Arc<Field>) -> Result<WqModel, SymplecticError> {
    let f = field.as_ref();
    let space = ProjSpace::new(field.clone(), 3);
    let form = SymplecticForm::new(field.clone());
    let mut lines = Vec::new();
    let mut line_points = Vec::new();
    for_each_subspace(f, 4, 2, |s| {
        if form.is_isotropic_line(s) {
            line_points.push(
                s.points(f)
                    .iter()
                    .map(|p| space.index_of(p).expect("length 4"))
                    .collect::<Vec<_>>(),
            );
            lines.push(s.clone());
        }
        true
    });
    let npoints = space.point_count() as usize;
    let point_labels = (0..npoints)
        .map(|i| Label::Coords(space.point_at(i).iter().map(|c| c.encoding()).collect()))
        .collect();
    let line_labels = (0..lines.len()).map(Label::Index).collect();
    let structure = IncidenceStructure::with_labels(npoints, line_points, point_labels, line_labels)?;
    let x = space.index_of(&base_point())?;
    Ok(WqModel {
        field: field.clone(),
        space,
        structure,
        lines,
        certificate: None,
        x,
        form,
    })
}

/// The point (1, 0, 0, 0).
pub fn base_point() -> Vector {
    vec![FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO, FieldElem::ZERO]
}

impl WqModel {
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn structure(&self) -> &IncidenceStructure {
        &self.structure
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    pub fn form(&self) -> &SymplecticForm {
        &self.form
    }

    /// Index of x = (1,0,0,0).
    pub fn x(&self) -> usize {
        self.x
    }

    /// Certificate, computing it if construction skipped verification.
    pub fn certificate(&self) -> Result<GQCertificate, SymplecticError> {
        match &self.certificate {
            Some(c) => Ok(c.clone()),
            None => Ok(self.structure.verify_gq()?),
        }
    }

    /// The Payne derivative at x.
    pub fn payne_derive(&self) -> Result<IncidenceStructure, SymplecticError> {
        let cert = self.certificate()?;
        Ok(self.structure.payne_derive(&cert, self.x)?)
    }

    /// Coordinates of the points of a Payne derivative of this model, in the
    /// derivative's point order.
    pub fn derived_coordinates(&self, derived: &IncidenceStructure) -> Result<PointSet, SymplecticError> {
        let pts = (0..derived.npoints())
            .map(|i| match derived.point_label(i) {
                Label::Original(p) => Ok(self.space.point_at(*p)),
                _ => Err(SymplecticError::UnlabelledPoint(i)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PointSet::new(pts))
    }
}

/// The q³ points not collinear with x, as normalized vectors, in the order of
/// `(z₀, z₂, z₃)` encodings for the representative `(z₀, 1, z₂, z₃)`.
/// Point 0 is (0, 1, 0, 0).
pub fn derived_points(field: &Field) -> PointSet {
    let mut pts = Vec::with_capacity((field.q() as usize).pow(3));
    for z0 in field.elements() {
        for z2 in field.elements() {
            for z3 in field.elements() {
                pts.push(normalize(field, &[z0, FieldElem::ONE, z2, z3]).expect("nonzero"));
            }
        }
    }
    PointSet::new(pts)
}

/// `I + a·E₀₁`.
pub fn symmetry(field: &Field, a: FieldElem) -> ProjMat {
    let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
    ProjMat::new(field, 4, vec![o, a, z, z, z, o, z, z, z, z, o, z, z, z, z, o]).expect("unipotent")
}

/// The group 𝕊 of symmetries about x, of order q.
pub fn symmetry_group(field: &Arc<Field>) -> FinGroup {
    let gens: Vec<ProjMat> = (0..field.h())
        .map(|i| symmetry(field, field.basis_element(i)))
        .collect();
    generate(field, 4, &gens, field.q() as usize).expect("order q")
}

/// Parameters of a matrix fixing x and its polar plane:
/// `[[1,a,b,c],[0,d,0,0],[0,e,f,g],[0,h,i,j]]` with similitude factor `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StabilizerShape {
    pub a: FieldElem,
    pub b: FieldElem,
    pub c: FieldElem,
    pub d: FieldElem,
    pub e: FieldElem,
    pub f: FieldElem,
    pub g: FieldElem,
    pub h: FieldElem,
    pub i: FieldElem,
    pub j: FieldElem,
    pub k: FieldElem,
}

impl StabilizerShape {
    pub fn matrix(&self, field: &Field) -> ProjMat {
        let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
        let s = self;
        ProjMat::new(
            field,
            4,
            vec![o, s.a, s.b, s.c, z, s.d, z, z, z, s.e, s.f, s.g, z, s.h, s.i, s.j],
        )
        .expect("family members are nonsingular")
    }

    /// Reads the parameters back from a matrix of the right shape.
    pub fn from_matrix(field: &Field, m: &ProjMat) -> Result<StabilizerShape, SymplecticError> {
        let z = FieldElem::ZERO;
        if m.dim() != 4 {
            return Err(SymplecticError::WrongShape);
        }
        let col0 = [m.entry(0, 0), m.entry(1, 0), m.entry(2, 0), m.entry(3, 0)];
        let row1 = [m.entry(1, 0), m.entry(1, 2), m.entry(1, 3)];
        if col0 != [FieldElem::ONE, z, z, z] || row1 != [z, z, z] {
            return Err(SymplecticError::WrongShape);
        }
        let e = |i, j| m.entry(i, j);
        let d = e(1, 1);
        let shape = StabilizerShape {
            a: e(0, 1),
            b: e(0, 2),
            c: e(0, 3),
            d,
            e: e(2, 1),
            f: e(2, 2),
            g: e(2, 3),
            h: e(3, 1),
            i: e(3, 2),
            j: e(3, 3),
            k: d,
        };
        if !is_similitude(field, m, d) {
            return Err(SymplecticError::WrongShape);
        }
        Ok(shape)
    }
}

/// `B(u, v) = u₀v₁ − u₁v₀ + u₂v₃ − u₃v₂`.
pub fn form_value(field: &Field, u: &[FieldElem], v: &[FieldElem]) -> FieldElem {
    let t1 = field.sub(field.mul(u[0], v[1]), field.mul(u[1], v[0]));
    let t2 = field.sub(field.mul(u[2], v[3]), field.mul(u[3], v[2]));
    field.add(t1, t2)
}

/// Whether `MᵀPM = kP`, i.e. `B(Mu, Mv) = k·B(u, v)` on basis vectors.
pub fn is_similitude(field: &Field, m: &ProjMat, k: FieldElem) -> bool {
    let cols: Vec<Vector> = (0..4).map(|j| (0..4).map(|i| m.entry(i, j)).collect()).collect();
    let unit = |i: usize| -> Vector {
        let mut v = vec![FieldElem::ZERO; 4];
        v[i] = FieldElem::ONE;
        v
    };
    (0..4).all(|r| {
        (0..4).all(|c| form_value(field, &cols[r], &cols[c]) == field.mul(k, form_value(field, &unit(r), &unit(c))))
    })
}

/// Every matrix of the stabilizer shape with `AᵀPA = kP`, `k ≠ 0`, that
/// satisfies `keep`. The free parameters are `a, e, h` and the invertible block
/// `[[f,g],[i,j]]`; then `d = k = fj − ig`, `b = (ei − hf)/d`, `c = (ej − hg)/d`.
pub fn stabilizer_family<P>(field: &Field, keep: P) -> Result<Vec<StabilizerShape>, SymplecticError>
where
    P: Fn(&StabilizerShape) -> bool,
{
    if field.q() > MAX_FAMILY_Q {
        return Err(SymplecticError::SpaceTooLarge(field.q()));
    }
    let els: Vec<FieldElem> = field.elements().collect();
    let mut out = Vec::new();
    for &f in &els {
        for &g in &els {
            for &i in &els {
                for &j in &els {
                    let d = field.sub(field.mul(f, j), field.mul(i, g));
                    if d.is_zero() {
                        continue;
                    }
                    let dinv = field.inv(d)?;
                    for &a in &els {
                        for &e in &els {
                            for &h in &els {
                                let b = field.mul(field.sub(field.mul(e, i), field.mul(h, f)), dinv);
                                let c = field.mul(field.sub(field.mul(e, j), field.mul(h, g)), dinv);
                                let s = StabilizerShape {
                                    a,
                                    b,
                                    c,
                                    d,
                                    e,
                                    f,
                                    g,
                                    h,
                                    i,
                                    j,
                                    k: d,
                                };
                                if keep(&s) {
                                    out.push(s);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Whether `A` commutes with every symmetry about x.
pub fn centralizer_condition(field: &Field, m: &ProjMat) -> Result<bool, SymplecticError> {
    StabilizerShape::from_matrix(field, m)?;
    Ok((0..field.h()).all(|i| {
        let s = symmetry(field, field.basis_element(i));
        m.mul(field, &s) == s.mul(field, m)
    }))
}

/// Whether 𝕊 is contained in `t`.
pub fn check_singer_contains_s(field: &Field, t: &FinGroup) -> bool {
    (0..field.h()).all(|i| t.contains(&symmetry(field, field.basis_element(i))))
}

/// Whether every element of `t` commutes with every symmetry about x.
pub fn centralized_by_symmetries(field: &Field, t: &FinGroup) -> bool {
    let syms: Vec<ProjMat> = (0..field.h())
        .map(|i| symmetry(field, field.basis_element(i)))
        .collect();
    t.generators()
        .iter()
        .all(|g| syms.iter().all(|s| g.mul(field, s) == s.mul(field, g)))
}

/// Whether the projective matrix lies in PSL₄(q): some scalar multiple has
/// determinant 1, i.e. the determinant is a fourth power.
pub fn in_psl4(field: &Field, m: &ProjMat) -> bool {
    let det = m.det(field);
    field.nonzero_elements().any(|l| field.pow_u(l, 4) == det)
}

/// Orders in the comparison between the d = 1 family and the stabilizer of x
/// inside PSL₄(q).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct IndexReport {
    pub q: u32,
    /// Linear stabilizer of x.
    pub stabilizer_order: usize,
    /// Its intersection with PSL₄(q).
    pub psl_part_order: usize,
    /// Members with d = 1.
    pub d_one_order: usize,
    /// Whether every d = 1 member lies in PSL₄(q).
    pub d_one_in_psl: bool,
}

impl IndexReport {
    /// Index of the d = 1 family in the PSL part.
    pub fn index(&self) -> usize {
        self.psl_part_order / self.d_one_order
    }
}

pub fn index_report(field: &Field) -> Result<IndexReport, SymplecticError> {
    let all = stabilizer_family(field, |_| true)?;
    let mut psl = 0;
    let mut d_one = 0;
    let mut d_one_in_psl = true;
    for s in &all {
        let m = s.matrix(field);
        let inside = in_psl4(field, &m);
        if inside {
            psl += 1;
        }
        if s.d == FieldElem::ONE {
            d_one += 1;
            d_one_in_psl &= inside;
        }
    }
    Ok(IndexReport {
        q: field.q(),
        stabilizer_order: all.len(),
        psl_part_order: psl,
        d_one_order: d_one,
        d_one_in_psl,
    })
}
