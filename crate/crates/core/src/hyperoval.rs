//! Hyperovals of PG(2, 2^h), the quadrangles T₂*(ℋ) built on them, and
//! Singer groups of T₂*(ℋ): the translation-hyperoval groups and the
//! construction from an involutory collineation swapping two coordinates.
//!
//! PG(3, q) has homogeneous coordinates (X, Y, Z, U); the plane at infinity is
//! U = 0 and carries ℋ. Affine points are (X, Y, Z, 1).

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{frac_exponent, Field, FieldElem, GfError};
use crate::incidence::{GQCertificate, IncidenceError, IncidenceStructure};
use crate::matgroup::{act_on_points, generate, FinGroup, GroupError, PointSet, ProjMat, SharpCertificate};
use crate::projgeom::{annihilator, normalize, GeomError, Vector};

/// Largest q for which T₂*(ℋ) is certified as a quadrangle; the anti-flag
/// check is quadratic in q³.
pub const MAX_CERTIFY_Q: u32 = 16;

/// Largest q for the full stabilizer scan.
pub const MAX_SCAN_Q: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperovalError {
    #[error("q = {0} is not a power of 2")]
    OddCharacteristic(u32),
    #[error("gcd(k, h) = gcd({k}, {h}) is not 1")]
    GcdViolation { k: u32, h: u32 },
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("expected {expected} points, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("points {0:?} are collinear")]
    Collinear([usize; 3]),
    #[error("collineation maps hyperoval point {point:?} outside the hyperoval")]
    GammaNotStabilizing { point: Vec<u32> },
    #[error("collineation is not an involution")]
    NotInvolution,
    #[error("translation subgroup D is not admissible: {0}")]
    DViolation(&'static str),
    #[error("q = {0} is too large for this search")]
    SearchTooLarge(u32),
    #[error("constructed group has order {got}, expected {expected}")]
    WrongOrder { expected: usize, got: usize },
    #[error("constructed group is not sharply transitive on the affine points")]
    NotSharplyTransitive,
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HyperovalKind {
    Regular,
    Translation(u32),
    Payne,
    Custom,
}

/// A set of q + 2 points of PG(2, q), no three collinear.
#[derive(Debug, Clone)]
pub struct Hyperoval {
    field: Arc<Field>,
    kind: HyperovalKind,
    points: Vec<Vector>,
    lookup: HashSet<Vector>,
}

fn det3(f: &Field, a: &[FieldElem], b: &[FieldElem], c: &[FieldElem]) -> FieldElem {
    let m = |x: FieldElem, y: FieldElem| f.mul(x, y);
    let t1 = m(a[0], f.sub(m(b[1], c[2]), m(b[2], c[1])));
    let t2 = m(a[1], f.sub(m(b[0], c[2]), m(b[2], c[0])));
    let t3 = m(a[2], f.sub(m(b[0], c[1]), m(b[1], c[0])));
    f.add(f.sub(t1, t2), t3)
}

/// Checks that no three of the points are collinear; returns the first
/// collinear triple otherwise.
pub fn check_arc(f: &Field, points: &[Vector]) -> Result<(), [usize; 3]> {
    let n = points.len();
    let bad = (0..n).into_par_iter().find_map_first(|i| {
        for j in i + 1..n {
            for k in j + 1..n {
                if det3(f, &points[i], &points[j], &points[k]).is_zero() {
                    return Some([i, j, k]);
                }
            }
        }
        None
    });
    bad.map_or(Ok(()), Err)
}

fn even_field(field: &Field) -> Result<(), HyperovalError> {
    if field.p() != 2 {
        return Err(HyperovalError::OddCharacteristic(field.q()));
    }
    Ok(())
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Hyperoval {
    /// Validates and wraps a point set.
    pub fn new(field: &Arc<Field>, kind: HyperovalKind, points: Vec<Vector>) -> Result<Hyperoval, HyperovalError> {
        even_field(field)?;
        let expected = field.q() as usize + 2;
        let points: Vec<Vector> = points
            .iter()
            .map(|p| {
                if p.len() != 3 {
                    return Err(GeomError::DimensionMismatch {
                        expected: 3,
                        got: p.len(),
                    });
                }
                normalize(field, p).ok_or(GeomError::ZeroVector)
            })
            .collect::<Result<_, _>>()?;
        let lookup: HashSet<Vector> = points.iter().cloned().collect();
        if points.len() != expected || lookup.len() != expected {
            return Err(HyperovalError::WrongSize {
                expected,
                got: lookup.len(),
            });
        }
        check_arc(field, &points).map_err(HyperovalError::Collinear)?;
        Ok(Hyperoval {
            field: field.clone(),
            kind,
            points,
            lookup,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn kind(&self) -> HyperovalKind {
        self.kind
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        normalize(&self.field, v).is_some_and(|n| self.lookup.contains(&n))
    }

    /// The first point not mapped into the hyperoval by a 3×3 matrix.
    pub fn stabilization_witness(&self, m: &ProjMat) -> Option<&Vector> {
        self.points.iter().find(|p| !self.contains(&m.apply(&self.field, p)))
    }

    pub fn is_stabilized_by(&self, m: &ProjMat) -> bool {
        self.stabilization_witness(m).is_none()
    }
}

/// `{(1, t, f(t))} ∪ {(0, 0, 1), (0, 1, 0)}`.
fn graph_hyperoval<F>(field: &Arc<Field>, kind: HyperovalKind, f: F) -> Result<Hyperoval, HyperovalError>
where
    F: Fn(FieldElem) -> FieldElem,
{
    let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
    let mut pts: Vec<Vector> = field.elements().map(|t| vec![o, t, f(t)]).collect();
    pts.push(vec![z, z, o]);
    pts.push(vec![z, o, z]);
    Hyperoval::new(field, kind, pts)
}

/// `{(1, t, t^{2^k})} ∪ {(0,0,1), (0,1,0)}` with gcd(k, h) = 1. Regular when
/// k ∈ {1, h − 1}.
pub fn translation_hyperoval(field: &Arc<Field>, k: u32) -> Result<Hyperoval, HyperovalError> {
    even_field(field)?;
    let h = field.h();
    if k == 0 || k >= h.max(2) || gcd(k, h) != 1 {
        return Err(HyperovalError::GcdViolation { k, h });
    }
    let kind = if k == 1 || k == h - 1 {
        HyperovalKind::Regular
    } else {
        HyperovalKind::Translation(k)
    };
    let e = 1u64 << k;
    graph_hyperoval(field, kind, |t| field.pow_u(t, e))
}

/// The conic `{(1, t, t²)}` with its nucleus, plus (0, 1, 0).
pub fn regular_hyperoval(field: &Arc<Field>) -> Result<Hyperoval, HyperovalError> {
    even_field(field)?;
    graph_hyperoval(field, HyperovalKind::Regular, |t| field.mul(t, t))
}

/// `{(1, t, t^{1/6} + t^{3/6} + t^{5/6})} ∪ {(0,0,1), (0,1,0)}` for q = 2^h, h ≥ 5 odd.
pub fn payne_hyperoval(field: &Arc<Field>) -> Result<Hyperoval, HyperovalError> {
    even_field(field)?;
    let h = field.h();
    if h < 5 || h.is_multiple_of(2) {
        return Err(HyperovalError::BadParameters(format!(
            "Payne hyperoval needs h odd and at least 5, got h = {h}"
        )));
    }
    let q = field.q() as u64;
    let exps = [
        frac_exponent(1, 6, q)?,
        frac_exponent(3, 6, q)?,
        frac_exponent(5, 6, q)?,
    ];
    graph_hyperoval(field, HyperovalKind::Payne, |t| {
        exps.iter().fold(FieldElem::ZERO, |acc, &e| {
            field.add(acc, if t.is_zero() { t } else { field.pow_u(t, e) })
        })
    })
}

/// The q³ affine points `(X, Y, Z, 1)`, indexed `X·q² + Y·q + Z` by encodings.
pub fn affine_points(field: &Field) -> PointSet {
    let mut pts = Vec::with_capacity((field.q() as usize).pow(3));
    for x in field.elements() {
        for y in field.elements() {
            for z in field.elements() {
                pts.push(normalize(field, &[x, y, z, FieldElem::ONE]).expect("nonzero"));
            }
        }
    }
    PointSet::new(pts)
}

/// T₂*(ℋ): affine points of PG(3, q) and the affine lines whose point at
/// infinity lies on ℋ.
#[derive(Debug, Clone)]
pub struct T2StarModel {
    hyperoval: Hyperoval,
    structure: IncidenceStructure,
    points: PointSet,
}

pub fn t2star(hyperoval: &Hyperoval) -> Result<T2StarModel, HyperovalError> {
    let f = hyperoval.field.as_ref();
    let q = f.q() as usize;
    let index =
        |v: &[FieldElem]| (v[0].encoding() as usize * q + v[1].encoding() as usize) * q + v[2].encoding() as usize;
    let mut lines = Vec::with_capacity((q + 2) * q * q);
    for d in &hyperoval.points {
        let mut seen = vec![false; q * q * q];
        for x in f.elements() {
            for y in f.elements() {
                for z in f.elements() {
                    let start = [x, y, z];
                    if seen[index(&start)] {
                        continue;
                    }
                    let line: Vec<usize> = f
                        .elements()
                        .map(|l| {
                            let p: Vec<FieldElem> = start.iter().zip(d).map(|(&s, &c)| f.add(s, f.mul(l, c))).collect();
                            index(&p)
                        })
                        .collect();
                    for &p in &line {
                        seen[p] = true;
                    }
                    lines.push(line);
                }
            }
        }
    }
    let structure = IncidenceStructure::new(q * q * q, lines)?;
    Ok(T2StarModel {
        hyperoval: hyperoval.clone(),
        structure,
        points: affine_points(f),
    })
}

impl T2StarModel {
    pub fn hyperoval(&self) -> &Hyperoval {
        &self.hyperoval
    }

    pub fn structure(&self) -> &IncidenceStructure {
        &self.structure
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    /// Verifies the quadrangle axioms; expected order (q − 1, q + 1).
    pub fn certify(&self) -> Result<GQCertificate, HyperovalError> {
        let q = self.hyperoval.field.q();
        if q > MAX_CERTIFY_Q {
            return Err(HyperovalError::SearchTooLarge(q));
        }
        Ok(self.structure.verify_gq()?)
    }

    /// Sharp-transitivity certificate of a group of 4×4 matrices on the affine
    /// points, after checking that it stabilizes ℋ at infinity.
    pub fn singer_certificate(&self, g: &FinGroup) -> Result<SharpCertificate, HyperovalError> {
        if let Some(p) = infinity_witness(&self.hyperoval, g) {
            return Err(HyperovalError::GammaNotStabilizing {
                point: p.iter().map(|c| c.encoding()).collect(),
            });
        }
        act_on_points(g, &self.points)?
            .sharply_transitive()
            .ok_or(HyperovalError::NotSharplyTransitive)
    }
}

/// The first hyperoval point some generator maps off ℋ at infinity.
pub fn infinity_witness<'a>(hyperoval: &'a Hyperoval, g: &FinGroup) -> Option<&'a Vector> {
    let f = hyperoval.field.as_ref();
    hyperoval.points.iter().find(|p| {
        let v: Vector = p.iter().copied().chain([FieldElem::ZERO]).collect();
        g.generators().iter().any(|m| {
            let w = m.apply(f, &v);
            !w[3].is_zero() || !hyperoval.contains(&w[..3])
        })
    })
}

/// `[[1,0,0,a],[a,1,0,b],[a^{2^k},0,1,c],[0,0,0,1]]`.
pub fn translation_singer_matrix(field: &Field, k: u32, a: FieldElem, b: FieldElem, c: FieldElem) -> ProjMat {
    let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
    let ak = field.pow_u(a, 1u64 << k);
    ProjMat::new(field, 4, vec![o, z, z, a, a, o, z, b, ak, z, o, c, z, z, z, o]).expect("unipotent")
}

/// Translation `(X, Y, Z) ↦ (X + a, Y + b, Z + c)`.
pub fn translation(field: &Field, a: FieldElem, b: FieldElem, c: FieldElem) -> ProjMat {
    let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
    ProjMat::new(field, 4, vec![o, z, z, a, z, o, z, b, z, z, o, c, z, z, z, o]).expect("unipotent")
}

pub fn is_translation(m: &ProjMat) -> bool {
    (0..4).all(|i| (0..3).all(|j| m.entry(i, j) == if i == j { FieldElem::ONE } else { FieldElem::ZERO }))
        && m.entry(3, 3) == FieldElem::ONE
}

/// All q³ translations.
pub fn full_translation_group(field: &Arc<Field>) -> Result<FinGroup, HyperovalError> {
    let z = FieldElem::ZERO;
    let mut gens = Vec::new();
    for i in 0..field.h() {
        let b = field.basis_element(i);
        gens.extend([
            translation(field, b, z, z),
            translation(field, z, b, z),
            translation(field, z, z, b),
        ]);
    }
    Ok(generate(field, 4, &gens, (field.q() as usize).pow(3))?)
}

/// The nonabelian Singer group of T₂*(ℋ) for the translation hyperoval with
/// parameter k, of order q³.
pub fn translation_singer(field: &Arc<Field>, k: u32) -> Result<FinGroup, HyperovalError> {
    even_field(field)?;
    let h = field.h();
    if k == 0 || gcd(k, h) != 1 {
        return Err(HyperovalError::GcdViolation { k, h });
    }
    let z = FieldElem::ZERO;
    let mut gens = Vec::new();
    for i in 0..h {
        let b = field.basis_element(i);
        gens.push(translation_singer_matrix(field, k, b, z, z));
        gens.push(translation_singer_matrix(field, k, z, b, z));
        gens.push(translation_singer_matrix(field, k, z, z, b));
    }
    let order = (field.q() as usize).pow(3);
    let g = generate(field, 4, &gens, order)?;
    if g.order() != order {
        return Err(HyperovalError::WrongOrder {
            expected: order,
            got: g.order(),
        });
    }
    Ok(g)
}

/// A hyperplane `{v : ℓ(v) = 0}` of (F_q, +)³ ≅ GF(2)^{3h}, with coordinates
/// the digits of a, then of b, then of c.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationHyperplane {
    pub functional: Vec<u32>,
}

impl TranslationHyperplane {
    /// `X₁ + … + X_{2h} = 0`: the digit sums of a and b agree.
    pub fn digit_sum(h: u32) -> TranslationHyperplane {
        let h = h as usize;
        let mut functional = vec![1; 2 * h];
        functional.extend(std::iter::repeat_n(0, h));
        TranslationHyperplane { functional }
    }

    fn coords(field: &Field, v: [FieldElem; 3]) -> Vec<u32> {
        v.iter().flat_map(|&x| field.digits(x)).collect()
    }

    pub fn contains(&self, field: &Field, v: [FieldElem; 3]) -> bool {
        Self::coords(field, v)
            .iter()
            .zip(&self.functional)
            .map(|(a, b)| a * b)
            .sum::<u32>()
            % 2
            == 0
    }

    /// A GF(2)-basis of the hyperplane, as translation vectors.
    pub fn basis(&self, field: &Field) -> Result<Vec<[FieldElem; 3]>, HyperovalError> {
        let f2 = Field::new(2, 1)?;
        let h = field.h() as usize;
        let row: Vector = self.functional.iter().map(|&x| FieldElem::from_encoding(x)).collect();
        Ok(annihilator(&f2, &[row], 3 * h)
            .into_iter()
            .map(|v| {
                let d: Vec<u32> = v.iter().map(|x| x.encoding()).collect();
                [
                    field.from_digits(&d[..h]),
                    field.from_digits(&d[h..2 * h]),
                    field.from_digits(&d[2 * h..]),
                ]
            })
            .collect())
    }
}

/// The Singer group `⟨g, T⟩` built from an involutory collineation γ of ℋ.
#[derive(Debug, Clone)]
pub struct ElationSinger {
    pub group: FinGroup,
    /// γ extended by the affine column (1, 0, 0).
    pub g: ProjMat,
    /// Number of elements of the group that are translations.
    pub translation_intersection: usize,
}

fn raw_gamma(field: &Field, gamma: &ProjMat) -> Result<Vec<FieldElem>, HyperovalError> {
    if gamma.dim() != 3 {
        return Err(HyperovalError::Group(GroupError::DimensionMismatch));
    }
    let e = gamma.entries();
    let sq = |i: usize, j: usize| {
        (0..3).fold(FieldElem::ZERO, |acc, k| {
            field.add(acc, field.mul(e[i * 3 + k], e[k * 3 + j]))
        })
    };
    let lambda = sq(0, 0);
    let scalar = (0..3).all(|i| (0..3).all(|j| sq(i, j) == if i == j { lambda } else { FieldElem::ZERO }));
    if gamma.is_identity() || !scalar || lambda.is_zero() {
        return Err(HyperovalError::NotInvolution);
    }
    // Every element of GF(2^h) is a square: μ = λ^{q/2}.
    let mu = field.pow_u(lambda, field.q() as u64 / 2);
    let inv = field.inv(mu)?;
    Ok(e.iter().map(|&x| field.mul(x, inv)).collect())
}

/// Builds `S = ⟨g, T_D⟩` where `g = [[γ, (1,0,0)ᵀ], [0, 1]]` and `T_D` the
/// translations by the hyperplane D, and certifies order q³.
pub fn elation_singer(
    hyperoval: &Hyperoval,
    gamma: &ProjMat,
    d: &TranslationHyperplane,
) -> Result<ElationSinger, HyperovalError> {
    let field = hyperoval.field.clone();
    let f = field.as_ref();
    let h = f.h() as usize;
    if d.functional.len() != 3 * h || d.functional.iter().any(|&x| x > 1) {
        return Err(HyperovalError::DViolation("functional has the wrong length"));
    }
    let e = raw_gamma(f, gamma)?;
    if let Some(p) = hyperoval.stabilization_witness(gamma) {
        return Err(HyperovalError::GammaNotStabilizing {
            point: p.iter().map(|c| c.encoding()).collect(),
        });
    }
    let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
    let lin = |v: [FieldElem; 3]| -> [FieldElem; 3] {
        let r = |i: usize| (0..3).fold(z, |acc, k| f.add(acc, f.mul(e[i * 3 + k], v[k])));
        [r(0), r(1), r(2)]
    };
    let g = ProjMat::new(
        f,
        4,
        vec![
            e[0], e[1], e[2], o, e[3], e[4], e[5], z, e[6], e[7], e[8], z, z, z, z, o,
        ],
    )?;
    let g_sq = lin([o, z, z]);
    let g_sq = [f.add(g_sq[0], o), g_sq[1], g_sq[2]];
    if d.contains(f, [o, z, z]) {
        return Err(HyperovalError::DViolation("D contains (1, 0, 0)"));
    }
    if !d.contains(f, g_sq) {
        return Err(HyperovalError::DViolation("D does not contain the translation g²"));
    }
    let basis = d.basis(f)?;
    if basis.iter().any(|&v| !d.contains(f, lin(v))) {
        return Err(HyperovalError::DViolation("D is not invariant under γ"));
    }
    let mut gens = vec![g.clone()];
    gens.extend(basis.iter().map(|v| translation(f, v[0], v[1], v[2])));
    let order = (f.q() as usize).pow(3);
    let group = generate(&field, 4, &gens, order)?;
    if group.order() != order {
        return Err(HyperovalError::WrongOrder {
            expected: order,
            got: group.order(),
        });
    }
    let translation_intersection = group.elements().iter().filter(|m| is_translation(m)).count();
    Ok(ElationSinger {
        group,
        g,
        translation_intersection,
    })
}

/// The coordinate swap `(X, Y, Z) ↦ (Y, X, Z)`.
pub fn swap_xy(field: &Field) -> ProjMat {
    ProjMat::from_ints(field, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]).expect("permutation matrix")
}

/// `[[1,0,0],[a,1,0],[a^{2^k},0,1]]` for a ∈ F_q: elations with axis X = 0
/// stabilizing the translation hyperoval with parameter k.
pub fn translation_stabilizer_family(field: &Arc<Field>, k: u32) -> Result<FinGroup, HyperovalError> {
    let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
    let elems: Vec<ProjMat> = field
        .elements()
        .map(|a| ProjMat::new(field, 3, vec![o, z, z, a, o, z, field.pow_u(a, 1u64 << k), z, o]))
        .collect::<Result<_, _>>()?;
    let g = FinGroup::from_closed_elements(field.clone(), 3, elems);
    Ok(g)
}

/// Columns `λᵢPᵢ` with `P₄ = Σ λᵢPᵢ`: the matrix sending the standard frame to
/// the four points.
fn frame_matrix(f: &Field, p: [&Vector; 4]) -> Option<ProjMat> {
    let cols = |s: [FieldElem; 3]| -> Vec<FieldElem> {
        (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| f.mul(p[j][i], s[j]))
            .collect()
    };
    let a = ProjMat::new(f, 3, cols([FieldElem::ONE; 3])).ok()?;
    let lambda = a.inverse(f).apply(f, p[3]);
    if lambda.iter().any(|x| x.is_zero()) {
        return None;
    }
    ProjMat::new(f, 3, cols([lambda[0], lambda[1], lambda[2]])).ok()
}

/// The stabilizer of ℋ in PGL₃(q), by mapping a frame of hyperoval points to
/// every ordered 4-tuple of hyperoval points.
pub fn linear_stabilizer(hyperoval: &Hyperoval) -> Result<FinGroup, HyperovalError> {
    let field = hyperoval.field.clone();
    let f = field.as_ref();
    if f.q() > MAX_SCAN_Q {
        return Err(HyperovalError::SearchTooLarge(f.q()));
    }
    let pts = &hyperoval.points;
    let src = frame_matrix(f, [&pts[0], &pts[1], &pts[2], &pts[3]]).expect("hyperoval points form a frame");
    let src_inv = src.inverse(f);
    let n = pts.len();
    let mut found = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for k in (0..n).filter(|&k| k != i && k != j) {
                for l in (0..n).filter(|&l| l != i && l != j && l != k) {
                    if let Some(dst) = frame_matrix(f, [&pts[i], &pts[j], &pts[k], &pts[l]]) {
                        let m = dst.mul(f, &src_inv);
                        if hyperoval.is_stabilized_by(&m) {
                            found.push(m);
                        }
                    }
                }
            }
        }
    }
    Ok(FinGroup::from_closed_elements(field, 3, found))
}

/// Elements of 2-power order fixing the line X = 0 pointwise.
pub fn axis_elations(g: &FinGroup) -> FinGroup {
    let f = g.field().as_ref();
    let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
    let axis = [vec![z, o, z], vec![z, z, o], vec![z, o, o]];
    let elems: Vec<ProjMat> = g
        .elements()
        .iter()
        .filter(|m| {
            g.element_order(m).is_power_of_two()
                && axis.iter().all(|p| normalize(f, &m.apply(f, p)).as_ref() == Some(p))
        })
        .cloned()
        .collect();
    FinGroup::from_closed_elements(g.field().clone(), 3, elems)
}

/// The 2-part of the linear stabilizer relevant to Singer groups: the
/// elations with axis X = 0 stabilizing ℋ. Found by a full scan for q ≤ 8;
/// for larger translation hyperovals the parametric family is checked instead.
pub fn hyperoval_linear_stabilizer(hyperoval: &Hyperoval) -> Result<FinGroup, HyperovalError> {
    let f = hyperoval.field.as_ref();
    if f.q() <= MAX_SCAN_Q {
        return Ok(axis_elations(&linear_stabilizer(hyperoval)?));
    }
    let k = match hyperoval.kind {
        HyperovalKind::Translation(k) => k,
        HyperovalKind::Regular => 1,
        _ => return Err(HyperovalError::SearchTooLarge(f.q())),
    };
    let fam = translation_stabilizer_family(&hyperoval.field, k)?;
    if let Some(m) = fam.elements().iter().find(|m| !hyperoval.is_stabilized_by(m)) {
        let p = hyperoval.stabilization_witness(m).expect("not stabilized");
        return Err(HyperovalError::GammaNotStabilizing {
            point: p.iter().map(|c| c.encoding()).collect(),
        });
    }
    Ok(fam)
}
