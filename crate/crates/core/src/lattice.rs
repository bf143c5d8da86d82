//! Panel-regular lattice presentations Γ₁ = (S ∗ S′) / ⟨[S_{λ(j)}, S′_{λ′(j)}]⟩
//! built from two Singer groups of generalized quadrangles with the same
//! parameters, with the local-isomorphism hypothesis checked on the line
//! stabilizers and Schur-multiplier metadata attached.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::incidence::IncidenceStructure;
use crate::matgroup::{act_on_points, fingerprint_equal, FinGroup, GroupError, GroupInvariants, PointSet};
use crate::singer::schur_multiplier_order;

/// Largest generator count for which the abelianization is computed.
pub const MAX_ABELIANIZATION_GENERATORS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("group is not sharply transitive on the points of the quadrangle")]
    NotSinger,
    #[error("point {0} is not a point of the quadrangle")]
    BadPoint(usize),
    #[error("quadrangles differ: {0} and {1} lines through the base point")]
    ParameterMismatch(usize, usize),
    #[error("no stabilizer matching: unmatched {left:?} against {right:?}")]
    NoMatching { left: Vec<String>, right: Vec<String> },
    #[error("matching is not a bijection between isomorphic stabilizers")]
    MatchingInvalid,
    #[error("presentation has no relators")]
    EmptyRelators,
    #[error("relator {0} is not freely reduced")]
    UnreducedRelator(usize),
    #[error("unknown export format {0:?}")]
    UnknownFormat(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Stabilizer of one line through the base point.
#[derive(Debug, Clone, Serialize)]
pub struct StabilizerProfile {
    pub line: usize,
    pub order: usize,
    pub orbit_size: usize,
    pub invariant_factors: Option<Vec<u64>>,
}

/// A Singer group together with the line stabilizers S_{λ(j)} at a base point.
#[derive(Debug, Clone)]
pub struct LocalData {
    pub group: FinGroup,
    pub x: usize,
    /// λ: the lines through x, in increasing line index.
    pub lambda: Vec<usize>,
    pub stabilizers: Vec<FinGroup>,
    pub profile: Vec<StabilizerProfile>,
}

impl LocalData {
    pub fn t(&self) -> usize {
        self.lambda.len() - 1
    }
}

/// Line stabilizers of a Singer group `s` acting on the points of `gq`, whose
/// coordinates are `pts` (same order as the quadrangle's points).
pub fn local_data(gq: &IncidenceStructure, s: &FinGroup, pts: &PointSet, x: usize) -> Result<LocalData, LatticeError> {
    if x >= gq.npoints() {
        return Err(LatticeError::BadPoint(x));
    }
    if pts.len() != gq.npoints() || !act_on_points(s, pts)?.is_sharply_transitive() {
        return Err(LatticeError::NotSinger);
    }
    let f = s.field().clone();
    let image = |g: &crate::matgroup::ProjMat, p: usize| pts.index_of(&f, &g.apply(&f, &pts.points()[p]));
    let lambda: Vec<usize> = {
        let mut l: Vec<usize> = gq.point_lines(x).collect();
        l.sort_unstable();
        l
    };
    let mut stabilizers = Vec::with_capacity(lambda.len());
    let mut profile = Vec::with_capacity(lambda.len());
    for &line in &lambda {
        let mut points: Vec<usize> = gq.line_points(line).collect();
        points.sort_unstable();
        let mut orbit = HashSet::new();
        let mut fixing = Vec::new();
        for g in s.elements() {
            let mut imgs: Vec<usize> = points
                .iter()
                .map(|&p| image(g, p).ok_or(LatticeError::NotSinger))
                .collect::<Result<_, _>>()?;
            imgs.sort_unstable();
            if imgs == points {
                fixing.push(g.clone());
            }
            orbit.insert(gq.find_line(&imgs).ok_or(LatticeError::NotSinger)?);
        }
        let stab = FinGroup::from_closed_elements(f.clone(), s.dim(), fixing);
        profile.push(StabilizerProfile {
            line,
            order: stab.order(),
            orbit_size: orbit.len(),
            invariant_factors: stab.abelian_invariant_factors(),
        });
        stabilizers.push(stab);
    }
    Ok(LocalData {
        group: s.clone(),
        x,
        lambda,
        stabilizers,
        profile,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum StabilizerKey {
    Abelian(Vec<u64>),
    Fingerprint(Box<GroupInvariants>),
}

impl StabilizerKey {
    fn of(g: &FinGroup) -> Result<StabilizerKey, LatticeError> {
        Ok(match g.abelian_invariant_factors() {
            Some(f) => StabilizerKey::Abelian(f),
            None => StabilizerKey::Fingerprint(Box::new(g.invariants()?)),
        })
    }

    fn matches(&self, other: &StabilizerKey) -> bool {
        match (self, other) {
            (StabilizerKey::Abelian(a), StabilizerKey::Abelian(b)) => a == b,
            (StabilizerKey::Fingerprint(a), StabilizerKey::Fingerprint(b)) => fingerprint_equal(a, b),
            _ => false,
        }
    }

    fn describe(&self) -> String {
        match self {
            StabilizerKey::Abelian(f) => format!("abelian {f:?}"),
            StabilizerKey::Fingerprint(inv) => format!("nonabelian order {} exponent {}", inv.order, inv.exponent),
        }
    }
}

/// A bijection σ with S_{λ(j)} ≅ S′_{λ′(σ(j))}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub sigma: Vec<usize>,
    /// Set when some stabilizer is nonabelian and was matched on invariants
    /// that do not determine the isomorphism type.
    pub fingerprint_only: bool,
}

/// Pairs the stabilizers of `l` with those of `l2`, keeping the identity
/// wherever it already works.
pub fn check_local_iso(l: &LocalData, l2: &LocalData) -> Result<Matching, LatticeError> {
    if l.lambda.len() != l2.lambda.len() {
        return Err(LatticeError::ParameterMismatch(l.lambda.len(), l2.lambda.len()));
    }
    let left: Vec<StabilizerKey> = l.stabilizers.iter().map(StabilizerKey::of).collect::<Result<_, _>>()?;
    let right: Vec<StabilizerKey> = l2.stabilizers.iter().map(StabilizerKey::of).collect::<Result<_, _>>()?;
    let n = left.len();
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for j in 0..n {
        if left[j].matches(&right[j]) {
            sigma[j] = j;
            used[j] = true;
        }
    }
    for j in 0..n {
        if sigma[j] != usize::MAX {
            continue;
        }
        if let Some(k) = (0..n).find(|&k| !used[k] && left[j].matches(&right[k])) {
            sigma[j] = k;
            used[k] = true;
        }
    }
    if sigma.contains(&usize::MAX) {
        return Err(LatticeError::NoMatching {
            left: (0..n)
                .filter(|&j| sigma[j] == usize::MAX)
                .map(|j| left[j].describe())
                .collect(),
            right: (0..n).filter(|&k| !used[k]).map(|k| right[k].describe()).collect(),
        });
    }
    let fingerprint_only = left.iter().any(|k| matches!(k, StabilizerKey::Fingerprint(_)));
    Ok(Matching {
        sigma,
        fingerprint_only,
    })
}

/// A relator word: signed 1-based generator indices, negative for inverses.
pub type Word = Vec<i32>;

/// A finite presentation with generator names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    /// Number of leading relators that come from the multiplication tables.
    pub table_relators: usize,
    /// Number of trailing commutator relators.
    pub commutator_relators: usize,
}

impl Presentation {
    pub fn new(
        generators: Vec<String>,
        relators: Vec<Word>,
        table_relators: usize,
    ) -> Result<Presentation, LatticeError> {
        if relators.is_empty() {
            return Err(LatticeError::EmptyRelators);
        }
        let ngens = generators.len() as i32;
        for (i, w) in relators.iter().enumerate() {
            if w.is_empty() || w.iter().any(|&g| g == 0 || g.abs() > ngens) || w.windows(2).any(|p| p[0] == -p[1]) {
                return Err(LatticeError::UnreducedRelator(i));
            }
        }
        if table_relators > relators.len() {
            return Err(LatticeError::Parse {
                line: 0,
                message: "table relator count exceeds relator count".into(),
            });
        }
        let commutator_relators = relators.len() - table_relators;
        Ok(Presentation {
            generators,
            relators,
            table_relators,
            commutator_relators,
        })
    }
}

/// Multiplication-table relators of `g` with generators numbered from
/// `offset + 1`; also returns the generator number of each element (0 for the
/// identity).
fn table_relators(g: &FinGroup, offset: i32) -> (Vec<i32>, Vec<Word>) {
    let f = g.field();
    let mut number = vec![0i32; g.order()];
    let mut next = offset;
    for (i, e) in g.elements().iter().enumerate() {
        if !e.is_identity() {
            next += 1;
            number[i] = next;
        }
    }
    let mut rels = Vec::with_capacity((g.order() - 1).pow(2));
    for (i, a) in g.elements().iter().enumerate() {
        if number[i] == 0 {
            continue;
        }
        for (j, b) in g.elements().iter().enumerate() {
            if number[j] == 0 {
                continue;
            }
            let c = g.index_of(&a.mul(f, b)).expect("closed group");
            if number[c] == 0 {
                rels.push(vec![number[i], number[j]]);
            } else {
                rels.push(vec![number[i], number[j], -number[c]]);
            }
        }
    }
    (number, rels)
}

/// The Γ₁ presentation: one generator per nontrivial element of S (named
/// `a1, a2, …` in element order) and of S′ (`b1, b2, …`), the multiplication
/// tables of both, and the commutators `[u, v] = u⁻¹v⁻¹uv` for
/// u ∈ S_{λ(j)}, v ∈ S′_{λ′(σ(j))}.
pub fn gamma1(l: &LocalData, l2: &LocalData, matching: &Matching) -> Result<Presentation, LatticeError> {
    let n = l.lambda.len();
    let mut seen = vec![false; n];
    if matching.sigma.len() != n || l2.lambda.len() != n {
        return Err(LatticeError::MatchingInvalid);
    }
    for (j, &k) in matching.sigma.iter().enumerate() {
        if k >= n || seen[k] {
            return Err(LatticeError::MatchingInvalid);
        }
        seen[k] = true;
        if !StabilizerKey::of(&l.stabilizers[j])?.matches(&StabilizerKey::of(&l2.stabilizers[k])?) {
            return Err(LatticeError::MatchingInvalid);
        }
    }
    let (num_a, mut relators) = table_relators(&l.group, 0);
    let na = l.group.order() as i32 - 1;
    let (num_b, rels_b) = table_relators(&l2.group, na);
    relators.extend(rels_b);
    let table = relators.len();
    let generator_of = |g: &FinGroup, numbers: &[i32], e| numbers[g.index_of(e).expect("subgroup element")];
    for (j, &k) in matching.sigma.iter().enumerate() {
        for u in l.stabilizers[j].elements().iter().filter(|e| !e.is_identity()) {
            let gu = generator_of(&l.group, &num_a, u);
            for v in l2.stabilizers[k].elements().iter().filter(|e| !e.is_identity()) {
                let gv = generator_of(&l2.group, &num_b, v);
                relators.push(vec![-gu, -gv, gu, gv]);
            }
        }
    }
    let mut generators: Vec<String> = (1..=na).map(|i| format!("a{i}")).collect();
    generators.extend((1..l2.group.order()).map(|i| format!("b{i}")));
    Presentation::new(generators, relators, table)
}

/// Order of H₂(G, ℤ) when it is known in closed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum H2Value {
    /// G ≅ C_pⁿ, with |H₂| = p^{n(n−1)/2}.
    ElementaryAbelian {
        p: u64,
        n: u32,
        #[serde(serialize_with = "as_decimal")]
        order: BigUint,
    },
    Unknown {
        reason: String,
    },
}

impl H2Value {
    pub fn order(&self) -> Option<&BigUint> {
        match self {
            H2Value::ElementaryAbelian { order, .. } => Some(order),
            H2Value::Unknown { .. } => None,
        }
    }
}

fn as_decimal<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn as_decimal_opt<S: serde::Serializer>(x: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyMetadata {
    pub s: H2Value,
    pub s_prime: H2Value,
    /// |H₂(Γ₁, ℤ)| = |H₂(S)| · |H₂(S′)| when both factors are known.
    #[serde(serialize_with = "as_decimal_opt")]
    pub gamma1: Option<BigUint>,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn h2_of(g: &FinGroup) -> H2Value {
    match g.abelian_invariant_factors() {
        Some(f) if f.is_empty() => H2Value::ElementaryAbelian {
            p: 1,
            n: 0,
            order: BigUint::from(1u32),
        },
        Some(f) if is_prime(f[0]) && f.iter().all(|&d| d == f[0]) => {
            let (p, n) = (f[0], f.len() as u32);
            H2Value::ElementaryAbelian {
                p,
                n,
                order: schur_multiplier_order(p as u32, n),
            }
        }
        Some(_) => H2Value::Unknown {
            reason: "abelian but not elementary abelian: formula out of scope".into(),
        },
        None => H2Value::Unknown {
            reason: "nonabelian: formula out of scope".into(),
        },
    }
}

pub fn homology_metadata(s: &FinGroup, s_prime: &FinGroup) -> HomologyMetadata {
    let (a, b) = (h2_of(s), h2_of(s_prime));
    let gamma1 = match (a.order(), b.order()) {
        (Some(x), Some(y)) => Some(x * y),
        _ => None,
    };
    HomologyMetadata {
        s: a,
        s_prime: b,
        gamma1,
    }
}

/// Invariant factors (> 1) and free rank of a finitely presented abelian group
/// given by integer relation rows over `ngens` generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
}

impl AbelianGroup {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }
}

fn gcd_ext(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = gcd_ext(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Adds one relation row to an integer echelon basis keyed by pivot column.
fn insert_row(basis: &mut BTreeMap<usize, Vec<i128>>, mut row: Vec<i128>) {
    loop {
        let Some(c) = row.iter().position(|&x| x != 0) else {
            return;
        };
        let Some(b) = basis.get_mut(&c) else {
            if row[c] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            basis.insert(c, row);
            return;
        };
        let (a0, b0) = (b[c], row[c]);
        if b0 % a0 == 0 {
            let k = b0 / a0;
            row.iter_mut().zip(b.iter()).for_each(|(r, x)| *r -= k * x);
            continue;
        }
        // Replace the pivot row by the gcd combination and keep reducing the other.
        let (g, x, y) = gcd_ext(a0, b0);
        let new_pivot: Vec<i128> = b.iter().zip(&row).map(|(p, r)| x * p + y * r).collect();
        let (ka, kb) = (a0 / g, b0 / g);
        let rest: Vec<i128> = b.iter().zip(&row).map(|(p, r)| kb * p - ka * r).collect();
        *b = new_pivot;
        row = rest;
    }
}

/// Smith normal form diagonal of a square-ish integer matrix.
fn smith_diagonal(mut m: Vec<Vec<i128>>, ncols: usize) -> Vec<i128> {
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        m.iter_mut().for_each(|r| r.swap(t, pj));
        loop {
            let p = m[t][t];
            let mut dirty = false;
            for i in t + 1..nrows {
                let k = m[i][t] / p;
                if k != 0 {
                    let pivot_row = m[t].clone();
                    m[i].iter_mut().zip(&pivot_row).for_each(|(a, b)| *a -= k * b);
                }
                if m[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..ncols {
                let k = m[t][j] / p;
                if k != 0 {
                    for row in m.iter_mut() {
                        row[j] -= k * row[t];
                    }
                }
                if m[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // Divisibility: fold any entry not divisible by p into row t.
                let bad = (t + 1..nrows).find(|&i| m[i][t + 1..].iter().any(|&v| v % p != 0));
                match bad {
                    Some(i) => {
                        let r = m[i].clone();
                        m[t].iter_mut().zip(&r).for_each(|(a, b)| *a += b);
                        continue;
                    }
                    None => break,
                }
            }
            // Move the smallest remaining entry of row/column t to the pivot.
            let (mut bi, mut bj) = (t, t);
            for i in t..nrows {
                if m[i][t] != 0 && m[i][t].abs() < m[bi][bj].abs() {
                    (bi, bj) = (i, t);
                }
            }
            for j in t..ncols {
                if m[t][j] != 0 && m[t][j].abs() < m[bi][bj].abs() {
                    (bi, bj) = (t, j);
                }
            }
            m.swap(t, bi);
            m.iter_mut().for_each(|r| r.swap(t, bj));
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Abelian group ℤ^ngens / ⟨rows⟩.
pub fn abelian_group_from_relations(ngens: usize, rows: impl IntoIterator<Item = Vec<i128>>) -> AbelianGroup {
    let mut basis = BTreeMap::new();
    for row in rows {
        insert_row(&mut basis, row);
    }
    let rank = basis.len();
    let diag = smith_diagonal(basis.into_values().collect(), ngens);
    let mut invariant_factors: Vec<u64> = diag.into_iter().filter(|&d| d > 1).map(|d| d as u64).collect();
    invariant_factors.sort_unstable();
    AbelianGroup {
        invariant_factors,
        free_rank: ngens - rank,
    }
}

fn exponent_sums(ngens: usize, w: &Word) -> Vec<i128> {
    let mut row = vec![0i128; ngens];
    for &g in w {
        row[g.unsigned_abs() as usize - 1] += g.signum() as i128;
    }
    row
}

/// Abelianization of a presentation; `None` above
/// [`MAX_ABELIANIZATION_GENERATORS`] generators.
pub fn abelianization(p: &Presentation) -> Option<AbelianGroup> {
    let n = p.generators.len();
    if n > MAX_ABELIANIZATION_GENERATORS {
        return None;
    }
    Some(abelian_group_from_relations(
        n,
        p.relators.iter().map(|w| exponent_sums(n, w)),
    ))
}

/// Abelianizations of S, S′ and Γ₁ read off the presentation. Commutator
/// relators have zero exponent sums, so their contribution to the rank is
/// `rank(S^ab) + rank(S′^ab) − rank(Γ₁^ab)`, which is 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianizationReport {
    pub s: AbelianGroup,
    pub s_prime: AbelianGroup,
    pub gamma1: AbelianGroup,
    pub commutator_rank_contribution: isize,
}

pub fn abelianization_report(p: &Presentation, na: usize) -> Option<AbelianizationReport> {
    let n = p.generators.len();
    if n > MAX_ABELIANIZATION_GENERATORS || na > n {
        return None;
    }
    let table = &p.relators[..p.table_relators];
    let in_a = |w: &&Word| w.iter().all(|&g| (g.unsigned_abs() as usize) <= na);
    let s = abelian_group_from_relations(na, table.iter().filter(in_a).map(|w| exponent_sums(na, w)));
    let s_prime = abelian_group_from_relations(
        n - na,
        table.iter().filter(|w| !in_a(w)).map(|w| {
            let shifted: Word = w.iter().map(|&g| g.signum() * (g.abs() - na as i32)).collect();
            exponent_sums(n - na, &shifted)
        }),
    );
    let gamma1 = abelianization(p)?;
    let commutator_rank_contribution = s.rank() as isize + s_prime.rank() as isize - gamma1.rank() as isize;
    Some(AbelianizationReport {
        s,
        s_prime,
        gamma1,
        commutator_rank_contribution,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportFormat {
    Gap,
    Magma,
    Plain,
}

impl std::str::FromStr for ExportFormat {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gap" => Ok(ExportFormat::Gap),
            "magma" => Ok(ExportFormat::Magma),
            "plain" => Ok(ExportFormat::Plain),
            _ => Err(LatticeError::UnknownFormat(s.to_string())),
        }
    }
}

fn word_text(p: &Presentation, w: &Word) -> String {
    w.iter()
        .map(|&g| {
            let name = &p.generators[g.unsigned_abs() as usize - 1];
            if g < 0 {
                format!("{name}^-1")
            } else {
                name.clone()
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn export_presentation(p: &Presentation, format: ExportFormat) -> Result<String, LatticeError> {
    if p.relators.is_empty() {
        return Err(LatticeError::EmptyRelators);
    }
    let mut out = String::new();
    match format {
        ExportFormat::Plain => {
            writeln!(out, "presentation").unwrap();
            writeln!(out, "generators {}", p.generators.len()).unwrap();
            writeln!(out, "relators {}", p.relators.len()).unwrap();
            writeln!(out, "table {}", p.table_relators).unwrap();
            writeln!(out, "commutators {}", p.commutator_relators).unwrap();
            writeln!(out, "names {}", p.generators.join(" ")).unwrap();
            for w in &p.relators {
                let nums: Vec<String> = w.iter().map(i32::to_string).collect();
                writeln!(out, "{}", nums.join(" ")).unwrap();
            }
        }
        ExportFormat::Gap => {
            let quoted: Vec<String> = p.generators.iter().map(|g| format!("\"{g}\"")).collect();
            writeln!(
                out,
                "# {} generators, {} relators ({} commutators)",
                p.generators.len(),
                p.relators.len(),
                p.commutator_relators
            )
            .unwrap();
            writeln!(out, "F := FreeGroup({});;", quoted.join(", ")).unwrap();
            for (i, g) in p.generators.iter().enumerate() {
                writeln!(out, "{g} := F.{};;", i + 1).unwrap();
            }
            writeln!(out, "rels := [").unwrap();
            for (i, w) in p.relators.iter().enumerate() {
                let sep = if i + 1 == p.relators.len() { "" } else { "," };
                writeln!(out, "  {}{sep}", word_text(p, w)).unwrap();
            }
            writeln!(out, "];;").unwrap();
            writeln!(out, "G := F / rels;;").unwrap();
        }
        ExportFormat::Magma => {
            writeln!(
                out,
                "// {} generators, {} relators ({} commutators)",
                p.generators.len(),
                p.relators.len(),
                p.commutator_relators
            )
            .unwrap();
            writeln!(
                out,
                "F<{}> := FreeGroup({});",
                p.generators.join(","),
                p.generators.len()
            )
            .unwrap();
            writeln!(out, "G := quo< F |").unwrap();
            for (i, w) in p.relators.iter().enumerate() {
                let sep = if i + 1 == p.relators.len() { "" } else { "," };
                writeln!(out, "  {}{sep}", word_text(p, w)).unwrap();
            }
            writeln!(out, ">;").unwrap();
        }
    }
    Ok(out)
}

fn parse_err(line: usize, message: impl Into<String>) -> LatticeError {
    LatticeError::Parse {
        line,
        message: message.into(),
    }
}

/// Reads the plain format written by [`export_presentation`].
pub fn parse_plain(text: &str) -> Result<Presentation, LatticeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut header = |key: &str| -> Result<(usize, String), LatticeError> {
        let (n, l) = lines.next().ok_or_else(|| parse_err(0, format!("missing {key}")))?;
        let rest = l
            .strip_prefix(key)
            .ok_or_else(|| parse_err(n, format!("expected {key}")))?;
        Ok((n, rest.trim().to_string()))
    };
    let count = |(n, v): (usize, String)| v.parse::<usize>().map_err(|_| parse_err(n, "bad count"));
    header("presentation")?;
    let ngens = count(header("generators")?)?;
    let nrels = count(header("relators")?)?;
    let table = count(header("table")?)?;
    let comms = count(header("commutators")?)?;
    let (n, names) = header("names")?;
    let generators: Vec<String> = names.split_whitespace().map(String::from).collect();
    if generators.len() != ngens {
        return Err(parse_err(n, "generator count does not match header"));
    }
    let mut relators = Vec::with_capacity(nrels);
    for (n, l) in lines {
        let w: Word = l
            .split_whitespace()
            .map(|t| t.parse::<i32>().map_err(|_| parse_err(n, "bad letter")))
            .collect::<Result<_, _>>()?;
        relators.push(w);
    }
    if relators.len() != nrels || table + comms != nrels {
        return Err(parse_err(0, "relator count does not match header"));
    }
    Presentation::new(generators, relators, table)
}

/// Reads the subset of GAP syntax written by [`export_presentation`]:
/// `F := FreeGroup("g1", …);;`, optional `gi := F.i;;` bindings and a
/// `rels := [ … ];;` list of words `g^e*…` with exponents ±1 or positive.
/// The table/commutator split is not recoverable, so every relator counts as
/// a table relator.
pub fn parse_gap(text: &str) -> Result<Presentation, LatticeError> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    let start = body.find("FreeGroup(").ok_or_else(|| parse_err(0, "no FreeGroup"))? + "FreeGroup(".len();
    let end = start
        + body[start..]
            .find(')')
            .ok_or_else(|| parse_err(0, "unterminated FreeGroup"))?;
    let generators: Vec<String> = body[start..end]
        .split(',')
        .map(|s| s.trim().trim_matches('"').to_string())
        .filter(|s| !s.is_empty())
        .collect();
    let index: std::collections::HashMap<&str, i32> = generators
        .iter()
        .enumerate()
        .map(|(i, g)| (g.as_str(), i as i32 + 1))
        .collect();
    let rs = body.find("rels").ok_or_else(|| parse_err(0, "no rels"))?;
    let open = rs + body[rs..].find('[').ok_or_else(|| parse_err(0, "no relator list"))?;
    let close = open
        + body[open..]
            .find(']')
            .ok_or_else(|| parse_err(0, "unterminated relator list"))?;
    let mut relators = Vec::new();
    for item in body[open + 1..close].split(',') {
        let item: String = item.chars().filter(|c| !c.is_whitespace()).collect();
        if item.is_empty() {
            continue;
        }
        let mut w = Word::new();
        for factor in item.split('*') {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i32>()
                        .map_err(|_| parse_err(0, format!("bad exponent in {factor}")))?,
                ),
                None => (factor, 1),
            };
            let g = *index
                .get(name)
                .ok_or_else(|| parse_err(0, format!("unknown generator {name}")))?;
            if exp == 0 {
                continue;
            }
            for _ in 0..exp.abs() {
                w.push(g * exp.signum());
            }
        }
        relators.push(w);
    }
    let table = relators.len();
    Presentation::new(generators, relators, table)
}
