//! Projective matrix groups realized as explicit element sets, their actions
//! on finite point sets, and the structural invariants used to tell groups apart.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{Field, FieldElem};
use crate::projgeom::{normalize, Vector};

/// Default bound on the order of a generated group.
pub const DEFAULT_MAX_ORDER: usize = 1 << 20;

/// Largest group on which subgroup-lattice searches are run.
pub const MAX_LATTICE_ORDER: usize = 1 << 16;

/// Bound on the number of subgroups visited by the abelian-subgroup searches.
const SUBGROUP_SEARCH_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order exceeds {0}")]
    GroupTooLarge(usize),
    #[error("matrix dimensions or fields do not agree")]
    DimensionMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("point {point} is mapped outside the point set by generator {generator}")]
    NotInvariant { generator: usize, point: usize },
    #[error("not a subgroup of the ambient group")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("normal subgroup does not act trivially")]
    NotInKernel,
}

/// A nonsingular matrix modulo scalars, normalized so that the first nonzero
/// entry in row-major order is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjMat {
    n: u8,
    entries: Box<[FieldElem]>,
}

impl fmt::Debug for ProjMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<u32>> = self.rows().map(|r| r.iter().map(|c| c.encoding()).collect()).collect();
        write!(f, "ProjMat{rows:?}")
    }
}

impl Serialize for ProjMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<u32>> = self.rows().map(|r| r.iter().map(|c| c.encoding()).collect()).collect();
        rows.serialize(s)
    }
}

impl ProjMat {
    /// Normalizes a row-major `n × n` matrix; rejects singular input.
    pub fn new(f: &Field, n: usize, entries: Vec<FieldElem>) -> Result<ProjMat, GroupError> {
        if entries.len() != n * n {
            return Err(GroupError::DimensionMismatch);
        }
        let m = ProjMat::normalized(f, n, entries).ok_or(GroupError::Singular)?;
        if m.det(f).is_zero() {
            return Err(GroupError::Singular);
        }
        Ok(m)
    }

    /// Builds a matrix from integer rows, reading entries in the prime subfield.
    pub fn from_ints(f: &Field, rows: &[&[i64]]) -> Result<ProjMat, GroupError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::DimensionMismatch);
        }
        ProjMat::new(
            f,
            n,
            rows.iter().flat_map(|r| r.iter().map(|&x| f.from_int(x))).collect(),
        )
    }

    /// Builds a matrix from rows of field elements.
    pub fn from_rows(f: &Field, rows: &[Vec<FieldElem>]) -> Result<ProjMat, GroupError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::DimensionMismatch);
        }
        ProjMat::new(f, n, rows.concat())
    }

    fn normalized(f: &Field, n: usize, entries: Vec<FieldElem>) -> Option<ProjMat> {
        let entries = normalize(f, &entries)?;
        Some(ProjMat {
            n: n as u8,
            entries: entries.into_boxed_slice(),
        })
    }

    pub fn identity(n: usize) -> ProjMat {
        let mut e = vec![FieldElem::ZERO; n * n];
        for i in 0..n {
            e[i * n + i] = FieldElem::ONE;
        }
        ProjMat {
            n: n as u8,
            entries: e.into_boxed_slice(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElem {
        self.entries[i * self.n as usize + j]
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[FieldElem]> {
        self.entries.chunks(self.n as usize)
    }

    pub fn is_identity(&self) -> bool {
        *self == ProjMat::identity(self.dim())
    }

    pub fn mul(&self, f: &Field, other: &ProjMat) -> ProjMat {
        let n = self.dim();
        debug_assert_eq!(n, other.dim());
        let mut out = vec![FieldElem::ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.entries[k * n + j];
                    if !b.is_zero() {
                        out[i * n + j] = f.add(out[i * n + j], f.mul(a, b));
                    }
                }
            }
        }
        ProjMat::normalized(f, n, out).expect("product of nonsingular matrices")
    }

    pub fn inverse(&self, f: &Field) -> ProjMat {
        let n = self.dim();
        let mut a: Vec<Vec<FieldElem>> = self.rows().map(|r| r.to_vec()).collect();
        let mut inv: Vec<Vec<FieldElem>> = ProjMat::identity(n).rows().map(|r| r.to_vec()).collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular");
            a.swap(col, piv);
            inv.swap(col, piv);
            let s = f.inv(a[col][col]).expect("pivot nonzero");
            for j in 0..n {
                a[col][j] = f.mul(a[col][j], s);
                inv[col][j] = f.mul(inv[col][j], s);
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col];
                for j in 0..n {
                    a[r][j] = f.sub(a[r][j], f.mul(factor, a[col][j]));
                    inv[r][j] = f.sub(inv[r][j], f.mul(factor, inv[col][j]));
                }
            }
        }
        ProjMat::normalized(f, n, inv.concat()).expect("nonsingular")
    }

    pub fn transpose(&self) -> Vec<FieldElem> {
        let n = self.dim();
        (0..n * n).map(|idx| self.entry(idx % n, idx / n)).collect()
    }

    /// Determinant of the normalized representative.
    pub fn det(&self, f: &Field) -> FieldElem {
        let n = self.dim();
        let mut a: Vec<Vec<FieldElem>> = self.rows().map(|r| r.to_vec()).collect();
        let mut det = FieldElem::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return FieldElem::ZERO;
            };
            if piv != col {
                a.swap(col, piv);
                det = f.neg(det);
            }
            det = f.mul(det, a[col][col]);
            let s = f.inv(a[col][col]).expect("pivot nonzero");
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = f.mul(a[r][col], s);
                for j in col..n {
                    a[r][j] = f.sub(a[r][j], f.mul(factor, a[col][j]));
                }
            }
        }
        det
    }

    /// Column action `v ↦ M v` (not normalized).
    pub fn apply(&self, f: &Field, v: &[FieldElem]) -> Vector {
        self.rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(FieldElem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// `M⁻¹ N M`.
    pub fn conjugate_by(&self, f: &Field, by: &ProjMat) -> ProjMat {
        by.inverse(f).mul(f, self).mul(f, by)
    }
}

/// `a⁻¹ b⁻¹ a b`.
pub fn commutator(f: &Field, a: &ProjMat, b: &ProjMat) -> ProjMat {
    a.inverse(f).mul(f, &b.inverse(f)).mul(f, a).mul(f, b)
}

/// A finite group of projective matrices, stored as its sorted element list.
#[derive(Clone)]
pub struct FinGroup {
    field: Arc<Field>,
    n: usize,
    generators: Vec<ProjMat>,
    elements: Vec<ProjMat>,
    index: HashMap<ProjMat, u32>,
}

impl fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinGroup")
            .field("order", &self.order())
            .field("dim", &self.n)
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for FinGroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for FinGroup {}

/// Closes `gens` under multiplication by breadth-first search.
pub fn generate(field: &Arc<Field>, n: usize, gens: &[ProjMat], max_order: usize) -> Result<FinGroup, GroupError> {
    if gens.iter().any(|g| g.dim() != n) {
        return Err(GroupError::DimensionMismatch);
    }
    let f = field.as_ref();
    let id = ProjMat::identity(n);
    let mut seen: HashSet<ProjMat> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    let gens: Vec<ProjMat> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            let p = e.mul(f, g);
            if !seen.contains(&p) {
                if seen.len() >= max_order {
                    return Err(GroupError::GroupTooLarge(max_order));
                }
                seen.insert(p.clone());
                queue.push_back(p);
            }
        }
    }
    let mut elements: Vec<ProjMat> = seen.into_iter().collect();
    elements.sort();
    Ok(FinGroup::from_sorted(field.clone(), n, gens, elements))
}

impl FinGroup {
    fn from_sorted(field: Arc<Field>, n: usize, generators: Vec<ProjMat>, elements: Vec<ProjMat>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        FinGroup {
            field,
            n,
            generators,
            elements,
            index,
        }
    }

    /// Wraps a set already known to be closed; generators are chosen greedily
    /// in element order.
    pub fn from_closed_elements(field: Arc<Field>, n: usize, mut elements: Vec<ProjMat>) -> FinGroup {
        elements.sort();
        elements.dedup();
        let gens = greedy_generators(&field, n, &elements);
        FinGroup::from_sorted(field, n, gens, elements)
    }

    pub fn trivial(field: Arc<Field>, n: usize) -> FinGroup {
        FinGroup::from_sorted(field, n, Vec::new(), vec![ProjMat::identity(n)])
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ProjMat] {
        &self.elements
    }

    pub fn generators(&self) -> &[ProjMat] {
        &self.generators
    }

    pub fn contains(&self, m: &ProjMat) -> bool {
        self.index.contains_key(m)
    }

    pub fn index_of(&self, m: &ProjMat) -> Option<usize> {
        self.index.get(m).map(|&i| i as usize)
    }

    pub fn mul(&self, a: &ProjMat, b: &ProjMat) -> ProjMat {
        a.mul(&self.field, b)
    }

    /// Subgroup generated by `gens` (which must lie in this group for the
    /// result to be a subgroup).
    pub fn subgroup(&self, gens: &[ProjMat]) -> Result<FinGroup, GroupError> {
        generate(&self.field, self.n, gens, self.order().max(1))
    }

    pub fn is_subgroup_of(&self, other: &FinGroup) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    pub fn intersection(&self, other: &FinGroup) -> FinGroup {
        let (small, large) = if self.order() <= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        let common: Vec<ProjMat> = small.elements.iter().filter(|e| large.contains(e)).cloned().collect();
        FinGroup::from_closed_elements(self.field.clone(), self.n, common)
    }

    pub fn element_order(&self, m: &ProjMat) -> u64 {
        let f = self.field.as_ref();
        let mut acc = m.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc.mul(f, m);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        self.elements
            .iter()
            .fold(1u64, |acc, e| acc.lcm(&self.element_order(e)))
    }

    /// Number of elements of each order, sorted by order.
    pub fn element_order_counts(&self) -> Vec<(u64, u64)> {
        let mut counts: HashMap<u64, u64> = HashMap::new();
        for e in &self.elements {
            *counts.entry(self.element_order(e)).or_default() += 1;
        }
        let mut v: Vec<_> = counts.into_iter().collect();
        v.sort();
        v
    }

    pub fn commutes(&self, a: &ProjMat, b: &ProjMat) -> bool {
        a.mul(&self.field, b) == b.mul(&self.field, a)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| self.commutes(&g[i], &g[j])))
    }

    /// Elements commuting with every element of `set` (given by generators).
    pub fn centralizer_of(&self, set: &[ProjMat]) -> FinGroup {
        let elems: Vec<ProjMat> = self
            .elements
            .iter()
            .filter(|e| set.iter().all(|s| self.commutes(e, s)))
            .cloned()
            .collect();
        FinGroup::from_closed_elements(self.field.clone(), self.n, elems)
    }

    pub fn center(&self) -> FinGroup {
        self.centralizer_of(&self.generators)
    }

    /// Smallest normal subgroup containing `gens`.
    pub fn normal_closure(&self, gens: &[ProjMat]) -> FinGroup {
        let f = self.field.as_ref();
        let mut ngens: Vec<ProjMat> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut sub = generate(&self.field, self.n, &ngens, self.order()).expect("inside group");
        loop {
            let mut grew = false;
            let snapshot = ngens.clone();
            for x in &snapshot {
                for g in &self.generators {
                    let c = x.conjugate_by(f, g);
                    if !sub.contains(&c) {
                        ngens.push(c);
                        sub = generate(&self.field, self.n, &ngens, self.order()).expect("inside group");
                        grew = true;
                    }
                }
            }
            if !grew {
                return sub;
            }
        }
    }

    /// `[A, B]` for subgroups `A`, `B` with `B` normal, as the normal closure of
    /// generator commutators.
    pub fn commutator_subgroup(&self, a: &FinGroup, b: &FinGroup) -> FinGroup {
        let f = self.field.as_ref();
        let comms: Vec<ProjMat> = a
            .generators
            .iter()
            .flat_map(|x| b.generators.iter().map(move |y| commutator(f, x, y)))
            .collect();
        self.normal_closure(&comms)
    }

    pub fn derived_subgroup(&self) -> FinGroup {
        self.commutator_subgroup(self, self)
    }

    /// Terms `G = γ₁ > γ₂ > …` of the lower central series until it stabilizes.
    pub fn lower_central_series(&self) -> Vec<FinGroup> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.commutator_subgroup(self, last);
            if next.order() == last.order() {
                return series;
            }
            let done = next.order() == 1;
            series.push(next);
            if done {
                return series;
            }
        }
    }

    /// Nilpotency class, or `None` if the group is not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let series = self.lower_central_series();
        (series.last().unwrap().order() == 1).then(|| series.len() - 1)
    }

    pub fn is_normal_in(&self, ambient: &FinGroup) -> Result<bool, GroupError> {
        if !self.is_subgroup_of(ambient) {
            return Err(GroupError::NotSubgroup);
        }
        let f = self.field.as_ref();
        Ok(self
            .generators
            .iter()
            .all(|x| ambient.generators.iter().all(|g| self.contains(&x.conjugate_by(f, g)))))
    }

    /// Abelian invariants in invariant-factor form `d₁ | d₂ | …`, ascending;
    /// `None` for nonabelian groups.
    pub fn abelian_invariant_factors(&self) -> Option<Vec<u64>> {
        if !self.is_abelian() {
            return None;
        }
        let mut order = self.order() as u64;
        let mut by_prime: Vec<Vec<u64>> = Vec::new();
        let mut r = 2u64;
        while order > 1 {
            if !order.is_multiple_of(r) {
                r += 1;
                continue;
            }
            while order.is_multiple_of(r) {
                order /= r;
            }
            // |Ω_k| for k = 0, 1, … until the r-part is exhausted.
            let mut omegas = vec![1u64];
            let mut k = 1u32;
            loop {
                let rk = r.pow(k);
                let count = self.elements.iter().filter(|e| rk.is_multiple_of(self.element_order(e))).count() as u64;
                if count == *omegas.last().unwrap() {
                    break;
                }
                omegas.push(count);
                k += 1;
            }
            // Number of cyclic factors of order ≥ r^k is log_r(|Ω_k| / |Ω_{k−1}|).
            let ge: Vec<u32> = omegas.windows(2).map(|w| ilog(w[1] / w[0], r)).collect();
            let mut divisors = Vec::new();
            for (i, &cnt) in ge.iter().enumerate() {
                let next = ge.get(i + 1).copied().unwrap_or(0);
                for _ in 0..cnt - next {
                    divisors.push(r.pow(i as u32 + 1));
                }
            }
            divisors.sort_unstable_by(|a, b| b.cmp(a));
            by_prime.push(divisors);
        }
        let len = by_prime.iter().map(Vec::len).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..len)
            .map(|i| by_prime.iter().map(|d| d.get(i).copied().unwrap_or(1)).product())
            .collect();
        factors.reverse();
        Some(factors)
    }

    fn check_lattice_size(&self) -> Result<(), GroupError> {
        if self.order() > MAX_LATTICE_ORDER {
            return Err(GroupError::GroupTooLarge(MAX_LATTICE_ORDER));
        }
        Ok(())
    }

    /// All maximal abelian subgroups, found by extending abelian subgroups that
    /// contain the center one centralizing element at a time.
    pub fn maximal_abelian_subgroups(&self) -> Result<Vec<FinGroup>, GroupError> {
        self.check_lattice_size()?;
        let seed: Vec<usize> = self.center().elements.iter().map(|e| self.index[e] as usize).collect();
        self.maximal_abelian_search(seed, |_| true)
    }

    /// All maximal elementary abelian p-subgroups of a p-group.
    pub fn maximal_elementary_abelian_subgroups(&self) -> Result<Vec<FinGroup>, GroupError> {
        self.check_lattice_size()?;
        let p = smallest_prime_factor(self.order() as u64);
        let seed: Vec<usize> = self
            .center()
            .elements
            .iter()
            .filter(|e| self.element_order(e) <= p)
            .map(|e| self.index[e] as usize)
            .collect();
        let orders: Vec<u64> = self.elements.iter().map(|e| self.element_order(e)).collect();
        self.maximal_abelian_search(seed, |i| orders[i] <= p)
    }

    fn maximal_abelian_search<P>(&self, seed: Vec<usize>, admissible: P) -> Result<Vec<FinGroup>, GroupError>
    where
        P: Fn(usize) -> bool,
    {
        let f = self.field.as_ref();
        let n = self.order();
        let to_bits = |idx: &[usize]| {
            let mut b = FixedBitSet::with_capacity(n);
            idx.iter().for_each(|&i| b.insert(i));
            b
        };
        let mut visited: HashSet<FixedBitSet> = HashSet::new();
        let mut maximal: Vec<FixedBitSet> = Vec::new();
        let start = to_bits(&seed);
        visited.insert(start.clone());
        let mut stack = vec![start];
        while let Some(cur) = stack.pop() {
            let members: Vec<usize> = cur.ones().collect();
            let gens: Vec<&ProjMat> = greedy_generators_idx(self, &members)
                .into_iter()
                .map(|i| &self.elements[i])
                .collect();
            let candidates: Vec<usize> = (0..n)
                .filter(|&i| !cur.contains(i) && admissible(i))
                .filter(|&i| gens.iter().all(|g| self.commutes(&self.elements[i], g)))
                .collect();
            if candidates.is_empty() {
                maximal.push(cur);
                continue;
            }
            for c in candidates {
                // ⟨A, g⟩ = ⋃ A·g^k since g centralizes A.
                let g = &self.elements[c];
                let mut ext = cur.clone();
                let mut power = g.clone();
                while !cur.contains(self.index[&power] as usize) {
                    for &a in &members {
                        ext.insert(self.index[&self.elements[a].mul(f, &power)] as usize);
                    }
                    power = power.mul(f, g);
                }
                if visited.insert(ext.clone()) {
                    if visited.len() > SUBGROUP_SEARCH_BUDGET {
                        return Err(GroupError::GroupTooLarge(SUBGROUP_SEARCH_BUDGET));
                    }
                    stack.push(ext);
                }
            }
        }
        maximal.sort_by_key(|b| b.ones().collect::<Vec<_>>());
        Ok(maximal
            .into_iter()
            .map(|b| {
                let elems = b.ones().map(|i| self.elements[i].clone()).collect();
                FinGroup::from_closed_elements(self.field.clone(), self.n, elems)
            })
            .collect())
    }

    /// The invariant record used to distinguish groups.
    pub fn invariants(&self) -> Result<GroupInvariants, GroupError> {
        self.check_lattice_size()?;
        let is_abelian = self.is_abelian();
        let mut profile: Vec<u64> = self
            .maximal_abelian_subgroups()?
            .iter()
            .map(|a| a.order() as u64)
            .collect();
        profile.sort_unstable();
        let order = self.order() as u64;
        let is_prime_power = {
            let p = smallest_prime_factor(order);
            order == 1 || p.pow(ilog(order, p)) == order
        };
        Ok(GroupInvariants {
            order,
            exponent: self.exponent(),
            center_order: self.center().order() as u64,
            derived_order: self.derived_subgroup().order() as u64,
            is_abelian,
            abelian_invariant_factors: self.abelian_invariant_factors(),
            nilpotency_class: if is_prime_power { self.nilpotency_class() } else { None },
            max_abelian_profile: profile,
            element_orders: self.element_order_counts(),
        })
    }
}

fn ilog(mut x: u64, base: u64) -> u32 {
    let mut k = 0;
    while x > 1 {
        x /= base;
        k += 1;
    }
    k
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..=n).find(|d| n.is_multiple_of(*d)).unwrap_or(1)
}

fn greedy_generators(field: &Arc<Field>, n: usize, elements: &[ProjMat]) -> Vec<ProjMat> {
    let mut gens = Vec::new();
    let mut span: HashSet<ProjMat> = HashSet::from([ProjMat::identity(n)]);
    for e in elements {
        if span.contains(e) {
            continue;
        }
        gens.push(e.clone());
        let g = generate(field, n, &gens, elements.len().max(1)).expect("subset of a closed set");
        span = g.elements.into_iter().collect();
        if span.len() == elements.len() {
            break;
        }
    }
    gens
}

/// Greedy generators of the subgroup with the given element indices.
fn greedy_generators_idx(g: &FinGroup, members: &[usize]) -> Vec<usize> {
    let elems: Vec<ProjMat> = members.iter().map(|&i| g.elements[i].clone()).collect();
    greedy_generators(&g.field, g.n, &elems)
        .into_iter()
        .map(|m| g.index[&m] as usize)
        .collect()
}

/// Isomorphism invariants of a finite group. Unequal records prove the groups
/// non-isomorphic; equal records are inconclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupInvariants {
    pub order: u64,
    pub exponent: u64,
    pub center_order: u64,
    pub derived_order: u64,
    pub is_abelian: bool,
    pub abelian_invariant_factors: Option<Vec<u64>>,
    pub nilpotency_class: Option<usize>,
    pub max_abelian_profile: Vec<u64>,
    pub element_orders: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FingerprintComparison {
    /// The named invariant differs, so the groups are not isomorphic.
    NonIsomorphic(&'static str),
    /// Every implemented invariant agrees.
    Indistinguishable,
}

pub fn fingerprint_compare(a: &GroupInvariants, b: &GroupInvariants) -> FingerprintComparison {
    use FingerprintComparison::*;
    if a.order != b.order {
        NonIsomorphic("order")
    } else if a.is_abelian != b.is_abelian {
        NonIsomorphic("is_abelian")
    } else if a.exponent != b.exponent {
        NonIsomorphic("exponent")
    } else if a.center_order != b.center_order {
        NonIsomorphic("center_order")
    } else if a.derived_order != b.derived_order {
        NonIsomorphic("derived_order")
    } else if a.abelian_invariant_factors != b.abelian_invariant_factors {
        NonIsomorphic("abelian_invariant_factors")
    } else if a.nilpotency_class != b.nilpotency_class {
        NonIsomorphic("nilpotency_class")
    } else if a.element_orders != b.element_orders {
        NonIsomorphic("element_orders")
    } else if a.max_abelian_profile != b.max_abelian_profile {
        NonIsomorphic("max_abelian_profile")
    } else {
        Indistinguishable
    }
}

pub fn fingerprint_equal(a: &GroupInvariants, b: &GroupInvariants) -> bool {
    fingerprint_compare(a, b) == FingerprintComparison::Indistinguishable
}

/// A group action on `0..npoints`, recorded through generator permutations,
/// the image of point 0 under every element, and the kernel.
#[derive(Debug, Clone)]
pub struct Action {
    npoints: usize,
    generator_perms: Vec<Vec<u32>>,
    base_images: Vec<u32>,
    kernel: Vec<u32>,
}

/// Registers the action of `g` given by `image(element, point)`, which returns
/// `None` when the point leaves the set.
pub fn act<F>(g: &FinGroup, npoints: usize, image: F) -> Result<Action, GroupError>
where
    F: Fn(&ProjMat, usize) -> Option<usize> + Sync,
{
    use rayon::prelude::*;
    let mut generator_perms = Vec::with_capacity(g.generators.len());
    for (gi, gen) in g.generators.iter().enumerate() {
        let perm: Result<Vec<u32>, GroupError> = (0..npoints)
            .into_par_iter()
            .map(|p| {
                image(gen, p).map(|x| x as u32).ok_or(GroupError::NotInvariant {
                    generator: gi,
                    point: p,
                })
            })
            .collect();
        generator_perms.push(perm?);
    }
    let base_images: Vec<u32> = g
        .elements
        .par_iter()
        .map(|e| {
            image(e, 0).map(|x| x as u32).ok_or(GroupError::NotInvariant {
                generator: usize::MAX,
                point: 0,
            })
        })
        .collect::<Result<_, _>>()?;
    let kernel: Vec<u32> = (0..g.order())
        .into_par_iter()
        .filter(|&i| base_images[i] == 0 && (1..npoints).all(|p| image(&g.elements[i], p) == Some(p)))
        .map(|i| i as u32)
        .collect();
    Ok(Action {
        npoints,
        generator_perms,
        base_images,
        kernel,
    })
}

/// Normalized point coordinates with a lookup table, for projective actions.
#[derive(Debug, Clone)]
pub struct PointSet {
    points: Vec<Vector>,
    index: HashMap<Vector, usize>,
}

impl PointSet {
    /// Points must be given in normalized form.
    pub fn new(points: Vec<Vector>) -> PointSet {
        let index = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        PointSet { points, index }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn index_of(&self, f: &Field, v: &[FieldElem]) -> Option<usize> {
        self.index.get(&normalize(f, v)?).copied()
    }
}

/// The projective action of `g` on a point set.
pub fn act_on_points(g: &FinGroup, pts: &PointSet) -> Result<Action, GroupError> {
    let f = g.field.clone();
    act(g, pts.len(), |m, p| pts.index_of(&f, &m.apply(&f, &pts.points[p])))
}

/// Evidence that an action is regular: `images[i]` is the image of point 0
/// under the i-th element, and all images are distinct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharpCertificate {
    pub images: Vec<u32>,
}

impl Action {
    pub fn npoints(&self) -> usize {
        self.npoints
    }

    pub fn generator_perms(&self) -> &[Vec<u32>] {
        &self.generator_perms
    }

    pub fn base_images(&self) -> &[u32] {
        &self.base_images
    }

    pub fn kernel_order(&self) -> usize {
        self.kernel.len()
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel.len() == 1
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = FixedBitSet::with_capacity(self.npoints);
        seen.insert(point);
        let mut queue = VecDeque::from([point]);
        let mut out = vec![point];
        while let Some(p) = queue.pop_front() {
            for perm in &self.generator_perms {
                let q = perm[p] as usize;
                if !seen.contains(q) {
                    seen.insert(q);
                    out.push(q);
                    queue.push_back(q);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = FixedBitSet::with_capacity(self.npoints);
        let mut out = Vec::new();
        for p in 0..self.npoints {
            if !seen.contains(p) {
                let o = self.orbit(p);
                o.iter().for_each(|&x| seen.insert(x));
                out.push(o);
            }
        }
        out
    }

    /// Regularity: as many elements as points, and point 0 has as many distinct
    /// images as there are elements.
    pub fn sharply_transitive(&self) -> Option<SharpCertificate> {
        if self.base_images.len() != self.npoints {
            return None;
        }
        let mut seen = FixedBitSet::with_capacity(self.npoints);
        for &i in &self.base_images {
            if seen.contains(i as usize) {
                return None;
            }
            seen.insert(i as usize);
        }
        if self.orbit(0).len() != self.npoints {
            return None;
        }
        Some(SharpCertificate {
            images: self.base_images.clone(),
        })
    }

    pub fn is_sharply_transitive(&self) -> bool {
        self.sharply_transitive().is_some()
    }
}

/// The induced action of `G/N` when `N` is a normal subgroup acting trivially.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientAction {
    pub order: usize,
    pub faithful: bool,
    pub transitive: bool,
    pub sharply_transitive: bool,
}

pub fn quotient_action(g: &FinGroup, n: &FinGroup, action: &Action) -> Result<QuotientAction, GroupError> {
    if !n.is_normal_in(g)? {
        return Err(GroupError::NotNormal);
    }
    let kernel: HashSet<&ProjMat> = action.kernel.iter().map(|&i| &g.elements[i as usize]).collect();
    if !n.elements.iter().all(|e| kernel.contains(e)) {
        return Err(GroupError::NotInKernel);
    }
    let order = g.order() / n.order();
    let transitive = action.orbit(0).len() == action.npoints;
    Ok(QuotientAction {
        order,
        faithful: kernel.len() == n.order(),
        transitive,
        sharply_transitive: transitive && order == action.npoints && kernel.len() == n.order(),
    })
}

/// `(|PGL_n(q)|, |PSL_n(q)|)`.
pub fn psl_pgl_order(n: u32, q: u64) -> (BigUint, BigUint) {
    let qb = BigUint::from(q);
    let mut gl = BigUint::from(1u32);
    for i in 0..n {
        gl *= qb.pow(n) - qb.pow(i);
    }
    let pgl = gl / BigUint::from(q - 1);
    let d = (n as u64).gcd(&(q - 1));
    let psl = &pgl / BigUint::from(d);
    (pgl, psl)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u32) -> Arc<Field> {
        Arc::new(Field::of_order(q).unwrap())
    }

    fn unitriangular(f: &Field, a: FieldElem, b: FieldElem, c: FieldElem) -> ProjMat {
        let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
        ProjMat::new(f, 3, vec![o, a, c, z, o, b, z, z, o]).unwrap()
    }

    fn heisenberg(q: u32) -> FinGroup {
        let f = field(q);
        let z = FieldElem::ZERO;
        let mut gens = Vec::new();
        for i in 0..f.h() {
            let b = f.basis_element(i);
            gens.push(unitriangular(&f, b, z, z));
            gens.push(unitriangular(&f, z, b, z));
        }
        generate(&f, 3, &gens, 1 << 16).unwrap()
    }

    #[test]
    fn normalization_collapses_scalars() {
        let f = field(5);
        let a = ProjMat::from_ints(&f, &[&[2, 4], &[0, 2]]).unwrap();
        let b = ProjMat::from_ints(&f, &[&[1, 2], &[0, 1]]).unwrap();
        assert_eq!(a, b);
        assert!(ProjMat::from_ints(&f, &[&[1, 2], &[2, 4]]).is_err());
        let inv = a.inverse(&f);
        assert!(a.mul(&f, &inv).is_identity());
    }

    #[test]
    fn trivial_and_small_groups() {
        let f = field(3);
        let g = generate(&f, 2, &[ProjMat::identity(2)], 10).unwrap();
        assert_eq!(g.order(), 1);
        let h = heisenberg(3);
        assert_eq!(h.order(), 27);
        assert_eq!(h.center().order(), 3);
        assert_eq!(h.exponent(), 3);
        assert_eq!(h.derived_subgroup().order(), 3);
        assert_eq!(h.nilpotency_class(), Some(2));
        assert!(matches!(
            generate(&f, 3, h.generators(), 10),
            Err(GroupError::GroupTooLarge(10))
        ));
    }

    #[test]
    fn heisenberg_maximal_abelians() {
        let h5 = heisenberg(5);
        let max = h5.maximal_abelian_subgroups().unwrap();
        assert_eq!(max.len(), 6);
        assert!(max.iter().all(|m| m.order() == 25 && m.exponent() == 5));
        let h4 = heisenberg(4);
        let el = h4.maximal_elementary_abelian_subgroups().unwrap();
        assert_eq!(el.len(), 2);
        assert!(el.iter().all(|m| m.order() == 16));
    }

    #[test]
    fn closure_is_independent_of_generator_order() {
        let h = heisenberg(4);
        let mut rev = h.generators().to_vec();
        rev.reverse();
        let h2 = generate(h.field(), 3, &rev, 1 << 10).unwrap();
        assert_eq!(h, h2);
        let inv_a = h.invariants().unwrap();
        let inv_b = h2.invariants().unwrap();
        assert!(fingerprint_equal(&inv_a, &inv_b));
    }

    #[test]
    fn abelian_invariants() {
        // Diagonal matrices diag(1, a) over GF(7): cyclic of order 6.
        let f = field(7);
        let g = generate(&f, 2, &[ProjMat::from_ints(&f, &[&[1, 0], &[0, 3]]).unwrap()], 100).unwrap();
        assert_eq!(g.abelian_invariant_factors(), Some(vec![6]));
        // Translations over GF(9): elementary abelian of order 9.
        let f9 = field(9);
        let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
        let t = |a| ProjMat::new(&f9, 2, vec![o, a, z, o]).unwrap();
        let g = generate(&f9, 2, &[t(f9.basis_element(0)), t(f9.basis_element(1))], 100).unwrap();
        assert_eq!(g.abelian_invariant_factors(), Some(vec![3, 3]));
        assert_eq!(heisenberg(3).abelian_invariant_factors(), None);
    }

    #[test]
    fn dihedral_point_stabilizer_is_not_normal() {
        // PGL(2,2) ≅ S₃ acting on the three points of PG(1,2).
        let f = field(2);
        let s = ProjMat::from_ints(&f, &[&[0, 1], &[1, 0]]).unwrap();
        let r = ProjMat::from_ints(&f, &[&[1, 1], &[1, 0]]).unwrap();
        let g = generate(&f, 2, &[s.clone(), r], 10).unwrap();
        assert_eq!(g.order(), 6);
        let stab = g.subgroup(&[s]).unwrap();
        assert_eq!(stab.is_normal_in(&g), Ok(false));
        assert_eq!(g.is_normal_in(&g), Ok(true));
        assert_eq!(g.derived_subgroup().order(), 3);
        assert_eq!(g.nilpotency_class(), None);
    }

    #[test]
    fn translations_act_regularly() {
        // Translations of AG(3,2) as 4×4 matrices on affine points (x, 1).
        let f = field(2);
        let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
        let mut gens = Vec::new();
        for i in 0..3 {
            let mut e = vec![z; 16];
            for d in 0..4 {
                e[d * 4 + d] = o;
            }
            e[i * 4 + 3] = o;
            gens.push(ProjMat::new(&f, 4, e).unwrap());
        }
        let g = generate(&f, 4, &gens, 100).unwrap();
        let pts: Vec<Vector> = (0..8u32)
            .map(|m| {
                vec![
                    FieldElem::from_encoding(m & 1),
                    FieldElem::from_encoding((m >> 1) & 1),
                    FieldElem::from_encoding(m >> 2),
                    o,
                ]
            })
            .map(|v| normalize(&f, &v).unwrap())
            .collect();
        let ps = PointSet::new(pts);
        let action = act_on_points(&g, &ps).unwrap();
        assert!(action.is_faithful());
        assert_eq!(action.orbits().len(), 1);
        assert!(action.is_sharply_transitive());
        let half = g.subgroup(&gens[..2]).unwrap();
        assert!(!act_on_points(&half, &ps).unwrap().is_sharply_transitive());
    }

    #[test]
    fn pgl_psl_orders() {
        let (pgl, psl) = psl_pgl_order(2, 3);
        assert_eq!((pgl, psl), (BigUint::from(24u32), BigUint::from(12u32)));
        let (pgl, psl) = psl_pgl_order(4, 3);
        assert_eq!(pgl / psl, BigUint::from(2u32));
        let (pgl, psl) = psl_pgl_order(4, 4);
        assert_eq!(pgl, psl);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn random_subgroups_of_h5(idx in prop::collection::vec(0usize..125, 1..4)) {
                let h = heisenberg(5);
                let gens: Vec<ProjMat> = idx.iter().map(|&i| h.elements()[i].clone()).collect();
                let sub = h.subgroup(&gens).unwrap();
                prop_assert_eq!(h.order() % sub.order(), 0);
                if sub.order() > 1 {
                    prop_assert!(sub.center().order() > 1);
                }
                let c = h.centralizer_of(&gens);
                prop_assert!(gens.iter().all(|g| c.elements().iter().all(|x| h.commutes(g, x))));
            }
        }
    }
}
