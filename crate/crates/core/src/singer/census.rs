use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::heisenberg::{enumerate_bl, lift_all, lift_group, line_count, BLCandidate};
use super::SingerError;
use crate::gf::Field;
use crate::matgroup::{generate, FinGroup, ProjMat};

fn t_group(field: &Arc<Field>, cand: &BLCandidate) -> Result<FinGroup, SingerError> {
    let q = field.q() as usize;
    Ok(generate(field, 3, &cand.t_generators(field)?, q * q)?)
}

/// Candidates of B(ℓ) whose group T, equivalently S/𝕊, is abelian.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianQuotientCounts {
    pub q: u32,
    pub line: usize,
    pub total: usize,
    pub abelian: usize,
    pub abelian_indices: Vec<u64>,
}

pub fn classify_abelian_quotients(field: &Arc<Field>, line: usize) -> Result<AbelianQuotientCounts, SingerError> {
    let cands = enumerate_bl(field, line)?;
    let flags: Vec<bool> = cands
        .par_iter()
        .map(|c| t_group(field, c).map(|t| t.is_abelian()))
        .collect::<Result<_, _>>()?;
    let abelian_indices: Vec<u64> = cands
        .iter()
        .zip(&flags)
        .filter(|(_, &a)| a)
        .map(|(c, _)| c.index)
        .collect();
    Ok(AbelianQuotientCounts {
        q: field.q(),
        line,
        total: cands.len(),
        abelian: abelian_indices.len(),
        abelian_indices,
    })
}

/// Number of lifts from line `l1` whose element set equals a lift from `l2`.
pub fn cross_line_overlap(field: &Arc<Field>, l1: usize, l2: usize) -> Result<usize, SingerError> {
    let first = lift_all(field, l1)?;
    let second: HashSet<Vec<ProjMat>> = lift_all(field, l2)?
        .into_iter()
        .map(|g| g.elements().to_vec())
        .collect();
    Ok(first.iter().filter(|g| second.contains(g.elements())).count())
}

/// `(q + 1)(p^{h²} − 1) − ((q + 1)(q − 1))^{p mod 2}`.
pub fn total_count(field: &Field) -> BigInt {
    let (p, h, q) = (BigInt::from(field.p()), field.h(), BigInt::from(field.q()));
    let one = BigInt::from(1);
    let first = (&q + &one) * (p.pow(h * h) - &one);
    let second = if field.p() % 2 == 1 {
        (&q + &one) * (&q - &one)
    } else {
        one
    };
    first - second
}

/// Distinct lifted groups with nonabelian S/𝕊, collected over all q + 1 lines.
pub fn explicit_total_count(field: &Arc<Field>) -> Result<usize, SingerError> {
    let mut seen: HashSet<Vec<ProjMat>> = HashSet::new();
    for line in 0..line_count(field) {
        let cands = enumerate_bl(field, line)?;
        let groups: Vec<Option<FinGroup>> = cands
            .par_iter()
            .map(|c| -> Result<Option<FinGroup>, SingerError> {
                if t_group(field, c)?.is_abelian() {
                    Ok(None)
                } else {
                    lift_group(field, c).map(Some)
                }
            })
            .collect::<Result<_, _>>()?;
        seen.extend(groups.into_iter().flatten().map(|g| g.elements().to_vec()));
    }
    Ok(seen.len())
}

/// Fingerprint census of the p lifts on line 0 for an odd prime p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeCensus {
    pub p: u32,
    pub groups: usize,
    pub elementary_abelian: usize,
    /// Nonabelian, exponent p, center and derived subgroup of order p.
    pub heisenberg_fingerprint: usize,
    pub other: usize,
    /// `(exponent, center order, derived order, abelian)` per candidate.
    pub profiles: Vec<(u64, usize, usize, bool)>,
}

pub fn prime_case_census(p: u32) -> Result<PrimeCensus, SingerError> {
    if ![3, 5, 7].contains(&p) {
        return Err(SingerError::BadPrime(p));
    }
    let field = Arc::new(Field::new(p, 1)?);
    let groups = lift_all(&field, 0)?;
    let mut census = PrimeCensus {
        p,
        groups: groups.len(),
        elementary_abelian: 0,
        heisenberg_fingerprint: 0,
        other: 0,
        profiles: Vec::new(),
    };
    for g in &groups {
        let (exp, center, derived, abelian) = (
            g.exponent(),
            g.center().order(),
            g.derived_subgroup().order(),
            g.is_abelian(),
        );
        census.profiles.push((exp, center, derived, abelian));
        if abelian && exp == p as u64 {
            census.elementary_abelian += 1;
        } else if !abelian && exp == p as u64 && center == p as usize && derived == p as usize {
            census.heisenberg_fingerprint += 1;
        } else {
            census.other += 1;
        }
    }
    Ok(census)
}
