//! Singer groups of the Payne-derived quadrangle 𝒫(q) obtained by lifting
//! subgroups of the Heisenberg group H(ℓ), together with the counting
//! formulas, the commuting-vector invariants and the cohomology bounds that
//! go with them.

mod census;
mod cohomology;
mod heisenberg;
mod partitions;
mod spread;

use thiserror::Error;

use crate::gf::GfError;
use crate::incidence::IncidenceError;
use crate::matgroup::GroupError;
use crate::projgeom::GeomError;
use crate::symplectic::SymplecticError;

pub use census::{
    classify_abelian_quotients, cross_line_overlap, explicit_total_count, prime_case_census, total_count,
    AbelianQuotientCounts, PrimeCensus,
};
pub use cohomology::{fiber_bound, h2_bruteforce, h2_order_paper, schur_multiplier_order, Fraction, MAX_H2_VARIABLES};
pub use heisenberg::{
    enumerate_bl, heisenberg, lift_all, lift_eta, lift_group, lift_matrix, line_conjugator, line_count, line_direction,
    pi_points, quotient_matrix, unitriangular, BLCandidate, HeisenbergModel, SingerGroupRecord, SingerSummary,
    MAX_CANDIDATES, MAX_HEISENBERG_Q,
};
pub use partitions::{hr_estimate, partition_count, partitions, MAX_PARTITION_N};
pub use spread::{
    commuting_vector, directions_of_set, distinct_multisets, even_char_invariant_count, even_char_sampled,
    linear_set_of, partition_witness_search, zeta, CommutingVector, Direction, EvenCharReport, Witness, ZetaReport,
    MAX_ZETA_POINTS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingerError {
    #[error("q = {0} is above the supported range for this operation")]
    GroupTooLarge(u32),
    #[error("{0} candidates exceed the enumeration limit")]
    TooManyCandidates(u64),
    #[error("line index {0} is not a line of Π(x)")]
    BadLine(usize),
    #[error("candidate matrix has the wrong shape or entries outside GF(p)")]
    BadCandidate,
    #[error("lift of candidate {index} on line {line} has order {order}, expected q³")]
    LiftWrongOrder { line: usize, index: u64, order: usize },
    #[error("lift of candidate {index} on line {line} is not sharply transitive on 𝒫(q)")]
    LiftNotSharplyTransitive { line: usize, index: u64 },
    #[error("subgroup does not contain the center of H(ℓ) or has the wrong order")]
    NotContainingCenter,
    #[error("expected a set of {expected} points, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("ambient space has {0} points, above the enumeration limit")]
    SpaceTooLarge(u64),
    #[error("linear system with {0} unknowns is too large")]
    SystemTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("p must be an odd prime in {{3, 5, 7}}, got {0}")]
    BadPrime(u32),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}
