//! Singer groups of the Payne-derived quadrangle of W(q) and of the hyperoval
//! quadrangles T₂*(ℋ).
//!
//! The crate builds the geometries as explicit incidence structures, realizes
//! the relevant automorphism groups as projective matrix groups, enumerates the
//! Singer groups obtained by lifting Heisenberg subgroups, and emits
//! presentations of the panel-regular lattices assembled from two Singer
//! quadrangles.

#![allow(clippy::needless_range_loop)]

pub mod gf;
pub mod hyperoval;
pub mod incidence;
pub mod lattice;
pub mod matgroup;
pub mod projgeom;
pub mod singer;
pub mod symplectic;

pub use gf::{Field, FieldElem};
