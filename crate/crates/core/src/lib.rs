//! Exact twisted cohomology of simplicial complexes with an integral class
//! `xi`: Novikov numbers, the deformation spectral sequence and its survivor
//! classes, and cup-length lower bounds for critical points of closed 1-forms.

pub mod algebra;
pub mod checks;
pub mod complexes;
pub mod corpus;
pub mod cuplen;
pub mod linalg;
pub mod massey;
pub mod novikov;
pub mod pidmod;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("{0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub use algebra::{
    EuclideanRing, Field, FieldKind, FieldSpec, FiniteField, Gf, LaurentPoly, LaurentRing, Poly,
    PolyRing, Rationals, Ring,
};

/// `Q[tau]`
pub type QPoly = PolyRing<Rationals>;
/// `Q[tau, tau^-1]`
pub type QLaurent = LaurentRing<Rationals>;
/// `F_q[tau]`
pub type GfPoly = PolyRing<FiniteField>;
/// `F_q[tau, tau^-1]`
pub type GfLaurent = LaurentRing<FiniteField>;
