//! Simplicial complexes, integral 1-cocycles, flat bundles, twisted cochain
//! complexes over a field, `k[tau]` or `Lambda`, and cut presentations with
//! their deformation complexes.

mod bundle;
mod cocycle;
mod cut;
mod simplicial;
mod twisted;

use std::fmt;

pub use bundle::FlatBundle;
pub use cocycle::IntegralCocycle;
pub use cut::{CutPresentation, DeformationComplex, Gluing};
pub use simplicial::SimplicialComplex;
pub use twisted::{
    cohomology_dims, lambda_twisted_complex, poly_twisted_complex, twisted_complex_over_field, CohomologyBasis,
    EdgeTransport, TwistedComplex,
};

/// One failed check, pointing at the offending simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: &'static str,
    pub simplex: Vec<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(kind: &'static str, simplex: Vec<usize>, message: String) -> Self {
        Diagnostic { kind, simplex, message }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?}: {}", self.kind, self.simplex, self.message)
    }
}
