//! Cohomology of commuting operator families over finite fields.
//!
//! The covering groups of logarithmic points act on finite coefficient
//! modules through tuples of commuting invertible matrices.  This crate
//! computes that cohomology by finite Koszul complexes and builds the
//! modules that matter for monodromy questions: character lines and the
//! vanishing their annihilators force, fractional weight antichains,
//! Jordan towers and induced cycles, unipotent parts, and the stabilized
//! nearby-cycle dimensions at unipotent and quasi-unipotent level.
//!
//! Coefficients are honest finite fields `F_q`.  That choice trades the
//! torsion coefficient rings of the underlying theory for exact linear
//! algebra: every statement tested here is one that survives the trade.

mod chars;
mod field;
mod koszul;
mod matrix;
mod module;
mod nearby;

pub use chars::{annihilation_check, character_module, s_chi};
pub use field::{Fq, MAX_FIELD_ORDER};
pub use koszul::{cyclic_cohomology, koszul_cohomology, KoszulCohomology, KoszulComplex};
pub use matrix::{
    coordinates_in_span, independent_from, is_invertible, kernel_basis, rank, rref, span_dim,
    FqMatrix,
};
pub use module::{
    jordan_block, jr_module, km_module, restrict, tensor, unipotent_part, GammaModule,
    UnipotentPart,
};
pub use nearby::{
    nearby_quasi_unipotent, nearby_quasi_unipotent_within, nearby_unipotent,
    nearby_unipotent_within, NearbyCycles, DEFAULT_R_MAX,
};

use monoids::MonoidError;

/// Errors shared by the constructions in this crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaError {
    /// Dimensions or lengths that cannot combine.
    Shape(String),
    /// Inputs that violate a mathematical precondition.
    Precondition(String),
    /// A computation that would run past its configured bound.
    BoundExceeded(String),
}

impl std::fmt::Display for GammaError {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GammaError::Shape(msg) => write!(out, "shape error: {msg}"),
            GammaError::Precondition(msg) => write!(out, "precondition violated: {msg}"),
            GammaError::BoundExceeded(msg) => write!(out, "bound exceeded: {msg}"),
        }
    }
}

impl std::error::Error for GammaError {}

impl From<MonoidError> for GammaError {
    fn from(err: MonoidError) -> Self {
        match err {
            MonoidError::Shape(msg) => GammaError::Shape(msg),
            MonoidError::Precondition(msg) => GammaError::Precondition(msg),
            MonoidError::BoundExceeded(msg) => GammaError::BoundExceeded(msg),
        }
    }
}
