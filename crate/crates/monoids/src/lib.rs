//! Finitely generated commutative monoids, in two representations: free
//! presentations (generators and relation pairs) and integral monoids stored
//! as generating sets inside their group completions. The integral form is
//! canonical — every presentation is pushed into it on first use — and all
//! structural operations work there: saturation, units and sharpening,
//! localization, quotients by submonoids, amalgamated sums, divided monoids,
//! exact membership, and structure flags for homomorphisms.

use std::error::Error;
use std::fmt;

mod hom;
mod monoid;
mod ops;
mod presentation;

pub use hom::{hom_properties, split_sharp, HomFlags, MonoidHom};
pub use monoid::{IntegralMonoid, MonoidPredicates, UnitsGroup, DEFAULT_SEARCH_BOUND};
pub use ops::{
    amalgamated_sum, divide, find_isomorphism, is_n_divisible, localize, quotient_by_submonoid,
    saturate, sharpen, toric_embed, AmalgamatedSum, SubmonoidQuotient, SumMode,
};
pub use presentation::{group_completion, integralize, MonoidPresentation};

/// Failure modes of the monoid layer, mirroring the lattice layer's split so
/// callers can tell bad input from exhausted searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonoidError {
    /// Structurally malformed data: ragged vectors, mismatched ambients.
    Shape(String),
    /// A documented precondition does not hold; the message names a witness
    /// where one exists.
    Precondition(String),
    /// A bounded search gave up before finding what provably exists.
    BoundExceeded(String),
}

impl fmt::Display for MonoidError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoidError::Shape(msg) => write!(f, "shape error: {msg}"),
            MonoidError::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            MonoidError::BoundExceeded(msg) => write!(f, "bound exceeded: {msg}"),
        }
    }
}

impl Error for MonoidError {}

impl From<lattice::LatticeError> for MonoidError {
    fn from(e: lattice::LatticeError) -> Self {
        match e {
            lattice::LatticeError::Shape(m) => MonoidError::Shape(m),
            lattice::LatticeError::Precondition(m) => MonoidError::Precondition(m),
            lattice::LatticeError::BoundExceeded(m) => MonoidError::BoundExceeded(m),
        }
    }
}

pub(crate) fn fmt_vec(v: &[num_bigint::BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}
