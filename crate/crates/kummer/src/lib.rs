//! Classification machinery for injective finite-index maps of saturated
//! monoids: the Kummer test with witnesses, cokernel data, self-product
//! decompositions, ramification indices, divided factorizations, chart
//! smoothness checks, and the classification of the monoids sitting between
//! a free monoid and a division of it.

use std::error::Error;
use std::fmt;

mod abhyankar;
mod check;
mod decomposition;
mod ramification;
mod smoothness;

pub use abhyankar::{
    abhyankar_classify, AbhyankarEntry, MAX_CLASSIFY_LEVEL, MAX_CLASSIFY_RANK,
};
pub use check::{cokernel_group, is_kummer, KummerClause, KummerData, KummerVerdict};
pub use decomposition::{self_product_decomposition, SelfProductDecomposition};
pub use ramification::{minimal_divided_factorization, ramification_index};
pub use smoothness::{log_differentials_module, log_smooth_chart_check, LogDifferentials};

/// Failure modes of the classification layer, kept in the same three-way
/// split as the crates underneath so bound overruns stay distinguishable
/// from bad input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KummerError {
    /// Structurally malformed data: ragged vectors, mismatched lengths.
    Shape(String),
    /// A documented precondition does not hold; the message names a witness
    /// where one exists.
    Precondition(String),
    /// A bounded search or a capped classification gave up.
    BoundExceeded(String),
}

impl fmt::Display for KummerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KummerError::Shape(msg) => write!(f, "shape error: {msg}"),
            KummerError::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            KummerError::BoundExceeded(msg) => write!(f, "bound exceeded: {msg}"),
        }
    }
}

impl Error for KummerError {}

impl From<lattice::LatticeError> for KummerError {
    fn from(e: lattice::LatticeError) -> Self {
        match e {
            lattice::LatticeError::Shape(m) => KummerError::Shape(m),
            lattice::LatticeError::Precondition(m) => KummerError::Precondition(m),
            lattice::LatticeError::BoundExceeded(m) => KummerError::BoundExceeded(m),
        }
    }
}

impl From<monoids::MonoidError> for KummerError {
    fn from(e: monoids::MonoidError) -> Self {
        match e {
            monoids::MonoidError::Shape(m) => KummerError::Shape(m),
            monoids::MonoidError::Precondition(m) => KummerError::Precondition(m),
            monoids::MonoidError::BoundExceeded(m) => KummerError::BoundExceeded(m),
        }
    }
}

pub(crate) fn fmt_vec(v: &[num_bigint::BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}
