//! Exact integer linear algebra: arbitrary-precision matrices, Smith normal
//! form, integer linear solving, and finitely generated abelian groups in
//! invariant-factor form with kernels, cokernels, sections, and subgroup
//! enumeration. Everything downstream that manipulates lattices or finite
//! group data routes through this crate.

use std::error::Error;
use std::fmt;

mod group;
mod matrix;

pub use group::{
    cokernel, direct_sum, hom_from_images, image_subgroup, kernel_lattice, kernel_subgroup,
    lattice_quotient, section_onto_free, subgroup_contains, subgroup_enumerate, DirectSum,
    FinAbGroup, GroupHom, LatticeQuotient, Subgroup,
};
pub use matrix::{
    column_hermite, determinant, kernel_basis, smith_normal_form, solve_integer, IntMatrix,
    Smith, SnfSolver,
};

/// Failure modes of the lattice layer. `BoundExceeded` is kept distinct so
/// callers can surface enumeration limits differently from bad input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    /// Structurally malformed data: dimension mismatches, broken invariant
    /// chains, ragged input.
    Shape(String),
    /// A documented precondition does not hold for this input.
    Precondition(String),
    /// An enumeration would exceed its configured size bound.
    BoundExceeded(String),
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::Shape(msg) => write!(f, "shape error: {msg}"),
            LatticeError::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            LatticeError::BoundExceeded(msg) => write!(f, "bound exceeded: {msg}"),
        }
    }
}

impl Error for LatticeError {}

/// Decimal-string (de)serialization helpers for vectors of big integers;
/// shared by every crate that writes JSON reports.
pub mod decimal {
    use num_bigint::BigInt;

    pub fn encode_vec(v: &[BigInt]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    pub fn decode_vec(v: &[String]) -> Result<Vec<BigInt>, String> {
        v.iter()
            .map(|s| s.parse().map_err(|_| format!("bad integer literal: {s:?}")))
            .collect()
    }
}
