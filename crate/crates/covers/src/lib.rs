//! Finite Kummer covers of logarithmic points.
//!
//! A log point carries a sharp fs monoid `P`; its connected covers at level
//! `m` are classified by the subgroups of `(1/m)P^gp / P^gp ≅ (Z/m)^n`.
//! This crate builds the cover monoids from their classifying subgroups,
//! attaches the finite Galois sets the level group permutes, and forms
//! fiber products and deck quotients of covers — certifying along the way
//! that the monoid pictures and the Galois-set pictures agree.

mod cover;
mod galois;
mod point;
mod product;
mod quotient;

pub use cover::{
    cover_from_subgroup, enumerate_connected_covers, fundamental_group_level, lift_level,
    FketCover,
};
pub use galois::{fiber_functor, fiber_restriction, monodromy_rep, GammaSet};
pub use point::LogPoint;
pub use product::{cover_fiber_product, FiberProduct};
pub use quotient::cover_quotient;

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoversError {
    /// Mismatched dimensions or malformed input data.
    Shape(String),
    /// Inputs outside an operation's domain.
    Precondition(String),
    /// A configured search or enumeration limit was exceeded.
    BoundExceeded(String),
}

impl fmt::Display for CoversError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoversError::Shape(msg) => write!(f, "shape error: {msg}"),
            CoversError::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            CoversError::BoundExceeded(msg) => write!(f, "bound exceeded: {msg}"),
        }
    }
}

impl std::error::Error for CoversError {}

impl From<lattice::LatticeError> for CoversError {
    fn from(e: lattice::LatticeError) -> Self {
        match e {
            lattice::LatticeError::Shape(msg) => CoversError::Shape(msg),
            lattice::LatticeError::Precondition(msg) => CoversError::Precondition(msg),
            lattice::LatticeError::BoundExceeded(msg) => CoversError::BoundExceeded(msg),
        }
    }
}

impl From<monoids::MonoidError> for CoversError {
    fn from(e: monoids::MonoidError) -> Self {
        match e {
            monoids::MonoidError::Shape(msg) => CoversError::Shape(msg),
            monoids::MonoidError::Precondition(msg) => CoversError::Precondition(msg),
            monoids::MonoidError::BoundExceeded(msg) => CoversError::BoundExceeded(msg),
        }
    }
}
