//! Clifford unitary weight (CUW) space-time block codes.
//!
//! Exact construction and verification of maximal-rate CUW linear designs
//! from representations of extended Clifford algebras, plus a Monte-Carlo
//! harness comparing per-group and exhaustive ML decoding.

pub mod clifford_rep;
pub mod constructions;
pub mod error;
pub mod extended_algebra;
pub mod linalg_exact;
pub mod simulator;
pub mod verifier;

pub use error::{Error, Result};
