//! Erasure-channel analysis of Reed-Muller, BCH and quadratic-residue codes.
//!
//! The crate builds the codes, decodes them under bit-MAP and block-MAP
//! rules on the binary erasure channel, computes exact EXIT functions from
//! erasure-pattern enumerators, certifies code symmetries, and estimates EXIT
//! curves by Monte Carlo for blocklengths beyond exact enumeration.

pub mod cli;
pub mod codebook;
pub mod erasure;
mod error;
pub mod exit;
pub mod gf2;
pub mod simulate;
pub mod symmetry;

pub use error::{Error, Result};
