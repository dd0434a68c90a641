//! Exact computations with hyperplane arrangements and multiarrangements over
//! the rationals: lattices, derivation modules, freeness verdicts and
//! addition/deletion certificates.

pub mod arrangement;
pub mod certify;
pub mod corpus;
pub mod dsolve;
pub mod error;
pub mod exactlin;
pub mod multi;

pub use error::{Error, Result};
