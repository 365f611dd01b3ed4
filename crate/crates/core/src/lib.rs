//! Sparse recovery of signals that are sparse in an overcomplete DFT frame:
//! classical greedy and ℓ1 solvers, signal-space CoSaMP, structured
//! support generators and a deterministic experiment harness.

pub mod error;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod projections;
pub mod signals;
pub mod solvers;
pub mod sscosamp;
pub mod support;

pub use error::{Error, Result};
pub use support::SupportSet;
