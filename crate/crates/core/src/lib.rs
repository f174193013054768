//! Field correlators, detector rates and experiment planning for a dissipative
//! Hopfield dielectric.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature nodes are kept at their published precision.
#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod correlator;
pub mod detector1d;
pub mod detector3d;
pub mod error;
pub mod experiment;
pub mod medium;
pub mod quadrature;
pub mod rate;
pub mod surface;
pub mod units;

pub use error::{Error, Result};
