//! Polynuclear growth (PNG) droplet: Monte Carlo simulation of the single- and
//! multi-layer models and exact determinantal statistics (discrete Bessel and
//! Airy kernels, Tracy-Widom `F_2`, two-time Airy process law).

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod determinantal;
pub mod error;
pub mod multilayer;
pub mod quadrature;
pub mod sim;
pub mod special;
pub mod stats;
pub mod table;

pub use error::{Error, Result};
