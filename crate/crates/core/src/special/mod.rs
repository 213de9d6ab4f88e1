//! Special functions: Bessel `J` of integer and real order, its derivative in
//! the order, and the Airy function with its derivative.

mod airy;
mod bessel;

pub use airy::{
    airy, airy_ai, airy_ai_prime, AIRY_VALIDATED_MAX, AIRY_VALIDATED_MIN, AI_PRIME_ZERO, AI_ZERO,
};
pub use bessel::{
    bessel_j, bessel_j_dorder, negligible_order, BesselEvalConfig, BesselTable, MAX_VALIDATED_ARG,
};
