//! Monte Carlo engine for the single-layer PNG droplet and the longest
//! increasing subsequence (directed polymer) oracle.

mod droplet;
mod height_line;
mod lis;
mod points;
mod rng;

pub use droplet::simulate_droplet;
pub(crate) use droplet::{evolve_line, LineState};
pub use height_line::HeightLine;
pub use lis::lis_length;
pub use points::{
    sample_poisson, sample_poisson_triangle, sample_poisson_triangle_with, PointSet, INTENSITY,
};
pub use rng::{replica_rng, ReplicaRng};
