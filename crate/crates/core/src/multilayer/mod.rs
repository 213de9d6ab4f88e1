//! Multi-layer PNG: RSK and Gates-Westcott dynamics in continuous time, the
//! discrete-time (Aztec shuffling) model and the step map.

mod discrete;
mod ensemble;
mod gw;
mod rsk;

pub use discrete::{
    discrete_distribution, discrete_evolve, discrete_evolve_with, discrete_to_continuum_check,
    eligible_blocks, log_partition_discrete, Configuration, DiscreteConvergence,
    DiscreteConvergenceRow, DiscreteEnsemble, DiscreteLine,
};
pub use ensemble::{step_map, step_map_inverse, LineEnsemble, StepCoordinates};
pub use gw::{gw_evolve, gw_evolve_with};
pub use rsk::rsk_evolve;
