//! Exact determinantal statistics of the PNG droplet and its edge scaling
//! limit.

mod airy_kernel;
mod bessel_kernel;
mod extended_airy;
mod extended_bessel;
mod fredholm;
mod painleve;
mod tracy_widom;
mod two_point;

pub use airy_kernel::{airy_density, airy_kernel, airy_kernel_matrix};
pub use bessel_kernel::{
    discrete_bessel, height_cdf_exact, height_cdf_with_kernel, height_pmf_exact,
    DiscreteBesselKernel, EntryMethod, HeightCdf, DEFAULT_MAX_WINDOW,
};
pub use extended_airy::{
    extended_airy_blocks, extended_airy_kernel, heat_kernel, joint_cdf, joint_cdf_certified,
    joint_grid, joint_grid_sized, HEAT_KERNEL_SPLIT_BELOW, JOINT_GRID_UPPER,
};
pub use extended_bessel::{
    convergence_report, edge_index, edge_scaled_kernel, edge_scaled_kernel_with, extended_bessel,
    ConvergenceReport, ConvergenceRow, ExtendedBesselKernel,
};
pub use fredholm::{det_identity_minus, KernelGrid, KernelMatrix};
pub use painleve::{painleve_f2, painleve_state, PainleveState, PAINLEVE_MIN, PAINLEVE_START};
pub use tracy_widom::{
    certify_by_doubling, f2, f2_grid, tracy_widom_f2, tracy_widom_f2_certified,
    tracy_widom_moments, Certified, Moments, F2_BASE_NODES, F2_DEFAULT_TOL, F2_INTERVAL_LENGTH,
};
pub use two_point::{
    covariance_tail_coefficient, two_point_g, CoefficientConfig, TailCoefficient, TwoPoint,
    TwoPointConfig,
};
