//! Two-point function `g(y) = <(A(y) - A(0))^2>` of the Airy process and the
//! coefficient of its `y^{-2}` decay.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::airy_kernel::airy_kernel_matrix;
use super::extended_airy::{joint_cdf, joint_grid_sized};
use super::tracy_widom::{f2, f2_grid, tracy_widom_moments};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureGrid;
use crate::special::airy;

/// Quadrature parameters for [`two_point_g`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPointConfig {
    /// The covariance integral runs over `[box_lo, box_hi]^2`.
    pub box_lo: f64,
    pub box_hi: f64,
    /// Gauss-Legendre panels of unit width in `a`, with this many nodes each.
    pub a_nodes_per_panel: usize,
    /// Nodes per panel in the separation `r = b - a`.
    pub r_nodes_per_panel: usize,
    /// Nodes per panel of the Nystrom grids of the joint law.
    pub grid_nodes_per_panel: usize,
}

impl Default for TwoPointConfig {
    fn default() -> Self {
        Self {
            box_lo: -8.0,
            box_hi: 6.0,
            a_nodes_per_panel: 4,
            r_nodes_per_panel: 8,
            grid_nodes_per_panel: 6,
        }
    }
}

/// `g(y)` with the pieces it was assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPoint {
    pub y: f64,
    pub g: f64,
    pub covariance: f64,
    /// Variance of `F_2`.
    pub a2: f64,
    /// Bound on the part of the covariance integral outside the box.
    pub tail_bound: f64,
    pub joint_evaluations: usize,
}

/// Panels in `r` that start at width `sigma` and double until `r_max`.
fn separation_breaks(sigma: f64, r_max: f64) -> Vec<f64> {
    let mut breaks = vec![0.0];
    let mut width = sigma;
    while *breaks.last().unwrap() < r_max {
        let next = (breaks.last().unwrap() + width).min(r_max);
        breaks.push(next);
        width = (2.0 * width).min(1.0);
    }
    breaks
}

fn panel_rule(breaks: &[f64], nodes: usize) -> Vec<(f64, f64)> {
    breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .flat_map(|w| {
            let g = QuadratureGrid::gauss_legendre(w[0], w[1] - w[0], nodes).unwrap();
            g.nodes()
                .iter()
                .copied()
                .zip(g.weights().iter().copied())
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `g(y) = 2 a_2 - 2 cov(A(0), A(y))`, where
/// `cov = int int [P(A(0) <= a, A(y) <= b) - F_2(a) F_2(b)] da db` over the
/// box. Using the symmetry of the joint law in `(a, b)` the box integral is
/// taken as twice the half `b > a`, in coordinates `(a, r = b - a)` whose
/// `r`-panels resolve the ridge of width `sqrt(2y)` along the diagonal.
pub fn two_point_g(y: f64, config: &TwoPointConfig) -> Result<TwoPoint> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "two-point function at y = {y}"
        )));
    }
    if !(config.box_hi > config.box_lo) {
        return Err(Error::InvalidParameter("empty integration box".into()));
    }
    let (lo, hi) = (config.box_lo, config.box_hi);
    let a_panels = (hi - lo).ceil() as usize;
    let a_grid = QuadratureGrid::composite(lo, hi - lo, a_panels, config.a_nodes_per_panel)?;
    let sigma = (2.0 * y).sqrt().min(1.0);
    let mut jobs = Vec::new();
    for (&a, &wa) in a_grid.nodes().iter().zip(a_grid.weights()) {
        for (r, wr) in panel_rule(&separation_breaks(sigma, hi - a), config.r_nodes_per_panel) {
            jobs.push((a, a + r, wa * wr));
        }
    }
    let joint_evaluations = jobs.len();
    let n = config.grid_nodes_per_panel;
    let parts: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(a, b, w)| {
            let ga = joint_grid_sized(a, y, n);
            let gb = joint_grid_sized(b, y, n);
            let joint = joint_cdf(a, b, y, &ga, &gb)?;
            Ok(w * (joint - f2(a) * f2(b)))
        })
        .collect();
    let mut half = 0.0;
    for p in parts {
        half += p?;
    }
    let covariance = 2.0 * half;
    let a2 = tracy_widom_moments().variance;
    Ok(TwoPoint {
        y,
        g: 2.0 * a2 - 2.0 * covariance,
        covariance,
        a2,
        tail_bound: covariance_tail_bound(lo, hi),
        joint_evaluations,
    })
}

/// Frechet-type bound on `int |F(a, b) - F_2(a) F_2(b)|` outside the box:
/// the integrand is at most `F_2(a)` for `a < lo` and `1 - F_2(b)` for
/// `b > hi`, and both regions have width at most `hi - lo` plus the part
/// where either marginal is already negligible.
fn covariance_tail_bound(lo: f64, hi: f64) -> f64 {
    let left = QuadratureGrid::composite(lo - 8.0, 8.0, 8, 8)
        .unwrap()
        .integrate(f2);
    let right = QuadratureGrid::composite(hi, 8.0, 8, 8)
        .unwrap()
        .integrate(|b| 1.0 - f2(b));
    let width = hi - lo + 16.0;
    4.0 * width * (left + right)
}

/// Parameters of [`covariance_tail_coefficient`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientConfig {
    /// Outer integral over `lambda` runs over `[0, lambda_max]`.
    pub lambda_max: f64,
    /// Range of the inner `a`-integral.
    pub a_lo: f64,
    pub a_hi: f64,
    pub a_nodes_per_panel: usize,
}

impl Default for CoefficientConfig {
    fn default() -> Self {
        Self {
            lambda_max: 40.0,
            a_lo: -8.0,
            a_hi: 8.0,
            a_nodes_per_panel: 6,
        }
    }
}

/// The `y^{-2}` coefficient of the covariance.
///
/// `value` is `[int da F_2(a) <Ai, (1 - P_a K)^{-1} P_a Ai>]^2`. `literal` is
/// the `lambda`-integral form `int_0^inf dl [int da F_2(a) <Ai, P_a K
/// (e^l - P_a K)^{-1} P_a Ai>]^2`, which drops the factor `N` coming from the
/// cyclic rotations of each two-bond word and so is not the coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailCoefficient {
    pub value: f64,
    pub literal: f64,
    pub lambda_max: f64,
    /// Change of `literal` when `lambda_max` is doubled.
    pub cutoff_change: f64,
}

/// Spectral data of `P_a K` needed for the resolvent inner products.
struct Resolvent {
    weight: f64,
    det: f64,
    eigenvalues: Vec<f64>,
    overlaps: Vec<f64>,
}

impl Resolvent {
    fn new(a: f64, weight: f64) -> Result<Self> {
        let grid = f2_grid(a).doubled();
        let m: DMatrix<f64> = airy_kernel_matrix(&grid).entries().clone();
        let f = DVector::from_iterator(
            grid.len(),
            grid.nodes()
                .iter()
                .zip(grid.weights())
                .map(|(&u, &w)| w.sqrt() * airy(u).0),
        );
        let eig = SymmetricEigen::new(m);
        if let Some(&mu) = eig.eigenvalues.iter().find(|&&mu| mu >= 1.0) {
            return Err(Error::Instability(format!(
                "P_a K has eigenvalue {mu} >= 1 at a = {a}"
            )));
        }
        let det = eig.eigenvalues.iter().map(|mu| 1.0 - mu).product();
        let overlaps = eig
            .eigenvectors
            .column_iter()
            .map(|v| v.dot(&f).powi(2))
            .collect();
        Ok(Self {
            weight,
            det,
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            overlaps,
        })
    }

    /// `det(1 - P_a K) <Ai, P_a K (e^lambda - P_a K)^{-1} P_a Ai>`.
    fn weighted_inner(&self, lambda: f64) -> f64 {
        let e = lambda.exp();
        let inner: f64 = self
            .eigenvalues
            .iter()
            .zip(&self.overlaps)
            .map(|(&mu, &c)| c * mu / (e - mu))
            .sum();
        self.det * inner
    }

    /// `det(1 - P_a K) <Ai, (1 - P_a K)^{-1} P_a Ai>`.
    fn resolvent_inner(&self) -> f64 {
        let inner: f64 = self
            .eigenvalues
            .iter()
            .zip(&self.overlaps)
            .map(|(&mu, &c)| c / (1.0 - mu))
            .sum();
        self.det * inner
    }
}

/// Coefficient `c` in `Cov(A(0), A(y)) ~ c y^{-2}`, see [`TailCoefficient`].
pub fn covariance_tail_coefficient(config: &CoefficientConfig) -> Result<TailCoefficient> {
    let a_panels = (config.a_hi - config.a_lo).ceil() as usize;
    let a_grid = QuadratureGrid::composite(
        config.a_lo,
        config.a_hi - config.a_lo,
        a_panels,
        config.a_nodes_per_panel,
    )?;
    let resolvents: Vec<Resolvent> = a_grid
        .nodes()
        .par_iter()
        .zip(a_grid.weights().par_iter())
        .map(|(&a, &w)| Resolvent::new(a, w))
        .collect::<Result<_>>()?;
    let bracket = |lambda: f64| -> f64 {
        resolvents
            .iter()
            .map(|r| r.weight * r.weighted_inner(lambda))
            .sum()
    };
    let integrate = |lambda_max: f64| -> f64 {
        // Graded panels near 0, where the resolvent is sharpest.
        let mut breaks = vec![0.0];
        let mut x = 1e-5;
        while x < 1.0 {
            breaks.push(x);
            x *= 10.0;
        }
        let mut x = 1.0;
        while x < lambda_max {
            breaks.push(x);
            x += 1.0;
        }
        breaks.push(lambda_max);
        panel_rule(&breaks, 10)
            .into_iter()
            .map(|(l, w)| w * bracket(l).powi(2))
            .sum()
    };
    let value: f64 = resolvents
        .iter()
        .map(|r| r.weight * r.resolvent_inner())
        .sum();
    let literal = integrate(config.lambda_max);
    let doubled = integrate(2.0 * config.lambda_max);
    Ok(TailCoefficient {
        value: value * value,
        literal: doubled,
        lambda_max: config.lambda_max,
        cutoff_change: (doubled - literal).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separation_panels_cover_the_range() {
        let b = separation_breaks(0.3, 5.0);
        assert_eq!(b[0], 0.0);
        assert_eq!(*b.last().unwrap(), 5.0);
        assert!(b.windows(2).all(|w| w[1] > w[0]));
        assert!((b[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn coefficient_is_one() {
        // int F_2(a) <Ai, (1 - P_a K)^{-1} P_a Ai> da = 1 identically
        let c = covariance_tail_coefficient(&CoefficientConfig::default()).unwrap();
        assert!((c.value - 1.0).abs() < 1e-8, "{c:?}");
        assert!(c.literal > 0.0 && c.literal < 0.1);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(two_point_g(0.0, &TwoPointConfig::default()).is_err());
        let bad = TwoPointConfig {
            box_hi: -9.0,
            ..Default::default()
        };
        assert!(two_point_g(1.0, &bad).is_err());
    }
}
