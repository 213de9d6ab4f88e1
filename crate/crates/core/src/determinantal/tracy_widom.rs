//! Tracy-Widom `F_2(a) = det(1 - P_a K)` by Nystrom discretisation.

use serde::{Deserialize, Serialize};

use super::airy_kernel::airy_kernel_matrix;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureGrid;

/// Length of the interval `(a, a + L]` on which the Airy kernel is sampled.
pub const F2_INTERVAL_LENGTH: f64 = 16.0;
/// Base number of Gauss-Legendre nodes; certification doubles it.
pub const F2_BASE_NODES: usize = 40;
/// Default certification tolerance for node doubling.
pub const F2_DEFAULT_TOL: f64 = 1e-10;

/// Default grid `(a, a + 16]` with 40 nodes.
pub fn f2_grid(a: f64) -> QuadratureGrid {
    QuadratureGrid::gauss_legendre(a, F2_INTERVAL_LENGTH, F2_BASE_NODES)
        .expect("finite lower endpoint")
}

/// `det(1 - sqrt(W) K sqrt(W))` on `grid`, which must start at `a`, have
/// length at least 16 and at least 40 nodes.
pub fn tracy_widom_f2(a: f64, grid: &QuadratureGrid) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::InvalidParameter(format!("F2 at a = {a}")));
    }
    if (grid.lower() - a).abs() > 1e-12 * a.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "grid starts at {} but a = {a}",
            grid.lower()
        )));
    }
    if grid.length() < F2_INTERVAL_LENGTH || grid.len() < F2_BASE_NODES {
        return Err(Error::InvalidParameter(format!(
            "F2 grid needs length >= {F2_INTERVAL_LENGTH} and >= {F2_BASE_NODES} nodes, got {} and {}",
            grid.length(),
            grid.len()
        )));
    }
    Ok(airy_kernel_matrix(grid).fredholm_det().clamp(0.0, 1.0))
}

/// A determinant accepted because doubling the nodes changed it by less
/// than the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certified {
    pub value: f64,
    /// `|fine - coarse|` between the doubled and the base grid.
    pub change: f64,
    pub nodes: usize,
}

/// Evaluates `eval` on `grid` and on its node-doubled refinement and accepts
/// the refined value when the two agree to `tol`.
pub fn certify_by_doubling(
    what: &str,
    grid: &QuadratureGrid,
    tol: f64,
    eval: impl Fn(&QuadratureGrid) -> Result<f64>,
) -> Result<Certified> {
    let coarse = eval(grid)?;
    let fine_grid = grid.doubled();
    let fine = eval(&fine_grid)?;
    let change = (fine - coarse).abs();
    if !(change <= tol) {
        return Err(Error::NonConvergence {
            what: what.to_string(),
            change,
            tol,
        });
    }
    Ok(Certified {
        value: fine,
        change,
        nodes: fine_grid.len(),
    })
}

/// `F_2(a)` certified by 40 -> 80 node doubling.
pub fn tracy_widom_f2_certified(a: f64, tol: f64) -> Result<Certified> {
    certify_by_doubling(&format!("F2({a})"), &f2_grid(a), tol, |g| {
        tracy_widom_f2(a, g)
    })
}

/// `F_2(a)` with the default grid (80 nodes) and no certification step.
pub fn f2(a: f64) -> f64 {
    tracy_widom_f2(a, &f2_grid(a).doubled()).expect("default grid is valid")
}

/// Mean and variance of the Tracy-Widom distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// Moments of `F_2` from `E X = int_0^inf (1 - F) - int_{-inf}^0 F` and
/// `E X^2 = 2 int_0^inf a (1 - F) + 2 int_{-inf}^0 |a| F`, integrated over
/// `[-12, 8]` where the neglected tails are below `1e-15`.
pub fn tracy_widom_moments() -> Moments {
    let left = QuadratureGrid::composite(-12.0, 12.0, 12, 10).unwrap();
    let right = QuadratureGrid::composite(0.0, 8.0, 8, 10).unwrap();
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (&a, &w) in left.nodes().iter().zip(left.weights()) {
        let f = f2(a);
        m1 -= w * f;
        m2 += 2.0 * w * a.abs() * f;
    }
    for (&a, &w) in right.nodes().iter().zip(right.weights()) {
        let s = 1.0 - f2(a);
        m1 += w * s;
        m2 += 2.0 * w * a * s;
    }
    Moments {
        mean: m1,
        variance: m2 - m1 * m1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturates_at_large_argument() {
        let v = tracy_widom_f2_certified(10.0, 1e-12).unwrap().value;
        assert!(1.0 - v < 1e-8 && v <= 1.0);
    }

    #[test]
    fn rejects_short_or_misplaced_grids() {
        let short = QuadratureGrid::gauss_legendre(0.0, 10.0, 40).unwrap();
        assert!(tracy_widom_f2(0.0, &short).is_err());
        let sparse = QuadratureGrid::gauss_legendre(0.0, 16.0, 20).unwrap();
        assert!(tracy_widom_f2(0.0, &sparse).is_err());
        assert!(tracy_widom_f2(1.0, &f2_grid(0.0)).is_err());
    }

    #[test]
    fn monotone_on_a_scan() {
        let mut prev = 0.0;
        let mut a = -6.0;
        while a <= 4.0 + 1e-9 {
            let v = tracy_widom_f2_certified(a, 1e-9).unwrap().value;
            assert!(v >= prev - 1e-12, "a={a}");
            prev = v;
            a += 0.25;
        }
    }
}
