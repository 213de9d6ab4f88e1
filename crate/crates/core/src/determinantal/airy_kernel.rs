//! The Airy kernel `K(u, v) = (Ai(u) Ai'(v) - Ai'(u) Ai(v)) / (u - v)`.

use nalgebra::DMatrix;

use super::fredholm::{KernelGrid, KernelMatrix};
use crate::quadrature::QuadratureGrid;
use crate::special::airy;

/// Below this separation the closed form is replaced by the diagonal value at
/// the midpoint, which is exact to first order in `u - v`.
const DIAGONAL_SEPARATION: f64 = 1e-6;

fn kernel_from_values(u: f64, v: f64, (au, apu): (f64, f64), (av, apv): (f64, f64)) -> f64 {
    if (u - v).abs() < DIAGONAL_SEPARATION {
        let m = 0.5 * (u + v);
        return airy_density(m);
    }
    (au * apv - apu * av) / (u - v)
}

pub fn airy_kernel(u: f64, v: f64) -> f64 {
    kernel_from_values(u, v, airy(u), airy(v))
}

/// Density of the top of the Airy point process, `Ai'(u)^2 - u Ai(u)^2`.
pub fn airy_density(u: f64) -> f64 {
    let (a, ap) = airy(u);
    ap * ap - u * a * a
}

/// Weighted Nystrom matrix `sqrt(w) K sqrt(w)` of the Airy kernel.
pub fn airy_kernel_matrix(grid: &QuadratureGrid) -> KernelMatrix {
    let x = grid.nodes();
    let vals: Vec<(f64, f64)> = x.iter().map(|&u| airy(u)).collect();
    let sw: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
    let n = x.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let k = if i == j {
                let (a, ap) = vals[i];
                ap * ap - x[i] * a * a
            } else {
                kernel_from_values(x[i], x[j], vals[i], vals[j])
            };
            let v = sw[i] * k * sw[j];
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    KernelMatrix::new(m, KernelGrid::Continuum(grid.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matches_density() {
        for &u in &[-3.0, 0.0, 2.0] {
            assert_eq!(airy_kernel(u, u), airy_density(u));
        }
    }

    #[test]
    fn continuous_through_the_diagonal() {
        for &u in &[-3.0, 0.5, 2.0] {
            let near = airy_kernel(u, u + 2e-6);
            let mid = airy_density(u + 1e-6);
            assert!((near - mid).abs() < 1e-9, "{near} {mid}");
            let inside = airy_kernel(u, u + 5e-7);
            assert!((inside - airy_density(u + 2.5e-7)).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric() {
        for &(u, v) in &[(-4.0, 1.3), (0.2, 5.0), (-7.5, -7.0)] {
            assert_eq!(airy_kernel(u, v), airy_kernel(v, u));
        }
    }

    #[test]
    fn density_asymptotics() {
        let u = -25.0_f64;
        let lead = u.abs().sqrt() / std::f64::consts::PI;
        assert!((airy_density(u) - lead).abs() / lead < 0.02);
        let u = 6.0_f64;
        let envelope =
            17.0 / (96.0 * std::f64::consts::PI) / u.sqrt() * (-4.0 / 3.0 * u.powf(1.5)).exp();
        let d = airy_density(u);
        assert!(d > 0.0 && d < 1.5 * envelope, "{d} vs {envelope}");
    }

    #[test]
    fn matrix_is_symmetric_and_weighted() {
        let grid = QuadratureGrid::gauss_legendre(-2.0, 16.0, 30).unwrap();
        let m = airy_kernel_matrix(&grid);
        assert!(m.asymmetry() == 0.0);
        let w = grid.weights();
        let x = grid.nodes();
        let k = m.entries()[(3, 7)] / (w[3] * w[7]).sqrt();
        assert!((k - airy_kernel(x[3], x[7])).abs() < 1e-15);
    }
}
