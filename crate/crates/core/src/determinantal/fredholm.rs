//! Kernel matrices and Fredholm determinants.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::quadrature::QuadratureGrid;

/// Where a kernel matrix was sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelGrid {
    /// Quadrature nodes of a continuum kernel.
    Continuum(QuadratureGrid),
    /// Two continuum grids forming a 2x2 block operator.
    Blocks(QuadratureGrid, QuadratureGrid),
    /// Lattice window `start, start + 1, ..., start + size - 1`.
    Lattice { start: i64, size: usize },
}

/// Dense kernel matrix. For continuum kernels the entries are already
/// symmetrically weighted, `sqrt(w_i) K(x_i, x_j) sqrt(w_j)`, so the Fredholm
/// determinant is `det(1 - entries)` in every case.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    entries: DMatrix<f64>,
    grid: KernelGrid,
}

impl KernelMatrix {
    pub fn new(entries: DMatrix<f64>, grid: KernelGrid) -> Self {
        assert!(entries.is_square());
        Self { entries, grid }
    }

    /// Nystrom matrix of `kernel` on `grid`.
    pub fn continuum(grid: &QuadratureGrid, kernel: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let x = grid.nodes();
        let sw: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
        let n = x.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| (0..n).map(|j| sw[i] * kernel(x[i], x[j]) * sw[j]).collect())
            .collect();
        let entries = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::new(entries, KernelGrid::Continuum(grid.clone()))
    }

    /// Matrix of a lattice kernel on the window `[start, start + size)`.
    pub fn lattice(start: i64, size: usize, kernel: impl Fn(i64, i64) -> f64 + Sync) -> Self {
        let rows: Vec<Vec<f64>> = (0..size)
            .into_par_iter()
            .map(|i| {
                (0..size)
                    .map(|j| kernel(start + i as i64, start + j as i64))
                    .collect()
            })
            .collect();
        let entries = DMatrix::from_fn(size, size, |i, j| rows[i][j]);
        Self::new(entries, KernelGrid::Lattice { start, size })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn grid(&self) -> &KernelGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    /// Largest `|M_ij - M_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let m = &self.entries;
        let mut worst = 0.0_f64;
        for i in 0..m.nrows() {
            for j in 0..i {
                worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        worst
    }

    /// `det(1 - M)`.
    pub fn fredholm_det(&self) -> f64 {
        det_identity_minus(&self.entries)
    }
}

/// `det(1 - m)` by LU factorisation.
pub fn det_identity_minus(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let a = DMatrix::identity(n, n) - m;
    a.lu().determinant()
}
