//! Two-time law of the Airy process through the 2x2 block operator
//!
//! ```text
//! M = [ P_a K P_a        P_a K_ab P_b ]
//!     [ P_b K_ba P_a     P_b K P_b    ]
//! ```
//!
//! with `K_ab = e^{-yH}(K - 1)` and `K_ba = e^{yH} K`, so that
//! `P(A(0) <= a, A(y) <= b) = det(1 - M)`.
//!
//! `K_ba(u, v) = int_0^inf e^{-ys} Ai(u+s) Ai(v+s) ds` is evaluated directly.
//! For `y >= 1` so is `K_ab(u, v) = -int_0^inf e^{-y l} Ai(u-l) Ai(v-l) dl`.
//! For smaller `y` that integral decays too slowly against the oscillating
//! Airy functions, and `K_ab = e^{-yH} K - e^{-yH}` is used instead, with the
//! explicit heat kernel of `H = -d^2/du^2 + u`.

use nalgebra::DMatrix;

use super::airy_kernel::airy_kernel_matrix;
use super::fredholm::{det_identity_minus, KernelGrid, KernelMatrix};
use super::tracy_widom::Certified;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureGrid;
use crate::special::airy;

/// Below this separation `K_ab` uses the heat-kernel split.
pub const HEAT_KERNEL_SPLIT_BELOW: f64 = 1.0;
/// Spectral cutoff: `e^{-y Lambda}` with `y Lambda = 40` is below `1e-17`.
const SPECTRAL_DECAY: f64 = 40.0;
/// Nodes are sampled up to this height; Airy kernels vanish beyond it.
pub const JOINT_GRID_UPPER: f64 = 10.0;
const JOINT_NODES_PER_PANEL: usize = 10;
/// `s`-integrals run until `u + s` reaches this value for every node.
const SHIFT_UPPER: f64 = 12.0;

/// `exp(-y H)(u, v)` for `H = -d^2/du^2 + u`.
pub fn heat_kernel(y: f64, u: f64, v: f64) -> f64 {
    let d = u - v;
    (4.0 * std::f64::consts::PI * y).sqrt().recip()
        * (-d * d / (4.0 * y) - 0.5 * y * (u + v) + y * y * y / 12.0).exp()
}

/// Default grid for one block: `(lower, max(lower + 4, 10)]` in panels fine
/// enough to resolve the heat kernel of width `sqrt(2y)`.
pub fn joint_grid(lower: f64, y: f64) -> QuadratureGrid {
    joint_grid_sized(lower, y, JOINT_NODES_PER_PANEL)
}

/// [`joint_grid`] with a chosen number of nodes per panel.
pub fn joint_grid_sized(lower: f64, y: f64, nodes_per_panel: usize) -> QuadratureGrid {
    let length = (JOINT_GRID_UPPER - lower).max(4.0);
    let width = if y < HEAT_KERNEL_SPLIT_BELOW {
        (2.0 * (2.0 * y).sqrt()).min(1.0)
    } else {
        2.0
    };
    let panels = (length / width).ceil() as usize;
    QuadratureGrid::composite(lower, length, panels.max(1), nodes_per_panel.max(1))
        .expect("finite grid")
}

/// Rows `sqrt(w_i) * f(x_i + s_k) * sqrt(weight_k)` for a quadrature in `s`.
fn shifted_airy_rows(
    grid: &QuadratureGrid,
    shifts: &[f64],
    shift_weights: &[f64],
    sign: f64,
) -> DMatrix<f64> {
    let x = grid.nodes();
    let w = grid.weights();
    DMatrix::from_fn(x.len(), shifts.len(), |i, k| {
        w[i].sqrt() * airy(x[i] + sign * shifts[k]).0 * shift_weights[k].sqrt()
    })
}

fn shift_grid(length: f64, panel: f64) -> QuadratureGrid {
    let panels = (length / panel).ceil().max(1.0) as usize;
    QuadratureGrid::composite(0.0, length, panels, 8).expect("positive length")
}

/// Shared `s`-quadrature for the blocks built on grids starting at or above
/// `lower`.
fn forward_shifts(lower: f64) -> QuadratureGrid {
    shift_grid((SHIFT_UPPER - lower).max(4.0), 1.0)
}

fn scale_columns(rows: &DMatrix<f64>, factors: &[f64]) -> DMatrix<f64> {
    let mut m = rows.clone();
    for (k, f) in factors.iter().enumerate() {
        m.column_mut(k).scale_mut(*f);
    }
    m
}

/// Off-diagonal blocks `(sqrt(w) K_ab sqrt(w'), sqrt(w') K_ba sqrt(w))`.
fn off_diagonal_blocks(
    y: f64,
    grid_a: &QuadratureGrid,
    grid_b: &QuadratureGrid,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let s = forward_shifts(grid_a.lower().min(grid_b.lower()));
    let ones = vec![1.0; s.len()];
    let ra = shifted_airy_rows(grid_a, s.nodes(), &ones, 1.0);
    let rb = shifted_airy_rows(grid_b, s.nodes(), &ones, 1.0);
    let decay: Vec<f64> = s
        .nodes()
        .iter()
        .zip(s.weights())
        .map(|(&s, &w)| w * (-y * s).exp())
        .collect();
    // K_ba(v, u) = int_0^inf e^{-ys} Ai(v+s) Ai(u+s) ds
    let forward = scale_columns(&rb, &decay) * ra.transpose();
    let backward = if y >= HEAT_KERNEL_SPLIT_BELOW {
        spectral_backward_block(y, grid_a, grid_b)
    } else {
        let growth: Vec<f64> = s
            .nodes()
            .iter()
            .zip(s.weights())
            .map(|(&s, &w)| w * (y * s).exp())
            .collect();
        let mut m = scale_columns(&ra, &growth) * rb.transpose();
        subtract_heat_kernel(&mut m, y, grid_a, grid_b);
        m
    };
    (backward, forward)
}

/// `-int_0^inf e^{-y l} Ai(u-l) Ai(v-l) dl` on the two grids.
fn spectral_backward_block(
    y: f64,
    grid_a: &QuadratureGrid,
    grid_b: &QuadratureGrid,
) -> DMatrix<f64> {
    let lambda = shift_grid(SPECTRAL_DECAY / y, 0.5);
    let lw: Vec<f64> = lambda
        .nodes()
        .iter()
        .zip(lambda.weights())
        .map(|(&l, &w)| w * (-y * l).exp())
        .collect();
    let ra = shifted_airy_rows(grid_a, lambda.nodes(), &lw, -1.0);
    let rb = shifted_airy_rows(grid_b, lambda.nodes(), &lw, -1.0);
    -(ra * rb.transpose())
}

fn subtract_heat_kernel(
    m: &mut DMatrix<f64>,
    y: f64,
    grid_a: &QuadratureGrid,
    grid_b: &QuadratureGrid,
) {
    let (xa, wa) = (grid_a.nodes(), grid_a.weights());
    let (xb, wb) = (grid_b.nodes(), grid_b.weights());
    for i in 0..xa.len() {
        for j in 0..xb.len() {
            m[(i, j)] -= (wa[i] * wb[j]).sqrt() * heat_kernel(y, xa[i], xb[j]);
        }
    }
}

fn check_block_args(
    a: f64,
    b: f64,
    y: f64,
    grid_a: &QuadratureGrid,
    grid_b: &QuadratureGrid,
) -> Result<()> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "time separation y = {y} must be positive"
        )));
    }
    for (name, level, grid) in [("a", a, grid_a), ("b", b, grid_b)] {
        if !level.is_finite() || (grid.lower() - level).abs() > 1e-12 * level.abs().max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "grid for {name} = {level} starts at {}",
                grid.lower()
            )));
        }
    }
    Ok(())
}

/// The weighted block matrix `M` on `grid_a (+) grid_b`.
pub fn extended_airy_blocks(
    a: f64,
    b: f64,
    y: f64,
    grid_a: &QuadratureGrid,
    grid_b: &QuadratureGrid,
) -> Result<KernelMatrix> {
    check_block_args(a, b, y, grid_a, grid_b)?;
    let na = grid_a.len();
    let nb = grid_b.len();
    let mut m = DMatrix::zeros(na + nb, na + nb);
    m.view_mut((0, 0), (na, na))
        .copy_from(airy_kernel_matrix(grid_a).entries());
    m.view_mut((na, na), (nb, nb))
        .copy_from(airy_kernel_matrix(grid_b).entries());
    let (backward, forward) = off_diagonal_blocks(y, grid_a, grid_b);
    m.view_mut((0, na), (na, nb)).copy_from(&backward);
    m.view_mut((na, 0), (nb, na)).copy_from(&forward);
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Truncation(format!(
            "non-finite entries in the block operator at y = {y}"
        )));
    }
    Ok(KernelMatrix::new(
        m,
        KernelGrid::Blocks(grid_a.clone(), grid_b.clone()),
    ))
}

/// `P(A(0) <= a, A(y) <= b) = det(1 - M)`.
pub fn joint_cdf(
    a: f64,
    b: f64,
    y: f64,
    grid_a: &QuadratureGrid,
    grid_b: &QuadratureGrid,
) -> Result<f64> {
    let m = extended_airy_blocks(a, b, y, grid_a, grid_b)?;
    Ok(det_identity_minus(m.entries()).clamp(0.0, 1.0))
}

/// Joint CDF on the default grids, accepted when doubling the nodes of both
/// grids changes it by less than `tol`.
pub fn joint_cdf_certified(a: f64, b: f64, y: f64, tol: f64) -> Result<Certified> {
    let (ga, gb) = (joint_grid(a, y), joint_grid(b, y));
    let coarse = joint_cdf(a, b, y, &ga, &gb)?;
    let (fa, fb) = (ga.doubled(), gb.doubled());
    let fine = joint_cdf(a, b, y, &fa, &fb)?;
    let change = (fine - coarse).abs();
    if !(change <= tol) {
        return Err(Error::NonConvergence {
            what: format!("joint CDF at ({a}, {b}, y = {y})"),
            change,
            tol,
        });
    }
    Ok(Certified {
        value: fine,
        change,
        nodes: fa.len() + fb.len(),
    })
}

/// Extended Airy kernel `K(u, y; v, y')` evaluated pointwise.
pub fn extended_airy_kernel(u: f64, y: f64, v: f64, y2: f64) -> f64 {
    if y == y2 {
        return super::airy_kernel::airy_kernel(u, v);
    }
    let gap = (y - y2).abs();
    let mut total = 0.0;
    if y < y2 {
        // int_0^inf e^{-gap s} Ai(u+s) Ai(v+s) ds
        let s = forward_shifts(u.min(v));
        for (&si, &wi) in s.nodes().iter().zip(s.weights()) {
            total += wi * (-gap * si).exp() * airy(u + si).0 * airy(v + si).0;
        }
    } else {
        let l = shift_grid(SPECTRAL_DECAY / gap, 0.5);
        for (&li, &wi) in l.nodes().iter().zip(l.weights()) {
            total -= wi * (-gap * li).exp() * airy(u - li).0 * airy(v - li).0;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determinantal::f2;

    #[test]
    fn heat_kernel_split_matches_the_spectral_integral() {
        let ga = QuadratureGrid::composite(-3.0, 6.0, 6, 6).unwrap();
        let gb = QuadratureGrid::composite(-1.0, 5.0, 5, 6).unwrap();
        let s = forward_shifts(-3.0);
        let ones = vec![1.0; s.len()];
        let ra = shifted_airy_rows(&ga, s.nodes(), &ones, 1.0);
        let rb = shifted_airy_rows(&gb, s.nodes(), &ones, 1.0);
        for &y in &[1.0, 1.5, 2.0] {
            let direct = spectral_backward_block(y, &ga, &gb);
            let growth: Vec<f64> = s
                .nodes()
                .iter()
                .zip(s.weights())
                .map(|(&s, &w)| w * (y * s).exp())
                .collect();
            let mut split = scale_columns(&ra, &growth) * rb.transpose();
            subtract_heat_kernel(&mut split, y, &ga, &gb);
            let err = (&direct - &split).amax();
            assert!(err < 1e-9, "y={y}: {err}");
        }
    }

    #[test]
    fn forward_block_is_symmetric_in_its_arguments() {
        let g = QuadratureGrid::composite(-2.0, 8.0, 4, 6).unwrap();
        let (_, forward) = off_diagonal_blocks(0.7, &g, &g);
        assert!((&forward - forward.transpose()).amax() < 1e-15);
    }

    #[test]
    fn marginal_when_one_level_is_large() {
        let v = joint_cdf_certified(8.0, -1.0, 1.0, 1e-8).unwrap().value;
        assert!((v - f2(-1.0)).abs() < 1e-4);
    }

    #[test]
    fn rejects_nonpositive_separation() {
        let g = joint_grid(0.0, 1.0);
        assert!(joint_cdf(0.0, 0.0, 0.0, &g, &g).is_err());
    }
}
