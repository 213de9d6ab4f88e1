//! The discrete Bessel kernel `B_t(i, j) = sum_{k >= 0} J_{i+k}(2t) J_{j+k}(2t)`
//! and the distribution of the droplet height at the origin.

use serde::{Deserialize, Serialize};

use super::fredholm::KernelMatrix;
use crate::error::{Error, Result};
use crate::special::{negligible_order, BesselEvalConfig, BesselTable};

/// Absolute accuracy targeted for single kernel entries.
const ENTRY_TOL: f64 = 1e-13;
/// Finite-difference noise above which the diagonal falls back to the series.
const DIAGONAL_NOISE_TOL: f64 = 1e-8;
/// `J_n(2t)` beyond the table must be below this for the series to be exact.
const TAIL_TOL: f64 = 1e-17;

/// Which formula produced a kernel entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntryMethod {
    ClosedForm,
    OrderDerivative,
    Series,
}

/// Kernel at a fixed time `t >= 0`, backed by a table of `J_n(2t)`.
#[derive(Debug, Clone)]
pub struct DiscreteBesselKernel {
    t: f64,
    table: BesselTable,
    cutoff: i64,
    config: BesselEvalConfig,
}

impl DiscreteBesselKernel {
    pub fn new(t: f64) -> Result<Self> {
        Self::with_config(t, BesselEvalConfig::default())
    }

    pub fn with_config(t: f64, config: BesselEvalConfig) -> Result<Self> {
        config.validate()?;
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "discrete Bessel kernel at t = {t}"
            )));
        }
        let cutoff = negligible_order(2.0 * t);
        let table = BesselTable::new(2.0 * t, cutoff)?;
        let edge = table.get(cutoff as i64).abs();
        if t > 0.0 && edge > TAIL_TOL {
            return Err(Error::Truncation(format!(
                "J_{cutoff}({}) = {edge:e} is not negligible",
                2.0 * t
            )));
        }
        Ok(Self {
            t,
            table,
            cutoff: cutoff as i64,
            config,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Orders beyond `±cutoff` are treated as zero.
    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    /// `J_n(2t)`, zero beyond the table.
    pub fn j(&self, n: i64) -> f64 {
        if n.abs() > self.cutoff {
            0.0
        } else {
            self.table.get(n)
        }
    }

    pub fn entry(&self, i: i64, j: i64) -> f64 {
        self.entry_with_method(i, j).0
    }

    /// Kernel entry together with the formula that produced it.
    pub fn entry_with_method(&self, i: i64, j: i64) -> (f64, EntryMethod) {
        if self.t == 0.0 {
            let v = if i == j && i <= 0 { 1.0 } else { 0.0 };
            return (v, EntryMethod::Series);
        }
        if i != j {
            let a = self.j(i - 1) * self.j(j);
            let b = self.j(i) * self.j(j - 1);
            let scale = self.t / (i - j).abs() as f64;
            if 4.0 * f64::EPSILON * scale * (a.abs() + b.abs()) <= ENTRY_TOL {
                return (self.t / (i - j) as f64 * (a - b), EntryMethod::ClosedForm);
            }
            return (self.series(i, j), EntryMethod::Series);
        }
        if i <= 0 {
            // 1 - sum_{m < i} J_m^2: no cancellation, and never above 1.
            let below: f64 = (-self.cutoff..i).map(|m| self.j(m).powi(2)).sum();
            return (1.0 - below, EntryMethod::Series);
        }
        match self.diagonal_by_derivative(i) {
            Some(v) => (v, EntryMethod::OrderDerivative),
            None => (self.series(i, i), EntryMethod::Series),
        }
    }

    /// `t (L_{i-1} J_i - L_i J_{i-1})` with `L_n = dJ_nu/dnu` at `nu = n`,
    /// or `None` when the finite differences are not trustworthy.
    fn diagonal_by_derivative(&self, i: i64) -> Option<f64> {
        let x = 2.0 * self.t;
        if i > self.cutoff + 1 {
            return Some(0.0);
        }
        // Real orders below -1 are only reliable in the series regime.
        if i < 1 && x > self.config.asymptotic_switch_argument {
            return None;
        }
        let (l_prev, e_prev) = self.config.dorder_richardson((i - 1) as f64, x);
        let (l_cur, e_cur) = self.config.dorder_richardson(i as f64, x);
        let (j_cur, j_prev) = (self.j(i), self.j(i - 1));
        let value = self.t * (l_prev * j_cur - l_cur * j_prev);
        let noise = self.t * (e_prev * j_cur.abs() + e_cur * j_prev.abs());
        if value.is_finite() && noise <= DIAGONAL_NOISE_TOL {
            Some(value)
        } else {
            None
        }
    }

    /// Truncated series `sum_{k >= 0} J_{i+k} J_{j+k}`; terms with an order
    /// beyond the cutoff vanish to double precision.
    pub fn series(&self, i: i64, j: i64) -> f64 {
        let n = self.cutoff;
        let k_lo = 0.max(-n - i).max(-n - j);
        let k_hi = (n - i).min(n - j);
        (k_lo..=k_hi.max(k_lo - 1))
            .map(|k| self.j(i + k) * self.j(j + k))
            .sum()
    }

    /// `sum_{k >= from} B_t(k, k) = sum_{m >= from} (m - from + 1) J_m^2`.
    pub fn diagonal_tail(&self, from: i64) -> f64 {
        if self.t == 0.0 {
            return if from <= 0 { f64::INFINITY } else { 0.0 };
        }
        let start = from.max(-self.cutoff - 1);
        if from < -self.cutoff {
            return f64::INFINITY;
        }
        (start..=self.cutoff)
            .map(|m| (m - from + 1) as f64 * self.j(m).powi(2))
            .sum()
    }

    /// Matrix of the kernel on the window `[start, start + size)`.
    pub fn matrix(&self, start: i64, size: usize) -> KernelMatrix {
        KernelMatrix::lattice(start, size, |i, j| {
            if j < i {
                // Filled from the symmetric entry for exact symmetry.
                self.entry(j, i)
            } else {
                self.entry(i, j)
            }
        })
    }
}

/// `B_t(i, j)`.
pub fn discrete_bessel(t: f64, i: i64, j: i64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "discrete_bessel needs t > 0, got {t}"
        )));
    }
    Ok(DiscreteBesselKernel::new(t)?.entry(i, j))
}

/// Largest window the height distribution may use.
pub const DEFAULT_MAX_WINDOW: usize = 4000;

/// `P(h(0, t) < n)` together with the truncation that certifies it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightCdf {
    pub n: i64,
    pub probability: f64,
    /// Size `M` of the window `[n, n + M)`.
    pub window: usize,
    /// Neglected `sum_{k >= n + M} B_t(k, k)`.
    pub tail_bound: f64,
}

/// `P(h(0, t) < n) = det(1 - P_n B_t)` on a window `[n, n + M)` with the
/// neglected diagonal tail below `tol`.
pub fn height_cdf_exact(t: f64, n: i64, tol: f64) -> Result<HeightCdf> {
    let kernel = DiscreteBesselKernel::new(t)?;
    height_cdf_with_kernel(&kernel, n, tol, DEFAULT_MAX_WINDOW)
}

pub fn height_cdf_with_kernel(
    kernel: &DiscreteBesselKernel,
    n: i64,
    tol: f64,
    max_window: usize,
) -> Result<HeightCdf> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be positive"
        )));
    }
    if n <= 0 {
        // The height is nonnegative, so the event is empty.
        return Ok(HeightCdf {
            n,
            probability: 0.0,
            window: 0,
            tail_bound: 0.0,
        });
    }
    let mut window = 0usize;
    let mut tail = kernel.diagonal_tail(n);
    while tail >= tol {
        window += 1;
        if window > max_window {
            return Err(Error::Truncation(format!(
                "height distribution at t = {} needs a window larger than {max_window}",
                kernel.t()
            )));
        }
        tail = kernel.diagonal_tail(n + window as i64);
    }
    let probability = if window == 0 {
        1.0
    } else {
        kernel.matrix(n, window).fredholm_det().clamp(0.0, 1.0)
    };
    Ok(HeightCdf {
        n,
        probability,
        window,
        tail_bound: tail,
    })
}

/// `P(h(0, t) = n)` for `n = 0, 1, ...` until the upper tail is below `tol`.
pub fn height_pmf_exact(t: f64, tol: f64) -> Result<Vec<f64>> {
    let kernel = DiscreteBesselKernel::new(t)?;
    let mut cdf = vec![0.0];
    let mut n = 1;
    loop {
        let c = height_cdf_with_kernel(&kernel, n, tol, DEFAULT_MAX_WINDOW)?.probability;
        cdf.push(c);
        if 1.0 - c < tol {
            break;
        }
        n += 1;
    }
    Ok(cdf.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect())
}
