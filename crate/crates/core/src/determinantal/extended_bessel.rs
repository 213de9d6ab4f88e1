//! Extended discrete Bessel kernel `B_t(j, x; j', x')` for two positions on
//! the droplet, and its edge-scaled form `K_t(u, y; u', y')`.
//!
//! With `s = sqrt(t^2 - x^2)`, `r(x) = (t + x) / (t - x)` and
//! `phi_l(j, x) = r(x)^{(j-l)/2} J_{j-l}(2s)`, the kernel is
//! `sum_{l <= 0} phi_l(j, x) psi_l(j', x')` for `x < x'` and
//! `-sum_{l >= 1} phi_l(j, x) psi_l(j', x')` for `x > x'`, where
//! `psi_l(j', x') = r(x')^{-(j'-l)/2} J_{j'-l}(2s')`. This is the spectral form
//! of `e^{-xH}(B_t - 1 theta(x - x')) e^{x'H}` with `B_t` projecting onto
//! `l <= 0`. At `x = x'` the kernel is `r^{(j-j')/2} B_s(j, j')`.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::airy_kernel::airy_kernel;
use super::bessel_kernel::DiscreteBesselKernel;
use super::extended_airy::extended_airy_kernel;
use crate::error::{Error, Result};
use crate::special::{negligible_order, BesselTable};

/// Relative size of the boundary terms that certifies the `l`-sum.
const SUM_TOL: f64 = 1e-13;

/// Evaluator for one time `t`, caching Bessel tables per position.
#[derive(Debug)]
pub struct ExtendedBesselKernel {
    t: f64,
    equal_time: Mutex<HashMap<u64, std::sync::Arc<DiscreteBesselKernel>>>,
    tables: Mutex<HashMap<u64, std::sync::Arc<(BesselTable, i64)>>>,
}

impl ExtendedBesselKernel {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "extended Bessel kernel at t = {t}"
            )));
        }
        Ok(Self {
            t,
            equal_time: Mutex::new(HashMap::new()),
            tables: Mutex::new(HashMap::new()),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    fn check_position(&self, x: f64) -> Result<()> {
        if !(x.abs() < self.t) {
            return Err(Error::Range {
                function: "extended_bessel",
                arg: x,
                lo: -self.t,
                hi: self.t,
            });
        }
        Ok(())
    }

    fn reduced_time(&self, x: f64) -> f64 {
        ((self.t - x) * (self.t + x)).sqrt()
    }

    /// Equal-time kernel `B_{sqrt(t^2 - x^2)}`.
    pub fn equal_time_kernel(&self, x: f64) -> Result<std::sync::Arc<DiscreteBesselKernel>> {
        self.check_position(x)?;
        let key = x.to_bits();
        if let Some(k) = self.equal_time.lock().unwrap().get(&key) {
            return Ok(k.clone());
        }
        let k = std::sync::Arc::new(DiscreteBesselKernel::new(self.reduced_time(x))?);
        self.equal_time.lock().unwrap().insert(key, k.clone());
        Ok(k)
    }

    fn table(&self, x: f64) -> Result<std::sync::Arc<(BesselTable, i64)>> {
        let key = x.to_bits();
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let arg = 2.0 * self.reduced_time(x);
        let cutoff = negligible_order(arg);
        let table = std::sync::Arc::new((BesselTable::new(arg, cutoff)?, cutoff as i64));
        self.tables.lock().unwrap().insert(key, table.clone());
        Ok(table)
    }

    /// `B_t(j, x; j2, x2)`.
    pub fn entry(&self, j: i64, x: f64, j2: i64, x2: f64) -> Result<f64> {
        self.conjugated_entry(j, x, j2, x2, 0.0)
    }

    /// `exp(log_factor) B_t(j, x; j2, x2)`, with the factor folded into every
    /// term so that large conjugations neither overflow nor underflow.
    pub fn conjugated_entry(
        &self,
        j: i64,
        x: f64,
        j2: i64,
        x2: f64,
        log_factor: f64,
    ) -> Result<f64> {
        self.check_position(x)?;
        self.check_position(x2)?;
        let t = self.t;
        let log_r = ((t + x) / (t - x)).ln();
        if x == x2 {
            let b = self.equal_time_kernel(x)?.entry(j, j2);
            return Ok(b * (log_factor + 0.5 * (j - j2) as f64 * log_r).exp());
        }
        let log_r2 = ((t - x2) / (t + x2)).ln();
        let left = self.table(x)?;
        let right = self.table(x2)?;
        let (ref tl, nl) = *left;
        let (ref tr, nr) = *right;
        // Nonzero terms need |j - l| <= nl and |j2 - l| <= nr.
        let (l_min, l_max) = if x < x2 { (i64::MIN, 0) } else { (1, i64::MAX) };
        let lo = l_min.max(j - nl).max(j2 - nr);
        let hi = l_max.min(j + nl).min(j2 + nr);
        let mut sum = 0.0;
        let mut largest = 0.0_f64;
        let mut boundary = 0.0_f64;
        for l in lo..=hi {
            let a = tl.get(j - l);
            let b = tr.get(j2 - l);
            if a == 0.0 || b == 0.0 {
                continue;
            }
            let log_mag = log_factor
                + 0.5 * (j - l) as f64 * log_r
                + 0.5 * (j2 - l) as f64 * log_r2
                + a.abs().ln()
                + b.abs().ln();
            let term = (a * b).signum() * log_mag.exp();
            sum += term;
            largest = largest.max(term.abs());
            if (j - l).abs() == nl || (j2 - l).abs() == nr {
                boundary = boundary.max(term.abs());
            }
        }
        if !sum.is_finite() || boundary > SUM_TOL * largest.max(f64::MIN_POSITIVE) {
            return Err(Error::Truncation(format!(
                "extended kernel sum at (j={j}, x={x}; j'={j2}, x'={x2}) not certified: boundary term {boundary:e}"
            )));
        }
        Ok(if x < x2 { sum } else { -sum })
    }
}

/// `B_t(j, x; j2, x2)`.
pub fn extended_bessel(t: f64, j: i64, x: f64, j2: i64, x2: f64) -> Result<f64> {
    ExtendedBesselKernel::new(t)?.entry(j, x, j2, x2)
}

/// Lattice index `[2t + t^{1/3}(u - y^2)]`.
pub fn edge_index(t: f64, u: f64, y: f64) -> i64 {
    (2.0 * t + t.cbrt() * (u - y * y)).floor() as i64
}

/// Edge-scaled kernel
/// `K_t(u, y; u', y') = t^{1/3} g_x(j)^{-1} B_t(j, x; j', x') g_{x'}(j')` with
/// `x = t^{2/3} y`, `j = [2t + t^{1/3}(u - y^2)]` and the similarity factor
/// `g_x(n) = ((t + x) / (t - x))^{n/2}`, which behaves like
/// `exp(2 t^{2/3} y + (u - y^2) y + 2y^3/3)`. At `y = y'` this is
/// `t^{1/3} B_{sqrt(t^2 - x^2)}(j, j')`.
pub fn edge_scaled_kernel_with(
    k: &ExtendedBesselKernel,
    u: f64,
    y: f64,
    u2: f64,
    y2: f64,
) -> Result<f64> {
    let t = k.t();
    let t13 = t.cbrt();
    let t23 = t13 * t13;
    let (x, x2) = (t23 * y, t23 * y2);
    let (j, j2) = (edge_index(t, u, y), edge_index(t, u2, y2));
    let log_g = |n: i64, x: f64| 0.5 * n as f64 * ((t + x) / (t - x)).ln();
    let log_factor = -log_g(j, x) + log_g(j2, x2);
    Ok(t13 * k.conjugated_entry(j, x, j2, x2, log_factor)?)
}

pub fn edge_scaled_kernel(t: f64, u: f64, y: f64, u2: f64, y2: f64) -> Result<f64> {
    edge_scaled_kernel_with(&ExtendedBesselKernel::new(t)?, u, y, u2, y2)
}

/// One row of a [`ConvergenceReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub t: f64,
    /// `max |K_t - K|` over the sampled box.
    pub sup_distance: f64,
    /// Where the maximum was attained.
    pub argmax: (f64, f64),
    pub samples: usize,
}

/// Distance of the edge-scaled kernel to the Airy kernel for growing `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub y: f64,
    pub y2: f64,
    pub box_half_width: f64,
    pub rows: Vec<ConvergenceRow>,
    pub monotone: bool,
}

/// Sup-norm distance between `K_t(., y; ., y2)` and the extended Airy kernel
/// over `[-w, w]^2`, sampled at the lattice points `u_n = (n - 2t) t^{-1/3} + y^2`,
/// where `K_t` takes the value of its cell. Both kernels are continuous
/// except for the cell structure of `K_t`, so this measures the kernel error
/// without the `O(t^{-1/3})` discretisation of the cells.
pub fn convergence_report(
    t_list: &[f64],
    y: f64,
    y2: f64,
    half_width: f64,
) -> Result<ConvergenceReport> {
    use rayon::prelude::*;
    let mut rows = Vec::new();
    for &t in t_list {
        let k = ExtendedBesselKernel::new(t)?;
        let lattice = |yy: f64| -> Vec<f64> {
            let t13 = t.cbrt();
            let lo = (2.0 * t + t13 * (-half_width - yy * yy)).ceil() as i64;
            let hi = (2.0 * t + t13 * (half_width - yy * yy)).floor() as i64;
            (lo..=hi)
                .map(|n| (n as f64 - 2.0 * t) / t13 + yy * yy)
                .filter(|u| u.abs() <= half_width)
                .collect()
        };
        let us = lattice(y);
        let vs = lattice(y2);
        let airy_vals = |u: f64, v: f64| {
            if y == y2 {
                airy_kernel(u, v)
            } else {
                extended_airy_kernel(u, y, v, y2)
            }
        };
        let best: Vec<Result<(f64, (f64, f64))>> = us
            .par_iter()
            .map(|&u| {
                let mut worst = (0.0, (u, u));
                for &v in &vs {
                    // Nudge onto the cell interior to avoid floor() rounding.
                    let kt = edge_scaled_kernel_with(&k, u + 1e-9, y, v + 1e-9, y2)?;
                    let d = (kt - airy_vals(u, v)).abs();
                    if d > worst.0 {
                        worst = (d, (u, v));
                    }
                }
                Ok(worst)
            })
            .collect();
        let mut sup = (0.0, (0.0, 0.0));
        for b in best {
            let b = b?;
            if b.0 > sup.0 {
                sup = b;
            }
        }
        rows.push(ConvergenceRow {
            t,
            sup_distance: sup.0,
            argmax: sup.1,
            samples: us.len() * vs.len(),
        });
    }
    let monotone = rows
        .windows(2)
        .all(|w| w[1].sup_distance < w[0].sup_distance);
    Ok(ConvergenceReport {
        y,
        y2,
        box_half_width: half_width,
        rows,
        monotone,
    })
}
