//! Bessel functions of the first kind.
//!
//! Real order is evaluated by the ascending series for small arguments and by
//! Miller's backward recurrence (normalised with the Neumann-type sum
//! `(x/2)^mu = sum_k (mu+2k) Gamma(mu+k)/k! J_{mu+2k}(x)`) otherwise. Integer
//! order batches use the same recurrence normalised with
//! `J_0^2 + 2 sum J_n^2 = 1`, which has no cancellation.

use crate::error::{Error, Result};

/// Tunable constants of the Bessel evaluator. The defaults are the values the
/// test-suite pins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEvalConfig {
    /// Maximum number of terms of the ascending series.
    pub series_cutoff_terms: usize,
    /// Arguments above this value use backward recurrence instead of the
    /// ascending series.
    pub asymptotic_switch_argument: f64,
    /// Step `h` of the central difference in the order variable.
    pub order_derivative_step: f64,
}

impl Default for BesselEvalConfig {
    fn default() -> Self {
        Self {
            series_cutoff_terms: 200,
            asymptotic_switch_argument: 5.0,
            order_derivative_step: 1e-4,
        }
    }
}

/// Largest argument for which accuracy is claimed.
pub const MAX_VALIDATED_ARG: f64 = 1e4;

impl BesselEvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.series_cutoff_terms < 20 {
            return Err(Error::InvalidParameter(format!(
                "series_cutoff_terms = {} < 20",
                self.series_cutoff_terms
            )));
        }
        if !(self.order_derivative_step > 0.0 && self.order_derivative_step <= 1e-2) {
            return Err(Error::InvalidParameter(format!(
                "order_derivative_step = {} not in (0, 1e-2]",
                self.order_derivative_step
            )));
        }
        if !(self.asymptotic_switch_argument > 0.0) {
            return Err(Error::InvalidParameter(
                "asymptotic_switch_argument must be positive".into(),
            ));
        }
        Ok(())
    }

    /// `true` when `(order, x)` is inside the regime where ten significant
    /// digits are guaranteed.
    pub fn is_validated(&self, order: f64, x: f64) -> bool {
        if x <= self.asymptotic_switch_argument {
            return true;
        }
        (order >= -1.0 || order.fract() == 0.0)
            && x <= MAX_VALIDATED_ARG
            && order.abs() <= x + 50.0 * x.cbrt()
    }

    /// `J_order(x)`.
    pub fn j(&self, order: f64, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain {
                function: "bessel_j",
                arg: x,
            });
        }
        if x == 0.0 {
            return Ok(j_at_zero(order));
        }
        if !self.is_validated(order, x) {
            return Err(Error::AccuracyLoss {
                function: "bessel_j",
                order,
                arg: x,
            });
        }
        Ok(self.j_unchecked(order, x))
    }

    pub(crate) fn j_unchecked(&self, order: f64, x: f64) -> f64 {
        if x == 0.0 {
            return j_at_zero(order);
        }
        if order < 0.0 && order.fract() == 0.0 {
            let n = -order;
            let sign = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
            return sign * self.j_unchecked(n, x);
        }
        if x <= self.asymptotic_switch_argument || order < -1.0 {
            ascending_series(order, x, self.series_cutoff_terms)
        } else {
            miller_real_order(order, x)
        }
    }

    /// `dJ_nu(x)/dnu` at `nu = n`, by a Richardson-extrapolated central
    /// difference on the real-order evaluator.
    pub fn j_dorder(&self, n: i64, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain {
                function: "bessel_j_dorder",
                arg: x,
            });
        }
        let h = self.order_derivative_step;
        if x == 0.0 {
            // J_nu(0) vanishes identically for nu > 0.
            if n >= 1 {
                return Ok(0.0);
            }
            return Err(Error::Domain {
                function: "bessel_j_dorder",
                arg: x,
            });
        }
        let nf = n as f64;
        for nu in [nf - h, nf + h] {
            if !self.is_validated(nu, x) {
                return Err(Error::AccuracyLoss {
                    function: "bessel_j_dorder",
                    order: nu,
                    arg: x,
                });
            }
        }
        Ok(self.dorder_richardson(nf, x).0)
    }

    /// Returns the extrapolated derivative together with an estimate of its
    /// error (difference to the plain half-step central difference).
    pub(crate) fn dorder_richardson(&self, order: f64, x: f64) -> (f64, f64) {
        let h = self.order_derivative_step;
        let central = |step: f64| {
            (self.j_unchecked(order + step, x) - self.j_unchecked(order - step, x)) / (2.0 * step)
        };
        let coarse = central(h);
        let fine = central(0.5 * h);
        let extrapolated = (4.0 * fine - coarse) / 3.0;
        (extrapolated, (extrapolated - fine).abs())
    }
}

/// `J_order(x)` with the default configuration.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    BesselEvalConfig::default().j(order, x)
}

/// `dJ_nu(x)/dnu` at integer `nu = n` with the default configuration.
pub fn bessel_j_dorder(n: i64, x: f64) -> Result<f64> {
    BesselEvalConfig::default().j_dorder(n, x)
}

fn j_at_zero(order: f64) -> f64 {
    if order == 0.0 {
        1.0
    } else if order > 0.0 || order.fract() == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn recip_gamma(z: f64) -> f64 {
    if z <= 0.0 && z.fract() == 0.0 {
        return 0.0;
    }
    1.0 / libm::tgamma(z)
}

fn ascending_series(order: f64, x: f64, max_terms: usize) -> f64 {
    let half = 0.5 * x;
    let mut term = if order + 1.0 > 0.0 {
        (order * half.ln() - libm::lgamma(order + 1.0)).exp()
    } else {
        half.powf(order) * recip_gamma(order + 1.0)
    };
    let q = -half * half;
    let mut sum = term;
    for k in 0..max_terms {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (order + kf + 1.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && kf > half {
            break;
        }
    }
    sum
}

const RESCALE_AT: f64 = 1e120;
const RESCALE_BY: f64 = 1e-120;

fn recurrence_start(order: f64, x: f64) -> usize {
    let top = order.max(x).max(0.0);
    (top + 20.0 * x.max(1.0).cbrt() + 30.0).ceil() as usize
}

/// Miller's algorithm for real order `order > -1`, `x > 0`.
fn miller_real_order(order: f64, x: f64) -> f64 {
    let base = order.floor();
    let mu = order - base;
    let target = base as i64;
    let start = recurrence_start(order, x);

    // weights[m] = Gamma(mu + m) / m!, built forward for stability.
    let half_len = start / 2 + 1;
    let mut weights = Vec::with_capacity(half_len + 1);
    weights.push(0.0);
    let mut w = libm::tgamma(1.0 + mu);
    weights.push(w);
    for m in 1..half_len {
        let mf = m as f64;
        w *= (mu + mf) / (mf + 1.0);
        weights.push(w);
    }
    let coeff = |m: usize| -> f64 {
        if m == 0 {
            libm::tgamma(1.0 + mu)
        } else {
            (mu + 2.0 * m as f64) * weights[m]
        }
    };

    let mut upper = 0.0_f64; // f_{k+1}
    let mut current = 1e-30_f64; // f_k
    let mut norm = 0.0;
    let mut captured = if target == start as i64 {
        Some(current)
    } else {
        None
    };
    if start.is_multiple_of(2) {
        norm += coeff(start / 2) * current;
    }
    let mut k = start as i64;
    while k > target.min(0) {
        let next = 2.0 * (mu + k as f64) / x * current - upper;
        upper = current;
        current = next;
        k -= 1;
        if k >= 0 && k % 2 == 0 {
            norm += coeff(k as usize / 2) * current;
        }
        if k == target {
            captured = Some(current);
        }
        if current.abs() > RESCALE_AT {
            current *= RESCALE_BY;
            upper *= RESCALE_BY;
            norm *= RESCALE_BY;
            if let Some(c) = captured.as_mut() {
                *c *= RESCALE_BY;
            }
        }
    }
    let value = captured.unwrap_or(0.0);
    value * (0.5 * x).powf(mu) / norm
}

/// `J_n(x)` for all integer orders `0..=max_order` at a fixed argument.
#[derive(Debug, Clone)]
pub struct BesselTable {
    arg: f64,
    values: Vec<f64>,
}

impl BesselTable {
    pub fn new(x: f64, max_order: usize) -> Result<Self> {
        if !(x >= 0.0) {
            return Err(Error::Domain {
                function: "BesselTable",
                arg: x,
            });
        }
        let mut values = vec![0.0; max_order + 1];
        if x == 0.0 {
            values[0] = 1.0;
            return Ok(Self { arg: x, values });
        }
        let start = recurrence_start(max_order as f64, x);
        let mut upper = 0.0_f64;
        let mut current = 1e-30_f64;
        let mut squares = 0.0;
        let mut linear = 0.0;
        let mut k = start;
        loop {
            if k <= max_order {
                values[k] = current;
            }
            let weight = if k == 0 { 1.0 } else { 2.0 };
            squares += weight * current * current;
            if k.is_multiple_of(2) {
                linear += weight * current;
            }
            if k == 0 {
                break;
            }
            let next = 2.0 * k as f64 / x * current - upper;
            upper = current;
            current = next;
            k -= 1;
            if current.abs() > RESCALE_AT {
                current *= RESCALE_BY;
                upper *= RESCALE_BY;
                squares *= RESCALE_BY * RESCALE_BY;
                linear *= RESCALE_BY;
                for v in values.iter_mut().skip(k + 1) {
                    *v *= RESCALE_BY;
                }
            }
        }
        let scale = linear.signum() / squares.sqrt();
        for v in &mut values {
            *v *= scale;
        }
        Ok(Self { arg: x, values })
    }

    pub fn arg(&self) -> f64 {
        self.arg
    }

    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }

    /// `J_n(x)` for any integer `n` with `|n| <= max_order`.
    pub fn get(&self, n: i64) -> f64 {
        let m = n.unsigned_abs() as usize;
        assert!(
            m < self.values.len(),
            "order {n} beyond table (max {})",
            self.max_order()
        );
        let v = self.values[m];
        if n < 0 && m % 2 == 1 {
            -v
        } else {
            v
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Order beyond which `J_n(x)` is below double precision relative to the
/// bulk; tables sized to this bound lose nothing in truncated sums.
pub fn negligible_order(x: f64) -> usize {
    (x + 12.0 * x.max(1.0).cbrt() + 40.0).ceil() as usize
}
