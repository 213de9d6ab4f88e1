//! Independent route to `F_2` through the Hastings-McLeod solution of
//! Painleve II: `u'' = 2u^3 + x u`, `u ~ Ai` at `+inf`, and
//! `F_2(a) = exp(-g(a))` with `g'' = u^2`, `g(+inf) = g'(+inf) = 0`.
//!
//! The system is integrated downward from `x0 = 8` with a Taylor-series
//! method of fixed high order and adaptive step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::airy;

/// Starting point of the backward integration.
pub const PAINLEVE_START: f64 = 8.0;
/// Smallest argument for which the shooting solution is trusted.
pub const PAINLEVE_MIN: f64 = -8.0;

const ORDER: usize = 30;
const STEP_TOL: f64 = 1e-17;
const MAX_STEP: f64 = 0.5;
/// Below this point `u` is compared with the envelope `sqrt(-x/2)`.
const ENVELOPE_CHECK_BELOW: f64 = -4.0;
const ENVELOPE_SLACK: f64 = 0.05;

/// State of the coupled system at `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PainleveState {
    pub x: f64,
    pub u: f64,
    pub u_prime: f64,
    pub g: f64,
    pub g_prime: f64,
}

/// Boundary data at `x >= 8`, where `u = Ai` to double precision. Uses
/// `int_x^inf Ai^2 = Ai'^2 - x Ai^2` and
/// `int_x^inf s Ai^2 = (x Ai'^2 - x^2 Ai^2 - Ai Ai') / 3`.
fn airy_state(x: f64) -> PainleveState {
    let (a, ap) = airy(x);
    let i1 = ap * ap - x * a * a;
    let i2 = (x * ap * ap - x * x * a * a - a * ap) / 3.0;
    PainleveState {
        x,
        u: a,
        u_prime: ap,
        g: i2 - x * i1,
        g_prime: -i1,
    }
}

/// One Taylor step of length `h` (either sign); returns the new state and
/// the step actually taken.
fn taylor_step(s: &PainleveState, max_h: f64) -> (PainleveState, f64) {
    let mut u = [0.0; ORDER + 1];
    let mut g = [0.0; ORDER + 1];
    let mut sq = [0.0; ORDER + 1];
    let mut cube = [0.0; ORDER + 1];
    u[0] = s.u;
    u[1] = s.u_prime;
    g[0] = s.g;
    g[1] = s.g_prime;
    for k in 0..=ORDER - 2 {
        sq[k] = (0..=k).map(|i| u[i] * u[k - i]).sum();
        cube[k] = (0..=k).map(|i| sq[i] * u[k - i]).sum();
        let prev = if k > 0 { u[k - 1] } else { 0.0 };
        let denom = ((k + 2) * (k + 1)) as f64;
        u[k + 2] = (2.0 * cube[k] + s.x * u[k] + prev) / denom;
        g[k + 2] = sq[k] / denom;
    }
    // Step from the size of the last two coefficients.
    let scale = 1.0 + s.u.abs() + s.g.abs();
    let mut h = max_h.abs();
    for c in [u[ORDER], u[ORDER - 1], g[ORDER], g[ORDER - 1]] {
        if c != 0.0 {
            h = h.min((STEP_TOL * scale / c.abs()).powf(1.0 / (ORDER - 1) as f64));
        }
    }
    let h = h * max_h.signum();
    let eval = |c: &[f64; ORDER + 1]| {
        let mut v = 0.0;
        let mut d = 0.0;
        for k in (0..=ORDER).rev() {
            v = v * h + c[k];
            if k >= 1 {
                d = d * h + k as f64 * c[k];
            }
        }
        (v, d)
    };
    let (nu, nup) = eval(&u);
    let (ng, ngp) = eval(&g);
    (
        PainleveState {
            x: s.x + h,
            u: nu,
            u_prime: nup,
            g: ng,
            g_prime: ngp,
        },
        h,
    )
}

/// Solution of the coupled system at `a >= -8`.
pub fn painleve_state(a: f64) -> Result<PainleveState> {
    if !(a >= PAINLEVE_MIN) || !a.is_finite() {
        return Err(Error::Range {
            function: "painleve_f2",
            arg: a,
            lo: PAINLEVE_MIN,
            hi: f64::INFINITY,
        });
    }
    if a >= PAINLEVE_START {
        return Ok(airy_state(a));
    }
    let mut s = airy_state(PAINLEVE_START);
    while s.x > a {
        let (next, _) = taylor_step(&s, (-(s.x - a)).max(-MAX_STEP));
        s = next;
        if !(s.u.is_finite() && s.g.is_finite()) {
            return Err(Error::Instability(format!(
                "Painleve II solution diverged near x = {}",
                s.x
            )));
        }
        if s.x < ENVELOPE_CHECK_BELOW {
            let env = (-s.x / 2.0).sqrt();
            if ((s.u - env) / env).abs() > ENVELOPE_SLACK {
                return Err(Error::Instability(format!(
                    "lost the Hastings-McLeod separatrix at x = {}: u = {}, sqrt(-x/2) = {env}",
                    s.x, s.u
                )));
            }
        }
    }
    // Land exactly on a.
    s.x = a.max(s.x);
    Ok(s)
}

/// `F_2(a) = exp(-g(a))`.
pub fn painleve_f2(a: f64) -> Result<f64> {
    Ok((-painleve_state(a)?.g).exp())
}
