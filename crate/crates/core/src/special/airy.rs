//! Airy function `Ai` and its derivative.
//!
//! On `[-8, 8]` values come from a table of `(Ai, Ai')` at spacing 1/4 and a
//! Taylor expansion of the Airy equation `y'' = u y` about the nearest node.
//! The positive half of the table is generated by stepping down from the
//! asymptotic expansion at `u = 10` (the stable direction for the recessive
//! solution), the negative half by stepping down from the exact values at
//! zero. Outside `[-8, 8]` the standard asymptotic expansions are used.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const AIRY_VALIDATED_MIN: f64 = -40.0;
pub const AIRY_VALIDATED_MAX: f64 = 200.0;

/// `Ai(0) = 3^{-2/3} / Gamma(2/3)`.
pub const AI_ZERO: f64 = 0.355_028_053_887_817_2;
/// `Ai'(0) = -3^{-1/3} / Gamma(1/3)`.
pub const AI_PRIME_ZERO: f64 = -0.258_819_403_792_806_8;

const TABLE_HALF_WIDTH: f64 = 8.0;
const TABLE_STEP: f64 = 0.25;
const TABLE_NODES: usize = 65; // (2 * 8) / 0.25 + 1
const ASYMPTOTIC_ANCHOR: f64 = 10.0;

fn check_range(function: &'static str, u: f64) -> Result<()> {
    if (AIRY_VALIDATED_MIN..=AIRY_VALIDATED_MAX).contains(&u) {
        Ok(())
    } else {
        Err(Error::Range {
            function,
            arg: u,
            lo: AIRY_VALIDATED_MIN,
            hi: AIRY_VALIDATED_MAX,
        })
    }
}

/// `Ai(u)` on the validated range `[-40, 200]`.
pub fn airy_ai(u: f64) -> Result<f64> {
    check_range("airy_ai", u)?;
    Ok(airy(u).0)
}

/// `Ai'(u)` on the validated range `[-40, 200]`.
pub fn airy_ai_prime(u: f64) -> Result<f64> {
    check_range("airy_ai_prime", u)?;
    Ok(airy(u).1)
}

/// `(Ai(u), Ai'(u))` for any finite `u`, without the range check. Accuracy
/// outside the validated interval is that of the asymptotic expansions.
pub fn airy(u: f64) -> (f64, f64) {
    if u > TABLE_HALF_WIDTH {
        return asymptotic_positive(u);
    }
    if u < -TABLE_HALF_WIDTH {
        return asymptotic_negative(-u);
    }
    let table = table();
    let idx = ((u + TABLE_HALF_WIDTH) / TABLE_STEP).round() as usize;
    let idx = idx.min(TABLE_NODES - 1);
    let node = -TABLE_HALF_WIDTH + idx as f64 * TABLE_STEP;
    let (y, dy) = table[idx];
    taylor_step(node, y, dy, u - node)
}

fn table() -> &'static [(f64, f64); TABLE_NODES] {
    static TABLE: OnceLock<[(f64, f64); TABLE_NODES]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [(0.0, 0.0); TABLE_NODES];
        let zero = TABLE_NODES / 2;
        // Positive half: integrate downward from the asymptotic anchor.
        let mut u = ASYMPTOTIC_ANCHOR;
        let (mut y, mut dy) = asymptotic_positive(u);
        while u > TABLE_HALF_WIDTH + 1e-12 {
            (y, dy) = taylor_step(u, y, dy, -TABLE_STEP);
            u -= TABLE_STEP;
        }
        for i in (zero..TABLE_NODES).rev() {
            t[i] = (y, dy);
            if i > zero {
                (y, dy) = taylor_step(u, y, dy, -TABLE_STEP);
                u -= TABLE_STEP;
            }
        }
        // Negative half from the exact values at the origin.
        t[zero] = (AI_ZERO, AI_PRIME_ZERO);
        let (mut y, mut dy) = (AI_ZERO, AI_PRIME_ZERO);
        let mut u = 0.0;
        for i in (0..zero).rev() {
            (y, dy) = taylor_step(u, y, dy, -TABLE_STEP);
            u -= TABLE_STEP;
            t[i] = (y, dy);
        }
        t
    })
}

/// Advances a solution of `y'' = u y` from `u0` by `h` with a Taylor series.
pub(crate) fn taylor_step(u0: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    // a_{k+2} = (u0 a_k + a_{k-1}) / ((k+1)(k+2))
    let mut a_prev = 0.0; // a_{k-1}
    let mut a = [y, dy];
    let mut value = y + dy * h;
    let mut deriv = dy;
    let mut hp = h; // h^{k+1} for the term a_{k+2}
    let mut k = 0usize;
    loop {
        let next = (u0 * a[0] + a_prev) / (((k + 1) * (k + 2)) as f64);
        let hk1 = hp; // h^{k+1}
        hp *= h;
        value += next * hp;
        deriv += (k + 2) as f64 * next * hk1;
        a_prev = a[0];
        a[0] = a[1];
        a[1] = next;
        k += 1;
        let scale = value.abs().max(deriv.abs()).max(1e-300);
        if k > 6 && (next * hp).abs() < 1e-18 * scale && (a[0] * hk1).abs() < 1e-18 * scale {
            break;
        }
        if k > 80 {
            break;
        }
    }
    (value, deriv)
}

fn asymptotic_u(k: usize) -> f64 {
    let mut u = 1.0;
    for j in 1..=k {
        let jf = j as f64;
        u *= (6.0 * jf - 5.0) * (6.0 * jf - 3.0) * (6.0 * jf - 1.0)
            / ((2.0 * jf - 1.0) * 216.0 * jf);
    }
    u
}

fn asymptotic_coefficients() -> &'static [(f64, f64)] {
    static COEFFS: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        (0..130)
            .map(|k| {
                let u = asymptotic_u(k);
                let kf = k as f64;
                let v = if k == 0 {
                    1.0
                } else {
                    -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u
                };
                (u, v)
            })
            .collect()
    })
}

/// Sums `sum_k sign^k c_k / zeta^k` until the terms stop decreasing.
fn truncated_sum(zeta: f64, coeff: impl Fn(usize) -> f64, alternate: bool) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut zk = 1.0;
    for k in 0..60 {
        let term = coeff(k) / zk;
        if term.abs() > last {
            break;
        }
        sum += if alternate && k % 2 == 1 { -term } else { term };
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        last = term.abs();
        zk *= zeta;
    }
    sum
}

fn asymptotic_positive(u: f64) -> (f64, f64) {
    let c = asymptotic_coefficients();
    let zeta = 2.0 / 3.0 * u * u.sqrt();
    let q = u.sqrt().sqrt();
    let pref = (-zeta).exp() / (2.0 * PI.sqrt());
    let ai = pref / q * truncated_sum(zeta, |k| c[k].0, true);
    let aip = -pref * q * truncated_sum(zeta, |k| c[k].1, true);
    (ai, aip)
}

/// `(Ai(-x), Ai'(-x))` for large positive `x`.
fn asymptotic_negative(x: f64) -> (f64, f64) {
    let c = asymptotic_coefficients();
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let q = x.sqrt().sqrt();
    let even = |sel: fn(&(f64, f64)) -> f64| truncated_sum(zeta * zeta, |k| sel(&c[2 * k]), true);
    let odd = |sel: fn(&(f64, f64)) -> f64| {
        truncated_sum(zeta * zeta, |k| sel(&c[2 * k + 1]), true) / zeta
    };
    let p = even(|c| c.0);
    let qq = odd(|c| c.0);
    let r = even(|c| c.1);
    let s = odd(|c| c.1);
    let (sn, cs) = (zeta + FRAC_PI_4).sin_cos();
    let ai = (sn * p - cs * qq) / (PI.sqrt() * q);
    let aip = -q / PI.sqrt() * (cs * r + sn * s);
    (ai, aip)
}
