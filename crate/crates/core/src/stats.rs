//! Distances and goodness-of-fit tests between empirical and exact laws.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// A test statistic with its p-value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub p_value: f64,
    /// Degrees of freedom (chi-square) or effective sample size (KS).
    pub dof: f64,
}

impl TestOutcome {
    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// Standard error of a binomial proportion.
pub fn binomial_sigma(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Empirical probabilities of the values `0..=max`.
pub fn empirical_pmf(values: &[usize]) -> Vec<f64> {
    let max = values.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0usize; max + 1];
    for &v in values {
        counts[v] += 1;
    }
    counts
        .iter()
        .map(|&c| c as f64 / values.len() as f64)
        .collect()
}

/// `1/2 sum |p - q|`, missing entries counting as zero.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    0.5 * (0..n)
        .map(|i| (p.get(i).unwrap_or(&0.0) - q.get(i).unwrap_or(&0.0)).abs())
        .sum::<f64>()
}

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() || samples.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidParameter("empty or NaN sample".into()));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(s)
}

/// `sup_x |F_n(x) - F(x)|` over the real line, left limits included.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let s = sorted(samples)?;
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < s.len() {
        let x = s[i];
        let below = i as f64 / n;
        while i < s.len() && s[i] == x {
            i += 1;
        }
        let f = cdf(x);
        d = d.max((i as f64 / n - f).abs()).max((below - f).abs());
    }
    Ok(d)
}

/// `max_v |F_n(v) - F(v)|` over the observed values `v`.
///
/// For a lattice-valued sample this compares the two distribution functions
/// on the lattice and ignores the jumps between lattice points.
pub fn ks_lattice(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let s = sorted(samples)?;
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < s.len() {
        let x = s[i];
        while i < s.len() && s[i] == x {
            i += 1;
        }
        d = d.max((i as f64 / n - cdf(x)).abs());
    }
    Ok(d)
}

/// Kolmogorov survival function `Q(l) = 2 sum_k (-1)^{k-1} exp(-2 k^2 l^2)`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// (conservative for discrete data).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestOutcome> {
    let (a, b) = (sorted(a)?, sorted(b)?);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    let sq = ne.sqrt();
    let p = kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d);
    Ok(TestOutcome {
        statistic: d,
        p_value: p,
        dof: ne,
    })
}

/// Chi-square test that two count vectors come from the same law. Bins are
/// merged from the right until every pooled expected count is at least
/// `min_expected`.
pub fn chi_square_two_sample(a: &[usize], b: &[usize], min_expected: f64) -> Result<TestOutcome> {
    let n = a.len().max(b.len());
    let get = |v: &[usize], i: usize| v.get(i).copied().unwrap_or(0) as f64;
    let (na, nb): (f64, f64) = (
        a.iter().sum::<usize>() as f64,
        b.iter().sum::<usize>() as f64,
    );
    if na == 0.0 || nb == 0.0 {
        return Err(Error::InvalidParameter("empty count vector".into()));
    }
    // Pool bins left to right; the remainder joins the last pooled bin.
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut ca, mut cb) = (0.0, 0.0);
    let frac_a = na / (na + nb);
    for i in 0..n {
        ca += get(a, i);
        cb += get(b, i);
        let total = ca + cb;
        if total * frac_a.min(1.0 - frac_a) >= min_expected {
            bins.push((ca, cb));
            ca = 0.0;
            cb = 0.0;
        }
    }
    if ca + cb > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += ca;
                last.1 += cb;
            }
            None => bins.push((ca, cb)),
        }
    }
    if bins.len() < 2 {
        return Ok(TestOutcome {
            statistic: 0.0,
            p_value: 1.0,
            dof: 0.0,
        });
    }
    let mut stat = 0.0;
    for &(x, y) in &bins {
        let total = x + y;
        let (ea, eb) = (total * frac_a, total * (1.0 - frac_a));
        stat += (x - ea).powi(2) / ea + (y - eb).powi(2) / eb;
    }
    let dof = (bins.len() - 1) as f64;
    let dist = ChiSquared::new(dof).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(TestOutcome {
        statistic: stat,
        p_value: 1.0 - dist.cdf(stat),
        dof,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distances_vanish_on_identical_input() {
        let p = [0.2, 0.5, 0.3];
        assert_eq!(tv_distance(&p, &p), 0.0);
        let xs = [1.0, 2.0, 2.0, 3.0];
        let t = ks_two_sample(&xs, &xs).unwrap();
        assert_eq!(t.statistic, 0.0);
        assert_eq!(t.p_value, 1.0);
        let c = chi_square_two_sample(&[30, 50, 20], &[30, 50, 20], 5.0).unwrap();
        assert_eq!(c.statistic, 0.0);
        assert!((c.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ks_against_uniform() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.005).abs() < 1e-12);
        // lattice convention only sees the right limits
        let d = ks_lattice(&[0.0, 1.0], |x| {
            if x < 0.0 {
                0.0
            } else if x < 1.0 {
                0.5
            } else {
                1.0
            }
        })
        .unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn kolmogorov_survival_values() {
        // Q(1.36) = 0.049, Q(1.63) = 0.0098 (standard critical values)
        assert!((kolmogorov_survival(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_survival(1.628) - 0.01).abs() < 5e-4);
    }

    #[test]
    fn chi_square_detects_shift() {
        let a = [100, 300, 400, 200];
        let b = [200, 400, 300, 100];
        assert!(chi_square_two_sample(&a, &b, 5.0).unwrap().rejects(0.01));
    }

    #[test]
    fn tv_with_ragged_support() {
        assert!((tv_distance(&[0.5, 0.5], &[0.5, 0.25, 0.25]) - 0.25).abs() < 1e-15);
        assert_eq!(empirical_pmf(&[0, 2, 2, 1]), vec![0.25, 0.25, 0.5]);
    }
}
