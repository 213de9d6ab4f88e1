use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::rng::replica_rng;
use crate::error::{Error, Result};

/// Space-time intensity of nucleations.
pub const INTENSITY: f64 = 2.0;

/// Largest mean drawn by sequential inversion.
const INVERSION_MAX_MEAN: f64 = 30.0;

/// Poisson points of the droplet in light-cone coordinates
/// `(y+, y-) = (x' - (t - t'), x' + (t - t'))`, sorted by `y+`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<(f64, f64)>,
    horizon: f64,
}

impl PointSet {
    /// Validates `-t < y+ < y- < t` for every point and sorts by `y+`.
    pub fn new(mut points: Vec<(f64, f64)>, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidParameter(format!("horizon t = {horizon}")));
        }
        for &(p, q) in &points {
            if !(-horizon < p && p < q && q < horizon) {
                return Err(Error::InvalidParameter(format!(
                    "point ({p}, {q}) outside the light-cone triangle of t = {horizon}"
                )));
            }
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        Ok(Self { points, horizon })
    }

    /// Builds a point set from space-time nucleation events `(x', t')`.
    pub fn from_space_time(events: &[(f64, f64)], horizon: f64) -> Result<Self> {
        let points = events
            .iter()
            .map(|&(x, s)| (x - (horizon - s), x + (horizon - s)))
            .collect();
        Self::new(points, horizon)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn intensity(&self) -> f64 {
        INTENSITY
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Nucleation events `(x', t')` in time order, ties broken by `(y+, y-)`.
    pub fn space_time(&self) -> Vec<(f64, f64)> {
        let mut events: Vec<_> = self
            .points
            .iter()
            .map(|&(p, q)| ((p, q), (0.5 * (p + q), self.horizon - 0.5 * (q - p))))
            .collect();
        events.sort_by(|a, b| {
            a.1 .1
                .total_cmp(&b.1 .1)
                .then(a.0 .0.total_cmp(&b.0 .0))
                .then(a.0 .1.total_cmp(&b.0 .1))
        });
        events.into_iter().map(|(_, e)| e).collect()
    }
}

/// Poisson variate with mean `lambda`: inversion up to mean 30, rejection
/// (`rand_distr`) above.
pub fn sample_poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> Result<u64> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("Poisson mean {lambda}")));
    }
    if lambda == 0.0 {
        return Ok(0);
    }
    if lambda <= INVERSION_MAX_MEAN {
        let u: f64 = rng.random();
        let mut k = 0u64;
        let mut p = (-lambda).exp();
        let mut cdf = p;
        while u >= cdf {
            k += 1;
            p *= lambda / k as f64;
            let next = cdf + p;
            if next == cdf {
                break;
            }
            cdf = next;
        }
        return Ok(k);
    }
    let d = Poisson::new(lambda).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(d.sample(rng) as u64)
}

/// Poisson process of intensity 2 on `{(x', t') : |x'| < t' <= t}`.
pub fn sample_poisson_triangle_with<R: Rng + ?Sized>(t: f64, rng: &mut R) -> Result<PointSet> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("horizon t = {t}")));
    }
    let n = sample_poisson(INTENSITY * t * t, rng)?;
    let mut points = Vec::with_capacity(n as usize);
    while points.len() < n as usize {
        // t' has density 2t'/t^2; x' is uniform on (-t', t').
        let s = t * rng.random::<f64>().sqrt();
        let x = s * (2.0 * rng.random::<f64>() - 1.0);
        let (p, q) = (x - (t - s), x + (t - s));
        if -t < p && p < q && q < t {
            points.push((p, q));
        }
    }
    PointSet::new(points, t)
}

/// [`sample_poisson_triangle_with`] on replica 0 of `seed`.
pub fn sample_poisson_triangle(t: f64, seed: u64) -> Result<PointSet> {
    sample_poisson_triangle_with(t, &mut replica_rng(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_points_outside_triangle() {
        assert!(PointSet::new(vec![(0.5, 0.2)], 1.0).is_err());
        assert!(PointSet::new(vec![(-1.0, 0.2)], 1.0).is_err());
        assert!(PointSet::new(vec![], 0.0).is_err());
        let p = PointSet::new(vec![(0.3, 0.5), (-0.2, 0.9)], 1.0).unwrap();
        assert_eq!(p.points()[0], (-0.2, 0.9));
    }

    #[test]
    fn space_time_round_trip() {
        let p = sample_poisson_triangle(2.0, 11).unwrap();
        let back = PointSet::from_space_time(&p.space_time(), 2.0).unwrap();
        for (a, b) in p.points().iter().zip(back.points()) {
            assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
        }
        let times: Vec<f64> = p.space_time().iter().map(|e| e.1).collect();
        assert!(times.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn poisson_mean_and_variance() {
        let mut rng = replica_rng(1, 0);
        for lambda in [0.5, 8.0, 30.0, 200.0] {
            let n = 20_000;
            let xs: Vec<f64> = (0..n)
                .map(|_| sample_poisson(lambda, &mut rng).unwrap() as f64)
                .collect();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let se = (lambda / n as f64).sqrt();
            assert!(
                (mean - lambda).abs() < 4.0 * se,
                "lambda={lambda} mean={mean}"
            );
            assert!(
                (var / lambda - 1.0).abs() < 0.05,
                "lambda={lambda} var={var}"
            );
        }
    }

    #[test]
    fn tiny_horizon_is_empty() {
        assert!(sample_poisson_triangle(1e-9, 3).unwrap().is_empty());
        assert!(sample_poisson_triangle(0.0, 3).is_err());
    }
}
