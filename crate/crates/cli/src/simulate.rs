use std::collections::BTreeMap;

use clap::ValueEnum;
use rayon::prelude::*;

use png_core::multilayer::{discrete_evolve_with, gw_evolve_with, rsk_evolve, LineEnsemble};
use png_core::sim::{
    lis_length, replica_rng, sample_poisson_triangle_with, simulate_droplet, HeightLine, ReplicaRng,
};
use png_core::table::DistTable;

use crate::args::{Dynamics, Observable, SimulateArgs};
use crate::output::{emit, provenance};
use crate::{Failure, Outcome};

/// Runs `f` on replicas `0..samples`; replica `i` always draws from
/// `replica_rng(seed, i)`, so the result does not depend on the pool size.
fn replicas<T: Send>(
    samples: u64,
    seed: u64,
    f: impl Fn(&mut ReplicaRng) -> png_core::Result<T> + Sync,
) -> Outcome<Vec<T>> {
    (0..samples)
        .into_par_iter()
        .map(|i| f(&mut replica_rng(seed, i)))
        .collect::<png_core::Result<Vec<T>>>()
        .map_err(Failure::from)
}

pub fn name(v: impl ValueEnum) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

/// `h(0, t)` equals the longest chain pathwise, which is much cheaper.
fn default_dynamics(obs: Observable, y: f64) -> Dynamics {
    match obs {
        Observable::H0 => Dynamics::Lis,
        Observable::ScaledH if y == 0.0 => Dynamics::Lis,
        Observable::Steps | Observable::Lines => Dynamics::Rsk,
        _ => Dynamics::Droplet,
    }
}

fn supported(obs: Observable, dynamics: Dynamics, y: f64) -> bool {
    match obs {
        Observable::FlatProb => true,
        Observable::H0 => true,
        Observable::ScaledH => dynamics != Dynamics::Lis || y == 0.0,
        Observable::Joint => dynamics != Dynamics::Lis,
        Observable::Steps | Observable::Lines => matches!(dynamics, Dynamics::Rsk | Dynamics::Gw),
        Observable::DiscreteH0 => false,
    }
}

fn ensemble(dynamics: Dynamics, t: f64, rng: &mut ReplicaRng) -> png_core::Result<LineEnsemble> {
    match dynamics {
        Dynamics::Gw => gw_evolve_with(t, rng),
        _ => Ok(rsk_evolve(&sample_poisson_triangle_with(t, rng)?)),
    }
}

fn top_line(dynamics: Dynamics, t: f64, rng: &mut ReplicaRng) -> png_core::Result<HeightLine> {
    match dynamics {
        Dynamics::Droplet | Dynamics::Lis => {
            Ok(simulate_droplet(&sample_poisson_triangle_with(t, rng)?))
        }
        _ => Ok(ensemble(dynamics, t, rng)?.top().clone()),
    }
}

/// Rows `[x, count, pmf, cdf]` over every integer between the extremes.
fn histogram(values: &[i64], x: impl Fn(i64) -> f64, columns: &[&str]) -> DistTable {
    let mut table = DistTable::new(columns);
    let n = values.len() as f64;
    let (Some(&lo), Some(&hi)) = (values.iter().min(), values.iter().max()) else {
        return table;
    };
    let mut counts = vec![0u64; (hi - lo + 1) as usize];
    for &v in values {
        counts[(v - lo) as usize] += 1;
    }
    let mut cum = 0;
    for (k, &c) in counts.iter().enumerate() {
        cum += c;
        table.push(vec![
            x(lo + k as i64),
            c as f64,
            c as f64 / n,
            cum as f64 / n,
        ]);
    }
    table
}

pub fn run(a: &SimulateArgs) -> Outcome<()> {
    let t = a.t;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Failure::Input(format!("--t must be positive, got {t}")));
    }
    if !a.y.is_finite() {
        return Err(Failure::Input("--y must be finite".into()));
    }
    let scale = t.powf(1.0 / 3.0);
    let x = a.y * t.powf(2.0 / 3.0);
    if matches!(a.observable, Observable::ScaledH | Observable::Joint) && x.abs() >= t {
        return Err(Failure::Input(format!(
            "y t^(2/3) = {x} lies outside the droplet (-{t}, {t})"
        )));
    }
    let dynamics = a.dynamics.unwrap_or(default_dynamics(a.observable, a.y));
    if a.observable == Observable::DiscreteH0 {
        if a.dynamics.is_some() {
            return Err(Failure::Input("discrete-h0 has its own dynamics".into()));
        }
    } else if !supported(a.observable, dynamics, a.y) {
        return Err(Failure::Input(format!(
            "observable {} is not available with {} dynamics",
            name(a.observable),
            name(dynamics)
        )));
    }
    let (samples, seed, y) = (a.samples, a.seed, a.y);

    let mut table = match a.observable {
        Observable::FlatProb => {
            let flat = replicas(samples, seed, |rng| {
                Ok(sample_poisson_triangle_with(t, rng)?.is_empty())
            })?;
            let k = flat.iter().filter(|&&f| f).count() as f64;
            let p = k / samples as f64;
            let mut table = DistTable::new(&["samples", "flat", "fraction", "sigma", "exact"]);
            table.push(vec![
                samples as f64,
                k,
                p,
                (p * (1.0 - p) / samples as f64).sqrt(),
                (-2.0 * t * t).exp(),
            ]);
            table.with_meta("kind", "summary")
        }
        Observable::H0 => {
            let values = replicas(samples, seed, |rng| {
                Ok(match dynamics {
                    Dynamics::Lis => lis_length(&sample_poisson_triangle_with(t, rng)?) as i64,
                    d => top_line(d, t, rng)?.height_at(0.0),
                })
            })?;
            histogram(&values, |n| n as f64, &["n", "count", "pmf", "cdf"])
                .with_meta("kind", "discrete")
        }
        Observable::ScaledH => {
            let values = replicas(samples, seed, |rng| {
                Ok(match dynamics {
                    Dynamics::Lis => lis_length(&sample_poisson_triangle_with(t, rng)?) as i64,
                    d => top_line(d, t, rng)?.height_at(x),
                })
            })?;
            histogram(
                &values,
                |n| (n as f64 - 2.0 * t) / scale + y * y,
                &["value", "count", "pmf", "cdf"],
            )
            .with_meta("kind", "discrete")
        }
        Observable::Joint => {
            let pairs = replicas(samples, seed, |rng| {
                let line = top_line(dynamics, t, rng)?;
                Ok((line.height_at(0.0), line.height_at(x)))
            })?;
            let mut counts: BTreeMap<(i64, i64), u64> = BTreeMap::new();
            for p in pairs {
                *counts.entry(p).or_default() += 1;
            }
            let mut table = DistTable::new(&["s0", "sy", "count", "pmf"]);
            for ((n0, ny), c) in counts {
                table.push(vec![
                    (n0 as f64 - 2.0 * t) / scale,
                    (ny as f64 - 2.0 * t) / scale + y * y,
                    c as f64,
                    c as f64 / samples as f64,
                ]);
            }
            table.with_meta("kind", "joint")
        }
        Observable::Steps | Observable::Lines => {
            let lines = a.observable == Observable::Lines;
            let values = replicas(samples, seed, |rng| {
                let e = ensemble(dynamics, t, rng)?;
                Ok(if lines {
                    e.nonflat_lines()
                } else {
                    e.total_steps()
                } as i64)
            })?;
            histogram(&values, |n| n as f64, &["n", "count", "pmf", "cdf"])
                .with_meta("kind", "discrete")
        }
        Observable::DiscreteH0 => {
            let delta = a
                .delta
                .ok_or_else(|| Failure::Input("discrete-h0 needs --delta".into()))?;
            if !(delta > 0.0 && delta <= t) {
                return Err(Failure::Input(format!(
                    "--delta must lie in (0, t], got {delta}"
                )));
            }
            let q = a.q.unwrap_or(4.0 * delta * delta);
            if !(q > 0.0 && q < 1.0) {
                return Err(Failure::Input(format!("--q must lie in (0, 1), got {q}")));
            }
            let tau = (t / delta + 1e-9).floor() as u64;
            let values = replicas(samples, seed, |rng| {
                Ok(discrete_evolve_with(tau, delta, q, rng)?.height(0, 0.0))
            })?;
            histogram(&values, |n| n as f64, &["n", "count", "pmf", "cdf"])
                .with_meta("kind", "discrete")
                .with_meta("delta", delta)
                .with_meta("q", q)
                .with_meta("tau", tau)
        }
    };
    table = table
        .with_meta("observable", name(a.observable))
        .with_meta("t", t)
        .with_meta("samples", samples)
        .with_meta("seed", seed);
    if a.observable != Observable::DiscreteH0 {
        table = table.with_meta("dynamics", name(dynamics));
    }
    if matches!(a.observable, Observable::ScaledH | Observable::Joint) {
        table = table.with_meta("y", y);
    }
    emit(&provenance(table, "simulate"), &a.out)
}
