//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! with a failure status if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use png_core::determinantal::*;
use png_core::multilayer::*;
use png_core::sim::*;
use png_core::special::BesselTable;
use png_core::stats::*;

type Check = (bool, String);
type Criterion = (&'static str, Duration, fn() -> Check);

fn points(t: f64, master: u64, i: u64) -> PointSet {
    sample_poisson_triangle_with(t, &mut replica_rng(master, i)).unwrap()
}

/// Longest chain through the origin by enumerating all subsets.
fn exhaustive_chain(p: &PointSet) -> usize {
    let pts: Vec<(f64, f64)> = p
        .points()
        .iter()
        .copied()
        .filter(|&(a, b)| a <= 0.0 && b >= 0.0)
        .collect();
    let n = pts.len();
    (0u32..1 << n)
        .filter_map(|mask| {
            let mut c: Vec<(f64, f64)> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pts[i])
                .collect();
            c.sort_by(|a, b| a.0.total_cmp(&b.0));
            c.windows(2)
                .all(|w| w[0].0 < w[1].0 && w[1].1 < w[0].1)
                .then_some(c.len())
        })
        .max()
        .unwrap_or(0)
}

fn partition_function() -> Check {
    let n = 100_000;
    let flat = (0..n)
        .into_par_iter()
        .filter(|&i| points(1.0, 1, i).is_empty())
        .count();
    let p = flat as f64 / n as f64;
    let target = (-2.0f64).exp();
    let sigma = binomial_sigma(target, n as usize);
    let z = (p - target) / sigma;
    (
        z.abs() <= 3.0,
        format!("flat fraction {p:.5} vs e^-2 = {target:.5}, {z:+.2} sigma"),
    )
}

fn lis_isomorphism() -> Check {
    let pathwise = (0..1000u64).into_par_iter().all(|i| {
        let p = points(10.0, 2, i);
        lis_length(&p) as i64 == simulate_droplet(&p).height_at(0.0)
    });
    let mut small = Vec::new();
    let mut i = 0;
    while small.len() < 1000 {
        let p = points(1.6, 3, i);
        if p.len() <= 12 {
            small.push(p);
        }
        i += 1;
    }
    let oracle = small.par_iter().all(|p| {
        lis_length(p) == exhaustive_chain(p)
            && lis_length(p) as i64 == simulate_droplet(p).height_at(0.0)
    });
    (
        pathwise && oracle,
        format!("pathwise on 1000 sets at t=10: {pathwise}; exhaustive oracle on 1000 sets with N <= 12: {oracle}"),
    )
}

fn height_law() -> Check {
    let n = 100_000;
    let values: Vec<usize> = (0..n)
        .into_par_iter()
        .map(|i| lis_length(&points(5.0, 4, i)))
        .collect();
    let exact = height_pmf_exact(5.0, 1e-12).unwrap();
    let tv = tv_distance(&empirical_pmf(&values), &exact);
    (
        tv < 0.02,
        format!("TV distance {tv:.4} at t=5 with {n} samples"),
    )
}

fn f2_cross_oracle() -> Check {
    let mut worst: f64 = 0.0;
    for &a in &[-4.0, -2.0, 0.0, 2.0] {
        let fredholm = match tracy_widom_f2_certified(a, F2_DEFAULT_TOL) {
            Ok(c) if c.nodes == 2 * F2_BASE_NODES => c.value,
            other => return (false, format!("certification at a={a}: {other:?}")),
        };
        worst = worst.max((fredholm - painleve_f2(a).unwrap()).abs());
    }
    let var = tracy_widom_moments().variance;
    (
        worst < 1e-6 && (var - 0.81320).abs() < 1e-3,
        format!("max |Fredholm - Painleve| = {worst:.2e}; variance {var:.5}"),
    )
}

fn edge_scaling_ks(t: f64, samples: u64, master: u64) -> f64 {
    let s = t.cbrt();
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| (lis_length(&points(t, master, i)) as f64 - 2.0 * t) / s)
        .collect();
    ks_lattice(&values, f2).unwrap()
}

fn edge_scaling() -> Check {
    let ks100 = edge_scaling_ks(100.0, 10_000, 5);
    let ks50 = edge_scaling_ks(50.0, 10_000, 6);
    let ks200 = edge_scaling_ks(200.0, 10_000, 7);
    (
        ks100 < 0.05 && ks200 <= ks50,
        format!("KS(t=100) = {ks100:.4}; trend KS(50) = {ks50:.4}, KS(200) = {ks200:.4}"),
    )
}

fn rsk_gw() -> Check {
    let n = 10_000u64;
    let summary = |e: LineEnsemble| (e.top().height_at(0.0), e.total_steps());
    let rsk: Vec<(i64, usize)> = (0..n)
        .into_par_iter()
        .map(|i| summary(rsk_evolve(&points(1.5, 8, i))))
        .collect();
    let gw: Vec<(i64, usize)> = (0..n)
        .into_par_iter()
        .map(|i| summary(gw_evolve_with(1.5, &mut replica_rng(9, i)).unwrap()))
        .collect();
    let h = |v: &[(i64, usize)]| v.iter().map(|x| x.0 as f64).collect::<Vec<_>>();
    let ks = ks_two_sample(&h(&rsk), &h(&gw)).unwrap();
    let top = rsk.iter().chain(&gw).map(|x| x.1).max().unwrap();
    let counts = |v: &[(i64, usize)]| {
        let mut c = vec![0usize; top + 1];
        v.iter().for_each(|x| c[x.1] += 1);
        c
    };
    let chi = chi_square_two_sample(&counts(&rsk), &counts(&gw), 5.0).unwrap();
    (
        !ks.rejects(0.01) && !chi.rejects(0.01),
        format!(
            "h_0(0): KS p = {:.3}; sum n_l: chi-square p = {:.3} ({} dof)",
            ks.p_value, chi.p_value, chi.dof
        ),
    )
}

fn discrete_model() -> Check {
    let q = 0.3;
    let exact = discrete_distribution(2, q).unwrap();
    let z = log_partition_discrete(2, q).exp();
    let weights_ok = exact
        .iter()
        .all(|(e, p)| (p - (q / (1.0 - q)).powi(e.total_steps() as i32) / z).abs() < 1e-12);
    let n = 200_000u64;
    let mut counts: BTreeMap<_, usize> = BTreeMap::new();
    let configs: Vec<_> = (0..n)
        .into_par_iter()
        .map(|i| {
            discrete_evolve_with(2, 0.1, q, &mut replica_rng(10, i))
                .unwrap()
                .configuration()
        })
        .collect();
    for c in configs {
        *counts.entry(c).or_default() += 1;
    }
    let mut worst_z: f64 = 0.0;
    for (e, p) in &exact {
        let k = counts.remove(&e.configuration()).unwrap_or(0);
        worst_z = worst_z.max((k as f64 / n as f64 - p).abs() / binomial_sigma(*p, n as usize));
    }
    let unexpected = counts.len();
    let log_z = log_partition_discrete((1.0f64 / 0.02 + 1e-9).floor() as u64, 4.0 * 0.02 * 0.02);
    (
        weights_ok && worst_z <= 3.0 && unexpected == 0 && (log_z - 2.0).abs() < 0.05,
        format!(
            "{} configurations at tau=2, product weights exact: {weights_ok}, worst deviation {worst_z:.2} sigma, \
             unexpected configurations {unexpected}; log Z_d(t=1, delta=0.02) = {log_z:.4}",
            exact.len()
        ),
    )
}

fn two_point() -> Check {
    let cfg = TwoPointConfig::default();
    let g = |y: f64| two_point_g(y, &cfg).unwrap();
    let small: Vec<f64> = [0.05, 0.1, 0.15, 0.2].iter().map(|&y| g(y).g / y).collect();
    let slope = small.iter().sum::<f64>() / small.len() as f64;
    let far = g(8.0);
    let plateau = (far.g - 2.0 * 0.81320).abs();
    let scaled: Vec<f64> = [3.0, 4.0, 6.0]
        .iter()
        .map(|&y| {
            let r = g(y);
            y * y * (2.0 * r.a2 - r.g)
        })
        .collect();
    let (lo, hi) = scaled
        .iter()
        .fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
    let spread = (hi - lo) / (scaled.iter().sum::<f64>() / 3.0);
    let mut factor: f64 = 0.0;
    for &a in &[-1.0, 0.0, 1.0] {
        for &b in &[-1.0, 0.0, 1.0] {
            let j = joint_cdf_certified(a, b, 8.0, 1e-8).unwrap().value;
            factor = factor.max((j - f2(a) * f2(b)).abs());
        }
    }
    (
        (1.9..=2.1).contains(&slope) && plateau < 0.02 && spread < 0.25 && factor < 0.02,
        format!(
            "mean g(y)/y on [0.05, 0.2] = {slope:.4}; |g(8) - 2a_2| = {plateau:.4}; \
             y^2 (2a_2 - g) at 3, 4, 6 = {:.3}, {:.3}, {:.3} (spread {:.1}%); factorization error at y=8 = {factor:.1e}",
            scaled[0],
            scaled[1],
            scaled[2],
            100.0 * spread
        ),
    )
}

fn kernel_convergence() -> Check {
    let r = convergence_report(&[100.0, 1000.0, 10000.0], 0.0, 0.0, 4.0).unwrap();
    let d: Vec<f64> = r.rows.iter().map(|row| row.sup_distance).collect();
    (
        r.monotone && d[2] < 0.01,
        format!("sup distances {:.4}, {:.4}, {:.4}", d[0], d[1], d[2]),
    )
}

fn property_suites() -> Check {
    let mut failures = Vec::new();
    for &t in &[1.0, 5.0] {
        let k = DiscreteBesselKernel::new(t).unwrap();
        for i in -15..25 {
            for j in -15..25 {
                if (k.entry(i, j) - k.entry(j, i)).abs() > 1e-13 {
                    failures.push(format!("B_{t} asymmetric at ({i}, {j})"));
                }
            }
            let d = k.entry(i, i);
            if !(-1e-14..=1.0 + 1e-14).contains(&d) {
                failures.push(format!("B_{t}({i}, {i}) = {d}"));
            }
            let square: f64 = (-60..=80).map(|m| k.entry(i, m) * k.entry(m, i)).sum();
            if (square - d).abs() > 1e-8 {
                failures.push(format!("B_{t} not idempotent at {i}"));
            }
        }
    }
    for &(u, v) in &[(-3.0, 1.0), (0.5, 2.0), (-1.0, -1.5)] {
        if (airy_kernel(u, v) - airy_kernel(v, u)).abs() > 1e-14 {
            failures.push(format!("K asymmetric at ({u}, {v})"));
        }
    }
    for &a in &[-4.0, 0.0, 2.0] {
        let m = airy_kernel_matrix(&f2_grid(a)).entries().clone();
        let eig = m.symmetric_eigen().eigenvalues;
        if eig.iter().any(|&mu| !(-1e-12..1.0).contains(&mu)) {
            failures.push(format!("spectrum of P_a K outside [0, 1) at a={a}"));
        }
    }
    let mut prev = 0.0;
    for n in 0..25 {
        let p = height_cdf_exact(5.0, n, 1e-12).unwrap().probability;
        if p < prev - 1e-12 {
            failures.push(format!("height CDF decreases at n={n}"));
        }
        prev = p;
    }
    let mut prev = 0.0;
    for i in 0..=50 {
        let a = -6.0 + 0.2 * i as f64;
        match tracy_widom_f2_certified(a, F2_DEFAULT_TOL) {
            Ok(c) if c.value >= prev - 1e-12 => prev = c.value,
            other => failures.push(format!("F2 at {a}: {other:?}")),
        }
    }
    for &y in &[0.5, 2.0] {
        let mut prev = 0.0;
        for i in 0..=8 {
            let b = -3.0 + 0.75 * i as f64;
            match joint_cdf_certified(-0.5, b, y, 1e-8) {
                Ok(c) if c.value >= prev - 1e-10 && c.value <= f2(-0.5) + 1e-10 => prev = c.value,
                other => failures.push(format!("joint CDF at (-0.5, {b}, {y}): {other:?}")),
            }
        }
    }
    let landau = 0.7857 / 2f64.cbrt();
    let mut sup: f64 = 0.0;
    for &t in &[1.0f64, 10.0, 100.0] {
        let max_order = (2.0 * t + 60.0) as usize;
        let table = BesselTable::new(2.0 * t, max_order).unwrap();
        let s = table.values().iter().fold(0.0f64, |m, j| m.max(j.abs())) * t.cbrt();
        sup = sup.max(s);
        if s > landau {
            failures.push(format!("Landau bound fails at t={t}: {s}"));
        }
    }
    (
        failures.is_empty(),
        if failures.is_empty() {
            format!("kernels, determinants and certification hold; max t^(1/3)|J_n(2t)| = {sup:.4} <= {landau:.4}")
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "partition function",
            Duration::from_secs(10),
            partition_function,
        ),
        ("LIS isomorphism", Duration::from_secs(30), lis_isomorphism),
        (
            "exact vs MC height law",
            Duration::from_secs(120),
            height_law,
        ),
        ("F2 cross-oracle", Duration::from_secs(60), f2_cross_oracle),
        ("edge scaling", Duration::from_secs(900), edge_scaling),
        ("RSK vs GW", Duration::from_secs(300), rsk_gw),
        ("discrete model", Duration::from_secs(120), discrete_model),
        ("Airy two-point law", Duration::from_secs(600), two_point),
        (
            "kernel convergence",
            Duration::from_secs(120),
            kernel_convergence,
        ),
        ("property suites", Duration::from_secs(60), property_suites),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = check();
        let elapsed = start.elapsed();
        let pass = ok && elapsed <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {detail} [{:.1} s, budget {} s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
