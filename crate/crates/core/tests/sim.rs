use png_core::sim::*;

/// Longest chain by enumerating all subsets (N <= 12).
fn exhaustive_chain(points: &PointSet) -> usize {
    let pts: Vec<(f64, f64)> = points
        .points()
        .iter()
        .copied()
        .filter(|&(p, q)| p <= 0.0 && q >= 0.0)
        .collect();
    let n = pts.len();
    assert!(n <= 16);
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let mut chosen: Vec<(f64, f64)> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| pts[i])
            .collect();
        chosen.sort_by(|a, b| a.0.total_cmp(&b.0));
        if chosen
            .windows(2)
            .all(|w| w[0].0 < w[1].0 && w[1].1 < w[0].1)
        {
            best = best.max(chosen.len());
        }
    }
    best
}

#[test]
fn lis_matches_exhaustive_oracle_and_droplet() {
    let mut checked = 0;
    let mut seed = 0;
    while checked < 300 {
        seed += 1;
        let p = sample_poisson_triangle(1.6, seed).unwrap();
        if p.len() > 12 {
            continue;
        }
        let lis = lis_length(&p);
        assert_eq!(lis, exhaustive_chain(&p), "seed {seed}");
        assert_eq!(
            lis as i64,
            simulate_droplet(&p).height_at(0.0),
            "seed {seed}"
        );
        checked += 1;
    }
}

/// Longest nested chain among points whose cone contains `(x, t)`.
fn chain_at(points: &PointSet, x: f64) -> i64 {
    let mut tails: Vec<f64> = Vec::new();
    for &(p, q) in points.points() {
        if p <= x && q >= x {
            let k = tails.partition_point(|&v| v < -q);
            if k == tails.len() {
                tails.push(-q);
            } else {
                tails[k] = -q;
            }
        }
    }
    tails.len() as i64
}

#[test]
fn droplet_height_is_chain_length_at_every_position() {
    for seed in 0..100 {
        let p = sample_poisson_triangle(4.0, seed).unwrap();
        let h = simulate_droplet(&p);
        let mut xs = vec![-3.0, -1.2, 0.0, 0.4, 2.5];
        // between breakpoints, away from round-off in the step positions
        xs.extend(h.breakpoints().windows(2).map(|w| 0.5 * (w[0] + w[1])));
        for x in xs {
            assert_eq!(h.height_at(x), chain_at(&p, x), "seed {seed} x {x}");
        }
    }
}

#[test]
fn droplet_invariants() {
    for seed in 0..200 {
        let p = sample_poisson_triangle(3.0, seed).unwrap();
        let h = simulate_droplet(&p);
        assert_eq!(h.up_steps().len(), h.down_steps().len());
        assert!(h.steps() <= p.len());
        assert_eq!(h.height_at(-3.0), 0);
        assert_eq!(h.height_at(3.0), 0);
        for &x in &h.breakpoints() {
            assert!(h.height_at(x) >= 0);
        }
        // surviving up-steps are a subset of the y+ coordinates
        for u in h.up_steps() {
            assert!(p.points().iter().any(|&(a, _)| (a - u).abs() < 1e-12));
        }
        for d in h.down_steps() {
            assert!(p.points().iter().any(|&(_, b)| (b - d).abs() < 1e-12));
        }
    }
}

#[test]
fn deterministic_given_seed() {
    let a = simulate_droplet(&sample_poisson_triangle(5.0, 42).unwrap());
    let b = simulate_droplet(&sample_poisson_triangle(5.0, 42).unwrap());
    assert_eq!(a, b);
    let c = simulate_droplet(&sample_poisson_triangle(5.0, 43).unwrap());
    assert_ne!(a, c);
}

#[test]
fn point_count_statistics() {
    // P(N = 0) = exp(-2) at t = 1
    let n = 20_000;
    let empty = (0..n)
        .filter(|&s| sample_poisson_triangle(1.0, s).unwrap().is_empty())
        .count() as f64;
    let p0 = (-2.0f64).exp();
    let sigma = (p0 * (1.0 - p0) / n as f64).sqrt();
    assert!((empty / n as f64 - p0).abs() < 3.0 * sigma);

    // mean N = 2 t^2 = 8 at t = 2
    let n = 10_000;
    let total: usize = (0..n)
        .map(|s| sample_poisson_triangle(2.0, s).unwrap().len())
        .sum();
    let mean = total as f64 / n as f64;
    assert!((mean - 8.0).abs() < 3.0 * (8.0 / n as f64).sqrt(), "{mean}");
}

#[test]
fn large_configurations_agree() {
    for seed in 0..5 {
        let p = sample_poisson_triangle(25.0, seed).unwrap();
        assert!(p.len() > 1000);
        assert_eq!(lis_length(&p) as i64, simulate_droplet(&p).height_at(0.0));
    }
}

mod properties {
    use super::exhaustive_chain;
    use png_core::multilayer::rsk_evolve;
    use png_core::sim::*;
    use proptest::prelude::*;

    /// Up to 10 points of the light-cone triangle of `t = 1`.
    fn point_set() -> impl Strategy<Value = PointSet> {
        prop::collection::vec((-0.999f64..0.999, 0.0f64..1.0), 0..10).prop_map(|raw| {
            let pts = raw
                .into_iter()
                .map(|(a, s)| (a, a + s * (0.999 - a)))
                .filter(|&(a, b)| b > a)
                .collect();
            PointSet::new(pts, 1.0).unwrap()
        })
    }

    proptest! {
        #[test]
        fn chain_length_is_height(p in point_set()) {
            let lis = lis_length(&p);
            prop_assert_eq!(lis, exhaustive_chain(&p));
            prop_assert_eq!(lis as i64, simulate_droplet(&p).height_at(0.0));
        }

        #[test]
        fn rsk_keeps_every_point(p in point_set()) {
            let e = rsk_evolve(&p);
            prop_assert_eq!(e.total_steps(), p.len());
            prop_assert!(e.ordering_violation().is_none());
        }
    }
}
