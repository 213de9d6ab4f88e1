use super::ensemble::LineEnsemble;
use crate::sim::{evolve_line, PointSet};

/// Multi-layer PNG under RSK dynamics: each annihilation in line `l` is a
/// nucleation in line `l - 1` at the same space-time point.
///
/// Line `l - 1` only depends on the annihilations of line `l`, so the lines
/// are evolved one after the other.
pub fn rsk_evolve(points: &PointSet) -> LineEnsemble {
    let t = points.horizon();
    let mut nucleations = points.space_time();
    let mut lines = Vec::new();
    let mut base = 0;
    loop {
        let (line, annihilations) = evolve_line(base, &nucleations, t);
        lines.push(line);
        if annihilations.is_empty() {
            break;
        }
        nucleations = annihilations;
        base -= 1;
    }
    LineEnsemble::new(lines, t).expect("RSK dynamics preserves the ordering")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{sample_poisson_triangle, simulate_droplet};

    #[test]
    fn empty_points_give_flat_lines() {
        let e = rsk_evolve(&PointSet::new(vec![], 1.0).unwrap());
        assert_eq!(e.lines().len(), 1);
        assert_eq!(e.total_steps(), 0);
    }

    #[test]
    fn merging_islands_feed_the_next_line() {
        let p = PointSet::from_space_time(&[(-0.1, 0.5), (0.1, 0.5)], 1.0).unwrap();
        let e = rsk_evolve(&p);
        assert_eq!(e.step_counts(), vec![1, 1]);
        // annihilation at (0, 0.6) seen at t = 1
        let l = &e.lines()[1];
        assert!((l.up_steps()[0] + 0.4).abs() < 1e-12 && (l.down_steps()[0] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn top_line_is_the_droplet() {
        for seed in 0..20 {
            let p = sample_poisson_triangle(3.0, seed).unwrap();
            assert_eq!(rsk_evolve(&p).top(), &simulate_droplet(&p));
        }
    }
}
