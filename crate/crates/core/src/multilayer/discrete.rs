use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ensemble::LineEnsemble;
use crate::determinantal::height_pmf_exact;
use crate::error::{Error, Result};
use crate::sim::{replica_rng, HeightLine};

/// One line of the discrete model. A step stored as `m` sits at `(m + 1/2) delta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiscreteLine {
    pub base: i64,
    pub ups: Vec<i64>,
    pub downs: Vec<i64>,
}

impl DiscreteLine {
    fn flat(base: i64) -> Self {
        Self {
            base,
            ups: Vec::new(),
            downs: Vec::new(),
        }
    }

    pub fn is_flat(&self) -> bool {
        self.ups.is_empty()
    }

    /// Height at lattice position `x` (in units of `delta`).
    pub fn height(&self, x: f64) -> i64 {
        let ups = self.ups.partition_point(|&m| m as f64 + 0.5 <= x);
        let downs = self.downs.partition_point(|&m| (m as f64 + 0.5) < x);
        self.base + ups as i64 - downs as i64
    }

    /// Step positions in increasing order.
    fn steps(&self) -> Vec<i64> {
        let mut s: Vec<i64> = self.ups.iter().chain(&self.downs).copied().collect();
        s.sort_unstable();
        s
    }

    /// Removes down/up pairs one cell apart, then moves up-steps one cell
    /// left and down-steps one cell right.
    fn deterministic_step(&mut self) {
        let annihilated: Vec<i64> = self
            .downs
            .iter()
            .copied()
            .filter(|d| self.ups.binary_search(&(d + 1)).is_ok())
            .collect();
        self.downs.retain(|d| !annihilated.contains(d));
        self.ups.retain(|u| !annihilated.contains(&(u - 1)));
        for u in &mut self.ups {
            *u -= 1;
        }
        for d in &mut self.downs {
            *d += 1;
        }
    }

    fn nucleate(&mut self, a: i64) {
        let i = self.ups.partition_point(|&u| u < a);
        self.ups.insert(i, a);
        let j = self.downs.partition_point(|&d| d < a + 1);
        self.downs.insert(j, a + 1);
    }
}

/// Up- and down-step cells of each line, without trailing flat lines.
pub type Configuration = Vec<(Vec<i64>, Vec<i64>)>;

/// Discrete-time multi-layer PNG at time `tau`, top line first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteEnsemble {
    pub lines: Vec<DiscreteLine>,
    pub tau: u64,
    pub delta: f64,
    pub q: f64,
}

impl DiscreteEnsemble {
    fn flat(delta: f64, q: f64) -> Self {
        Self {
            lines: vec![DiscreteLine::flat(0)],
            tau: 0,
            delta,
            q,
        }
    }

    /// `h_l(x)` with `x` in units of `delta`.
    pub fn height(&self, l: i64, x: f64) -> i64 {
        match self.lines.get((-l) as usize) {
            Some(line) => line.height(x),
            None => l,
        }
    }

    /// Total number of up-steps `n`.
    pub fn total_steps(&self) -> usize {
        self.lines.iter().map(|l| l.ups.len()).sum()
    }

    /// Lines without trailing flat ones, usable as a map key.
    pub fn configuration(&self) -> Configuration {
        let mut c: Vec<_> = self
            .lines
            .iter()
            .map(|l| (l.ups.clone(), l.downs.clone()))
            .collect();
        while c.last().is_some_and(|l| l.0.is_empty()) {
            c.pop();
        }
        c
    }

    /// The same configuration in continuum coordinates, horizon `tau delta`.
    pub fn to_line_ensemble(&self) -> Result<LineEnsemble> {
        let t = self.tau as f64 * self.delta;
        let scale = |m: &i64| (*m as f64 + 0.5) * self.delta;
        let lines = self
            .lines
            .iter()
            .map(|l| {
                HeightLine::new(
                    l.base,
                    l.ups.iter().map(scale).collect(),
                    l.downs.iter().map(scale).collect(),
                    t,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        LineEnsemble::new(lines, t)
    }

    fn ensure_flat_line_below(&mut self) {
        if !self.lines.last().expect("top line").is_flat() {
            let base = -(self.lines.len() as i64);
            self.lines.push(DiscreteLine::flat(base));
        }
    }

    fn trim(&mut self) {
        while self.lines.len() > 1 && self.lines.last().is_some_and(DiscreteLine::is_flat) {
            self.lines.pop();
        }
    }
}

/// Left endpoints `a` of the 2-cell blocks `[a, a + 2]` open to nucleation
/// in each line after the deterministic step, at new time `tau`.
///
/// Blocks tile each constant piece from the left, starting half a cell to
/// the right of the step that opens the piece. The leftmost piece of the top
/// line starts at `-tau`; the leftmost piece of a lower line starts half a
/// cell right of the first up-step of the line above (the line above being
/// flat leaves no room). Blocks touching the line above (gap 1) are dropped.
/// Every block must satisfy `a = tau + h (mod 2)` with `h` the height on the
/// block; a configuration producing any other block is reported as
/// unsupported.
pub fn eligible_blocks(lines: &[DiscreteLine], tau: i64) -> Result<Vec<Vec<i64>>> {
    let mut all = Vec::with_capacity(lines.len());
    for (k, line) in lines.iter().enumerate() {
        let above = if k == 0 { None } else { Some(&lines[k - 1]) };
        let start = match above {
            None => -tau,
            Some(up) => match up.ups.first() {
                Some(&y) => y + 1,
                None => {
                    all.push(Vec::new());
                    continue;
                }
            },
        };
        let steps = line.steps();
        // (piece start, piece end): blocks need a + 2 <= end.
        let mut pieces = Vec::with_capacity(steps.len() + 1);
        let first_end = steps.first().copied().unwrap_or(tau);
        pieces.push((start, first_end));
        for (i, &m) in steps.iter().enumerate() {
            let end = steps.get(i + 1).copied().unwrap_or(tau);
            pieces.push((m + 1, end));
        }
        let mut blocks = Vec::new();
        for (s, e) in pieces {
            let mut a = s;
            while a + 2 <= e {
                let h = line.height(a as f64 + 1.0);
                if (a - tau - h).rem_euclid(2) != 0 {
                    return Err(Error::Unsupported(format!(
                        "block [{a}, {}] of line {} at tau = {tau} breaks the block parity",
                        a + 2,
                        -(k as i64)
                    )));
                }
                let open = above.is_none_or(|up| {
                    [0.25, 1.0, 1.75]
                        .iter()
                        .all(|dx| up.height(a as f64 + dx) - h >= 2)
                });
                if open {
                    blocks.push(a);
                }
                a += 2;
            }
        }
        all.push(blocks);
    }
    Ok(all)
}

/// Deterministic part of the update plus the open blocks at `tau + 1`.
fn prepare(e: &mut DiscreteEnsemble) -> Result<Vec<Vec<i64>>> {
    for line in &mut e.lines {
        line.deterministic_step();
    }
    e.tau += 1;
    e.ensure_flat_line_below();
    eligible_blocks(&e.lines, e.tau as i64)
}

fn check_parameters(delta: f64, q: f64) -> Result<()> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("delta = {delta}")));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("q = {q} outside (0, 1)")));
    }
    Ok(())
}

/// Runs `tau` rounds of the discrete multi-layer PNG from the flat state.
pub fn discrete_evolve_with<R: Rng + ?Sized>(
    tau: u64,
    delta: f64,
    q: f64,
    rng: &mut R,
) -> Result<DiscreteEnsemble> {
    check_parameters(delta, q)?;
    let mut e = DiscreteEnsemble::flat(delta, q);
    for _ in 0..tau {
        let blocks = prepare(&mut e)?;
        for (line, bs) in e.lines.iter_mut().zip(blocks) {
            for a in bs {
                if rng.random::<f64>() < q {
                    line.nucleate(a);
                }
            }
        }
        e.trim();
    }
    Ok(e)
}

/// [`discrete_evolve_with`] on replica 0 of `seed`.
pub fn discrete_evolve(tau: u64, delta: f64, q: f64, seed: u64) -> Result<DiscreteEnsemble> {
    discrete_evolve_with(tau, delta, q, &mut replica_rng(seed, 0))
}

/// Exact law at time `tau` by enumerating every transition from the flat
/// state. Exponential in the number of blocks; meant for small `tau`.
pub fn discrete_distribution(tau: u64, q: f64) -> Result<Vec<(DiscreteEnsemble, f64)>> {
    check_parameters(1.0, q)?;
    let mut current = vec![(DiscreteEnsemble::flat(1.0, q), 1.0)];
    for _ in 0..tau {
        let mut next: HashMap<Configuration, (DiscreteEnsemble, f64)> = HashMap::new();
        for (mut e, p) in current {
            let blocks = prepare(&mut e)?;
            let flat: Vec<(usize, i64)> = blocks
                .iter()
                .enumerate()
                .flat_map(|(k, bs)| bs.iter().map(move |&a| (k, a)))
                .collect();
            if flat.len() > 24 {
                return Err(Error::Unsupported(format!(
                    "{} blocks are too many to enumerate",
                    flat.len()
                )));
            }
            for mask in 0u32..(1 << flat.len()) {
                let mut child = e.clone();
                let mut prob = p;
                for (i, &(k, a)) in flat.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        child.lines[k].nucleate(a);
                        prob *= q;
                    } else {
                        prob *= 1.0 - q;
                    }
                }
                child.trim();
                next.entry(child.configuration())
                    .and_modify(|(_, acc)| *acc += prob)
                    .or_insert((child, prob));
            }
        }
        current = next.into_values().collect();
    }
    Ok(current)
}

/// `log Z_d(tau) = -tau (tau + 1) / 2 log(1 - q)`.
pub fn log_partition_discrete(tau: u64, q: f64) -> f64 {
    let tau = tau as f64;
    -0.5 * tau * (tau + 1.0) * (-q).ln_1p()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteConvergenceRow {
    pub delta: f64,
    pub tau: u64,
    pub q: f64,
    pub log_partition: f64,
    /// `|log Z_d - 2t^2|`.
    pub log_partition_error: f64,
    /// Kolmogorov distance of the empirical law of `h_0(0)` to the exact
    /// continuum law.
    pub ks_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteConvergence {
    pub t: f64,
    pub samples: usize,
    pub rows: Vec<DiscreteConvergenceRow>,
    /// Distances decrease along the list of `delta`.
    pub monotone: bool,
}

/// Runs `discrete_evolve([t / delta], delta, 4 delta^2)` for each `delta` and
/// measures the distance of `h_0(0)` to the continuum law
/// `P(h(0, t) < n) = det(1 - P_n B_t)`.
pub fn discrete_to_continuum_check(
    t: f64,
    deltas: &[f64],
    samples: usize,
    seed: u64,
) -> Result<DiscreteConvergence> {
    if !(t >= 0.0) || samples == 0 {
        return Err(Error::InvalidParameter(format!(
            "t = {t}, samples = {samples}"
        )));
    }
    let exact_cdf: Vec<f64> = if t > 0.0 {
        height_pmf_exact(t, 1e-12)?
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    } else {
        vec![1.0]
    };
    let mut rows = Vec::with_capacity(deltas.len());
    for (i, &delta) in deltas.iter().enumerate() {
        let q = 4.0 * delta * delta;
        check_parameters(delta, q)?;
        let tau = (t / delta).floor() as u64;
        let mut counts: Vec<usize> = Vec::new();
        let mut rng = replica_rng(seed, i as u64);
        for _ in 0..samples {
            let h = discrete_evolve_with(tau, delta, q, &mut rng)?.height(0, 0.0) as usize;
            if counts.len() <= h {
                counts.resize(h + 1, 0);
            }
            counts[h] += 1;
        }
        let len = counts.len().max(exact_cdf.len());
        let mut acc = 0;
        let mut ks: f64 = 0.0;
        for n in 0..len {
            acc += counts.get(n).copied().unwrap_or(0);
            let emp = acc as f64 / samples as f64;
            let ex = exact_cdf.get(n).copied().unwrap_or(1.0);
            ks = ks.max((emp - ex).abs());
        }
        let log_partition = log_partition_discrete(tau, q);
        rows.push(DiscreteConvergenceRow {
            delta,
            tau,
            q,
            log_partition,
            log_partition_error: (log_partition - 2.0 * t * t).abs(),
            ks_distance: ks,
        });
    }
    let monotone = rows
        .windows(2)
        .all(|w| w[1].ks_distance <= w[0].ks_distance);
    Ok(DiscreteConvergence {
        t,
        samples,
        rows,
        monotone,
    })
}
