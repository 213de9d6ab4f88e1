use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::HeightLine;

/// Ordered stack of height lines `h_0 > h_{-1} > ...` at a common time `t`.
///
/// `lines[k]` is the line with index `-k` and base level `-k`; lines below
/// the stored ones are flat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineEnsemble {
    lines: Vec<HeightLine>,
    horizon: f64,
}

impl LineEnsemble {
    /// Validates base levels, the common horizon and strict ordering, and
    /// drops trailing flat lines (the top line is always kept).
    pub fn new(mut lines: Vec<HeightLine>, horizon: f64) -> Result<Self> {
        if lines.is_empty() {
            lines.push(HeightLine::flat(0, horizon));
        }
        for (k, line) in lines.iter().enumerate() {
            if line.base_level() != -(k as i64) {
                return Err(Error::InvalidParameter(format!(
                    "line {k} has base level {}, expected {}",
                    line.base_level(),
                    -(k as i64)
                )));
            }
            if line.horizon() != horizon {
                return Err(Error::InvalidParameter(format!(
                    "line {k} has horizon {}, expected {horizon}",
                    line.horizon()
                )));
            }
        }
        while lines.len() > 1 && lines.last().is_some_and(HeightLine::is_flat) {
            lines.pop();
        }
        let e = Self { lines, horizon };
        if let Some((k, x)) = e.ordering_violation() {
            return Err(Error::InvalidParameter(format!(
                "lines {} and {} touch at x = {x}",
                -(k as i64),
                -(k as i64) - 1
            )));
        }
        Ok(e)
    }

    pub fn flat(horizon: f64) -> Self {
        Self {
            lines: vec![HeightLine::flat(0, horizon)],
            horizon,
        }
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Stored lines, top first.
    pub fn lines(&self) -> &[HeightLine] {
        &self.lines
    }

    pub fn top(&self) -> &HeightLine {
        &self.lines[0]
    }

    /// `h_l(x)` for `l <= 0`.
    pub fn height(&self, l: i64, x: f64) -> i64 {
        assert!(l <= 0, "line index must be nonpositive");
        match self.lines.get((-l) as usize) {
            Some(line) => line.height_at(x),
            None => l,
        }
    }

    /// Number of lines that are not flat.
    pub fn nonflat_lines(&self) -> usize {
        self.lines.iter().filter(|l| !l.is_flat()).count()
    }

    /// `n_l` for the stored lines.
    pub fn step_counts(&self) -> Vec<usize> {
        self.lines.iter().map(HeightLine::steps).collect()
    }

    /// `sum_l n_l`.
    pub fn total_steps(&self) -> usize {
        self.lines.iter().map(HeightLine::steps).sum()
    }

    /// First `(k, x)` with `h_{-k-1}(x) >= h_{-k}(x)`, if any.
    pub fn ordering_violation(&self) -> Option<(usize, f64)> {
        let flat_below = HeightLine::flat(-(self.lines.len() as i64), self.horizon);
        for k in 0..self.lines.len() {
            let upper = &self.lines[k];
            let lower = self.lines.get(k + 1).unwrap_or(&flat_below);
            let mut xs: Vec<f64> = upper.breakpoints();
            xs.extend(lower.breakpoints());
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            let mut probes = xs.clone();
            probes.extend(xs.windows(2).map(|w| 0.5 * (w[0] + w[1])));
            if let (Some(first), Some(last)) = (xs.first(), xs.last()) {
                probes.push(first - 1.0);
                probes.push(last + 1.0);
            } else {
                probes.push(0.0);
            }
            if let Some(&x) = probes
                .iter()
                .find(|&&x| lower.height_at(x) >= upper.height_at(x))
            {
                return Some((k, x));
            }
        }
        None
    }
}

/// Step coordinates `(y^{l,+}_j, y^{l,-}_j)` per line, top line first, each
/// sorted by `j`.
pub type StepCoordinates = Vec<Vec<(f64, f64)>>;

/// The step map `S`: pairs the `j`-th up-step with the `j`-th down-step of
/// every line.
pub fn step_map(e: &LineEnsemble) -> StepCoordinates {
    let mut coords: StepCoordinates = e
        .lines()
        .iter()
        .map(|l| {
            l.up_steps()
                .iter()
                .copied()
                .zip(l.down_steps().iter().copied())
                .collect()
        })
        .collect();
    while coords.last().is_some_and(Vec::is_empty) {
        coords.pop();
    }
    coords
}

/// Inverse of [`step_map`].
pub fn step_map_inverse(coords: &StepCoordinates, horizon: f64) -> Result<LineEnsemble> {
    let lines = coords
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let (ups, downs) = c.iter().copied().unzip();
            HeightLine::new(-(k as i64), ups, downs, horizon)
        })
        .collect::<Result<Vec<_>>>()?;
    LineEnsemble::new(lines, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_ensemble() {
        let e = LineEnsemble::flat(1.0);
        assert_eq!(e.total_steps(), 0);
        assert!(step_map(&e).is_empty());
        assert_eq!(e.height(-3, 0.0), -3);
        assert_eq!(step_map_inverse(&vec![], 1.0).unwrap(), e);
    }

    #[test]
    fn detects_touching_lines() {
        let top = HeightLine::new(0, vec![-0.5], vec![0.5], 1.0).unwrap();
        let ok = HeightLine::new(-1, vec![-0.2], vec![0.2], 1.0).unwrap();
        assert!(LineEnsemble::new(vec![top.clone(), ok], 1.0).is_ok());
        let bad = HeightLine::new(-1, vec![-0.7], vec![0.2], 1.0).unwrap();
        assert!(LineEnsemble::new(vec![top.clone(), bad], 1.0).is_err());
        let below_flat_top = HeightLine::new(-1, vec![-0.2], vec![0.2], 1.0).unwrap();
        assert!(LineEnsemble::new(vec![HeightLine::flat(0, 1.0), below_flat_top], 1.0).is_err());
    }

    #[test]
    fn wrong_base_rejected() {
        let l = HeightLine::flat(-1, 1.0);
        assert!(LineEnsemble::new(vec![l], 1.0).is_err());
    }
}
