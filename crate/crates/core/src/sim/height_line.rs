use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Piecewise-constant integer profile on `(-t, t)`, equal to `base_level`
/// outside, with unit up-steps and down-steps at the given positions.
///
/// The profile is upper semi-continuous: at an up-step it takes the value on
/// the right, at a down-step the value on the left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightLine {
    base_level: i64,
    up_steps: Vec<f64>,
    down_steps: Vec<f64>,
    horizon: f64,
}

impl HeightLine {
    pub fn flat(base_level: i64, horizon: f64) -> Self {
        Self {
            base_level,
            up_steps: Vec::new(),
            down_steps: Vec::new(),
            horizon,
        }
    }

    /// Sorts the step positions and checks that they balance, lie in
    /// `(-t, t)` and never take the profile below `base_level`.
    pub fn new(
        base_level: i64,
        mut up_steps: Vec<f64>,
        mut down_steps: Vec<f64>,
        horizon: f64,
    ) -> Result<Self> {
        if !(horizon >= 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidParameter(format!("horizon t = {horizon}")));
        }
        if up_steps.len() != down_steps.len() {
            return Err(Error::InvalidParameter(format!(
                "{} up-steps but {} down-steps",
                up_steps.len(),
                down_steps.len()
            )));
        }
        if let Some(x) = up_steps
            .iter()
            .chain(&down_steps)
            .find(|x| !(x.abs() < horizon))
        {
            return Err(Error::InvalidParameter(format!(
                "step at {x} outside (-{horizon}, {horizon})"
            )));
        }
        up_steps.sort_by(f64::total_cmp);
        down_steps.sort_by(f64::total_cmp);
        // The k-th down-step must come after the k-th up-step.
        if let Some((u, d)) = up_steps.iter().zip(&down_steps).find(|(u, d)| d < u) {
            return Err(Error::InvalidParameter(format!(
                "down-step at {d} precedes its up-step at {u}: profile dips below base level"
            )));
        }
        Ok(Self {
            base_level,
            up_steps,
            down_steps,
            horizon,
        })
    }

    pub fn base_level(&self) -> i64 {
        self.base_level
    }

    pub fn up_steps(&self) -> &[f64] {
        &self.up_steps
    }

    pub fn down_steps(&self) -> &[f64] {
        &self.down_steps
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of up-steps (equal to the number of down-steps).
    pub fn steps(&self) -> usize {
        self.up_steps.len()
    }

    pub fn is_flat(&self) -> bool {
        self.up_steps.is_empty()
    }

    /// `h(x)`.
    pub fn height_at(&self, x: f64) -> i64 {
        let ups = self.up_steps.partition_point(|&u| u <= x);
        let downs = self.down_steps.partition_point(|&d| d < x);
        self.base_level + ups as i64 - downs as i64
    }

    /// `t^{-1/3} (h(y t^{2/3}) - 2t)`.
    pub fn scaled_height(&self, y: f64) -> Result<f64> {
        let t = self.horizon;
        let x = y * t.powf(2.0 / 3.0);
        if !(x.abs() < t) {
            return Err(Error::Range {
                function: "scaled_height",
                arg: y,
                lo: -t.cbrt(),
                hi: t.cbrt(),
            });
        }
        Ok((self.height_at(x) as f64 - 2.0 * t) / t.cbrt())
    }

    /// Maximum of the profile.
    pub fn max_height(&self) -> i64 {
        let mut events: Vec<(f64, i64)> = self
            .up_steps
            .iter()
            .map(|&u| (u, 1))
            .chain(self.down_steps.iter().map(|&d| (d, -1)))
            .collect();
        // Up-steps first at equal positions, matching semi-continuity.
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        let mut h = self.base_level;
        let mut best = h;
        for (_, s) in events {
            h += s;
            best = best.max(h);
        }
        best
    }

    /// Positions where the profile changes, in increasing order.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .up_steps
            .iter()
            .chain(&self.down_steps)
            .copied()
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_line_is_base_level() {
        let h = HeightLine::flat(-2, 1.0);
        for x in [-5.0, -1.0, 0.0, 0.7, 3.0] {
            assert_eq!(h.height_at(x), -2);
        }
        assert_eq!(HeightLine::flat(0, 1.0).scaled_height(0.0).unwrap(), -2.0);
    }

    #[test]
    fn semi_continuity_at_steps() {
        let h = HeightLine::new(0, vec![-0.5, 0.1], vec![0.3, 0.6], 1.0).unwrap();
        assert_eq!(h.height_at(-0.5), 1);
        assert_eq!(h.height_at(-0.50001), 0);
        assert_eq!(h.height_at(0.1), 2);
        assert_eq!(h.height_at(0.3), 2);
        assert_eq!(h.height_at(0.30001), 1);
        assert_eq!(h.height_at(0.6), 1);
        assert_eq!(h.height_at(0.6001), 0);
        assert_eq!(h.height_at(1.0), 0);
        assert_eq!(h.max_height(), 2);
    }

    #[test]
    fn rejects_invalid_profiles() {
        assert!(HeightLine::new(0, vec![0.1], vec![], 1.0).is_err());
        assert!(HeightLine::new(0, vec![0.5], vec![0.1], 1.0).is_err());
        assert!(HeightLine::new(0, vec![-1.0], vec![0.1], 1.0).is_err());
    }

    #[test]
    fn scaled_height_range() {
        let h = HeightLine::flat(0, 8.0);
        assert!(h.scaled_height(1.9).is_ok());
        assert!(h.scaled_height(2.01).is_err());
    }
}
