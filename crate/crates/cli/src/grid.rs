use crate::{Failure, Outcome};

fn number(s: &str) -> Outcome<f64> {
    s.trim()
        .parse()
        .map_err(|_| Failure::Input(format!("not a number: {s:?}")))
}

/// Parses `v`, `lo:hi:step` (inclusive) or `lo:hi:log` (`points` values,
/// geometrically spaced).
pub fn parse_grid(spec: &str, points: usize) -> Outcome<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![number(v)?]),
        [lo, hi, "log"] => {
            let (lo, hi) = (number(lo)?, number(hi)?);
            if !(lo > 0.0 && hi > lo) || points < 2 {
                return Err(Failure::Input(format!("bad log grid {spec:?}")));
            }
            let r = (hi / lo).ln() / (points - 1) as f64;
            Ok((0..points).map(|i| lo * (r * i as f64).exp()).collect())
        }
        [lo, hi, step] => {
            let (lo, hi, step) = (number(lo)?, number(hi)?, number(step)?);
            if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
                return Err(Failure::Input(format!("bad grid {spec:?}")));
            }
            let n = ((hi - lo) / step + 1e-9).floor() as usize;
            if n > 1_000_000 {
                return Err(Failure::Input(format!("grid {spec:?} is too fine")));
            }
            Ok((0..=n).map(|i| lo + step * i as f64).collect())
        }
        _ => Err(Failure::Input(format!("bad grid {spec:?}"))),
    }
}
