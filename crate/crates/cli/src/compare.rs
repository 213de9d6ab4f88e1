use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use png_core::table::DistTable;

use crate::args::CompareArgs;
use crate::{Failure, Outcome};

/// Parameters two tables must agree on to be comparable.
const SHARED_PARAMETERS: [&str; 3] = ["t", "y", "delta"];

#[derive(Debug, Serialize)]
struct Moments {
    mean: f64,
    variance: f64,
}

#[derive(Debug, Serialize)]
struct Report {
    pass: bool,
    mismatches: Vec<String>,
    ks_distance: f64,
    ks_tol: f64,
    tv_distance: Option<f64>,
    tv_tol: f64,
    sim_moments: Moments,
    exact_moments: Moments,
    mean_delta: f64,
    variance_delta: f64,
}

/// A distribution read off a table: support points with CDF and pmf.
struct Law {
    x: Vec<f64>,
    cdf: Vec<f64>,
    pmf: Option<Vec<f64>>,
    continuous: bool,
}

impl Law {
    fn from_table(t: &DistTable, role: &str) -> Outcome<Self> {
        let schema = |m: &str| Failure::Input(format!("{role} table: {m}"));
        let x_name = t.columns.first().ok_or_else(|| schema("no columns"))?;
        let x = t.column(x_name).unwrap();
        let cdf = t.column("cdf").ok_or_else(|| schema("no cdf column"))?;
        if x.is_empty() {
            return Err(schema("no rows"));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(schema("first column is not increasing"));
        }
        let continuous = t.meta("kind") == Some("continuous");
        let pmf = if continuous { None } else { t.column("pmf") };
        Ok(Self {
            x,
            cdf,
            pmf,
            continuous,
        })
    }

    /// Right-continuous step function for lattice laws, linear interpolation
    /// for tabulated continuous ones.
    fn cdf_at(&self, v: f64) -> f64 {
        let i = self.x.partition_point(|&x| x <= v);
        if i == 0 {
            return if self.continuous { self.cdf[0] } else { 0.0 };
        }
        if !self.continuous || i == self.x.len() {
            return self.cdf[i - 1];
        }
        let (x0, x1) = (self.x[i - 1], self.x[i]);
        let (f0, f1) = (self.cdf[i - 1], self.cdf[i]);
        f0 + (f1 - f0) * (v - x0) / (x1 - x0)
    }

    fn moments(&self) -> Moments {
        let masses: Vec<(f64, f64)> = match &self.pmf {
            Some(p) => self.x.iter().copied().zip(p.iter().copied()).collect(),
            None => self
                .x
                .windows(2)
                .zip(self.cdf.windows(2))
                .map(|(x, f)| (0.5 * (x[0] + x[1]), f[1] - f[0]))
                .collect(),
        };
        let total: f64 = masses.iter().map(|m| m.1).sum();
        let mean = masses.iter().map(|(x, p)| x * p).sum::<f64>() / total;
        let variance = masses
            .iter()
            .map(|(x, p)| (x - mean).powi(2) * p)
            .sum::<f64>()
            / total;
        Moments { mean, variance }
    }
}

fn key(x: f64) -> i64 {
    (x * 1e9).round() as i64
}

fn tv(a: &Law, b: &Law) -> Option<f64> {
    let (pa, pb) = (a.pmf.as_ref()?, b.pmf.as_ref()?);
    let mut diff: BTreeMap<i64, f64> = BTreeMap::new();
    for (x, p) in a.x.iter().zip(pa) {
        *diff.entry(key(*x)).or_default() += p;
    }
    for (x, p) in b.x.iter().zip(pb) {
        *diff.entry(key(*x)).or_default() -= p;
    }
    Some(0.5 * diff.values().map(|d| d.abs()).sum::<f64>())
}

fn mismatches(a: &DistTable, b: &DistTable) -> Vec<String> {
    SHARED_PARAMETERS
        .iter()
        .filter_map(|&k| {
            let (va, vb) = (a.meta(k)?, b.meta(k)?);
            let same = match (va.parse::<f64>(), vb.parse::<f64>()) {
                (Ok(x), Ok(y)) => (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0),
                _ => va == vb,
            };
            (!same).then(|| format!("{k}: {va} vs {vb}"))
        })
        .collect()
}

pub fn run(a: &CompareArgs) -> Outcome<()> {
    if !(a.ks_tol > 0.0 && a.tv_tol > 0.0) {
        return Err(Failure::Input("tolerances must be positive".into()));
    }
    let sim_table = DistTable::read(&a.sim)?;
    let exact_table = DistTable::read(&a.exact)?;
    let sim = Law::from_table(&sim_table, "simulated")?;
    let exact = Law::from_table(&exact_table, "exact")?;

    let mut points = sim.x.clone();
    if !exact.continuous {
        points.extend(&exact.x);
    }
    let ks_distance = points
        .iter()
        .map(|&x| (sim.cdf_at(x) - exact.cdf_at(x)).abs())
        .fold(0.0, f64::max);
    let tv_distance = tv(&sim, &exact);
    let (sm, em) = (sim.moments(), exact.moments());
    let mismatches = mismatches(&sim_table, &exact_table);
    let pass = mismatches.is_empty()
        && ks_distance <= a.ks_tol
        && tv_distance.is_none_or(|d| d <= a.tv_tol);
    let report = Report {
        pass,
        mismatches,
        ks_distance,
        ks_tol: a.ks_tol,
        tv_distance,
        tv_tol: a.tv_tol,
        mean_delta: sm.mean - em.mean,
        variance_delta: sm.variance - em.variance,
        sim_moments: sm,
        exact_moments: em,
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    // A closed pipe downstream is not an error of the comparison.
    let _ = writeln!(std::io::stdout(), "{text}");
    if let Some(path) = &a.output {
        std::fs::write(path, &text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    if pass {
        Ok(())
    } else if !report.mismatches.is_empty() {
        Err(Failure::Comparison(format!(
            "incompatible tables ({})",
            report.mismatches.join(", ")
        )))
    } else {
        Err(Failure::Comparison(format!(
            "KS {ks_distance:.3e}, TV {:?} above tolerance",
            report.tv_distance
        )))
    }
}
