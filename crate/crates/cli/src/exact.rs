use rayon::prelude::*;

use png_core::determinantal::{
    airy_density, covariance_tail_coefficient, height_pmf_exact, joint_cdf_certified,
    tracy_widom_f2_certified, two_point_g, CoefficientConfig, TwoPointConfig,
};
use png_core::table::DistTable;

use crate::args::{Curve, ExactArgs};
use crate::grid::parse_grid;
use crate::output::{emit, provenance};
use crate::simulate::name;
use crate::{Failure, Outcome};

fn grid(a: &ExactArgs, default: &str) -> Outcome<Vec<f64>> {
    parse_grid(a.grid.as_deref().unwrap_or(default), a.points)
}

pub fn run(a: &ExactArgs) -> Outcome<()> {
    let tol = a.tol;
    if !(tol > 0.0) {
        return Err(Failure::Input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut table = match a.curve {
        Curve::HeightCdf => {
            let t =
                a.t.ok_or_else(|| Failure::Input("height-cdf needs --t".into()))?;
            let pmf = height_pmf_exact(t, tol)?;
            let mut table = DistTable::new(&["n", "cdf", "pmf"]);
            let mut cdf = 0.0;
            for (n, p) in pmf.iter().enumerate() {
                cdf += p;
                table.push(vec![n as f64, cdf.min(1.0), *p]);
            }
            table.with_meta("kind", "discrete").with_meta("t", t)
        }
        Curve::F2 => {
            let rows = grid(a, "-6:4:0.1")?
                .into_par_iter()
                .map(|x| tracy_widom_f2_certified(x, tol).map(|c| vec![x, c.value, c.change]))
                .collect::<png_core::Result<Vec<_>>>()?;
            let mut table = DistTable::new(&["a", "cdf", "change"]);
            rows.into_iter().for_each(|r| table.push(r));
            table.with_meta("kind", "continuous")
        }
        Curve::Density => {
            let mut table = DistTable::new(&["u", "density"]);
            for u in grid(a, "-6:4:0.1")? {
                table.push(vec![u, airy_density(u)]);
            }
            table.with_meta("kind", "density")
        }
        Curve::Joint => {
            let y: f64 =
                a.y.as_deref()
                    .ok_or_else(|| Failure::Input("joint needs --y".into()))?
                    .parse()
                    .map_err(|_| Failure::Input("--y must be a number for joint".into()))?;
            let g = grid(a, "-5:3:0.5")?;
            let pairs: Vec<(f64, f64)> = g
                .iter()
                .flat_map(|&p| g.iter().map(move |&q| (p, q)))
                .collect();
            let rows = pairs
                .into_par_iter()
                .map(|(p, q)| {
                    joint_cdf_certified(p, q, y, tol).map(|c| vec![p, q, c.value, c.change])
                })
                .collect::<png_core::Result<Vec<_>>>()?;
            let mut table = DistTable::new(&["a", "b", "cdf", "change"]);
            rows.into_iter().for_each(|r| table.push(r));
            table.with_meta("kind", "joint").with_meta("y", y)
        }
        Curve::G => {
            let ys = parse_grid(a.y.as_deref().unwrap_or("0.05:8:log"), a.points)?;
            let config = TwoPointConfig::default();
            let mut table = DistTable::new(&["y", "g", "covariance", "a2", "tail_bound"]);
            for y in ys {
                let r = two_point_g(y, &config)?;
                table.push(vec![r.y, r.g, r.covariance, r.a2, r.tail_bound]);
            }
            table.with_meta("kind", "curve")
        }
        Curve::Coefficient => {
            let c = covariance_tail_coefficient(&CoefficientConfig::default())?;
            let mut table = DistTable::new(&[
                "coefficient",
                "lambda_integral",
                "lambda_max",
                "cutoff_change",
            ]);
            table.push(vec![c.value, c.literal, c.lambda_max, c.cutoff_change]);
            table.with_meta("kind", "summary")
        }
    };
    table = table
        .with_meta("curve", name(a.curve))
        .with_meta("tol", tol);
    emit(&provenance(table, "exact"), &a.out)
}
