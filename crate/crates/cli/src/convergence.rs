use png_core::determinantal::convergence_report;
use png_core::multilayer::discrete_to_continuum_check;
use png_core::table::DistTable;

use crate::args::{ConvergenceArgs, ConvergenceKind};
use crate::output::{emit, provenance};
use crate::simulate::name;
use crate::Outcome;

pub fn run(a: &ConvergenceArgs) -> Outcome<()> {
    let table = match a.kind {
        ConvergenceKind::Kernel => {
            let r = convergence_report(&a.t_list, a.y, a.y2, a.half_width)?;
            let mut table =
                DistTable::new(&["t", "sup_distance", "argmax_u", "argmax_v", "samples"]);
            for row in &r.rows {
                table.push(vec![
                    row.t,
                    row.sup_distance,
                    row.argmax.0,
                    row.argmax.1,
                    row.samples as f64,
                ]);
            }
            table
                .with_meta("y", r.y)
                .with_meta("y2", r.y2)
                .with_meta("half_width", r.box_half_width)
                .with_meta("monotone", r.monotone)
        }
        ConvergenceKind::Discrete => {
            let r = discrete_to_continuum_check(a.t, &a.deltas, a.samples as usize, a.seed)?;
            let mut table = DistTable::new(&[
                "delta",
                "tau",
                "q",
                "log_partition",
                "log_partition_error",
                "ks_distance",
            ]);
            for row in &r.rows {
                table.push(vec![
                    row.delta,
                    row.tau as f64,
                    row.q,
                    row.log_partition,
                    row.log_partition_error,
                    row.ks_distance,
                ]);
            }
            table
                .with_meta("t", r.t)
                .with_meta("samples", r.samples)
                .with_meta("seed", a.seed)
                .with_meta("monotone", r.monotone)
        }
    };
    let table = table.with_meta("report", name(a.kind));
    emit(&provenance(table, "convergence"), &a.out)
}
