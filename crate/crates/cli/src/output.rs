use std::io::Write;

use png_core::table::{DistTable, Format};

use crate::args::OutputArgs;
use crate::{Failure, Outcome};

/// Adds the provenance every table carries.
pub fn provenance(table: DistTable, command: &str) -> DistTable {
    let args: Vec<String> = std::env::args().skip(1).collect();
    table
        .with_meta("command", command)
        .with_meta("version", env!("CARGO_PKG_VERSION"))
        .with_meta("args", args.join(" "))
}

pub fn emit(table: &DistTable, out: &OutputArgs) -> Outcome<()> {
    let format = out
        .format
        .or_else(|| out.output.as_deref().map(Format::from_path))
        .unwrap_or(Format::Csv);
    let text = table.to_string_as(format)?;
    match &out.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(e.to_string())),
    }
}
