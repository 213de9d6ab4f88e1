// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod compare;
mod convergence;
mod exact;
mod grid;
mod output;
mod simulate;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use png_core::Error;

/// Failure of a subcommand, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Distances above tolerance or incompatible parameters (exit 1).
    Comparison(String),
    /// Bad arguments, unreadable or malformed files (exit 2).
    Input(String),
    /// A quadrature or truncation could not be certified (exit 3).
    Certification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Comparison(_) => 1,
            Failure::Input(_) => 2,
            Failure::Certification(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Comparison(m) => write!(f, "comparison failed: {m}"),
            Failure::Input(m) => write!(f, "invalid input: {m}"),
            Failure::Certification(m) => write!(f, "certification failed: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. }
            | Error::Truncation(_)
            | Error::Instability(_)
            | Error::AccuracyLoss { .. } => Failure::Certification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

fn run(cli: Cli) -> Outcome<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(Failure::Input("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    match cli.command {
        Command::Simulate(a) => simulate::run(&a),
        Command::Exact(a) => exact::run(&a),
        Command::Compare(a) => compare::run(&a),
        Command::Convergence(a) => convergence::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("png-droplet: {f}");
            ExitCode::from(f.code())
        }
    }
}
