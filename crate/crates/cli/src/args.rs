use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use png_core::table::Format;

#[derive(Debug, Parser)]
#[command(
    name = "png-droplet",
    version,
    about = "PNG droplet simulation and exact statistics"
)]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo distribution of an observable.
    Simulate(SimulateArgs),
    /// Exact curves from the determinantal formulas.
    Exact(ExactArgs),
    /// Compare a simulated table with an exact one.
    Compare(CompareArgs),
    /// Convergence of the edge-scaled kernel or of the discrete model.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Observable {
    /// Fraction of runs without any nucleation.
    FlatProb,
    /// h(0, t).
    H0,
    /// t^{-1/3} (h(y t^{2/3}, t) - 2t) + y^2.
    ScaledH,
    /// Pairs of scaled heights at 0 and y.
    Joint,
    /// Total number of up-steps over all lines.
    Steps,
    /// Number of non-flat lines.
    Lines,
    /// h_0(0) of the discrete-time model at tau = [t / delta].
    DiscreteH0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dynamics {
    /// Event-driven single-layer droplet.
    Droplet,
    /// Longest chain of the Poisson points (h(0, t) only).
    Lis,
    Rsk,
    Gw,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Output format (defaults to the file extension, else csv).
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: png_core::Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub observable: Observable,
    #[arg(long)]
    pub t: f64,
    /// Position for scaled-h and joint.
    #[arg(long, default_value_t = 0.0)]
    pub y: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub dynamics: Option<Dynamics>,
    /// Lattice spacing of the discrete model.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Nucleation probability of the discrete model (default 4 delta^2).
    #[arg(long)]
    pub q: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    /// P(h(0, t) <= n).
    HeightCdf,
    /// Tracy-Widom F_2.
    F2,
    /// Mean density of the Airy point process.
    Density,
    /// Joint law P(A(0) <= a, A(y) <= b).
    Joint,
    /// Two-point function g(y).
    G,
    /// Coefficient of y^{-2} in the covariance.
    Coefficient,
}

#[derive(Debug, Clone, Args)]
pub struct ExactArgs {
    #[arg(long, value_enum)]
    pub curve: Curve,
    #[arg(long)]
    pub t: Option<f64>,
    /// Grid `lo:hi:step` for f2, density and joint.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Separation: a number for joint; `v`, `lo:hi:step` or `lo:hi:log` for g.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Number of points of a `log` grid.
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    /// Certification tolerance (node doubling, truncation tails).
    #[arg(long, env = "PNG_DROPLET_TOL", default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Simulated table.
    pub sim: PathBuf,
    /// Exact table.
    pub exact: PathBuf,
    #[arg(long, env = "PNG_DROPLET_KS_TOL", default_value_t = 0.05)]
    pub ks_tol: f64,
    #[arg(long, env = "PNG_DROPLET_TV_TOL", default_value_t = 0.02)]
    pub tv_tol: f64,
    /// Also write the report (JSON) here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvergenceKind {
    /// Edge-scaled discrete Bessel kernel against the Airy kernel.
    Kernel,
    /// Discrete-time model against the continuum droplet.
    Discrete,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceArgs {
    #[arg(long, value_enum)]
    pub kind: ConvergenceKind,
    /// Times for the kernel report.
    #[arg(long, value_delimiter = ',', default_values_t = [100.0, 1000.0, 10000.0])]
    pub t_list: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub y2: f64,
    #[arg(long, default_value_t = 4.0)]
    pub half_width: f64,
    /// Time for the discrete check.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.1, 0.05])]
    pub deltas: Vec<f64>,
    #[arg(long, default_value_t = 10000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}
