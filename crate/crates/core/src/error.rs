use thiserror::Error;

/// Errors raised by the numerical and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {arg} outside the domain of {function}")]
    Domain { function: &'static str, arg: f64 },

    #[error("{function}({order}, {arg}) lies outside the validated accuracy regime")]
    AccuracyLoss {
        function: &'static str,
        order: f64,
        arg: f64,
    },

    #[error("{function}: argument {arg} outside validated range [{lo}, {hi}]")]
    Range {
        function: &'static str,
        arg: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truncation could not be certified: {0}")]
    Truncation(String),

    #[error("quadrature did not converge: {what} changed by {change:e} (tolerance {tol:e})")]
    NonConvergence { what: String, change: f64, tol: f64 },

    #[error("numerical instability: {0}")]
    Instability(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
