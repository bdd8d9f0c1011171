use thiserror::Error;

/// Errors produced by the discrete operators, solvers and harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inconsistent dimensions, index ranges or arguments.
    #[error("usage error: {0}")]
    Usage(String),

    /// A stated precondition (contraction bound, boundary value) does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A per-step fixed-point iteration did not reach its tolerance.
    #[error("fixed point did not converge at step {step} after {iterations} iterations (last increment {increment:e})")]
    FixedPoint {
        step: usize,
        iterations: usize,
        increment: f64,
    },

    /// The outer sweep hit its iteration cap.
    #[error("sweep did not converge after {iterations} iterations (stationarity {stationarity:e}, control increment {increment:e})")]
    Sweep {
        iterations: usize,
        stationarity: f64,
        increment: f64,
    },

    /// The nodewise control update failed.
    #[error("control update failed at node {node}: {reason}")]
    ControlUpdate { node: usize, reason: String },

    /// Degenerate input to a fit (zero or negative errors, too few rows).
    #[error("degenerate data: {0}")]
    Degenerate(String),

    /// No closed-form reference exists for the requested case.
    #[error("unsupported reference: {0}")]
    UnsupportedReference(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
