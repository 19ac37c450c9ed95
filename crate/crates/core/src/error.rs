use num_complex::Complex64;
use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("potential has a pole at {0}")]
    Pole(Complex64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("no sign change on bracket [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },
    #[error("grid of {n} nodes does not resolve the data (tail ratio {tail_ratio:e})")]
    Unresolved { n: usize, tail_ratio: f64 },
    #[error("invalid grid size {0}: need a power of two between 64 and 32768")]
    GridSize(usize),
    #[error("map is not analytic on the closed disk: {0}")]
    NotAnalytic(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("reduction inapplicable: {0}")]
    ReductionInapplicable(String),
    #[error("unsupported scenario: {0}")]
    Unsupported(String),
    #[error("no solution found: {0}")]
    NoSolution(String),
    #[error("branch error: {0}")]
    Branch(String),
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("transform is not the transform of a single disk")]
    NotADisk,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
