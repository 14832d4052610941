use thiserror::Error;

/// Errors raised by the simulator and its numerical engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("untensored matrix")]
    Untensored,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("slot mismatch: {0}")]
    SlotMismatch(String),
    #[error("witness not measurable with given operations")]
    NotMeasurable,
    #[error("infeasible restriction: {0}")]
    InfeasibleRestriction(String),
    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("promise violated: {0}")]
    PromiseViolated(String),
    #[error("units admit no promise instance for column {0}")]
    NoPromiseInstance(usize),
    #[error("zero-probability outcome")]
    ZeroProbability,
    #[error("herald probability depends on the input state (spread {0:e})")]
    InputDependentHerald(f64),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("empty grid")]
    EmptyGrid,
    #[error("unknown scenario: {0}")]
    UnknownScenario(String),
    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
