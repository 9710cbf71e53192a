//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by model validation, enumeration, the exact engine and
/// the verification harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("declared rate floor delta must be a positive lower bound of the intensity: {0}")]
    NonPositiveDelta(String),

    #[error("intensity violates the linear growth bound phi(x) > c*x on [0, m]: {0}")]
    IntensityBelowLinearBound(String),

    #[error("negative synaptic weight at {field}")]
    NegativeWeight { field: String },

    #[error("self-weight must be zero at {field}")]
    NonzeroDiagonal { field: String },

    #[error("ceiling m must be positive, got {0}")]
    NonPositiveCeiling(f64),

    #[error("neuron index {index} out of range for a network of {n} neurons")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("observable does not match the state space: {0}")]
    ObservableUndefined(String),

    #[error("reachable state set exceeded the cap of {cap} states")]
    StateSpaceTooLarge { cap: usize },

    #[error("jump graph has {count} closed communicating classes; select one explicitly")]
    MultipleClosedClasses { count: usize },

    #[error("linear solve failed on the selected class: {0}")]
    SingularSystem(String),

    #[error("time argument must be finite and non-negative, got {0}")]
    NonFiniteTime(f64),

    #[error("transition probability underflowed to zero for a reachable target ({0})")]
    NonPositiveProbability(String),

    #[error("state {0} is not in the recurrent domain")]
    NotInRecurrentDomain(usize),

    #[error("time {t} is not above the recurrent-regime threshold t1 = {t1}")]
    TimeBelowT1 { t: f64, t1: f64 },

    #[error("value at {field} cannot be represented on a common rational grid: {value}")]
    IncommensurableValue { field: String, value: f64 },

    #[error("invalid configuration at {field}: {message}")]
    Config { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 config, 3 capacity, 4 check failure
    /// (mapped by the caller), 5 numerical breakdown.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::StateSpaceTooLarge { .. } => 3,
            Error::SingularSystem(_)
            | Error::NonPositiveProbability(_)
            | Error::MultipleClosedClasses { .. } => 5,
            _ => 2,
        }
    }
}
