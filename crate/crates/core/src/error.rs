use thiserror::Error;

/// Errors raised by the solvers, evaluators and simulators in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("the closed forms assume p_high = 1/2, got {0}")]
    UnsupportedProbability(f64),

    #[error("solver did not converge: {0}")]
    SolverFailure(String),

    #[error("inconsistent parameters: {0}")]
    InconsistentParameters(String),

    #[error("follower regime mismatch: {0}")]
    RegimeMismatch(String),

    #[error("unexpected payoff geometry: {0}")]
    ScenarioShape(String),

    #[error("inconsistent geometry: {0}")]
    InconsistentGeometry(String),

    #[error("payoff undefined: {0}")]
    UndefinedPayoff(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
