use thiserror::Error;

use crate::model::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the domain of the function (e.g. `lambda0 <= 0`).
    #[error("domain error: {0}")]
    Domain(String),

    /// The data carry no information about the trend (no events, too few intervals).
    #[error("degenerate data: {0}")]
    Degenerate(String),

    /// The likelihood maximum lies at beta -> +/- infinity.
    #[error("boundary MLE: {0}")]
    Boundary(String),

    #[error("invalid series: {}", join_violations(.0))]
    InvalidSeries(Vec<Violation>),

    #[error("prior does not match series: {0}")]
    PriorMismatch(String),

    #[error("prior weight mode: {0}")]
    PriorMode(String),

    #[error("invalid simulation plan: {0}")]
    InvalidPlan(String),

    #[error("root search did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("{0}")]
    Parse(String),
}

impl Error {
    /// True when the error means "no estimate is possible for this data" rather
    /// than "the input itself is malformed".
    pub fn is_estimation_failure(&self) -> bool {
        matches!(
            self,
            Error::Degenerate(_) | Error::Boundary(_) | Error::NoConvergence { .. }
        )
    }
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
