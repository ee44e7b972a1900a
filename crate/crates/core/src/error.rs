use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation that received it.
    #[error("invalid {field}: {reason}")]
    Validation { field: &'static str, reason: String },

    /// A time argument was negative.
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    /// A matrix or amplitude pair violates a physical consistency bound.
    #[error("consistency violation: {0}")]
    Consistency(String),

    /// The eigen/singular-value iteration did not converge.
    #[error("{routine} did not converge for matrix {matrix}")]
    NoConvergence { routine: &'static str, matrix: String },

    /// A measurement interval falls on a node of the survival amplitude.
    #[error("zeno rate is singular: survival amplitude vanishes at T = {interval}")]
    SingularRate { interval: f64 },

    /// A time-stepping solver lost norm beyond its tolerance.
    #[error("integration became unstable at t = {time}: excitation norm {norm}")]
    Instability { time: f64, norm: f64 },

    /// A quadrature self-check exceeded its tolerance.
    #[error("quadrature did not converge: point doubling changed the result by {change:e}")]
    Tolerance { change: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Validation { field, reason: reason.into() }
}
