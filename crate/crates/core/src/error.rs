//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by model construction, evaluation and inversion routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested computation is not defined for this model regime
    /// (e.g. an infinite log-moment driver, or a missing moment).
    #[error("unsupported regime: {0}")]
    Unsupported(String),

    /// The computation ran but could not attain the requested accuracy.
    /// `partial` carries the best available value when one exists.
    #[error("accuracy failure: {what}")]
    Accuracy { what: String, partial: Option<f64> },

    /// A structurally invalid request (bad grid, bad truncation order, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A malformed model specification (JSON or programmatic).
    #[error("invalid model spec: {0}")]
    Spec(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn accuracy(what: impl Into<String>, partial: Option<f64>) -> Self {
        Error::Accuracy {
            what: what.into(),
            partial,
        }
    }

    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn spec(msg: impl Into<String>) -> Self {
        Error::Spec(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
