use thiserror::Error;

use crate::torusaction::FixedComponent;

/// Errors raised by the exact engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("valuation of the zero function is undefined")]
    UndefinedValuation,

    #[error("not applicable: {reason}")]
    NotApplicable {
        reason: String,
        witness: Option<Box<FixedComponent>>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn not_applicable(reason: impl Into<String>, witness: Option<FixedComponent>) -> Self {
        Error::NotApplicable {
            reason: reason.into(),
            witness: witness.map(Box::new),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
