//! Error type shared by the library.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// Problem file could not be parsed; `location` names the field or line.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    /// Input lies outside the supported weight-filtration shapes.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A post-verification of a defining condition failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_) | Error::Parse { .. } => 1,
            Error::Unsupported(_) => 2,
            Error::Invariant(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
