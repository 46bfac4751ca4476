use thiserror::Error;

use crate::lattice::{LatticePoint, Witness};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("weight at {0} is not available: outside the window and no tail rule applies")]
    OutOfWindow(LatticePoint),

    #[error("weight diagram is not commutative: {0}")]
    NotCommutative(Box<Witness>),

    #[error("moment at {0} vanishes, which would force a zero weight")]
    ZeroMoment(LatticePoint),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no representing measure: {0}")]
    NoRepresentingMeasure(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotCommutative(_) => 2,
            Error::Unsupported(_) | Error::NoRepresentingMeasure(_) => 3,
            _ => 1,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
