use thiserror::Error;

/// Errors raised by the algebra engine and the verification drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("division by zero: denominator {denominator} vanishes at q = {at}")]
    DivisionByZero { denominator: String, at: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("axiom check failed: {0}")]
    AxiomFailure(String),
    #[error("kernel dimension {found}, expected 1")]
    KernelDimension { found: usize },
    #[error("PBW leading-term check failed: {0}")]
    PbwFailure(String),
    #[error("element is not central: {0}")]
    NotCentral(String),
    #[error("representation invalid: {0}")]
    BadRepresentation(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
