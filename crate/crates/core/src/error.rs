use thiserror::Error;

/// Input errors raised by the workbench. Identity violations are never
/// errors; they are reported through [`crate::axioms::CheckReport`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("arity mismatch: expected {expected} arguments, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("indices not strictly increasing: {0:?}")]
    NotStrictlyIncreasing(Vec<usize>),
    #[error("duplicate bracket entry for indices {0:?}")]
    DuplicateEntry(Vec<usize>),
    #[error("unknown bracket `{0}`")]
    UnknownBracket(String),
    #[error("unknown derivation `{0}`")]
    UnknownDerivation(String),
    #[error("identity {0} requires a derivation")]
    MissingDerivation(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
