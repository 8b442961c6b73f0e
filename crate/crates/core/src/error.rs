use thiserror::Error;

use crate::model::Piece;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("piece {new} overlaps existing piece {existing}")]
    Overlap { new: Piece, existing: Piece },

    #[error("piece for job {job} on machine {machine} has non-positive length [{start}, {end})")]
    EmptyPiece {
        machine: u8,
        job: usize,
        start: f64,
        end: f64,
    },

    #[error("solution set is empty")]
    EmptySet,

    #[error("job {index} has non-positive size {size}")]
    NonPositiveSize { index: usize, size: f64 },

    #[error("target length {target} is below the optimal makespan {opt}")]
    Infeasible { target: f64, opt: f64 },

    #[error("job {index} of size {size} exceeds its predecessor of size {previous}")]
    UnsortedInput {
        index: usize,
        size: f64,
        previous: f64,
    },

    #[error("delta must lie in (0, 1], got {0}")]
    BadDelta(f64),

    #[error("solution count must be positive")]
    BadSolutionCount,

    #[error("profile error: {0}")]
    Profile(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An internal guarantee of an algorithm failed. This is a bug, never a
    /// property of a legal input.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }

    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
