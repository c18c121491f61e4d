use thiserror::Error;

use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid root lattice {kind}{rank}: {reason}")]
    InvalidRootLattice {
        kind: String,
        rank: usize,
        reason: &'static str,
    },
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("gram matrix is not negative definite (leading minor {0} has the wrong sign)")]
    NotNegativeDefinite(usize),
    #[error("cannot parse lattice description {0:?}")]
    LatticeSyntax(String),
    #[error("norm {0} is positive; a negative-definite lattice has no such vectors")]
    PositiveNorm(Rational),
    #[error("vector does not belong to the dual lattice")]
    NotInDual,
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("Elkies input invalid: {0}")]
    InvalidElkies(&'static str),
    #[error("unknown singularity label {0:?}")]
    UnknownSingularity(String),
    #[error("unknown configuration {0:?}")]
    UnknownConfig(String),
    #[error("unknown group form {0:?}")]
    UnknownGroup(String),
    #[error("unknown series {0:?}")]
    UnknownSeries(String),
    #[error("no discriminant class matches {0}")]
    NoSuchClass(String),
    #[error("{0}")]
    Invalid(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
