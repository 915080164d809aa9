use std::fmt;

use thiserror::Error;

/// A named precondition that a surgery or transform refused to proceed without.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotMonotone,
    Trivial,
    NotLeftCompressed,
    NotTIntersecting,
    NotTAgreeing,
    EqualSlices,
    SliceSum { expected: usize, got: usize },
    EmptySlices,
    ExtentTooSmall,
    OddSum,
    PointOutOfRange(usize),
    NoAdmissiblePoint,
    FullySymmetric,
    ProbabilityWindow,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotMonotone => write!(f, "family is not monotone"),
            Violation::Trivial => write!(f, "family is empty or contains the empty set"),
            Violation::NotLeftCompressed => write!(f, "family is not left-compressed"),
            Violation::NotTIntersecting => write!(f, "family is not t-intersecting"),
            Violation::NotTAgreeing => write!(f, "family is not t-agreeing"),
            Violation::EqualSlices => write!(f, "the two slice sizes must differ"),
            Violation::SliceSum { expected, got } => {
                write!(f, "slice sizes must sum to {expected}, got {got}")
            }
            Violation::EmptySlices => write!(f, "both selected slices are empty"),
            Violation::ExtentTooSmall => write!(f, "extent must exceed 1"),
            Violation::OddSum => write!(f, "extent plus t must be even"),
            Violation::PointOutOfRange(i) => write!(f, "point {i} is out of range"),
            Violation::NoAdmissiblePoint => {
                write!(f, "no point beyond the extent other than the next symmetric slot")
            }
            Violation::FullySymmetric => write!(f, "symmetric extent already covers every point"),
            Violation::ProbabilityWindow => write!(f, "p lies outside the window where the move improves"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must satisfy 0 < p < 1, got {0}")]
    ProbabilityOutOfRange(String),
    #[error("{0}")]
    InvalidParameters(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(Violation),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

pub(crate) fn require(cond: bool, v: Violation) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(v))
    }
}
