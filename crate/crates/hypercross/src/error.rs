//! Error type shared across the library.

use std::fmt;

/// Errors raised by spectral, norm, index-set and witness operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A frequency vector has a zero component and lies outside every dyadic block.
    ZeroFrequencyComponent,
    /// Grid does not satisfy the anti-aliasing bound `n_j >= 2*M_j + 1`.
    GridTooCoarse {
        axis: usize,
        size: usize,
        needed: usize,
    },
    /// Vector lengths disagree with the ambient dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// An exponent is outside the bounds of its role.
    InvalidExponent {
        role: &'static str,
        axis: usize,
        value: f64,
    },
    /// A modulus argument is outside `(0, 1]`.
    ModulusDomain { axis: usize, value: f64 },
    /// A modulus failed its axiom check where one is required.
    AxiomViolation(String),
    /// An operation received an empty input it cannot handle.
    EmptyInput(&'static str),
    /// A constructed set came out empty where a construction needs it nonempty.
    EmptySet(String),
    /// A truncated infinite sum did not converge within its enumeration cap.
    NonConvergent(String),
    /// Generic argument validation failure.
    InvalidArgument(String),
    /// Non-finite sample or coefficient where a finite value is required.
    NonFiniteValue,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroFrequencyComponent => {
                write!(f, "frequency outside all dyadic blocks (zero component)")
            }
            Error::GridTooCoarse { axis, size, needed } => write!(
                f,
                "grid too coarse for spectrum: axis {} has {} points, needs at least {}",
                axis, size, needed
            ),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {}, got {}", expected, got)
            }
            Error::InvalidExponent { role, axis, value } => {
                write!(f, "exponent {}[{}] = {} out of range", role, axis, value)
            }
            Error::ModulusDomain { axis, value } => {
                write!(f, "modulus argument t[{}] = {} outside (0, 1]", axis, value)
            }
            Error::AxiomViolation(msg) => write!(f, "modulus axiom violation: {}", msg),
            Error::EmptyInput(what) => write!(f, "empty input: {}", what),
            Error::EmptySet(what) => write!(f, "{}", what),
            Error::NonConvergent(msg) => write!(f, "non-convergent configuration: {}", msg),
            Error::InvalidArgument(msg) => write!(f, "{}", msg),
            Error::NonFiniteValue => write!(f, "non-finite value in input"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
