//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix or channel dimensions do not line up.
    DimMismatch { context: &'static str, expected: usize, found: usize },
    /// A Kraus list does not resolve the identity.
    NotTracePreserving { deviation: f64 },
    /// A Kraus operator maps a sector outside itself (Eq. `P K P = K P` fails).
    NoLeakageViolation { kraus_index: usize, residual: f64 },
    /// An interaction unitary does not act as the identity on the vacuum ⊗ environment block.
    LocalVacuumViolation { residual: f64 },
    /// A repeater channel is not of the required message ⊗ path product form.
    ProductRepeaterViolation { residual: f64 },
    /// Amplitudes or states fail their normalisation condition.
    Normalization { context: &'static str, deviation: f64 },
    /// An input is outside the operation's domain.
    Domain(String),
    /// The supplied matrix is not a valid density operator.
    InvalidDensity { context: &'static str, deviation: f64 },
    /// POVM elements are not positive or do not sum to the identity.
    InvalidPovm { deviation: f64 },
    /// Ensemble probabilities invalid or states malformed.
    InvalidEnsemble(String),
    /// Iterative optimisation ran out of iterations; carries the last capacity bracket.
    NonConvergence { iterations: usize, lower: f64, upper: f64 },
    /// Operation is only defined for a one-dimensional vacuum sector.
    UnsupportedVacuumDim { vac_dim: usize },
    /// Sector label not present in the sector space.
    UnknownSector(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimMismatch { context, expected, found } => {
                write!(f, "dimension mismatch in {context}: expected {expected}, found {found}")
            }
            Error::NotTracePreserving { deviation } => {
                write!(f, "Kraus list is not trace preserving (max deviation {deviation:.3e})")
            }
            Error::NoLeakageViolation { kraus_index, residual } => write!(
                f,
                "no-leakage condition violated by Kraus operator {kraus_index} (residual {residual:.3e})"
            ),
            Error::LocalVacuumViolation { residual } => write!(
                f,
                "interaction does not act as identity on the vacuum block (residual {residual:.3e})"
            ),
            Error::ProductRepeaterViolation { residual } => write!(
                f,
                "repeater is not a message ⊗ path product channel (residual {residual:.3e})"
            ),
            Error::Normalization { context, deviation } => {
                write!(f, "normalisation failure in {context} (deviation {deviation:.3e})")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::InvalidDensity { context, deviation } => {
                write!(f, "invalid density matrix in {context} (deviation {deviation:.3e})")
            }
            Error::InvalidPovm { deviation } => {
                write!(f, "invalid POVM (deviation {deviation:.3e})")
            }
            Error::InvalidEnsemble(msg) => write!(f, "invalid ensemble: {msg}"),
            Error::NonConvergence { iterations, lower, upper } => write!(
                f,
                "no convergence after {iterations} iterations (bracket [{lower:.9}, {upper:.9}])"
            ),
            Error::UnsupportedVacuumDim { vac_dim } => {
                write!(f, "operation requires a one-dimensional vacuum sector (got v = {vac_dim})")
            }
            Error::UnknownSector(label) => write!(f, "unknown sector label '{label}'"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
