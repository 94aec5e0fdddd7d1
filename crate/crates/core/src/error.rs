use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::eigen::EigenMode;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone)]
pub enum Error {
    /// The symplectic axis `A` is the zero vector.
    InvalidAxis,
    /// A point that must be nonzero (or finite) was not.
    InvalidPoint,
    /// An argument lies outside the domain of the function.
    Domain(String),
    /// The bracket handed to a root finder has no sign change.
    Bracket { lo: f64, hi: f64 },
    /// An iteration did not reach its tolerance.
    Convergence { iterations: usize, estimate: f64 },
    /// Boundary-condition coefficients are degenerate.
    InvalidBc(String),
    /// Fewer eigenvalues than requested were found in the scan window.
    WindowExhausted { requested: usize, found: Vec<EigenMode> },
    /// A Beltrami mode with λ = 0.
    DegenerateMode,
    /// A mode whose coefficients are all zero.
    ZeroMode,
    /// The operation is not defined for this kind of flow.
    UnsupportedKind(String),
    /// Quadrature did not reach the requested accuracy.
    Accuracy { estimate: f64 },
    /// Two path constants that should differ are equal.
    DegenerateProbe,
    /// Any other invalid parameter.
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidAxis => write!(f, "axis vector must be nonzero"),
            Error::InvalidPoint => write!(f, "point must be nonzero and finite"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Bracket { lo, hi } => write!(f, "no sign change on [{lo}, {hi}]"),
            Error::Convergence { iterations, estimate } => {
                write!(f, "no convergence after {iterations} iterations (estimate {estimate:e})")
            }
            Error::InvalidBc(msg) => write!(f, "invalid boundary condition: {msg}"),
            Error::WindowExhausted { requested, found } => write!(
                f,
                "scan window exhausted: requested {requested} eigenvalues, found {}",
                found.len()
            ),
            Error::DegenerateMode => write!(f, "mode with zero eigenvalue"),
            Error::ZeroMode => write!(f, "mode coefficients are all zero"),
            Error::UnsupportedKind(msg) => write!(f, "unsupported flow kind: {msg}"),
            Error::Accuracy { estimate } => {
                write!(f, "quadrature accuracy not reached (error estimate {estimate:e})")
            }
            Error::DegenerateProbe => write!(f, "path constants must differ"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
