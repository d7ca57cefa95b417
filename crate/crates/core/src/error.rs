//! Error type shared by all solver and analysis routines.

use alloc::string::String;
use core::fmt;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates its domain (negative rate, non-finite value, ...).
    InvalidParameter { field: &'static str, value: f64 },
    /// An iterative solver hit its iteration cap before reaching tolerance.
    Convergence { iterations: u32 },
    /// A denominator came too close to zero to trust the result.
    Singularity { context: &'static str, value: f64 },
    /// A trajectory entry exceeded the divergence threshold; `time` is the
    /// first integration time at which it happened.
    Divergence { time: f64 },
    /// NaN or other numerical breakdown.
    Numerical { context: &'static str },
    /// The drift matrix is not asymptotically stable, so no stationary
    /// covariance exists.
    Unstable { max_real_eig: f64 },
    /// Input outside the mathematical domain of a closed-form expression.
    Domain { context: &'static str },
    /// Requested figure preset does not exist.
    UnknownPreset { name: String },
    /// A sweep axis contains an invalid value.
    InvalidAxis {
        axis: String,
        index: usize,
        value: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { field, value } => {
                write!(f, "invalid parameter `{field}` = {value}")
            }
            Error::Convergence { iterations } => {
                write!(f, "no convergence within {iterations} iterations")
            }
            Error::Singularity { context, value } => {
                write!(f, "near-singular {context} ({value:e})")
            }
            Error::Divergence { time } => {
                write!(f, "state diverged at t = {time} (unstable parameters?)")
            }
            Error::Numerical { context } => write!(f, "numerical failure in {context}"),
            Error::Unstable { max_real_eig } => {
                write!(
                    f,
                    "drift matrix unstable (max Re eigenvalue = {max_real_eig:e})"
                )
            }
            Error::Domain { context } => write!(f, "domain error: {context}"),
            Error::UnknownPreset { name } => {
                write!(
                    f,
                    "unknown preset `{name}`; valid presets: fig3a, fig3b, fig5a, fig5b, \
                     fig5c, fig5d, fig5e, fig5f, fig6a, fig6b"
                )
            }
            Error::InvalidAxis { axis, index, value } => {
                write!(
                    f,
                    "invalid value {value} at index {index} of sweep axis `{axis}`"
                )
            }
        }
    }
}

impl core::error::Error for Error {}
