//! Error type shared across the library.

use std::fmt;
use std::path::PathBuf;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by filter updates, simulation, analysis, and reporting.
#[derive(Debug)]
pub enum Error {
    /// A caller violated an operation's contract (dimension mismatch,
    /// out-of-range parameter, non-finite input).
    Contract(String),
    /// A step-size / covariance combination outside the convergence region,
    /// e.g. `mu * lambda_max >= 1`.
    Stability(String),
    /// The coefficient norm exceeded the divergence threshold during a trial.
    Divergence { iteration: usize, norm: f64 },
    /// Covariance matrix is not usable (non-symmetric, non-PSD, zero eigenvalue
    /// where a positive one is required).
    DegenerateCovariance(String),
    /// A basis matrix failed validation (not square, not orthonormal, bad file).
    InvalidBasis(String),
    /// Bad experiment configuration or CLI usage (unknown preset, unknown
    /// override key, unknown metric).
    Config(String),
    /// File I/O failure, with the offending path.
    Io { path: PathBuf, source: std::io::Error },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::Stability(msg) => write!(f, "stability violation: {msg}"),
            Error::Divergence { iteration, norm } => write!(
                f,
                "filter diverged at iteration {iteration}: coefficient norm {norm:.3e} exceeds 1e6"
            ),
            Error::DegenerateCovariance(msg) => write!(f, "degenerate covariance: {msg}"),
            Error::InvalidBasis(msg) => write!(f, "invalid basis: {msg}"),
            Error::Config(msg) => write!(f, "{msg}"),
            Error::Io { path, source } => write!(f, "i/o error on {}: {source}", path.display()),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}
