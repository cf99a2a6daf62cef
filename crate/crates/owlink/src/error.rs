//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the simulator and analysis operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an operation's arguments was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The eye is closed (no bimodal amplitude histogram). Carries the
    /// best-effort Q estimate so callers can still report it.
    #[error("degraded signal: eye closed, best-effort Q = {q:.3}")]
    DegradedSignal { q: f64 },

    /// A delay estimate whose normalized correlation peak is too small to
    /// trust. Carries the best estimate found.
    #[error("low-confidence delay estimate: normalized peak {peak:.3} at {tau_s:.4e} s")]
    LowConfidence { tau_s: f64, peak: f64 },

    /// Lookup failed (e.g. an unknown SDI variant).
    #[error("not found: {0}")]
    NotFound(String),

    /// Configuration file problem, with the offending location when known.
    #[error("config error ({location}): {msg}")]
    Config { location: String, msg: String },

    /// A binary file did not match its expected layout.
    #[error("file format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn config(location: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            location: location.into(),
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
