use thiserror::Error;

/// Errors raised by the library and surfaced by the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arguments outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A command-line or textual argument that could not be parsed.
    #[error("cannot parse {arg}: {reason}")]
    Parse { arg: String, reason: String },

    /// Evaluation too close to a Dirac string or coordinate pole.
    #[error("singularity: {0}")]
    Singular(String),

    /// A quadrature sample came out NaN or infinite.
    #[error("non-finite integrand value at theta={theta}, phi={phi}")]
    NonFinite { theta: f64, phi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
