use thiserror::Error;

/// Errors raised by the analysis engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A model or query parameter makes the requested quantity undefined
    /// (for example a divergent interference integral).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A numerical routine did not reach its tolerance. `estimate` carries the
    /// best value obtained before giving up.
    #[error("numerical error: {message} (partial estimate {estimate:e})")]
    Numerical { message: String, estimate: f64 },

    /// The environment does not have the shape required by a specialised path.
    #[error("usage error: {0}")]
    Usage(String),

    /// Malformed configuration input.
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    /// A root search bracket does not contain a sign change.
    #[error("bracketing error: {0}")]
    Bracketing(String),

    /// A finite-difference derivative is indistinguishable from quadrature noise.
    #[error("tolerance error: {0}")]
    Tolerance(String),

    /// A grid search criterion was never met. `profile` lists `(lambda, slope)`.
    #[error("not found: {message}")]
    NotFound {
        message: String,
        profile: Vec<(f64, f64)>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn parameter(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
