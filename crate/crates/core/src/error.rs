use thiserror::Error;

/// Errors raised by the numerical routines and verification suites.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested truncation tolerance cannot be met.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// `sum (l+1) c_l c_{l+1}` vanishes, so the spherical center is undefined.
    #[error("undefined center: |denominator| = {denominator:e} <= 1e-12 * energy = {energy:e}")]
    UndefinedCenter { denominator: f64, energy: f64 },

    /// A function failed the unimodality probe.
    #[error("shape error: {0}")]
    Shape(String),

    /// Quadrature or series summation did not converge.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// The operation does not apply to the supplied input kind.
    #[error("usage error: {0}")]
    Usage(String),

    /// A precondition on the arguments is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Log-log fitting failed.
    #[error("fit error: {0}")]
    Fit(String),

    /// A computed result contradicts a theorem it must satisfy.
    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    /// Malformed coefficient file or report text.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    /// An error attributed to one scale of a sweep.
    #[error("at rho = {rho:e}: {source}")]
    AtScale {
        rho: f64,
        #[source]
        source: Box<Error>,
    },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
