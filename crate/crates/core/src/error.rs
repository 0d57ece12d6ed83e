use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("d = {0} is not squarefree")]
    NotSquarefree(i64),

    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i64),

    #[error("integer overflow in {context} (bound reached: {bound})")]
    Overflow { context: &'static str, bound: i64 },

    #[error("Euler characteristic E(X_K) = {euler} is not a positive even integer")]
    ParityViolation { euler: String },

    #[error("invalid elliptic entry #{index} (nu = {nu}, t = {t}, count = {count}): {reason}")]
    InvalidLocus {
        index: usize,
        nu: i64,
        t: i64,
        count: i64,
        reason: &'static str,
    },

    #[error("weight m = {0} must be an even integer >= 2")]
    InvalidWeight(i64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of Gamma at entry {entry}, l = {l} (argument {arg})")]
    GammaPole { entry: usize, l: usize, arg: f64 },

    #[error("quadrature did not converge on [{a}, {b}]: error estimate {estimate:e} after {intervals} subintervals")]
    QuadratureNonConvergence {
        a: f64,
        b: f64,
        estimate: f64,
        intervals: usize,
    },

    #[error("internal consistency failure: imaginary residual {residual:e} exceeds {tolerance:e} in {term}")]
    ImaginaryResidual {
        term: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by inconsistent or malformed input data (as
    /// opposed to I/O failures).
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
