//! Crate-wide error type.
//!
//! Every variant maps onto one of the CLI exit classes through [`Error::exit_code`].

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input violates a documented precondition (e.g. an unsupported disc arrangement).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Two discs overlap without being nested.
    #[error("unsupported arrangement: {first} and {second} overlap without nesting")]
    UnsupportedArrangement { first: String, second: String },

    #[error("matrix is not positive definite (leading dimension {dimension})")]
    NotPositiveDefinite { dimension: usize },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    ConvergenceFailure { sweeps: u32, residual: f64 },

    #[error("ill-conditioned Gram matrix at degree {degree}: Cholesky failed up to {bits} bits; raise precision or lower the degree")]
    IllConditioned { degree: usize, bits: u32 },

    #[error("count at lambda = {lambda:e} is not certified (tail bound {tau:e})")]
    Uncertified { lambda: f64, tau: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureNonconvergence(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) => 2,
            Error::Domain(_) | Error::Precondition(_) | Error::UnsupportedArrangement { .. } => 3,
            Error::NotPositiveDefinite { .. }
            | Error::ConvergenceFailure { .. }
            | Error::IllConditioned { .. }
            | Error::Uncertified { .. }
            | Error::InsufficientData(_)
            | Error::QuadratureNonconvergence(_) => 4,
            Error::Consistency(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
