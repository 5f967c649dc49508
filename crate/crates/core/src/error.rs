use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("quadrature did not converge: {message} (partial value {partial}, error estimate {error})")]
    Quadrature { message: String, partial: f64, error: f64 },

    #[error("zero search failed for n = {n}: {message}")]
    ZeroSearch { n: u32, message: String },

    #[error("residue computation failed: {0}")]
    Residue(String),

    #[error("imaginary part {imag:e} exceeds tolerance relative to magnitude {scale:e}")]
    NonRealSum { imag: f64, scale: f64 },

    #[error("integral diverges: {0}")]
    Divergent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
