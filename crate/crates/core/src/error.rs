use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported image format in {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("malformed kernel text: {0}")]
    KernelText(String),

    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("spectral division by zero at frequency ({u}, {v}); a positive lambda is required")]
    Singular { u: usize, v: usize },

    #[error("inverse transform left an imaginary residue of {residue:e}")]
    ImaginaryResidue { residue: f64 },

    #[error(
        "discrepancy target {target:e} not bracketed: residual({lo_lambda:e}) = {lo_residual:e}, \
         residual({hi_lambda:e}) = {hi_residual:e}; check sigma and rho"
    )]
    BracketFailure {
        target: f64,
        lo_lambda: f64,
        lo_residual: f64,
        hi_lambda: f64,
        hi_residual: f64,
    },
}

impl Error {
    /// Failures of the numerical routines, as opposed to bad input or i/o.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. } | Error::ImaginaryResidue { .. } | Error::BracketFailure { .. }
        )
    }
}
