use thiserror::Error;

/// Errors raised by the correlation pipeline.
///
/// The variants map onto the CLI exit codes: parse errors exit 2,
/// [`Error::Dimension`], [`Error::IndexOutOfRange`], [`Error::Invariant`],
/// [`Error::Domain`], [`Error::NotPure`] and [`Error::Pairing`] exit 3,
/// [`Error::Convergence`] exits 4 and [`Error::Scientific`] exits 5.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    Dimension(String),

    #[error("index out of range: {what} = {index}, limit {limit}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("invariant violated ({check}): {detail}")]
    Invariant { check: &'static str, detail: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("state is not pure: purity {purity:.3e} below 1 - {tol:.1e}")]
    NotPure { purity: f64, tol: f64 },

    #[error("fermion eigenvalue pairing failed: {0}")]
    Pairing(String),

    #[error("{method} did not converge after {iterations} iterations (residual {residual:.3e})")]
    Convergence {
        method: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("scientific invariant failed: {0}")]
    Scientific(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invariant(check: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            check,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
