use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("i/o error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),

    #[error("unsupported maxval {0} (only 255 is supported)")]
    UnsupportedMaxval(u32),

    #[error("truncated payload: expected {expected} pixels, found {found}")]
    TruncatedPayload { expected: usize, found: usize },

    #[error("malformed pixel data: {0}")]
    MalformedPixels(String),

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("image of {rows}x{cols} is too small (need at least {min} in each direction)")]
    DegenerateDimensions {
        rows: usize,
        cols: usize,
        min: usize,
    },

    #[error("image of {rows}x{cols} must have even dimensions")]
    OddDimensions { rows: usize, cols: usize },

    #[error("pixel buffer has {found} entries, expected {expected}")]
    BufferLength { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("conjugate gradient produced a non-finite value at iteration {iteration}")]
    CgmNonFinite { iteration: usize },

    #[error("solver produced a non-finite value at iteration {iteration} in the {stage} update")]
    SolverNonFinite {
        iteration: usize,
        stage: &'static str,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
