use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max |A - A^dagger| = {0:.3e})")]
    NotHermitian(f64),

    #[error("projector family does not span the operator space (rank {rank} < {required})")]
    NonSpanningFrame { rank: usize, required: usize },

    #[error("quadrature is exact to degree {available}, but degree {required} is required")]
    InsufficientQuadrature { required: usize, available: usize },

    #[error("ensemble vector ({x:.6}, {y:.6}, {z:.6}) on qubit {qubit} is not a vertex of that qubit's frame")]
    NotAFrameVertex {
        qubit: usize,
        x: f64,
        y: f64,
        z: f64,
    },

    #[error(
        "representation does not reconstruct the target operator (max deviation {deviation:.3e})"
    )]
    CertificateInvalid { deviation: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
