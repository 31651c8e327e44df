use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is singular to working precision (zero pivot in column {column})")]
    Singular { column: usize },

    #[error("matrix is not symmetric positive definite (non-positive pivot in column {column})")]
    NotSpd { column: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error(
        "shifted matrix A + {lambda:e} I could not be factored ({source}); try a larger lambda"
    )]
    ShiftFactorization {
        lambda: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("I - lambda*H is singular: 1/lambda = {inv_lambda:e} is an eigenvalue of H to working precision")]
    SingularRationalEvaluation { inv_lambda: f64 },

    #[error("matrix is indefinite: non-positive curvature {curvature:e} at iteration {iteration}")]
    Indefinite { iteration: usize, curvature: f64 },

    #[error("unsupported problem `{0}`")]
    UnsupportedProblem(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Arnoldi process cannot be extended: {0}")]
    ArnoldiExhausted(&'static str),

    #[error("{path}:{line}: {message}")]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
