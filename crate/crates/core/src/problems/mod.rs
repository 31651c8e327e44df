//! Test problems: discretized first-kind Fredholm equations, Gaussian RBF
//! interpolation of Franke's function, noise injection and Matrix Market I/O.

mod fredholm;
mod mtx;
mod noise;
mod rbf;

use std::collections::BTreeMap;
use std::str::FromStr;

pub use fredholm::{generate_fredholm, FredholmKind};
pub use mtx::{load_matrix_market, read_matrix_market, write_matrix_market, write_vector_market};
pub use noise::{add_noise, NoiseSpec};
pub use rbf::{franke, generate_franke_rbf};

use crate::error::Error;
use crate::linalg::{DenseMatrix, DenseVector};

/// A linear system with provenance metadata.
#[derive(Debug, Clone)]
pub struct TestProblem {
    pub name: String,
    pub a: DenseMatrix,
    /// Noise-free right-hand side.
    pub b: DenseVector,
    pub x_true: Option<DenseVector>,
    pub params: BTreeMap<String, String>,
}

impl TestProblem {
    pub fn dimension(&self) -> usize {
        self.a.rows()
    }
}

/// Every generator known to [`generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Fredholm(FredholmKind),
    Franke,
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "franke" | "franke-rbf" | "rbf" => Ok(ProblemKind::Franke),
            other => other.parse().map(ProblemKind::Fredholm),
        }
    }
}
