//! Shared fixtures for the criterion benchmarks.

use ratarnoldi::problems::{generate_fredholm, FredholmKind};
use ratarnoldi::TestProblem;

/// SHAW problem of order `n`, the default benchmark workload.
pub fn shaw(n: usize) -> TestProblem {
    generate_fredholm(FredholmKind::Shaw, n).expect("valid order")
}
