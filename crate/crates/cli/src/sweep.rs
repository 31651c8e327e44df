//! λ sweeps: one history per shift plus the minimum-error curve.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{MethodName, Regularization};
use crate::error::{CliError, Result};
use crate::output::{write_history_csv, write_rows};
use crate::scenario::{solve_with, PreparedProblem};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SweepPoint {
    pub lambda: f64,
    pub err_min: Option<f64>,
    pub res_at_min: Option<f64>,
    pub nit: Option<usize>,
    pub iterations: usize,
    pub history_csv: Option<String>,
    pub error: Option<String>,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub curve_csv: PathBuf,
    pub points: Vec<SweepPoint>,
}

pub fn history_file_name(method: MethodName, lambda: f64) -> String {
    format!("{}_{lambda:e}.csv", method.as_str())
}

/// Solves once per shift in parallel. Writes one history CSV per shift and
/// `min_error_vs_lambda.csv`; a failing shift is recorded and skipped.
pub fn sweep_lambda(
    problem: &PreparedProblem,
    method: MethodName,
    lambdas: &[f64],
    max_iter: usize,
    reg: Regularization,
    out_dir: &Path,
) -> Result<SweepOutcome> {
    if lambdas.is_empty() {
        return Err(CliError::usage("lambdas", "at least one shift is required"));
    }
    if !method.takes_lambda() {
        return Err(CliError::usage(
            "method",
            format!("{} takes no shift", method.as_str()),
        ));
    }
    if let Some(bad) = lambdas.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
        return Err(CliError::usage(
            "lambdas",
            format!("shifts must be positive, got {bad}"),
        ));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;

    let points: Vec<Result<SweepPoint>> = lambdas
        .par_iter()
        .map(
            |&lambda| match solve_with(method, Some(lambda), problem, reg, max_iter) {
                Ok(rep) => {
                    let file = history_file_name(method, lambda);
                    write_history_csv(&out_dir.join(&file), &rep)?;
                    Ok(SweepPoint {
                        lambda,
                        err_min: rep.min_error(),
                        res_at_min: rep.residual_at_best(),
                        nit: rep.best().map(|r| r.m),
                        iterations: rep.history.len(),
                        history_csv: Some(file),
                        error: None,
                    })
                }
                Err(e) => {
                    log::warn!("λ = {lambda:e}: {e}");
                    Ok(SweepPoint {
                        lambda,
                        err_min: None,
                        res_at_min: None,
                        nit: None,
                        iterations: 0,
                        history_csv: None,
                        error: Some(e.to_string()),
                    })
                }
            },
        )
        .collect();
    let points = points.into_iter().collect::<Result<Vec<_>>>()?;
    let curve_csv = out_dir.join("min_error_vs_lambda.csv");
    write_rows(&curve_csv, points.iter())?;
    Ok(SweepOutcome { curve_csv, points })
}
