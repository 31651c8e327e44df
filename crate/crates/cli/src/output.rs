use std::path::Path;

use ratarnoldi::SolveReport;
use serde::Serialize;

use crate::error::{CliError, Result};

pub const HISTORY_HEADER: [&str; 3] = ["iter", "error_norm", "residual_norm"];

#[derive(Serialize)]
struct HistoryRow {
    iter: usize,
    error_norm: Option<f64>,
    residual_norm: f64,
}

pub fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let csv_err = |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// `iter,error_norm,residual_norm`, one row per recorded iteration; the error
/// column is empty when the exact solution is unknown.
pub fn write_history_csv(path: &Path, rep: &SolveReport) -> Result<()> {
    if rep.history.is_empty() {
        std::fs::write(path, HISTORY_HEADER.join(",") + "\n").map_err(|e| CliError::io(path, e))?;
        return Ok(());
    }
    write_rows(
        path,
        rep.history.iter().map(|r| HistoryRow {
            iter: r.m,
            error_norm: r.error_norm,
            residual_norm: r.residual_norm,
        }),
    )
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}
