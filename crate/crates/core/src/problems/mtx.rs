//! Matrix Market (`.mtx`) reading and writing for dense real data.
//!
//! Supports the `coordinate` and `array` formats with `real` or `integer`
//! fields and `general`, `symmetric` or `skew-symmetric` symmetry.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::TestProblem;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

/// Reads a Matrix Market file into a dense matrix.
pub fn read_matrix_market(path: &Path) -> Result<DenseMatrix> {
    let text = fs::read_to_string(path)?;
    parse(&text, path)
}

fn parse(text: &str, path: &Path) -> Result<DenseMatrix> {
    let err = |line: usize, message: String| Error::Format {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (ln, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(err(ln, format!("bad banner `{header}`")));
    }
    let layout = match tokens[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(err(ln, format!("unsupported format `{other}`"))),
    };
    match tokens[3].as_str() {
        "real" | "integer" | "double" => {}
        other => return Err(err(ln, format!("unsupported field `{other}`"))),
    }
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        other => return Err(err(ln, format!("unsupported symmetry `{other}`"))),
    };

    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (ln, size_line) = data
        .next()
        .ok_or_else(|| err(ln + 1, "missing size line".into()))?;
    let sizes: Vec<usize> = size_line
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| err(ln, format!("bad size line: {e}")))?;

    let parse_f64 = |ln: usize, t: &str| -> Result<f64> {
        let v: f64 = t
            .parse()
            .map_err(|_| err(ln, format!("invalid number `{t}`")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(err(ln, format!("non-finite value `{t}`")))
        }
    };

    match layout {
        Layout::Coordinate => {
            let [rows, cols, nnz] = sizes[..] else {
                return Err(err(ln, "coordinate size line needs rows, cols, nnz".into()));
            };
            let mut m = DenseMatrix::zeros(rows, cols);
            let mut seen = 0;
            for (ln, line) in data {
                let t: Vec<&str> = line.split_whitespace().collect();
                if t.len() != 3 {
                    return Err(err(ln, "expected `row col value`".into()));
                }
                let idx = |s: &str, bound: usize| -> Result<usize> {
                    let i: usize = s
                        .parse()
                        .map_err(|_| err(ln, format!("invalid index `{s}`")))?;
                    if i == 0 || i > bound {
                        return Err(err(ln, format!("index {i} out of range 1..={bound}")));
                    }
                    Ok(i - 1)
                };
                let (i, j) = (idx(t[0], rows)?, idx(t[1], cols)?);
                let v = parse_f64(ln, t[2])?;
                m[(i, j)] += v;
                if i != j {
                    match symmetry {
                        Symmetry::General => {}
                        Symmetry::Symmetric => m[(j, i)] += v,
                        Symmetry::SkewSymmetric => m[(j, i)] -= v,
                    }
                }
                seen += 1;
            }
            if seen != nnz {
                return Err(err(ln, format!("expected {nnz} entries, found {seen}")));
            }
            Ok(m)
        }
        Layout::Array => {
            let [rows, cols] = sizes[..] else {
                return Err(err(ln, "array size line needs rows, cols".into()));
            };
            let mut values = Vec::new();
            let mut last_line = ln;
            for (ln, line) in data {
                for t in line.split_whitespace() {
                    values.push(parse_f64(ln, t)?);
                }
                last_line = ln;
            }
            // column-major; symmetric variants store the lower triangle only
            let mut m = DenseMatrix::zeros(rows, cols);
            let mut it = values.iter().copied();
            let mut take = || {
                it.next()
                    .ok_or_else(|| err(last_line, "too few values".into()))
            };
            for j in 0..cols {
                let first = match symmetry {
                    Symmetry::General => 0,
                    Symmetry::Symmetric => j,
                    Symmetry::SkewSymmetric => j + 1,
                };
                for i in first..rows {
                    let v = take()?;
                    m[(i, j)] = v;
                    if i != j {
                        match symmetry {
                            Symmetry::General => {}
                            Symmetry::Symmetric => m[(j, i)] = v,
                            Symmetry::SkewSymmetric => m[(j, i)] = -v,
                        }
                    }
                }
            }
            if it.next().is_some() {
                return Err(err(last_line, "too many values".into()));
            }
            Ok(m)
        }
    }
}

/// Loads `A` (square) and optionally `b`; without `b` the right-hand side is
/// `A · 1`.
pub fn load_matrix_market(path_a: &Path, path_b: Option<&Path>) -> Result<TestProblem> {
    let a = read_matrix_market(path_a)?;
    let n = a.require_square()?;
    let b = match path_b {
        Some(p) => {
            let bm = read_matrix_market(p)?;
            if bm.cols() != 1 || bm.rows() != n {
                return Err(Error::Format {
                    path: p.to_path_buf(),
                    line: 2,
                    message: format!(
                        "right-hand side must be {n}x1, got {}x{}",
                        bm.rows(),
                        bm.cols()
                    ),
                });
            }
            bm.column(0)
        }
        None => a.matvec(&vec![1.0; n]),
    };
    let mut params = BTreeMap::new();
    params.insert("source".to_string(), path_a.display().to_string());
    params.insert("n".to_string(), n.to_string());
    Ok(TestProblem {
        name: path_a.file_stem().map_or_else(
            || "matrix".to_string(),
            |s| s.to_string_lossy().into_owned(),
        ),
        a,
        b,
        x_true: None,
        params,
    })
}

/// Writes a dense matrix in `array real general` format.
pub fn write_matrix_market(path: &Path, m: &DenseMatrix) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            writeln!(w, "{:e}", m[(i, j)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes a vector as an `n × 1` array.
pub fn write_vector_market(path: &Path, v: &[f64]) -> Result<()> {
    write_matrix_market(path, &DenseMatrix::from_fn(v.len(), 1, |i, _| v[i]))
}
