use std::fmt;

use crate::linalg::{norm2, relative_distance, sub, DenseMatrix, DenseVector};

/// Why an iterative solve stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIter,
    /// The Krylov space became invariant (or a baseline hit lucky termination).
    Breakdown,
    ResidualTol,
    /// `I − λH_m` was singular to working precision.
    EvaluationFailure,
    /// An iterate became non-finite.
    Diverged,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::MaxIter => "max_iter",
            StopReason::Breakdown => "breakdown",
            StopReason::ResidualTol => "residual_tol",
            StopReason::EvaluationFailure => "evaluation_failure",
            StopReason::Diverged => "diverged",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of a convergence history. Both norms are relative:
/// `‖x_m − x‖/‖x‖` and `‖b − A x_m‖/‖b‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub m: usize,
    pub error_norm: Option<f64>,
    pub residual_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveOptions {
    /// Defaults to the system dimension.
    pub max_iter: Option<usize>,
    /// Stop once the relative residual drops to this value.
    pub residual_tol: Option<f64>,
}

impl SolveOptions {
    pub fn with_max_iter(max_iter: usize) -> Self {
        Self {
            max_iter: Some(max_iter),
            residual_tol: None,
        }
    }

    pub(crate) fn iteration_limit(&self, n: usize) -> usize {
        self.max_iter.unwrap_or(n)
    }
}

/// Outcome of one solver run: the full history plus the best iterate.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub method: String,
    pub lambda: Option<f64>,
    pub history: Vec<IterationRecord>,
    /// Iteration with the smallest error (or residual when no exact solution
    /// is known); ties go to the earliest.
    pub best_m: usize,
    pub best_x: DenseVector,
    /// Final recorded iterate.
    pub last_x: DenseVector,
    pub stopped_reason: StopReason,
}

impl SolveReport {
    /// Record at `best_m`, if any iteration was recorded.
    pub fn best(&self) -> Option<&IterationRecord> {
        self.history.iter().find(|r| r.m == self.best_m)
    }

    pub fn min_error(&self) -> Option<f64> {
        self.best().and_then(|r| r.error_norm)
    }

    pub fn residual_at_best(&self) -> Option<f64> {
        self.best().map(|r| r.residual_norm)
    }

    pub fn errors(&self) -> Vec<f64> {
        self.history.iter().filter_map(|r| r.error_norm).collect()
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.history.iter().map(|r| r.residual_norm).collect()
    }
}

/// Accumulates a history and tracks the best iterate while a solver runs.
pub(crate) struct HistoryRecorder<'a> {
    a: &'a DenseMatrix,
    b: &'a [f64],
    b_norm: f64,
    x_true: Option<&'a [f64]>,
    history: Vec<IterationRecord>,
    best: Option<(f64, usize, DenseVector)>,
    last: Option<DenseVector>,
}

impl<'a> HistoryRecorder<'a> {
    pub fn new(a: &'a DenseMatrix, b: &'a [f64], x_true: Option<&'a [f64]>) -> Self {
        Self {
            a,
            b,
            b_norm: norm2(b),
            x_true,
            history: Vec::new(),
            best: None,
            last: None,
        }
    }

    /// Records iterate `m`; returns the relative residual.
    pub fn record(&mut self, m: usize, x: &[f64]) -> f64 {
        let r = sub(self.b, &self.a.matvec(x));
        let residual_norm = if self.b_norm > 0.0 {
            norm2(&r) / self.b_norm
        } else {
            norm2(&r)
        };
        self.record_with_residual(m, x, residual_norm)
    }

    pub fn record_with_residual(&mut self, m: usize, x: &[f64], residual_norm: f64) -> f64 {
        let error_norm = self.x_true.map(|xt| relative_distance(x, xt));
        let key = error_norm.unwrap_or(residual_norm);
        self.history.push(IterationRecord {
            m,
            error_norm,
            residual_norm,
        });
        let better = match &self.best {
            None => true,
            Some((k, _, _)) => key < *k || (k.is_nan() && !key.is_nan()),
        };
        if better {
            self.best = Some((key, m, x.to_vec()));
        }
        self.last = Some(x.to_vec());
        residual_norm
    }

    pub fn finish(self, method: &str, lambda: Option<f64>, reason: StopReason) -> SolveReport {
        let n = self.b.len();
        let (best_m, best_x) = match self.best {
            Some((_, m, x)) => (m, x),
            None => (0, vec![0.0; n]),
        };
        let last_x = self.last.unwrap_or_else(|| vec![0.0; n]);
        SolveReport {
            method: method.to_string(),
            lambda,
            history: self.history,
            best_m,
            best_x,
            last_x,
            stopped_reason: reason,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn best_prefers_earliest_tie_and_uses_errors() {
        let a = DenseMatrix::identity(2);
        let b = [1.0, 0.0];
        let xt = [1.0, 0.0];
        let mut rec = HistoryRecorder::new(&a, &b, Some(&xt));
        rec.record(1, &[0.5, 0.0]);
        rec.record(2, &[1.0, 0.5]);
        rec.record(3, &[1.0, -0.5]);
        let rep = rec.finish("t", None, StopReason::MaxIter);
        assert_eq!(rep.best_m, 1);
        assert_eq!(rep.min_error(), Some(0.5));
        assert_eq!(
            rep.history.iter().map(|r| r.m).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
    }

    #[test]
    fn falls_back_to_residual_without_truth() {
        let a = DenseMatrix::identity(2);
        let b = [2.0, 0.0];
        let mut rec = HistoryRecorder::new(&a, &b, None);
        rec.record(1, &[1.0, 0.0]);
        rec.record(2, &[2.0, 0.0]);
        let rep = rec.finish("t", None, StopReason::MaxIter);
        assert_eq!(rep.best_m, 2);
        assert_eq!(rep.min_error(), None);
        assert_eq!(rep.residual_at_best(), Some(0.0));
    }
}
