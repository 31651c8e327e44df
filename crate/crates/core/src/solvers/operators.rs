use crate::error::{Error, Result};
use crate::krylov::LinearOperator;
use crate::linalg::{cholesky_factor, factor_auto, DenseMatrix, DenseVector, Factorization};

/// `Z = (A + λI)^{-1}`, applied through a single factorization of `A + λI`.
///
/// The factorization is Cholesky when `A + λI` is symmetric positive definite
/// and pivoted LU otherwise.
#[derive(Debug, Clone)]
pub struct ShiftInvertOperator {
    factorization: Factorization,
    lambda: f64,
}

impl ShiftInvertOperator {
    pub fn new(a: &DenseMatrix, lambda: f64) -> Result<Self> {
        a.require_square()?;
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "shift must be positive and finite, got {lambda}"
            )));
        }
        let factorization =
            factor_auto(&a.shifted(lambda)).map_err(|e| Error::ShiftFactorization {
                lambda,
                source: Box::new(e),
            })?;
        Ok(Self {
            factorization,
            lambda,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }
}

impl LinearOperator for ShiftInvertOperator {
    fn dimension(&self) -> usize {
        self.factorization.dimension()
    }

    fn apply(&self, v: &[f64]) -> DenseVector {
        self.factorization
            .solve(v)
            .expect("operator applied to a vector of the wrong length")
    }
}

/// `Q = (AᵀA + λHᵀH)^{-1} HᵀH`, the operator driving the regularized variant.
#[derive(Debug, Clone)]
pub struct RatOperator {
    factorization: Factorization,
    gram_h: DenseMatrix,
    lambda: f64,
}

impl RatOperator {
    /// Forms and Cholesky-factors `AᵀA + λHᵀH`.
    pub fn new(a: &DenseMatrix, reg: &DenseMatrix, lambda: f64) -> Result<Self> {
        let n = a.require_square()?;
        if reg.rows() != n || reg.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: reg.rows(),
            });
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "regularization parameter must be positive and finite, got {lambda}"
            )));
        }
        let gram_h = reg.gram();
        let normal = a.gram().add_scaled(lambda, &gram_h);
        let factorization = cholesky_factor(&normal)?;
        Ok(Self {
            factorization,
            gram_h,
            lambda,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gram_h(&self) -> &DenseMatrix {
        &self.gram_h
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }
}

impl LinearOperator for RatOperator {
    fn dimension(&self) -> usize {
        self.gram_h.rows()
    }

    fn apply(&self, v: &[f64]) -> DenseVector {
        self.factorization
            .solve(&self.gram_h.matvec(v))
            .expect("operator applied to a vector of the wrong length")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{lu_factor, relative_distance, FactorKind};

    #[test]
    fn shift_invert_picks_cholesky_for_spd() {
        let a = DenseMatrix::from_diagonal(&[1.0, 2.0]);
        let op = ShiftInvertOperator::new(&a, 0.5).unwrap();
        assert_eq!(op.factorization().kind(), FactorKind::Cholesky);
        let y = op.apply(&[1.5, 2.5]);
        assert!((y[0] - 1.0).abs() < 1e-15 && (y[1] - 1.0).abs() < 1e-15);

        let ns = DenseMatrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]);
        let op = ShiftInvertOperator::new(&ns, 1.0).unwrap();
        assert_eq!(op.factorization().kind(), FactorKind::PivotedLu);
    }

    #[test]
    fn shift_invert_errors() {
        let a = DenseMatrix::from_diagonal(&[-1.0, 2.0]);
        assert!(matches!(
            ShiftInvertOperator::new(&a, 1.0),
            Err(Error::ShiftFactorization { .. })
        ));
        assert!(ShiftInvertOperator::new(&a, -1.0).is_err());
    }

    #[test]
    fn rat_operator_matches_definition() {
        let a = DenseMatrix::from_rows(&[[2.0, 1.0, 0.0], [0.5, 3.0, 1.0], [0.0, 1.0, 1.5]]);
        let h = DenseMatrix::from_rows(&[[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]]);
        let lambda = 0.3;
        let q = RatOperator::new(&a, &h, lambda).unwrap();
        let v = [1.0, -2.0, 0.5];
        let normal = a
            .transpose()
            .matmul(&a)
            .add_scaled(lambda, &h.transpose().matmul(&h));
        let g = h.transpose().matmul(&h);
        let oracle = lu_factor(&normal).unwrap().solve(&g.matvec(&v)).unwrap();
        assert!(relative_distance(&q.apply(&v), &oracle) < 1e-13);
    }
}
