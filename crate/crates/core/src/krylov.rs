//! Arnoldi iteration against an abstract linear operator.
//!
//! After `m` steps the decomposition satisfies
//! `Z V_m = V_m H_m + h_{m+1,m} v_{m+1} e_mᵀ` with orthonormal `V_m` and upper
//! Hessenberg `H_m`.

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm2, scale, DenseMatrix, DenseVector};

/// Relative breakdown tolerance: a step breaks down when the orthogonalized
/// vector has norm at most this fraction of `‖Z v_m‖`.
pub const BREAKDOWN_TOL: f64 = 1e-14;

/// A square linear map known only through its action.
pub trait LinearOperator {
    fn dimension(&self) -> usize;
    fn apply(&self, v: &[f64]) -> DenseVector;
}

impl LinearOperator for DenseMatrix {
    fn dimension(&self) -> usize {
        self.rows()
    }

    fn apply(&self, v: &[f64]) -> DenseVector {
        self.matvec(v)
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn apply(&self, v: &[f64]) -> DenseVector {
        (**self).apply(v)
    }
}

#[derive(Debug, Clone)]
pub struct ArnoldiDecomposition {
    basis: Vec<DenseVector>,
    hessenberg: DenseMatrix,
    h_next: f64,
    v_next: Option<DenseVector>,
    beta: f64,
    breakdown: bool,
}

impl ArnoldiDecomposition {
    /// The `m = 0` state: `v_1 = b/‖b‖`, `β = ‖b‖`.
    pub fn start(op: &dyn LinearOperator, b: &[f64]) -> Result<Self> {
        if b.len() != op.dimension() {
            return Err(Error::DimensionMismatch {
                expected: op.dimension(),
                found: b.len(),
            });
        }
        let beta = norm2(b);
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidArgument(
                "Arnoldi starting vector must be nonzero and finite".into(),
            ));
        }
        let mut v1 = b.to_vec();
        scale(&mut v1, 1.0 / beta);
        Ok(Self {
            basis: Vec::new(),
            hessenberg: DenseMatrix::zeros(0, 0),
            h_next: 0.0,
            v_next: Some(v1),
            beta,
            breakdown: false,
        })
    }

    /// One Arnoldi step: modified Gram–Schmidt followed by a second
    /// orthogonalization pass.
    pub fn extend(mut self, op: &dyn LinearOperator) -> Result<Self> {
        if self.breakdown {
            return Err(Error::ArnoldiExhausted("breakdown already occurred"));
        }
        let n = op.dimension();
        if self.basis.len() >= n {
            return Err(Error::ArnoldiExhausted(
                "Krylov space already spans the whole space",
            ));
        }
        let v = self
            .v_next
            .take()
            .expect("non-breakdown decomposition always carries v_next");
        let mut w = op.apply(&v);
        self.basis.push(v);
        let m = self.basis.len();

        let w_norm = norm2(&w);
        let mut coeffs = vec![0.0; m];
        for _pass in 0..2 {
            for (j, vj) in self.basis.iter().enumerate() {
                let c = dot(vj, &w);
                axpy(&mut w, -c, vj);
                coeffs[j] += c;
            }
        }
        let h_new = norm2(&w);

        let mut h = DenseMatrix::zeros(m, m);
        for i in 0..m - 1 {
            for j in 0..m - 1 {
                h[(i, j)] = self.hessenberg[(i, j)];
            }
        }
        if m > 1 {
            h[(m - 1, m - 2)] = self.h_next;
        }
        for (i, c) in coeffs.into_iter().enumerate() {
            h[(i, m - 1)] = c;
        }
        self.hessenberg = h;
        self.h_next = h_new;

        if h_new <= BREAKDOWN_TOL * w_norm || h_new == 0.0 {
            self.breakdown = true;
            self.v_next = None;
        } else {
            scale(&mut w, 1.0 / h_new);
            self.v_next = Some(w);
        }
        Ok(self)
    }

    /// Current number of basis vectors `m`.
    pub fn m(&self) -> usize {
        self.basis.len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn h_next(&self) -> f64 {
        self.h_next
    }

    pub fn breakdown(&self) -> bool {
        self.breakdown
    }

    /// `H_m` (m × m upper Hessenberg).
    pub fn hessenberg(&self) -> &DenseMatrix {
        &self.hessenberg
    }

    pub fn basis(&self) -> &[DenseVector] {
        &self.basis
    }

    pub fn v_next(&self) -> Option<&[f64]> {
        self.v_next.as_deref()
    }

    /// `V_m` as an `n × m` matrix.
    pub fn basis_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_columns(&self.basis)
    }

    /// `∏_{j=1}^{m} h_{j+1,j}`, including the trailing `h_{m+1,m}`.
    pub fn subdiagonal_product(&self) -> f64 {
        let m = self.m();
        let mut p = self.h_next;
        for j in 1..m {
            p *= self.hessenberg[(j, j - 1)];
        }
        p
    }

    /// `V_m y` for a coefficient vector of length `m`.
    pub fn combine(&self, y: &[f64]) -> DenseVector {
        assert_eq!(y.len(), self.m(), "combine: coefficient length mismatch");
        let n = self.basis.first().map_or(0, Vec::len);
        let mut x = vec![0.0; n];
        for (vj, &c) in self.basis.iter().zip(y) {
            axpy(&mut x, c, vj);
        }
        x
    }
}

/// Convenience wrapper matching [`ArnoldiDecomposition::start`].
pub fn arnoldi_start(op: &dyn LinearOperator, b: &[f64]) -> Result<ArnoldiDecomposition> {
    ArnoldiDecomposition::start(op, b)
}

/// Convenience wrapper matching [`ArnoldiDecomposition::extend`].
pub fn arnoldi_extend(
    op: &dyn LinearOperator,
    d: ArnoldiDecomposition,
) -> Result<ArnoldiDecomposition> {
    d.extend(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_examples() {
        let op = DenseMatrix::identity(2);
        let d = arnoldi_start(&op, &[1.0, 0.0]).unwrap();
        assert_eq!(d.v_next(), Some(&[1.0, 0.0][..]));
        assert_eq!(d.beta(), 1.0);
        assert_eq!(d.m(), 0);

        let d = arnoldi_start(&op, &[3.0, 4.0]).unwrap();
        assert_eq!(d.beta(), 5.0);
        let v = d.v_next().unwrap();
        assert!((v[0] - 0.6).abs() < 1e-15 && (v[1] - 0.8).abs() < 1e-15);

        let op4 = DenseMatrix::identity(4);
        assert_eq!(arnoldi_start(&op4, &[1.0; 4]).unwrap().beta(), 2.0);
    }

    #[test]
    fn zero_start_is_rejected() {
        let op = DenseMatrix::identity(3);
        assert!(arnoldi_start(&op, &[0.0; 3]).is_err());
        assert!(arnoldi_start(&op, &[1.0; 2]).is_err());
    }

    #[test]
    fn scaled_identity_breaks_down_immediately() {
        let op = DenseMatrix::identity(3).scaled(2.5);
        let d = arnoldi_start(&op, &[1.0, -2.0, 0.5]).unwrap();
        let d = d.extend(&op).unwrap();
        assert!((d.hessenberg()[(0, 0)] - 2.5).abs() < 1e-15);
        assert_eq!(d.h_next(), 0.0);
        assert!(d.breakdown());
        assert!(d.v_next().is_none());
        assert!(d.extend(&op).is_err());
    }

    #[test]
    fn diag_two_step_exhaustion() {
        let op = DenseMatrix::from_diagonal(&[1.0, 2.0]);
        let s = 1.0 / 2f64.sqrt();
        let d = arnoldi_start(&op, &[s, s]).unwrap().extend(&op).unwrap();
        assert!((d.hessenberg()[(0, 0)] - 1.5).abs() < 1e-15);
        assert!(!d.breakdown());
        let d = d.extend(&op).unwrap();
        assert!(d.h_next() < 1e-14);
        // m = n: further extension is a contract violation
        assert!(d.extend(&op).is_err());
    }
}
