//! LU (partial pivoting) and Cholesky factorizations with triangular solves.
//!
//! A factorization is computed once and reused for every solve against the
//! same matrix, which is how the shift-and-invert operators are realized.

use super::matrix::{DenseMatrix, DenseVector};
use crate::error::{Error, Result};

/// Pivots with magnitude below this are treated as exact zeros.
pub const PIVOT_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    PivotedLu,
    Cholesky,
}

/// A reusable decomposition of a square matrix.
#[derive(Debug, Clone)]
pub enum Factorization {
    /// `P A = L U`; `perm[i]` is the original row stored at position `i`.
    Lu {
        l: DenseMatrix,
        u: DenseMatrix,
        perm: Vec<usize>,
    },
    /// `A = L Lᵀ`.
    Cholesky { l: DenseMatrix },
}

impl Factorization {
    pub fn kind(&self) -> FactorKind {
        match self {
            Factorization::Lu { .. } => FactorKind::PivotedLu,
            Factorization::Cholesky { .. } => FactorKind::Cholesky,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Factorization::Lu { l, .. } | Factorization::Cholesky { l } => l.rows(),
        }
    }

    pub fn lower(&self) -> &DenseMatrix {
        match self {
            Factorization::Lu { l, .. } | Factorization::Cholesky { l } => l,
        }
    }

    /// Upper factor: `U` for LU, `Lᵀ` for Cholesky.
    pub fn upper(&self) -> DenseMatrix {
        match self {
            Factorization::Lu { u, .. } => u.clone(),
            Factorization::Cholesky { l } => l.transpose(),
        }
    }

    pub fn permutation(&self) -> Option<&[usize]> {
        match self {
            Factorization::Lu { perm, .. } => Some(perm),
            Factorization::Cholesky { .. } => None,
        }
    }

    /// Multiplies the factors back together, undoing the row permutation.
    pub fn reconstruct(&self) -> DenseMatrix {
        let lu = self.lower().matmul(&self.upper());
        match self {
            Factorization::Lu { perm, .. } => {
                let mut a = DenseMatrix::zeros(lu.rows(), lu.cols());
                for (i, &p) in perm.iter().enumerate() {
                    for j in 0..lu.cols() {
                        a[(p, j)] = lu[(i, j)];
                    }
                }
                a
            }
            Factorization::Cholesky { .. } => lu,
        }
    }

    /// Solves `A y = r` for the factored `A`.
    pub fn solve(&self, r: &[f64]) -> Result<DenseVector> {
        let n = self.dimension();
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        Ok(match self {
            Factorization::Lu { l, u, perm } => {
                let mut y: DenseVector = perm.iter().map(|&p| r[p]).collect();
                forward_substitute(l, &mut y, true);
                back_substitute(u, &mut y);
                y
            }
            Factorization::Cholesky { l } => {
                let mut y = r.to_vec();
                forward_substitute(l, &mut y, false);
                back_substitute_transposed(l, &mut y);
                y
            }
        })
    }

    /// Solves `Aᵀ y = r` for the factored `A`.
    pub fn solve_transpose(&self, r: &[f64]) -> Result<DenseVector> {
        let n = self.dimension();
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        match self {
            Factorization::Lu { l, u, perm } => {
                // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ z = r, Lᵀ w = z, y = Pᵀ w.
                let mut z = r.to_vec();
                forward_substitute_transposed_upper(u, &mut z);
                back_substitute_transposed_unit(l, &mut z);
                let mut y = vec![0.0; n];
                for (i, &p) in perm.iter().enumerate() {
                    y[p] = z[i];
                }
                Ok(y)
            }
            Factorization::Cholesky { .. } => self.solve(r),
        }
    }
}

/// Solves with a precomputed factorization; see [`Factorization::solve`].
pub fn solve_factored(f: &Factorization, r: &[f64]) -> Result<DenseVector> {
    f.solve(r)
}

/// Doolittle LU with partial (row) pivoting.
pub fn lu_factor(a: &DenseMatrix) -> Result<Factorization> {
    let n = a.require_square()?;
    let mut w = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, w[(i, k)].abs()))
            .fold(
                (k, -1.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if !(pmax >= PIVOT_FLOOR) {
            return Err(Error::Singular { column: k });
        }
        if p != k {
            perm.swap(p, k);
            for j in 0..n {
                let t = w[(k, j)];
                w[(k, j)] = w[(p, j)];
                w[(p, j)] = t;
            }
        }
        let pivot = w[(k, k)];
        for i in (k + 1)..n {
            let factor = w[(i, k)] / pivot;
            w[(i, k)] = factor;
            if factor != 0.0 {
                for j in (k + 1)..n {
                    let t = w[(k, j)];
                    w[(i, j)] -= factor * t;
                }
            }
        }
    }
    let l = DenseMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => w[(i, j)],
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Less => 0.0,
    });
    let u = DenseMatrix::from_fn(n, n, |i, j| if i <= j { w[(i, j)] } else { 0.0 });
    Ok(Factorization::Lu { l, u, perm })
}

/// Cholesky `A = L Lᵀ`. The input must pass the symmetry test.
pub fn cholesky_factor(a: &DenseMatrix) -> Result<Factorization> {
    let n = a.require_square()?;
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return Err(Error::NotSpd { column: j });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(Factorization::Cholesky { l })
}

/// Cholesky when the matrix is symmetric and positive definite, pivoted LU otherwise.
pub fn factor_auto(a: &DenseMatrix) -> Result<Factorization> {
    if a.is_symmetric() {
        match cholesky_factor(a) {
            Ok(f) => return Ok(f),
            Err(Error::NotSpd { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    lu_factor(a)
}

fn forward_substitute(l: &DenseMatrix, y: &mut [f64], unit: bool) {
    let n = y.len();
    for i in 0..n {
        let row = l.row(i);
        let s: f64 = row[..i].iter().zip(&y[..i]).map(|(a, b)| a * b).sum();
        y[i] -= s;
        if !unit {
            y[i] /= row[i];
        }
    }
}

fn back_substitute(u: &DenseMatrix, y: &mut [f64]) {
    let n = y.len();
    for i in (0..n).rev() {
        let row = u.row(i);
        let s: f64 = row[i + 1..]
            .iter()
            .zip(&y[i + 1..])
            .map(|(a, b)| a * b)
            .sum();
        y[i] = (y[i] - s) / row[i];
    }
}

// Lᵀ y = z with L lower triangular (non-unit).
fn back_substitute_transposed(l: &DenseMatrix, y: &mut [f64]) {
    let n = y.len();
    for i in (0..n).rev() {
        y[i] /= l[(i, i)];
        let yi = y[i];
        for k in 0..i {
            y[k] -= l[(i, k)] * yi;
        }
    }
}

// Uᵀ z = r with U upper triangular.
fn forward_substitute_transposed_upper(u: &DenseMatrix, z: &mut [f64]) {
    let n = z.len();
    for i in 0..n {
        z[i] /= u[(i, i)];
        let zi = z[i];
        let row = u.row(i);
        for k in (i + 1)..n {
            z[k] -= row[k] * zi;
        }
    }
}

// Lᵀ w = z with L unit lower triangular.
fn back_substitute_transposed_unit(l: &DenseMatrix, z: &mut [f64]) {
    let n = z.len();
    for i in (0..n).rev() {
        let zi = z[i];
        let row = l.row(i);
        for k in 0..i {
            z[k] -= row[k] * zi;
        }
    }
}
