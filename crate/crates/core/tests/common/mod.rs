#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratarnoldi::linalg::{dot, norm2, DenseMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0))
}

/// Orthogonal factor of a random matrix by twice-applied Gram–Schmidt.
pub fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = random_vector(n, rng);
        for _ in 0..2 {
            for q in &cols {
                let c = dot(q, &v);
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= c * qi);
            }
        }
        let nv = norm2(&v);
        if nv > 1e-8 {
            cols.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    DenseMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// `Q diag(eigs) Qᵀ` with a random orthogonal `Q`.
pub fn spd_with_spectrum(eigs: &[f64], rng: &mut ChaCha8Rng) -> DenseMatrix {
    let n = eigs.len();
    let q = random_orthogonal(n, rng);
    DenseMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| q[(i, k)] * eigs[k] * q[(j, k)]).sum()
    })
}

/// `n` points geometrically spaced from `lo` to `hi`.
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// `p(M) b` for coefficients in increasing degree, by Horner.
pub fn poly_apply(m: &dyn Fn(&[f64]) -> Vec<f64>, coeffs: &[f64], b: &[f64]) -> Vec<f64> {
    let mut acc = vec![0.0; b.len()];
    for &c in coeffs.iter().rev() {
        acc = m(&acc);
        acc.iter_mut().zip(b).for_each(|(a, bi)| *a += c * bi);
    }
    acc
}
