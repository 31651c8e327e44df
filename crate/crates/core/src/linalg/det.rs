//! Determinants of shifted upper Hessenberg matrices by Hyman's method.

use super::matrix::DenseMatrix;

/// A real number `mantissa · 2^exponent`, used to carry determinants whose
/// magnitude leaves the `f64` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledReal {
    pub mantissa: f64,
    pub exponent: i64,
}

impl std::ops::Mul for ScaledReal {
    type Output = ScaledReal;

    fn mul(self, other: ScaledReal) -> ScaledReal {
        ScaledReal {
            mantissa: self.mantissa * other.mantissa,
            exponent: self.exponent + other.exponent,
        }
        .normalized()
    }
}

impl ScaledReal {
    pub const ONE: ScaledReal = ScaledReal {
        mantissa: 1.0,
        exponent: 0,
    };
    pub const ZERO: ScaledReal = ScaledReal {
        mantissa: 0.0,
        exponent: 0,
    };

    pub fn new(value: f64) -> Self {
        ScaledReal {
            mantissa: value,
            exponent: 0,
        }
        .normalized()
    }

    fn normalized(self) -> Self {
        if self.mantissa == 0.0 || !self.mantissa.is_finite() {
            return ScaledReal {
                mantissa: self.mantissa,
                exponent: 0,
            };
        }
        let e = self.mantissa.abs().log2().floor() as i64;
        ScaledReal {
            mantissa: self.mantissa * 2f64.powi(-e as i32),
            exponent: self.exponent + e,
        }
    }

    pub fn mul_f64(self, x: f64) -> Self {
        self * ScaledReal::new(x)
    }

    /// Folds to an `f64`, saturating to `±inf` or `±0` when out of range.
    pub fn to_f64(self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        if self.exponent > 1100 {
            return self.mantissa.signum() * f64::INFINITY;
        }
        if self.exponent < -1100 {
            return self.mantissa.signum() * 0.0;
        }
        // split to keep the intermediate power representable
        let half = self.exponent / 2;
        self.mantissa * 2f64.powi(half as i32) * 2f64.powi((self.exponent - half) as i32)
    }

    /// `log10 |x|`.
    pub fn log10_abs(self) -> f64 {
        self.mantissa.abs().log10() + self.exponent as f64 * std::f64::consts::LOG10_2
    }
}

/// `det(H − shift·I)` for upper Hessenberg `H`, as a scaled real.
///
/// Uses Hyman's recurrence: with `B = H − shift·I`, the rows 2..m of `B x = 0`
/// fix `x` once `x_m = 1`, and `det B = (−1)^{m−1} ∏ b_{i+1,i} · (B x)_1`.
/// A zero subdiagonal splits the matrix into independent diagonal blocks.
pub fn hessenberg_det_scaled(h: &DenseMatrix, shift: f64) -> ScaledReal {
    let m = h.rows();
    assert!(h.is_square(), "hessenberg_det: matrix must be square");
    if m == 0 {
        return ScaledReal::ONE;
    }
    let mut det = ScaledReal::ONE;
    let mut end = m;
    // peel blocks from the bottom at zero subdiagonals
    while end > 0 {
        let mut start = end - 1;
        while start > 0 && h[(start, start - 1)] != 0.0 {
            start -= 1;
        }
        det = det * block_det(h, shift, start, end);
        end = start;
    }
    det
}

fn block_det(h: &DenseMatrix, shift: f64, start: usize, end: usize) -> ScaledReal {
    let k = end - start;
    let b = |i: usize, j: usize| h[(start + i, start + j)] - if i == j { shift } else { 0.0 };
    if k == 1 {
        return ScaledReal::new(b(0, 0));
    }
    let mut x = vec![0.0; k];
    x[k - 1] = 1.0;
    let mut x_exp: i64 = 0;
    for i in (1..k).rev() {
        let s: f64 = (i..k).map(|j| b(i, j) * x[j]).sum();
        x[i - 1] = -s / b(i, i - 1);
        let big = x.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        if big > 1e150 || (big < 1e-150 && big > 0.0) {
            let e = big.log2().floor() as i32;
            let f = 2f64.powi(-e);
            x.iter_mut().for_each(|v| *v *= f);
            x_exp += e as i64;
        }
    }
    let first: f64 = (0..k).map(|j| b(0, j) * x[j]).sum();
    let mut det = ScaledReal::new(first);
    det.exponent += x_exp;
    for i in 1..k {
        det = det.mul_f64(b(i, i - 1));
    }
    if (k - 1) % 2 == 1 {
        det.mantissa = -det.mantissa;
    }
    det
}

/// `det(H − shift·I)` folded to `f64` (saturating when unrepresentable).
pub fn hessenberg_det(h: &DenseMatrix, shift: f64) -> f64 {
    hessenberg_det_scaled(h, shift).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn det_cofactor(a: &DenseMatrix) -> f64 {
        let n = a.rows();
        if n == 1 {
            return a[(0, 0)];
        }
        (0..n)
            .map(|j| {
                let minor = DenseMatrix::from_fn(n - 1, n - 1, |r, c| {
                    a[(r + 1, if c < j { c } else { c + 1 })]
                });
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * a[(0, j)] * det_cofactor(&minor)
            })
            .sum()
    }

    #[test]
    fn examples() {
        assert_eq!(hessenberg_det(&DenseMatrix::from_rows(&[[2.0]]), 1.0), 1.0);
        assert_eq!(
            hessenberg_det(&DenseMatrix::from_diagonal(&[1.0, 2.0]), 0.0),
            2.0
        );
        assert_eq!(
            hessenberg_det(&DenseMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]), 0.0),
            0.0
        );
    }

    #[test]
    fn matches_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..200 {
            let mut h = DenseMatrix::from_fn(6, 6, |i, j| {
                if i > j + 1 {
                    0.0
                } else {
                    rng.gen_range(-2.0..2.0)
                }
            });
            if trial % 10 == 0 {
                h[(3, 2)] = 0.0;
            }
            let shift = rng.gen_range(-1.0..1.0);
            let oracle = det_cofactor(&h.shifted(-shift));
            let got = hessenberg_det(&h, shift);
            assert!(
                (got - oracle).abs() <= 1e-10 * oracle.abs().max(1e-3),
                "trial {trial}: {got} vs {oracle}"
            );
        }
    }

    #[test]
    fn survives_overflow() {
        // det(diag(1e200, 1e200, 1e200)) = 1e600
        let h =
            DenseMatrix::from_rows(&[[1e200, 1.0, 0.0], [1e-30, 1e200, 1.0], [0.0, 1e-30, 1e200]]);
        let d = hessenberg_det_scaled(&h, 0.0);
        assert!((d.log10_abs() - 600.0).abs() < 1e-9);
        assert_eq!(d.to_f64(), f64::INFINITY);
    }
}
