use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::linalg::{norm2, DenseVector};

/// Relative Gaussian noise level and the seed of its realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub delta: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(delta: f64, seed: u64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "noise level must be finite and non-negative, got {delta}"
            )));
        }
        Ok(Self { delta, seed })
    }
}

/// Standard normal deviates by Marsaglia's polar method over a ChaCha20 stream.
struct PolarNormal {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl PolarNormal {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u: f64 = self.rng.gen_range(-1.0..1.0);
            let v: f64 = self.rng.gen_range(-1.0..1.0);
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

/// Returns `b + e` with `e = (δ‖b‖/√N) u`, `u` standard normal.
pub fn add_noise(b: &[f64], spec: &NoiseSpec) -> DenseVector {
    if spec.delta == 0.0 || b.is_empty() {
        return b.to_vec();
    }
    let level = spec.delta * norm2(b) / (b.len() as f64).sqrt();
    let mut normal = PolarNormal::new(spec.seed);
    b.iter().map(|&bi| bi + level * normal.sample()).collect()
}
