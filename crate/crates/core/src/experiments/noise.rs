use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::forward::BoundaryTrace;
use crate::{Error, Result};

/// Generator and mapping used for every noise vector. Recorded in reports.
pub const RNG_ALGORITHM: &str =
    "ChaCha20Rng (rand_chacha 0.9) seeded by seed_from_u64; u = (next_u64 >> 11) * 2^-53; noise = sigma * (2u - 1)";

/// I.i.d. uniform noise on `[-sigma, sigma]`, reproducible from `seed`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::Config(format!(
                "noise level must be >= 0, got {sigma}"
            )));
        }
        Ok(NoiseSpec { sigma, seed })
    }

    pub fn exact() -> Self {
        NoiseSpec {
            sigma: 0.0,
            seed: 0,
        }
    }

    pub fn samples(&self, n: usize) -> Vec<f64> {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        (0..n)
            .map(|_| {
                let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                self.sigma * (2.0 * u - 1.0)
            })
            .collect()
    }
}

/// Adds one noise sample to every trace value; `sigma = 0` returns the trace unchanged.
pub fn add_noise(trace: &BoundaryTrace<f64>, spec: &NoiseSpec) -> BoundaryTrace<f64> {
    if spec.sigma == 0.0 {
        return trace.clone();
    }
    let noise = spec.samples(trace.values.len());
    BoundaryTrace {
        dt: trace.dt,
        values: trace.values.iter().zip(noise).map(|(v, e)| v + e).collect(),
        sigma: spec.sigma,
        seed: Some(spec.seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace() -> BoundaryTrace<f64> {
        BoundaryTrace::new(0.01, (0..=800).map(|n| n as f64 * 1e-4).collect()).unwrap()
    }

    #[test]
    fn zero_noise_is_identity() {
        assert_eq!(
            add_noise(&trace(), &NoiseSpec::new(0.0, 5).unwrap()),
            trace()
        );
    }

    #[test]
    fn bounded_and_reproducible() {
        let spec = NoiseSpec::new(1e-4, 42).unwrap();
        let a = add_noise(&trace(), &spec);
        let b = add_noise(&trace(), &spec);
        assert_eq!(a, b);
        assert_eq!(a.sigma, 1e-4);
        assert_eq!(a.seed, Some(42));
        assert!(a.max_abs_diff(&trace()).unwrap() <= 1e-4);
        let c = add_noise(&trace(), &NoiseSpec::new(1e-4, 43).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn mean_is_near_zero() {
        let sigma = 1e-3;
        let s = NoiseSpec::new(sigma, 7).unwrap().samples(100_000);
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        assert!(mean.abs() <= sigma / 50.0, "{mean}");
        assert!(s.iter().all(|e| e.abs() <= sigma));
    }

    #[test]
    fn negative_sigma_is_rejected() {
        assert!(NoiseSpec::new(-1.0, 0).is_err());
        assert!(NoiseSpec::new(f64::NAN, 0).is_err());
    }
}
