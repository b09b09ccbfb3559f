use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::forward::{DataKind, DataMatrix};

/// Multiplicative complex noise u + δ|u|·ξ/|ξ|, ξ = ξ₁ + iξ₂ standard normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub delta: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(delta: f64, seed: u64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::Domain(format!("noise level must be a nonnegative number, got {delta}")));
        }
        Ok(Self { delta, seed })
    }
}

/// Standard normal pair by the Marsaglia polar method.
pub fn gaussian_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    loop {
        let u: f64 = 2.0 * rng.gen::<f64>() - 1.0;
        let v: f64 = 2.0 * rng.gen::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (u * f, v * f);
        }
    }
}

/// Noise from ChaCha20 seeded with `spec.seed`, stream 0.
pub fn add_noise(data: &DataMatrix, spec: NoiseSpec) -> Result<DataMatrix> {
    add_noise_on_stream(data, spec, 0)
}

/// Same as `add_noise` on an independent ChaCha20 stream, so several matrices
/// of one experiment get unrelated noise from a single seed.
/// Entries are perturbed in row-major order.
pub fn add_noise_on_stream(data: &DataMatrix, spec: NoiseSpec, stream: u64) -> Result<DataMatrix> {
    NoiseSpec::new(spec.delta, spec.seed)?;
    if data.kind == DataKind::TotalMagnitude {
        return Err(Error::Contract(
            "noise is applied to the complex total field before the magnitude is taken".into(),
        ));
    }
    if spec.delta == 0.0 {
        return Ok(data.clone());
    }
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    rng.set_stream(stream);
    let mut out = data.clone();
    for v in out.values.iter_mut() {
        let (a, b) = gaussian_pair(&mut rng);
        let xi = Complex64::new(a, b);
        *v += xi * (spec.delta * v.norm() / xi.norm());
    }
    Ok(out)
}
