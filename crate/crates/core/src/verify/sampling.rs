//! Seeded configuration sampler.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Configuration, ModelFamily, ModelParams};

/// Half-width of the symmetric sampling box.
pub const BOX: f64 = 3.0;
/// Lower edge of the positive-quadrant box and of `|s|` in the `ψ11` region.
pub const POSITIVE_MIN: f64 = 0.2;
/// Rejection attempts per sample before giving up.
pub const MAX_ATTEMPTS: usize = 100;

const SAMPLE_STREAM: u64 = 0;
const FUNCTION_STREAM: u64 = 1;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Generator for test-function randomness, independent of the sample stream.
pub fn function_rng(seed: u64) -> ChaCha8Rng {
    stream(seed, FUNCTION_STREAM)
}

/// Draws configurations uniformly from the family's region and rejects
/// those closer than `guard` to the singular set.
pub struct Sampler {
    rng: ChaCha8Rng,
    guard: f64,
}

impl Sampler {
    pub fn new(seed: u64, guard: f64) -> Self {
        Self {
            rng: stream(seed, SAMPLE_STREAM),
            guard,
        }
    }

    fn draw(&mut self, n: usize, lo: f64) -> Vec<f64> {
        (0..n).map(|_| self.rng.random_range(lo..BOX)).collect()
    }

    /// One admissible configuration: `[−3, 3]` per coordinate, `[0.2, 3]` for
    /// the `OSp` family, mirror pairs with members in `[0.2, 3]` for the
    /// dipole model.
    pub fn configuration(&mut self, params: &ModelParams<f64>) -> Result<Configuration<f64>> {
        let (k1, k2) = params.layout();
        for _ in 0..MAX_ATTEMPTS {
            let config = match params.family {
                ModelFamily::Dipole2d => {
                    let (a, b) = (self.draw(k1 / 2, POSITIVE_MIN), self.draw(k2 / 2, POSITIVE_MIN));
                    Configuration::mirror(&a, &b)
                }
                ModelFamily::SusyOsp => {
                    Configuration::new(self.draw(k1, POSITIVE_MIN), self.draw(k2, POSITIVE_MIN))
                }
                _ => Configuration::new(self.draw(k1, -BOX), self.draw(k2, -BOX)),
            };
            match config.validate(params, self.guard) {
                Ok(()) => return Ok(config),
                Err(Error::SingularConfiguration) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::SingularSample(MAX_ATTEMPTS))
    }

    pub fn configurations(&mut self, params: &ModelParams<f64>, n: usize) -> Result<Vec<Configuration<f64>>> {
        (0..n).map(|_| self.configuration(params)).collect()
    }

    /// `(s11, s12)` with `s12 > 0` and `|s| ∈ [0.2, 3]`, away from the
    /// branch cut of the principal powers.
    pub fn psi_point(&mut self) -> (f64, f64) {
        let r = self.rng.random_range(POSITIVE_MIN..=BOX);
        let phi = self.rng.random_range(0.02..std::f64::consts::PI - 0.02);
        (r * phi.cos(), r * phi.sin())
    }
}
