use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Image;
use crate::error::{Error, Result};

/// Parameters of the salt-and-pepper corruption process.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    /// Probability that a pixel is corrupted.
    pub level: f64,
    /// Probability that a corrupted pixel becomes 255 rather than 0.
    pub salt_fraction: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(level: f64, salt_fraction: f64, seed: u64) -> Result<Self> {
        let spec = NoiseSpec {
            level,
            salt_fraction,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.level) {
            return Err(Error::invalid(
                "level",
                format!("{} not in [0, 1]", self.level),
            ));
        }
        if !(0.0..=1.0).contains(&self.salt_fraction) {
            return Err(Error::invalid(
                "salt_fraction",
                format!("{} not in [0, 1]", self.salt_fraction),
            ));
        }
        Ok(())
    }
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec {
            level: 0.1,
            salt_fraction: 0.5,
            seed: 0,
        }
    }
}

/// Portable stream of uniform doubles in `[0, 1)`.
///
/// Backed by ChaCha8 (`rand_chacha`), seeded through `SeedableRng::seed_from_u64`.
/// Each draw takes the top 53 bits of one `next_u64` output, so the
/// sequence is identical on every platform for a given seed.
pub struct UniformSource {
    rng: ChaCha8Rng,
}

impl UniformSource {
    pub fn new(seed: u64) -> Self {
        UniformSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Corrupts each pixel independently with probability `spec.level`.
///
/// Two draws are consumed per pixel in raster order: the first decides
/// corruption, the second decides salt (255) versus pepper (0).
pub fn add_salt_pepper_noise(image: &Image, spec: &NoiseSpec) -> Result<Image> {
    add_salt_pepper_noise_counted(image, spec).map(|(img, _)| img)
}

/// Like [`add_salt_pepper_noise`], also returning how many pixels were hit.
pub fn add_salt_pepper_noise_counted(image: &Image, spec: &NoiseSpec) -> Result<(Image, usize)> {
    spec.validate()?;
    image.check_intensity_range()?;
    let mut rng = UniformSource::new(spec.seed);
    let mut out = image.clone();
    let mut corrupted = 0;
    for px in out.pixels_mut() {
        let hit = rng.next_f64() < spec.level;
        let salt = rng.next_f64() < spec.salt_fraction;
        if hit {
            *px = if salt { 255.0 } else { 0.0 };
            corrupted += 1;
        }
    }
    Ok((out, corrupted))
}
