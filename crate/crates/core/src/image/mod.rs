//! Grayscale images, noise masks, PGM I/O and impulse-noise injection.
//!
//! Pixels are stored row-major as `f64`. Values read from or written to
//! 8-bit files live in `[0, 255]`; intermediate solver planes may hold any
//! finite real.

mod noise;
mod pgm;

pub use noise::{add_salt_pepper_noise, add_salt_pepper_noise_counted, NoiseSpec, UniformSource};
pub use pgm::{decode_pgm, encode_pgm, quantize, read_pgm, write_pgm};

use crate::error::{Error, Result};

/// A dense real-valued plane of `rows x cols` samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    rows: usize,
    cols: usize,
    pixels: Vec<f64>,
}

impl Image {
    /// Builds an image from a row-major buffer, rejecting empty shapes,
    /// length mismatches and non-finite samples.
    pub fn new(rows: usize, cols: usize, pixels: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DegenerateDimensions { rows, cols, min: 1 });
        }
        if pixels.len() != rows * cols {
            return Err(Error::BufferLength {
                expected: rows * cols,
                found: pixels.len(),
            });
        }
        if pixels.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("image pixels"));
        }
        Ok(Image { rows, cols, pixels })
    }

    /// Internal constructor for buffers produced by arithmetic on valid
    /// images; callers check finiteness where it matters.
    pub(crate) fn from_parts(rows: usize, cols: usize, pixels: Vec<f64>) -> Self {
        debug_assert_eq!(pixels.len(), rows * cols);
        Image { rows, cols, pixels }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, 0.0)
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        assert!(rows > 0 && cols > 0, "image dimensions must be positive");
        Image {
            rows,
            cols,
            pixels: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(rows > 0 && cols > 0, "image dimensions must be positive");
        let mut pixels = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                pixels.push(f(r, c));
            }
        }
        Image { rows, cols, pixels }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    #[inline]
    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    #[inline]
    pub fn pixels_mut(&mut self) -> &mut [f64] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.pixels[row * self.cols + col] = value;
    }

    pub fn same_shape(&self, other: &Image) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Image {
        Image {
            rows: self.rows,
            cols: self.cols,
            pixels: self.pixels.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Elementwise combination of two equally shaped images.
    ///
    /// Panics on shape mismatch; callers validate shapes at API boundaries.
    pub fn zip_map(&self, other: &Image, f: impl Fn(f64, f64) -> f64) -> Image {
        assert_eq!(self.shape(), other.shape(), "zip_map shape mismatch");
        Image {
            rows: self.rows,
            cols: self.cols,
            pixels: self
                .pixels
                .iter()
                .zip(&other.pixels)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Image) -> Image {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Image) -> Image {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, k: f64) -> Image {
        self.map(|v| k * v)
    }

    /// `self += k * other`
    pub fn add_scaled(&mut self, k: f64, other: &Image) {
        assert_eq!(self.shape(), other.shape(), "add_scaled shape mismatch");
        for (a, &b) in self.pixels.iter_mut().zip(&other.pixels) {
            *a += k * b;
        }
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &Image) -> f64 {
        assert_eq!(self.shape(), other.shape(), "dot shape mismatch");
        self.pixels
            .iter()
            .zip(&other.pixels)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.pixels.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max(&self) -> f64 {
        self.pixels
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.pixels.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().sum::<f64>() / self.len() as f64
    }

    pub fn max_abs_diff(&self, other: &Image) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.pixels
            .iter()
            .zip(&other.pixels)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.pixels.iter().all(|v| v.is_finite())
    }

    /// Checks that every sample lies in the 8-bit intensity range.
    pub fn check_intensity_range(&self) -> Result<()> {
        match self.pixels.iter().find(|v| !(0.0..=255.0).contains(*v)) {
            None => Ok(()),
            Some(v) => Err(Error::invalid(
                "image",
                format!("intensity {v} outside [0, 255]"),
            )),
        }
    }

    pub fn clamped(&self, lo: f64, hi: f64) -> Image {
        self.map(|v| v.clamp(lo, hi))
    }
}

/// Binary indicator of pixels that are trusted as noise-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    rows: usize,
    cols: usize,
    entries: Vec<bool>,
}

impl Mask {
    /// Marks a pixel as clean iff its observed intensity is strictly inside
    /// `(0, 255)`; saturated pixels are treated as impulse noise.
    pub fn from_observed(observed: &Image) -> Mask {
        Mask {
            rows: observed.rows(),
            cols: observed.cols(),
            entries: observed
                .pixels()
                .iter()
                .map(|&v| v > 0.0 && v < 255.0)
                .collect(),
        }
    }

    pub fn all_ones(rows: usize, cols: usize) -> Mask {
        Mask {
            rows,
            cols,
            entries: vec![true; rows * cols],
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<bool>) -> Result<Mask> {
        if entries.len() != rows * cols {
            return Err(Error::BufferLength {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Mask {
            rows,
            cols,
            entries,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[bool] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.entries[row * self.cols + col]
    }

    pub fn count_clean(&self) -> usize {
        self.entries.iter().filter(|&&e| e).count()
    }

    /// Hadamard product `M ∘ x`.
    pub fn apply(&self, image: &Image) -> Image {
        assert_eq!(self.shape(), image.shape(), "mask shape mismatch");
        let pixels = image
            .pixels()
            .iter()
            .zip(&self.entries)
            .map(|(&v, &m)| if m { v } else { 0.0 })
            .collect();
        Image {
            rows: self.rows,
            cols: self.cols,
            pixels,
        }
    }

    /// The mask as a 0/1 image.
    pub fn to_image(&self) -> Image {
        Image {
            rows: self.rows,
            cols: self.cols,
            pixels: self
                .entries
                .iter()
                .map(|&m| if m { 1.0 } else { 0.0 })
                .collect(),
        }
    }
}

/// `build_mask` under its conventional name.
pub fn build_mask(observed: &Image) -> Mask {
    Mask::from_observed(observed)
}
