//! Full-reference quality metrics: PSNR, global SSIM and GMSD.

use std::fmt;

use crate::error::{Error, Result};
use crate::image::Image;

/// Stabilizing constants used by [`ssim_global`] and [`gmsd`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricParams {
    pub k1: f64,
    pub k2: f64,
    /// GMS stabilizer for intensities in `[0, 255]` (0.0026 * 255^2).
    pub gmsd_c: f64,
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams {
            k1: 0.01,
            k2: 0.03,
            gmsd_c: 170.0,
        }
    }
}

/// Peak signal-to-noise ratio; identical images have no finite value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Psnr {
    Db(f64),
    Infinite,
}

impl Psnr {
    pub fn db(self) -> Option<f64> {
        match self {
            Psnr::Db(v) => Some(v),
            Psnr::Infinite => None,
        }
    }

    /// The value as `f64`, mapping the infinite marker to `+inf`.
    pub fn as_f64(self) -> f64 {
        self.db().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Db(v) => write!(f, "{v:.6}"),
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricReport {
    pub psnr: Psnr,
    pub ssim: f64,
    pub gmsd: f64,
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "psnr={} ssim={:.6} gmsd={:.6}",
            self.psnr, self.ssim, self.gmsd
        )
    }
}

pub fn evaluate(reference: &Image, test: &Image) -> Result<MetricReport> {
    evaluate_with(reference, test, &MetricParams::default())
}

pub fn evaluate_with(
    reference: &Image,
    test: &Image,
    params: &MetricParams,
) -> Result<MetricReport> {
    Ok(MetricReport {
        psnr: psnr(reference, test)?,
        ssim: ssim_global_with(reference, test, params)?,
        gmsd: gmsd_with(reference, test, params)?,
    })
}

/// `10 log10(max(X)^2 / MSE)` with the MSE averaged over all pixels.
pub fn psnr(reference: &Image, test: &Image) -> Result<Psnr> {
    reference.same_shape(test)?;
    let peak = reference.max();
    if peak <= 0.0 {
        return Err(Error::invalid(
            "reference",
            "PSNR needs a positive peak value",
        ));
    }
    let sse: f64 = reference
        .pixels()
        .iter()
        .zip(test.pixels())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    if sse == 0.0 {
        return Ok(Psnr::Infinite);
    }
    let mse = sse / reference.len() as f64;
    Ok(Psnr::Db(10.0 * (peak * peak / mse).log10()))
}

pub fn ssim_global(reference: &Image, test: &Image) -> Result<f64> {
    ssim_global_with(reference, test, &MetricParams::default())
}

/// Structural similarity from whole-image statistics.
///
/// `L` is the maximum gray value of the reference (255 when the reference
/// is all zero, so the stabilizers stay positive).
pub fn ssim_global_with(reference: &Image, test: &Image, params: &MetricParams) -> Result<f64> {
    reference.same_shape(test)?;
    let n = reference.len() as f64;
    let mu_x = reference.mean();
    let mu_y = test.mean();
    let (mut var_x, mut var_y, mut cov) = (0.0, 0.0, 0.0);
    for (&x, &y) in reference.pixels().iter().zip(test.pixels()) {
        let dx = x - mu_x;
        let dy = y - mu_y;
        var_x += dx * dx;
        var_y += dy * dy;
        cov += dx * dy;
    }
    var_x /= n;
    var_y /= n;
    cov /= n;

    let peak = reference.max();
    let l = if peak > 0.0 { peak } else { 255.0 };
    let c1 = (l * params.k1).powi(2);
    let c2 = (l * params.k2).powi(2);
    Ok(((2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2))
        / ((mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)))
}

/// Gradient magnitude under 3x3 Prewitt kernels scaled by 1/3, periodic
/// boundaries.
pub fn gradient_magnitude(image: &Image) -> Image {
    let (rows, cols) = image.shape();
    let px = image.pixels();
    let at = |r: usize, c: usize| px[r * cols + c];
    let mut out = vec![0.0; rows * cols];
    for r in 0..rows {
        let up = (r + rows - 1) % rows;
        let down = (r + 1) % rows;
        for c in 0..cols {
            let left = (c + cols - 1) % cols;
            let right = (c + 1) % cols;
            let gx = (at(up, left) + at(r, left) + at(down, left)
                - at(up, right)
                - at(r, right)
                - at(down, right))
                / 3.0;
            let gy = (at(up, left) + at(up, c) + at(up, right)
                - at(down, left)
                - at(down, c)
                - at(down, right))
                / 3.0;
            out[r * cols + c] = (gx * gx + gy * gy).sqrt();
        }
    }
    Image::from_parts(rows, cols, out)
}

pub fn gmsd(reference: &Image, test: &Image) -> Result<f64> {
    gmsd_with(reference, test, &MetricParams::default())
}

/// Standard deviation of the per-pixel gradient magnitude similarity map.
pub fn gmsd_with(reference: &Image, test: &Image, params: &MetricParams) -> Result<f64> {
    reference.same_shape(test)?;
    let (rows, cols) = reference.shape();
    if rows < 3 || cols < 3 {
        return Err(Error::DegenerateDimensions { rows, cols, min: 3 });
    }
    let mx = gradient_magnitude(reference);
    let my = gradient_magnitude(test);
    let c = params.gmsd_c;
    let gms = mx.zip_map(&my, |a, b| (2.0 * (a * b) + c) / (a * a + b * b + c));
    let mean = gms.mean();
    let var = gms
        .pixels()
        .iter()
        .map(|g| (g - mean) * (g - mean))
        .sum::<f64>()
        / gms.len() as f64;
    Ok(var.sqrt())
}
