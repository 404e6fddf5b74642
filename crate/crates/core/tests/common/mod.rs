#![allow(dead_code, clippy::needless_range_loop)]

use sftlp::image::UniformSource;
use sftlp::solver::SolverState;
use sftlp::{Image, Mask, SubbandSet, TransformKind};

/// Seeded image with entries uniform in `[lo, hi)`.
pub fn random_image(rows: usize, cols: usize, seed: u64, lo: f64, hi: f64) -> Image {
    let mut rng = UniformSource::new(seed);
    Image::from_fn(rows, cols, |_, _| lo + (hi - lo) * rng.next_f64())
}

/// Seeded image of integers in `[0, 255]`.
pub fn random_gray(rows: usize, cols: usize, seed: u64) -> Image {
    let mut rng = UniformSource::new(seed);
    Image::from_fn(rows, cols, |_, _| {
        (rng.next_f64() * 256.0).floor().min(255.0)
    })
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tol {tol})");
}

pub const S: f64 = std::f64::consts::SQRT_2 / 4.0;
pub const ANALYSIS: [[f64; 3]; 3] = [[0.25, 0.5, 0.25], [S, 0.0, -S], [-0.25, 0.5, -0.25]];

/// Nine-plane analysis written as one quadruple sum per output pixel.
pub fn brute_force_sft(x: &Image) -> Vec<Image> {
    let (rows, cols) = x.shape();
    let mut planes = Vec::new();
    for row_f in 0..3 {
        for col_f in 0..3 {
            planes.push(Image::from_fn(rows, cols, |i, j| {
                let mut acc = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        let ii = (i + rows + a - 1) % rows;
                        let jj = (j + cols + b - 1) % cols;
                        acc += ANALYSIS[col_f][a] * ANALYSIS[row_f][b] * x.get(ii, jj);
                    }
                }
                acc
            }));
        }
    }
    planes
}

/// Adjoint of the brute-force analysis, scattering every coefficient back.
pub fn brute_force_adjoint(planes: &[Image]) -> Image {
    let (rows, cols) = planes[0].shape();
    let mut out = Image::zeros(rows, cols);
    for row_f in 0..3 {
        for col_f in 0..3 {
            let p = &planes[row_f * 3 + col_f];
            for i in 0..rows {
                for j in 0..cols {
                    for a in 0..3 {
                        for b in 0..3 {
                            let ii = (i + rows + a - 1) % rows;
                            let jj = (j + cols + b - 1) % cols;
                            let v = out.get(ii, jj)
                                + ANALYSIS[col_f][a] * ANALYSIS[row_f][b] * p.get(i, j);
                            out.set(ii, jj, v);
                        }
                    }
                }
            }
        }
    }
    out
}

/// The shrinkage closed form with the ratio written as `(lambda/alpha)^(p-2)`.
pub fn shrink_oracle(theta: f64, p: f64, alpha: f64, lambda: f64) -> f64 {
    if theta == 0.0 {
        return 0.0;
    }
    let t = theta.abs() - (lambda / alpha).powf(p - 2.0) * theta.abs().powf(p - 1.0);
    t.max(0.0) * theta.signum()
}

pub fn soft_threshold(theta: f64, tau: f64) -> f64 {
    (theta.abs() - tau).max(0.0) * theta.signum()
}

/// Gaussian elimination with partial pivoting on a dense row-major system.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Dense matrix of `x -> masked * (M ∘ x) + ridge * x` in raster order.
pub fn dense_masked_operator(mask: &Mask, masked: f64, ridge: f64) -> Vec<Vec<f64>> {
    let n = mask.entries().len();
    let mut a = vec![vec![0.0; n]; n];
    for (i, &m) in mask.entries().iter().enumerate() {
        a[i][i] = ridge + if m { masked } else { 0.0 };
    }
    a
}

pub fn random_mask(rows: usize, cols: usize, seed: u64, clean_fraction: f64) -> Mask {
    let mut rng = UniformSource::new(seed);
    let entries = (0..rows * cols)
        .map(|_| rng.next_f64() < clean_fraction)
        .collect();
    Mask::from_entries(rows, cols, entries).unwrap()
}

/// Global SSIM from two-pass statistics.
pub fn ssim_oracle(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let vx = x.iter().map(|a| (a - mx).powi(2)).sum::<f64>() / n;
    let vy = y.iter().map(|b| (b - my).powi(2)).sum::<f64>() / n;
    let cxy = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - mx) * (b - my))
        .sum::<f64>()
        / n;
    let l = x.iter().cloned().fold(f64::MIN, f64::max);
    let c1 = (0.01 * l) * (0.01 * l);
    let c2 = (0.03 * l) * (0.03 * l);
    (2.0 * mx * my + c1) * (2.0 * cxy + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2))
}

/// GMSD with explicit 3x3 kernels applied per pixel.
pub fn gmsd_oracle(x: &Image, y: &Image) -> f64 {
    const HX: [[f64; 3]; 3] = [[1.0, 0.0, -1.0], [1.0, 0.0, -1.0], [1.0, 0.0, -1.0]];
    const HY: [[f64; 3]; 3] = [[1.0, 1.0, 1.0], [0.0, 0.0, 0.0], [-1.0, -1.0, -1.0]];
    let (rows, cols) = x.shape();
    let grad = |img: &Image, r: usize, c: usize| {
        let (mut gx, mut gy) = (0.0, 0.0);
        for (a, (hx, hy)) in HX.iter().zip(&HY).enumerate() {
            for b in 0..3 {
                let v = img.get((r + rows + a - 1) % rows, (c + cols + b - 1) % cols);
                gx += hx[b] * v / 3.0;
                gy += hy[b] * v / 3.0;
            }
        }
        (gx * gx + gy * gy).sqrt()
    };
    let mut gms = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let (a, b) = (grad(x, r, c), grad(y, r, c));
            gms.push((2.0 * a * b + 170.0) / (a * a + b * b + 170.0));
        }
    }
    let n = gms.len() as f64;
    let mean = gms.iter().sum::<f64>() / n;
    (gms.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / n).sqrt()
}

pub fn random_subbands(rows: usize, cols: usize, seed: u64) -> SubbandSet {
    let planes = (0..9)
        .map(|k| random_image(rows, cols, seed * 31 + k, -4.0, 4.0))
        .collect();
    SubbandSet::from_planes(TransformKind::Sft, (rows, cols), planes).unwrap()
}

pub fn random_state(rows: usize, cols: usize, seed: u64) -> SolverState {
    SolverState {
        cartoon: random_image(rows, cols, seed, 0.0, 200.0),
        texture: random_image(rows, cols, seed + 1, -20.0, 20.0),
        noise_aux: random_image(rows, cols, seed + 2, -5.0, 5.0),
        cartoon_coeffs: random_subbands(rows, cols, seed + 3),
        texture_coeffs: random_subbands(rows, cols, seed + 4),
        noise_dual: random_image(rows, cols, seed + 5, -1.0, 1.0),
        cartoon_dual: random_subbands(rows, cols, seed + 6),
        texture_dual: random_subbands(rows, cols, seed + 7),
    }
}

/// Assembles the normal equations densely and solves them directly.
#[allow(clippy::too_many_arguments)]
pub fn dense_update(
    mask: &Mask,
    observed: &Image,
    other: &Image,
    noise_aux: &Image,
    noise_dual: &Image,
    coeffs: &SubbandSet,
    dual: &SubbandSet,
    l0: f64,
    ridge: f64,
) -> Vec<f64> {
    let diff: Vec<Image> = coeffs
        .planes()
        .iter()
        .zip(dual.planes())
        .map(|(q, d)| q.sub(d))
        .collect();
    let back = brute_force_adjoint(&diff);
    let m = mask.to_image();
    let n = observed.len();
    let rhs: Vec<f64> = (0..n)
        .map(|i| {
            let mi = m.pixels()[i];
            l0 * mi * observed.pixels()[i]
                + l0 * mi * (noise_aux.pixels()[i] - noise_dual.pixels()[i])
                + ridge * back.pixels()[i]
                - l0 * mi * other.pixels()[i]
        })
        .collect();
    dense_solve(dense_masked_operator(mask, l0, ridge), rhs)
}
