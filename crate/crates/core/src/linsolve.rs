//! Matrix-free conjugate gradients for the cartoon/texture normal equations.

use crate::error::{Error, Result};
use crate::image::{Image, Mask};

/// Relative residual `||A x - b|| / ||b||` at which a solve is accepted.
pub const RESIDUAL_TOL: f64 = 1e-6;

/// A symmetric positive-definite operator acting on image-shaped vectors.
pub trait LinearOperator {
    fn apply(&self, x: &Image) -> Image;
}

/// `A(x) = masked_weight * (M ∘ x) + ridge_weight * x`
#[derive(Clone, Copy, Debug)]
pub struct MaskedDiagOperator<'a> {
    pub mask: &'a Mask,
    pub masked_weight: f64,
    pub ridge_weight: f64,
}

impl<'a> MaskedDiagOperator<'a> {
    pub fn new(mask: &'a Mask, masked_weight: f64, ridge_weight: f64) -> Result<Self> {
        if !(masked_weight >= 0.0 && masked_weight.is_finite()) {
            return Err(Error::invalid(
                "masked_weight",
                format!("{masked_weight} must be >= 0"),
            ));
        }
        if !(ridge_weight > 0.0 && ridge_weight.is_finite()) {
            return Err(Error::invalid(
                "ridge_weight",
                format!("{ridge_weight} must be > 0"),
            ));
        }
        Ok(MaskedDiagOperator {
            mask,
            masked_weight,
            ridge_weight,
        })
    }

    /// Diagonal entry at a pixel.
    pub fn diagonal(&self, clean: bool) -> f64 {
        if clean {
            self.masked_weight + self.ridge_weight
        } else {
            self.ridge_weight
        }
    }
}

impl LinearOperator for MaskedDiagOperator<'_> {
    fn apply(&self, x: &Image) -> Image {
        assert_eq!(self.mask.shape(), x.shape(), "operator shape mismatch");
        let pixels = x
            .pixels()
            .iter()
            .zip(self.mask.entries())
            .map(|(&v, &m)| self.diagonal(m) * v)
            .collect();
        Image::from_parts(x.rows(), x.cols(), pixels)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CgmConfig {
    pub max_iters: usize,
    /// Relative iterate-change threshold `||x_{k+1} - x_k|| / ||x_k||`.
    pub tol: f64,
}

impl Default for CgmConfig {
    fn default() -> Self {
        CgmConfig {
            max_iters: 100,
            tol: 1e-4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CgmOutcome {
    pub solution: Image,
    /// Number of update steps taken.
    pub iterations: usize,
    /// `||r_k||` for `k = 0..=iterations`.
    pub residual_norms: Vec<f64>,
}

pub fn cgm_solve(op: &impl LinearOperator, rhs: &Image, config: &CgmConfig) -> Result<Image> {
    cgm_solve_traced(op, rhs, config).map(|o| o.solution)
}

/// Conjugate gradients from the zero initial guess.
///
/// Stops when the relative residual drops to [`RESIDUAL_TOL`], when the
/// relative iterate change drops below `config.tol`, when the search
/// direction vanishes, or after `config.max_iters` steps.
pub fn cgm_solve_traced(
    op: &impl LinearOperator,
    rhs: &Image,
    config: &CgmConfig,
) -> Result<CgmOutcome> {
    if !rhs.is_finite() {
        return Err(Error::NonFinite("conjugate gradient right-hand side"));
    }
    let (rows, cols) = rhs.shape();
    let mut x = Image::zeros(rows, cols);
    let b_norm = rhs.norm();
    if b_norm == 0.0 {
        return Ok(CgmOutcome {
            solution: x,
            iterations: 0,
            residual_norms: vec![0.0],
        });
    }

    let mut r = rhs.sub(&op.apply(&x));
    let mut p = r.clone();
    let mut rr = r.norm_sq();
    let mut residual_norms = vec![rr.sqrt()];
    let mut iterations = 0;

    for k in 0..config.max_iters {
        if rr == 0.0 {
            break;
        }
        let ap = op.apply(&p);
        let p_ap = p.dot(&ap);
        if !p_ap.is_finite() {
            return Err(Error::CgmNonFinite { iteration: k });
        }
        if p_ap <= 0.0 {
            return Err(Error::invalid("operator", "not positive definite"));
        }
        let step = rr / p_ap;
        let x_norm = x.norm();
        let change = step.abs() * p.norm();

        x.add_scaled(step, &p);
        r.add_scaled(-step, &ap);
        let rr_next = r.norm_sq();
        if !rr_next.is_finite() || !x.is_finite() {
            return Err(Error::CgmNonFinite { iteration: k });
        }
        iterations = k + 1;
        residual_norms.push(rr_next.sqrt());

        if rr_next.sqrt() <= RESIDUAL_TOL * b_norm {
            break;
        }
        if x_norm > 0.0 && change / x_norm < config.tol {
            break;
        }

        let beta = rr_next / rr;
        p = r.zip_map(&p, |ri, pi| ri + beta * pi);
        rr = rr_next;
    }

    Ok(CgmOutcome {
        solution: x,
        iterations,
        residual_norms,
    })
}
