//! Generalized (p-) shrinkage for lp quasi-norm sparsity terms.
//!
//! For exponent `p` in `(0, 1]` and ratio `tau = alpha / lambda` the mapping is
//!
//! ```text
//! shrink(theta) = max(|theta| - tau^(2-p) * |theta|^(p-1), 0) * sign(theta)
//! ```
//!
//! which zeroes every `|theta| <= tau` and reduces to soft thresholding at
//! `p = 1`. Larger magnitudes are shrunk less as `p` decreases.

use crate::error::{Error, Result};
use crate::image::Image;
use crate::transforms::SubbandSet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShrinkParams {
    p: f64,
    tau: f64,
    /// `tau^(2-p)`, cached.
    weight: f64,
}

impl ShrinkParams {
    /// `tau = 0` is accepted and makes the mapping the identity, which is
    /// the limit of a vanishing regularization weight.
    pub fn new(p: f64, tau: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::invalid("p", format!("{p} not in (0, 1]")));
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::invalid(
                "tau",
                format!("{tau} must be finite and >= 0"),
            ));
        }
        Ok(ShrinkParams {
            p,
            tau,
            weight: tau.powf(2.0 - p),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    #[inline]
    pub fn apply(&self, theta: f64) -> f64 {
        if theta == 0.0 {
            return 0.0;
        }
        let mag = theta.abs();
        // The closed form is non-positive exactly when |theta| <= tau.
        if mag <= self.tau {
            return 0.0;
        }
        let shrunk = mag - self.weight * mag.powf(self.p - 1.0);
        if shrunk > 0.0 {
            shrunk.copysign(theta)
        } else {
            0.0
        }
    }
}

/// Elementwise p-shrinkage of a plane.
pub fn lp_shrink(theta: &Image, params: &ShrinkParams) -> Result<Image> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("shrinkage input"));
    }
    Ok(theta.map(|v| params.apply(v)))
}

/// Applies [`lp_shrink`] independently to every plane.
pub fn lp_shrink_subbands(theta: &SubbandSet, params: &ShrinkParams) -> Result<SubbandSet> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("shrinkage input"));
    }
    Ok(theta.map(|v| params.apply(v)))
}
