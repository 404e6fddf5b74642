//! Salt-and-pepper impulse noise removal.
//!
//! The observed image is modeled as a cartoon part plus a texture part plus
//! sparse impulse noise. Saturated pixels (0 or 255) are excluded from the
//! data term by a binary mask, both image parts are regularized by an
//! lp quasi-norm on their stationary framelet coefficients, and the noise
//! residual by an lp quasi-norm as well. The problem is split with ADMM; the
//! image sub-problems are solved by conjugate gradients and the sparse
//! sub-problems by generalized p-shrinkage.
//!
//! ```no_run
//! use sftlp::{add_salt_pepper_noise, denoise, metrics, phantom, NoiseSpec, SolverConfig};
//!
//! let clean = phantom::piecewise_smooth(256);
//! let noisy = add_salt_pepper_noise(&clean, &NoiseSpec::new(0.1, 0.5, 42)?)?;
//! let result = denoise(&noisy, &SolverConfig::default())?;
//! println!("{}", metrics::evaluate(&clean, &result.recovered)?);
//! # Ok::<(), sftlp::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod image;
pub mod linsolve;
pub mod metrics;
pub mod phantom;
pub mod prox;
pub mod solver;
pub mod transforms;

pub use error::{Error, Result};
pub use image::{add_salt_pepper_noise, build_mask, read_pgm, write_pgm, Image, Mask, NoiseSpec};
pub use linsolve::{cgm_solve, CgmConfig, MaskedDiagOperator};
pub use metrics::{gmsd, psnr, ssim_global, MetricReport, Psnr};
pub use prox::{lp_shrink, ShrinkParams};
pub use solver::{denoise, DenoiseResult, Mode, Norm, SolverConfig};
pub use transforms::{
    haar_forward, haar_inverse, sft_forward, sft_inverse, SubbandSet, TransformKind,
};
