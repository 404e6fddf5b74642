//! ADMM solver for the masked cartoon + texture + sparse-noise model
//!
//! ```text
//! min  a0 ||M ∘ (F_T + F_C) - G||_p0^p0 + a1 ||D F_C||_p1^p1 + a2 ||D F_T||_p2^p2
//! ```
//!
//! with splitting `Q0 = M ∘ (F_T + F_C) - G`, `Q1 = D F_C`, `Q2 = D F_T`.
//! One outer iteration performs, in order: the cartoon and texture
//! normal-equation solves (conjugate gradients), the three p-shrinkage
//! updates of the auxiliaries, and the three dual ascents.

use std::fmt::Write as _;
use std::io;

use crate::error::{Error, Result};
use crate::image::{build_mask, Image, Mask};
use crate::linsolve::{cgm_solve, CgmConfig, MaskedDiagOperator};
use crate::metrics::{psnr, Psnr};
use crate::prox::{lp_shrink, lp_shrink_subbands, ShrinkParams};
use crate::transforms::{SubbandSet, TransformKind};

/// Model variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Cartoon + texture decomposition with the noise mask.
    Mca,
    /// One image component with a single coefficient prior.
    SingleComponent,
    /// Cartoon + texture with the mask replaced by all ones.
    NoMask,
}

/// Sparsity penalty family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Norm {
    Lp,
    /// Forces every exponent to 1.
    L1,
}

/// Order of the two image updates within an iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum UpdateOrder {
    /// Texture update sees the fresh cartoon.
    #[default]
    GaussSeidel,
    /// Both updates read the previous iterate. Only useful for testing
    /// the symmetry of the two branches.
    Jacobi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Cartoon,
    Texture,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub alpha0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
    /// Dual step ratio.
    pub gamma: f64,
    pub max_iters: usize,
    /// Stop once `||F_{k+1} - F_k|| / ||F_k||` falls below this.
    pub tol: f64,
    pub mode: Mode,
    pub transform: TransformKind,
    pub norm: Norm,
    pub cgm: CgmConfig,
    pub update_order: UpdateOrder,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            alpha0: 1.0,
            alpha1: 0.25,
            alpha2: 0.5,
            lambda0: 1.0,
            lambda1: 0.05,
            lambda2: 0.2,
            p0: 0.5,
            p1: 0.5,
            p2: 0.3,
            gamma: 1e-6,
            max_iters: 100,
            tol: 1e-4,
            mode: Mode::Mca,
            transform: TransformKind::Sft,
            norm: Norm::Lp,
            cgm: CgmConfig::default(),
            update_order: UpdateOrder::GaussSeidel,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha0", self.alpha0),
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("{v} must be finite and >= 0")));
            }
        }
        for (name, v) in [
            ("lambda0", self.lambda0),
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("{v} must be finite and > 0")));
            }
        }
        for (name, v) in [("p0", self.p0), ("p1", self.p1), ("p2", self.p2)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::invalid(name, format!("{v} not in (0, 1]")));
            }
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::invalid(
                "gamma",
                format!("{} must be finite and >= 0", self.gamma),
            ));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters", "must be positive"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::invalid(
                "tol",
                format!("{} must be finite and > 0", self.tol),
            ));
        }
        if self.cgm.max_iters == 0 || self.cgm.tol.is_nan() || self.cgm.tol < 0.0 {
            return Err(Error::invalid(
                "cgm",
                "max_iters must be positive and tol >= 0",
            ));
        }
        Ok(())
    }

    fn exponent(&self, p: f64) -> f64 {
        match self.norm {
            Norm::Lp => p,
            Norm::L1 => 1.0,
        }
    }

    pub fn noise_shrink(&self) -> Result<ShrinkParams> {
        ShrinkParams::new(self.exponent(self.p0), self.alpha0 / self.lambda0)
    }

    pub fn coeff_shrink(&self, which: Component) -> Result<ShrinkParams> {
        match which {
            Component::Cartoon => {
                ShrinkParams::new(self.exponent(self.p1), self.alpha1 / self.lambda1)
            }
            Component::Texture => {
                ShrinkParams::new(self.exponent(self.p2), self.alpha2 / self.lambda2)
            }
        }
    }

    fn texture_enabled(&self) -> bool {
        self.mode != Mode::SingleComponent
    }
}

/// Primal and dual variables of the splitting.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverState {
    pub cartoon: Image,
    pub texture: Image,
    /// `Q0`, sparse noise residual.
    pub noise_aux: Image,
    /// `Q1`, cartoon coefficients.
    pub cartoon_coeffs: SubbandSet,
    /// `Q2`, texture coefficients.
    pub texture_coeffs: SubbandSet,
    pub noise_dual: Image,
    pub cartoon_dual: SubbandSet,
    pub texture_dual: SubbandSet,
}

impl SolverState {
    pub fn zeros(rows: usize, cols: usize, transform: TransformKind) -> Self {
        let plane = Image::zeros(rows, cols);
        let coeffs = SubbandSet::zeros(transform, rows, cols);
        SolverState {
            cartoon: plane.clone(),
            texture: plane.clone(),
            noise_aux: plane.clone(),
            cartoon_coeffs: coeffs.clone(),
            texture_coeffs: coeffs.clone(),
            noise_dual: plane,
            cartoon_dual: coeffs.clone(),
            texture_dual: coeffs,
        }
    }

    pub fn recovered(&self) -> Image {
        self.cartoon.add(&self.texture)
    }

    fn check_shapes(&self, mask: &Mask, observed: &Image) -> Result<()> {
        observed.same_shape(&self.cartoon)?;
        observed.same_shape(&self.texture)?;
        if mask.shape() != observed.shape() {
            return Err(Error::ShapeMismatch {
                expected: observed.shape(),
                found: mask.shape(),
            });
        }
        Ok(())
    }
}

/// Shared right-hand side of the two image updates, without the transform
/// term: `l0 M ∘ (G + Q0 - Q0~ - other)`.
fn fidelity_rhs(
    state: &SolverState,
    mask: &Mask,
    observed: &Image,
    other: &Image,
    lambda0: f64,
) -> Image {
    let mut b = observed
        .add(&state.noise_aux)
        .sub(&state.noise_dual)
        .sub(other);
    b = mask.apply(&b);
    b.scale(lambda0)
}

#[allow(clippy::too_many_arguments)]
fn solve_component(
    state: &SolverState,
    mask: &Mask,
    observed: &Image,
    config: &SolverConfig,
    other: &Image,
    coeffs: &SubbandSet,
    dual: &SubbandSet,
    ridge: f64,
) -> Result<Image> {
    let mut b = fidelity_rhs(state, mask, observed, other, config.lambda0);
    let back = config.transform.inverse(&coeffs.sub(dual))?;
    b.add_scaled(ridge, &back);
    let op = MaskedDiagOperator::new(mask, config.lambda0, ridge)?;
    cgm_solve(&op, &b, &config.cgm)
}

/// Solves `l0 M ∘ F_C + l1 F_C = l0 M ∘ G + l0 M ∘ (Q0 - Q0~) + l1 Dᵀ(Q1 - Q1~) - l0 M ∘ F_T`.
pub fn update_cartoon(
    state: &SolverState,
    mask: &Mask,
    observed: &Image,
    config: &SolverConfig,
) -> Result<Image> {
    state.check_shapes(mask, observed)?;
    solve_component(
        state,
        mask,
        observed,
        config,
        &state.texture,
        &state.cartoon_coeffs,
        &state.cartoon_dual,
        config.lambda1,
    )
}

/// Texture counterpart of [`update_cartoon`], reading `state.cartoon` as the
/// other component and using `l2`, `Q2`, `Q2~`.
pub fn update_texture(
    state: &SolverState,
    mask: &Mask,
    observed: &Image,
    config: &SolverConfig,
) -> Result<Image> {
    state.check_shapes(mask, observed)?;
    solve_component(
        state,
        mask,
        observed,
        config,
        &state.cartoon,
        &state.texture_coeffs,
        &state.texture_dual,
        config.lambda2,
    )
}

/// `M ∘ (F_T + F_C) - G`
fn noise_residual(state: &SolverState, mask: &Mask, observed: &Image) -> Image {
    mask.apply(&state.recovered()).sub(observed)
}

/// `Q0 = shrink_p0(M ∘ (F_T + F_C) - G + Q0~, a0 / l0)`
pub fn update_noise_aux(
    state: &SolverState,
    mask: &Mask,
    observed: &Image,
    config: &SolverConfig,
) -> Result<Image> {
    state.check_shapes(mask, observed)?;
    let theta = noise_residual(state, mask, observed).add(&state.noise_dual);
    lp_shrink(&theta, &config.noise_shrink()?)
}

fn shrink_coeffs(
    analysis: &SubbandSet,
    dual: &SubbandSet,
    config: &SolverConfig,
    which: Component,
) -> Result<SubbandSet> {
    lp_shrink_subbands(&analysis.add(dual), &config.coeff_shrink(which)?)
}

/// `Q1 = shrink_p1(D F_C + Q1~, a1 / l1)` or the texture analogue.
pub fn update_coeff_aux(
    state: &SolverState,
    config: &SolverConfig,
    which: Component,
) -> Result<SubbandSet> {
    let (image, dual) = match which {
        Component::Cartoon => (&state.cartoon, &state.cartoon_dual),
        Component::Texture => (&state.texture, &state.texture_dual),
    };
    let analysis = config.transform.forward(image)?;
    shrink_coeffs(&analysis, dual, config, which)
}

fn ascend_coeff_dual(dual: &mut SubbandSet, analysis: &SubbandSet, aux: &SubbandSet, step: f64) {
    dual.add_scaled(step, &analysis.sub(aux));
}

/// Moves every dual by `gamma * lambda_i` times its constraint residual:
///
/// ```text
/// Q0~ += g l0 (M ∘ (F_T + F_C) - G - Q0)
/// Q1~ += g l1 (D F_C - Q1)
/// Q2~ += g l2 (D F_T - Q2)
/// ```
pub fn dual_ascent(
    state: &mut SolverState,
    mask: &Mask,
    observed: &Image,
    config: &SolverConfig,
) -> Result<()> {
    state.check_shapes(mask, observed)?;
    let cartoon_analysis = config.transform.forward(&state.cartoon)?;
    let texture_analysis = if config.texture_enabled() {
        Some(config.transform.forward(&state.texture)?)
    } else {
        None
    };
    dual_ascent_with(
        state,
        mask,
        observed,
        config,
        &cartoon_analysis,
        texture_analysis.as_ref(),
    );
    Ok(())
}

fn dual_ascent_with(
    state: &mut SolverState,
    mask: &Mask,
    observed: &Image,
    config: &SolverConfig,
    cartoon_analysis: &SubbandSet,
    texture_analysis: Option<&SubbandSet>,
) {
    let residual = noise_residual(state, mask, observed).sub(&state.noise_aux);
    state
        .noise_dual
        .add_scaled(config.gamma * config.lambda0, &residual);
    ascend_coeff_dual(
        &mut state.cartoon_dual,
        cartoon_analysis,
        &state.cartoon_coeffs,
        config.gamma * config.lambda1,
    );
    if let Some(analysis) = texture_analysis {
        ascend_coeff_dual(
            &mut state.texture_dual,
            analysis,
            &state.texture_coeffs,
            config.gamma * config.lambda2,
        );
    }
}

/// One row of the convergence trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord {
    /// 1-based outer iteration.
    pub iter: usize,
    pub rel_change: f64,
    pub psnr: Option<Psnr>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenoiseResult {
    pub cartoon: Image,
    pub texture: Image,
    /// `cartoon + texture`, unclamped.
    pub recovered: Image,
    pub trace: Vec<IterationRecord>,
    /// Whether the relative-change test fired before `max_iters`.
    pub converged: bool,
}

pub const TRACE_CSV_HEADER: &str = "iter,rel_change,psnr";

impl DenoiseResult {
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }

    /// Trace as CSV (`iter,rel_change,psnr`); psnr is blank without a
    /// reference and `inf` for an exact match.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from(TRACE_CSV_HEADER);
        out.push('\n');
        for rec in &self.trace {
            let psnr = rec.psnr.map(|p| p.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{:.6e},{}", rec.iter, rec.rel_change, psnr);
        }
        out
    }

    pub fn write_trace_csv(&self, mut w: impl io::Write) -> io::Result<()> {
        w.write_all(self.trace_csv().as_bytes())
    }
}

fn relative_change(next: &Image, prev: &Image) -> f64 {
    let diff = next.zip_map(prev, |a, b| a - b).norm();
    let base = prev.norm();
    if base > 0.0 {
        diff / base
    } else if diff > 0.0 {
        1.0
    } else {
        0.0
    }
}

fn ensure_finite(ok: bool, iteration: usize, stage: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::SolverNonFinite { iteration, stage })
    }
}

/// Runs the full solver on `observed` with the mask derived from it.
pub fn denoise(observed: &Image, config: &SolverConfig) -> Result<DenoiseResult> {
    denoise_with_reference(observed, config, None)
}

/// As [`denoise`], additionally recording PSNR against `reference` at
/// every iteration.
pub fn denoise_with_reference(
    observed: &Image,
    config: &SolverConfig,
    reference: Option<&Image>,
) -> Result<DenoiseResult> {
    observed.check_intensity_range()?;
    let (rows, cols) = observed.shape();
    let mask = match config.mode {
        Mode::NoMask => Mask::all_ones(rows, cols),
        Mode::Mca | Mode::SingleComponent => build_mask(observed),
    };
    denoise_with_mask(observed, &mask, config, reference)
}

/// Solver core with an explicit mask.
pub fn denoise_with_mask(
    observed: &Image,
    mask: &Mask,
    config: &SolverConfig,
    reference: Option<&Image>,
) -> Result<DenoiseResult> {
    config.validate()?;
    if !observed.is_finite() {
        return Err(Error::NonFinite("observed image"));
    }
    let (rows, cols) = observed.shape();
    config.transform.check_shape(rows, cols)?;
    if let Some(r) = reference {
        r.same_shape(observed)?;
    }
    let mut state = SolverState::zeros(rows, cols, config.transform);
    state.check_shapes(mask, observed)?;
    let texture_on = config.texture_enabled();

    let noise_params = config.noise_shrink()?;
    let mut recovered = Image::zeros(rows, cols);
    let mut trace = Vec::with_capacity(config.max_iters);
    let mut converged = false;

    for k in 1..=config.max_iters {
        let stale_cartoon = state.cartoon.clone();
        let cartoon = update_cartoon(&state, mask, observed, config)?;
        ensure_finite(cartoon.is_finite(), k, "cartoon")?;
        state.cartoon = cartoon;

        if texture_on {
            let texture = match config.update_order {
                UpdateOrder::GaussSeidel => update_texture(&state, mask, observed, config)?,
                UpdateOrder::Jacobi => {
                    let fresh = std::mem::replace(&mut state.cartoon, stale_cartoon);
                    let texture = update_texture(&state, mask, observed, config);
                    state.cartoon = fresh;
                    texture?
                }
            };
            ensure_finite(texture.is_finite(), k, "texture")?;
            state.texture = texture;
        }

        let next = state.recovered();

        let theta0 = noise_residual(&state, mask, observed).add(&state.noise_dual);
        state.noise_aux =
            lp_shrink(&theta0, &noise_params).map_err(|_| Error::SolverNonFinite {
                iteration: k,
                stage: "noise",
            })?;

        let cartoon_analysis = config.transform.forward(&state.cartoon)?;
        state.cartoon_coeffs = shrink_coeffs(
            &cartoon_analysis,
            &state.cartoon_dual,
            config,
            Component::Cartoon,
        )
        .map_err(|_| Error::SolverNonFinite {
            iteration: k,
            stage: "cartoon coefficient",
        })?;

        let texture_analysis = if texture_on {
            let analysis = config.transform.forward(&state.texture)?;
            state.texture_coeffs =
                shrink_coeffs(&analysis, &state.texture_dual, config, Component::Texture).map_err(
                    |_| Error::SolverNonFinite {
                        iteration: k,
                        stage: "texture coefficient",
                    },
                )?;
            Some(analysis)
        } else {
            None
        };

        dual_ascent_with(
            &mut state,
            mask,
            observed,
            config,
            &cartoon_analysis,
            texture_analysis.as_ref(),
        );
        ensure_finite(
            state.noise_dual.is_finite()
                && state.cartoon_dual.is_finite()
                && state.texture_dual.is_finite(),
            k,
            "dual",
        )?;

        let rel_change = relative_change(&next, &recovered);
        recovered = next;
        let psnr = match reference {
            Some(r) => Some(psnr(r, &recovered)?),
            None => None,
        };
        trace.push(IterationRecord {
            iter: k,
            rel_change,
            psnr,
        });
        if rel_change < config.tol {
            converged = true;
            break;
        }
    }

    Ok(DenoiseResult {
        cartoon: state.cartoon,
        texture: state.texture,
        recovered,
        trace,
        converged,
    })
}
