//! Runs the full model and each ablation on the synthetic phantom and
//! prints PSNR/SSIM/GMSD per variant.
//!
//! cargo run --release -p sftlp --example ablation -- [level=0.2] [seed=42] [alpha2=..] ...

use std::time::Instant;

use sftlp::{
    add_salt_pepper_noise, denoise, metrics, phantom, Mode, NoiseSpec, Norm, SolverConfig,
    TransformKind,
};

fn main() -> sftlp::Result<()> {
    let mut level = 0.2;
    let mut seed = 42;
    let mut full_only = false;
    let mut base = SolverConfig::default();
    for arg in std::env::args().skip(1) {
        let (key, value) = arg.split_once('=').expect("expected key=value");
        let v: f64 = value.parse().expect("numeric value");
        match key {
            "level" => level = v,
            "full_only" => full_only = v != 0.0,
            "seed" => seed = v as u64,
            "alpha0" => base.alpha0 = v,
            "alpha1" => base.alpha1 = v,
            "alpha2" => base.alpha2 = v,
            "lambda0" => base.lambda0 = v,
            "lambda1" => base.lambda1 = v,
            "lambda2" => base.lambda2 = v,
            "p0" => base.p0 = v,
            "p1" => base.p1 = v,
            "p2" => base.p2 = v,
            "gamma" => base.gamma = v,
            "max_iters" => base.max_iters = v as usize,
            "tol" => base.tol = v,
            other => panic!("unknown key {other}"),
        }
    }

    let clean = phantom::piecewise_smooth(256);
    let noisy = add_salt_pepper_noise(&clean, &NoiseSpec::new(level, 0.5, seed)?)?;
    println!("noisy: {}", metrics::evaluate(&clean, &noisy)?);

    let variants = [
        ("full", base.clone()),
        (
            "l1",
            SolverConfig {
                norm: Norm::L1,
                ..base.clone()
            },
        ),
        (
            "haar",
            SolverConfig {
                transform: TransformKind::Haar,
                ..base.clone()
            },
        ),
        (
            "no-mask",
            SolverConfig {
                mode: Mode::NoMask,
                ..base.clone()
            },
        ),
        (
            "single",
            SolverConfig {
                mode: Mode::SingleComponent,
                ..base.clone()
            },
        ),
    ];
    let count = if full_only { 1 } else { variants.len() };
    for (name, cfg) in variants.into_iter().take(count) {
        let t = Instant::now();
        let out = denoise(&noisy, &cfg)?;
        let last = out.trace.last().map(|r| r.rel_change).unwrap_or(f64::NAN);
        println!(
            "{name:>8}: {} iters={} last_change={last:.2e} ({:.2}s)",
            metrics::evaluate(&clean, &out.recovered)?,
            out.iterations(),
            t.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
