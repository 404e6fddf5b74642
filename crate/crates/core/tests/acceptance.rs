//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{
    dense_masked_operator, dense_solve, dense_update, random_gray, random_image, random_mask,
    random_state, shrink_oracle, soft_threshold,
};
use sftlp::solver::{update_cartoon, update_texture};
use sftlp::{
    add_salt_pepper_noise, build_mask, cgm_solve, denoise, gmsd, metrics, psnr, read_pgm,
    sft_forward, sft_inverse, ssim_global, CgmConfig, Image, MaskedDiagOperator, Mode, NoiseSpec,
    Norm, Psnr, ShrinkParams, SolverConfig, TransformKind,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn phantom() -> Image {
    read_pgm(fixture("phantom256.pgm")).expect("phantom fixture")
}

fn corrupt(clean: &Image, level: f64) -> Image {
    add_salt_pepper_noise(clean, &NoiseSpec::new(level, 0.5, 42).unwrap()).unwrap()
}

fn tight_frame() -> Check {
    let start = Instant::now();
    let (mut worst_rec, mut worst_energy) = (0.0f64, 0.0f64);
    for seed in 0..100 {
        let x = random_image(64, 64, seed, 0.0, 255.0);
        let d = sft_forward(&x).map_err(|e| e.to_string())?;
        let back = sft_inverse(&d).map_err(|e| e.to_string())?;
        worst_rec = worst_rec.max(back.max_abs_diff(&x));
        worst_energy = worst_energy.max((d.norm_sq() - x.norm_sq()).abs() / x.norm_sq());
    }
    let elapsed = start.elapsed();
    ensure(worst_rec <= 1e-10, || {
        format!("reconstruction error {worst_rec:e}")
    })?;
    ensure(worst_energy <= 1e-9, || {
        format!("energy error {worst_energy:e}")
    })?;
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "max |x - D'Dx| = {worst_rec:.2e}, max energy error = {worst_energy:.2e}, {elapsed:.2?}"
    ))
}

fn shrinkage_oracle() -> Check {
    let mut worst = 0.0f64;
    let mut count = 0;
    for i in 0..10 {
        let theta = -60.0 + 13.37 * i as f64;
        for j in 0..10 {
            let tau = 0.05 + 1.7 * j as f64;
            for k in 0..10 {
                let p = 0.1 * (k + 1) as f64;
                let got = ShrinkParams::new(p, tau)
                    .map_err(|e| e.to_string())?
                    .apply(theta);
                worst = worst.max((got - shrink_oracle(theta, p, tau, 1.0)).abs());
                if k == 9 {
                    ensure(got == soft_threshold(theta, tau), || {
                        format!("p = 1 differs from soft threshold at theta={theta} tau={tau}")
                    })?;
                }
                count += 1;
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!(
        "{count} grid points, max deviation {worst:.2e}, p = 1 exact"
    ))
}

fn linear_solver_oracle() -> Check {
    let mut worst = 0.0f64;
    for seed in 0..25 {
        let mask = random_mask(32, 32, seed, 0.05 + 0.035 * seed as f64);
        let b = random_image(32, 32, seed + 500, -255.0, 255.0);
        let (lw, rw) = (0.1 + 0.2 * seed as f64, 0.005 + 0.04 * seed as f64);
        let op = MaskedDiagOperator::new(&mask, lw, rw).map_err(|e| e.to_string())?;
        let x = cgm_solve(&op, &b, &CgmConfig::default()).map_err(|e| e.to_string())?;
        let m = mask.to_image();
        let closed = b.zip_map(&m, |bi, mi| bi / (lw * mi + rw));
        worst = worst.max(x.max_abs_diff(&closed));
    }
    ensure(worst <= 1e-8, || format!("closed form deviation {worst:e}"))?;

    let mut dense_worst = 0.0f64;
    let cfg = SolverConfig {
        lambda0: 0.9,
        lambda1: 0.15,
        lambda2: 0.35,
        ..SolverConfig::default()
    };
    for seed in [3u64, 17, 42] {
        let state = random_state(8, 8, seed);
        let mask = random_mask(8, 8, seed + 1, 0.75);
        let g = random_gray(8, 8, seed + 2);
        let fc = update_cartoon(&state, &mask, &g, &cfg).map_err(|e| e.to_string())?;
        let want = dense_update(
            &mask,
            &g,
            &state.texture,
            &state.noise_aux,
            &state.noise_dual,
            &state.cartoon_coeffs,
            &state.cartoon_dual,
            cfg.lambda0,
            cfg.lambda1,
        );
        let ft = update_texture(&state, &mask, &g, &cfg).map_err(|e| e.to_string())?;
        let want_t = dense_update(
            &mask,
            &g,
            &state.cartoon,
            &state.noise_aux,
            &state.noise_dual,
            &state.texture_coeffs,
            &state.texture_dual,
            cfg.lambda0,
            cfg.lambda2,
        );
        for (got, want) in [(&fc, &want), (&ft, &want_t)] {
            for (a, b) in got.pixels().iter().zip(want.iter()) {
                dense_worst = dense_worst.max((a - b).abs());
            }
        }
        // Bare operator solve against the dense matrix as well.
        let op =
            MaskedDiagOperator::new(&mask, cfg.lambda0, cfg.lambda1).map_err(|e| e.to_string())?;
        let x = cgm_solve(&op, &g, &CgmConfig::default()).map_err(|e| e.to_string())?;
        let d = dense_solve(
            dense_masked_operator(&mask, cfg.lambda0, cfg.lambda1),
            g.pixels().to_vec(),
        );
        for (a, b) in x.pixels().iter().zip(&d) {
            dense_worst = dense_worst.max((a - b).abs());
        }
    }
    ensure(dense_worst <= 1e-8, || {
        format!("dense oracle deviation {dense_worst:e}")
    })?;
    Ok(format!(
        "closed form {worst:.2e}, 8x8 dense systems {dense_worst:.2e}"
    ))
}

fn termination() -> Check {
    let clean = phantom();
    let cfg = SolverConfig::default();
    let mut parts = Vec::new();
    for level in [0.1, 0.2, 0.3] {
        let out = denoise(&corrupt(&clean, level), &cfg).map_err(|e| e.to_string())?;
        ensure(out.trace.iter().all(|r| r.rel_change.is_finite()), || {
            format!("non-finite relative change at {level}")
        })?;
        let last = out.trace.last().map_or(f64::NAN, |r| r.rel_change);
        ensure(out.iterations() <= 100 && last < 1e-4, || {
            format!(
                "level {level}: {} iterations, final change {last:e}",
                out.iterations()
            )
        })?;
        parts.push(format!(
            "{:.0}%: {} iters ({last:.2e})",
            level * 100.0,
            out.iterations()
        ));
    }
    Ok(parts.join(", "))
}

fn efficacy() -> Check {
    let clean = phantom();
    let noisy = corrupt(&clean, 0.1);
    let start = Instant::now();
    let out = denoise(&noisy, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let before = psnr(&clean, &noisy).map_err(|e| e.to_string())?.as_f64();
    let report = metrics::evaluate(&clean, &out.recovered).map_err(|e| e.to_string())?;
    let after = report.psnr.as_f64();
    ensure(after >= before + 10.0, || {
        format!("PSNR {after:.3} vs noisy {before:.3}")
    })?;
    ensure(report.ssim >= 0.95, || format!("SSIM {:.6}", report.ssim))?;
    ensure(report.gmsd <= 0.05, || format!("GMSD {:.6}", report.gmsd))?;
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "noisy psnr={before:.3}, recovered {report}, {elapsed:.2?}"
    ))
}

fn ablation_ordering() -> Check {
    let clean = phantom();
    let noisy = corrupt(&clean, 0.2);
    let base = SolverConfig::default();
    let run = |cfg: &SolverConfig| -> Result<f64, String> {
        let out = denoise(&noisy, cfg).map_err(|e| e.to_string())?;
        Ok(psnr(&clean, &out.recovered)
            .map_err(|e| e.to_string())?
            .as_f64())
    };
    let full = run(&base)?;
    let mut parts = vec![format!("full {full:.3}")];
    for (name, cfg) in [
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
    ] {
        let v = run(&cfg)?;
        ensure(full > v, || {
            format!("full {full:.3} does not beat {name} {v:.3}")
        })?;
        parts.push(format!("{name} {v:.3}"));
    }
    Ok(parts.join(", "))
}

fn metric_correctness() -> Check {
    let a = Image::filled(64, 64, 255.0);
    let b = Image::filled(64, 64, 250.0);
    let p = psnr(&a, &b).map_err(|e| e.to_string())?.as_f64();
    ensure((p - 34.1514).abs() <= 1e-3, || {
        format!("constant-shift PSNR {p}")
    })?;

    let x = random_gray(40, 40, 1);
    let s = ssim_global(&x, &x).map_err(|e| e.to_string())?;
    ensure(s == 1.0, || format!("SSIM(x, x) = {s}"))?;
    let g = gmsd(&x, &x).map_err(|e| e.to_string())?;
    ensure(g == 0.0, || format!("GMSD(x, x) = {g}"))?;
    ensure(
        psnr(&x, &x).map_err(|e| e.to_string())? == Psnr::Infinite,
        || "PSNR(x, x) not infinite".into(),
    )?;

    let mut worst = 0.0f64;
    for seed in 0..50 {
        let (r, c) = (8 + seed as usize % 13, 5 + seed as usize % 17);
        let x = random_image(r, c, seed, 0.0, 255.0);
        let y = random_image(r, c, seed + 1000, 0.0, 255.0);
        let ab = gmsd(&x, &y).map_err(|e| e.to_string())?;
        let ba = gmsd(&y, &x).map_err(|e| e.to_string())?;
        worst = worst.max((ab - ba).abs());
    }
    ensure(worst <= 1e-12, || format!("GMSD asymmetry {worst:e}"))?;
    Ok(format!(
        "psnr={p:.4}, ssim=1, gmsd=0, max GMSD asymmetry {worst:.1e}"
    ))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = fixture("phantom64_noise10_seed42.pgm");
    let mut runs = Vec::new();
    for k in 0..2 {
        let img = dir.path().join(format!("out{k}.pgm"));
        let trace = dir.path().join(format!("trace{k}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_sftlp"))
            .arg("denoise")
            .arg(&input)
            .arg(&img)
            .arg("--trace")
            .arg(&trace)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || {
            String::from_utf8_lossy(&status.stderr).into_owned()
        })?;
        let read = |p: &Path| std::fs::read(p).map_err(|e| e.to_string());
        runs.push((read(&img)?, read(&trace)?));
    }
    ensure(runs[0].0 == runs[1].0, || "output PGM differs".into())?;
    ensure(runs[0].1 == runs[1].1, || "trace CSV differs".into())?;
    Ok(format!(
        "{} PGM bytes and {} trace bytes identical",
        runs[0].0.len(),
        runs[0].1.len()
    ))
}

fn noise_location_invariance() -> Check {
    let clean = phantom();
    let noisy = corrupt(&clean, 0.2);
    let flipped = noisy.map(|v| match v {
        0.0 => 255.0,
        255.0 => 0.0,
        other => other,
    });
    let mask = build_mask(&noisy);
    ensure(mask == build_mask(&flipped), || "mask changed".into())?;
    let cfg = SolverConfig::default();
    let a =
        sftlp::solver::denoise_with_mask(&noisy, &mask, &cfg, None).map_err(|e| e.to_string())?;
    let b =
        sftlp::solver::denoise_with_mask(&flipped, &mask, &cfg, None).map_err(|e| e.to_string())?;
    let diff = a.recovered.max_abs_diff(&b.recovered);
    ensure(diff <= 1e-9, || {
        format!("recovered images differ by {diff:e}")
    })?;
    Ok(format!(
        "{} flipped pixels, max difference {diff:.1e}",
        mask.entries().len() - mask.count_clean()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("tight-frame reconstruction", tight_frame),
        ("shrinkage oracle", shrinkage_oracle),
        ("linear-solver oracle", linear_solver_oracle),
        ("solver termination", termination),
        ("denoising efficacy", efficacy),
        ("ablation ordering", ablation_ordering),
        ("metric correctness", metric_correctness),
        ("determinism", determinism),
        ("noise-location invariance", noise_location_invariance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
