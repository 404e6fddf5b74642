//! Command-line front end: `add-noise`, `denoise`, `evaluate`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::image::{add_salt_pepper_noise_counted, read_pgm, write_pgm, NoiseSpec};
use crate::metrics::evaluate;
use crate::solver::{denoise_with_reference, Mode, Norm, SolverConfig};
use crate::transforms::TransformKind;

#[derive(Debug, Parser)]
#[command(name = "sftlp", version, about = "Salt-and-pepper noise removal")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Corrupt a PGM with salt-and-pepper noise.
    AddNoise(AddNoiseArgs),
    /// Remove salt-and-pepper noise from a PGM.
    Denoise(DenoiseArgs),
    /// Print PSNR, SSIM and GMSD of a test image against a reference.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
pub struct AddNoiseArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Fraction of pixels to corrupt.
    #[arg(long, value_parser = unit_interval)]
    pub level: f64,
    /// Fraction of corrupted pixels set to 255.
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    pub salt_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Mca,
    Single,
    NoMask,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    Sft,
    Haar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Lp,
    L1,
}

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[arg(long)]
    pub alpha0: Option<f64>,
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub alpha2: Option<f64>,
    #[arg(long)]
    pub lambda0: Option<f64>,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub lambda2: Option<f64>,
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Mca)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = TransformArg::Sft)]
    pub transform: TransformArg,
    #[arg(long, value_enum, default_value_t = NormArg::Lp)]
    pub norm: NormArg,
    /// Clean image; enables metric output and the psnr column of the trace.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Write the per-iteration trace as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub cartoon: Option<PathBuf>,
    #[arg(long)]
    pub texture: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    pub reference: PathBuf,
    pub test: PathBuf,
}

fn unit_interval(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not in [0, 1]"))
    }
}

impl DenoiseArgs {
    pub fn config(&self) -> SolverConfig {
        let mut c = SolverConfig::default();
        let overrides = [
            (&mut c.alpha0, self.alpha0),
            (&mut c.alpha1, self.alpha1),
            (&mut c.alpha2, self.alpha2),
            (&mut c.lambda0, self.lambda0),
            (&mut c.lambda1, self.lambda1),
            (&mut c.lambda2, self.lambda2),
            (&mut c.p0, self.p0),
            (&mut c.p1, self.p1),
            (&mut c.p2, self.p2),
            (&mut c.gamma, self.gamma),
            (&mut c.tol, self.tol),
        ];
        for (slot, value) in overrides {
            if let Some(v) = value {
                *slot = v;
            }
        }
        if let Some(n) = self.max_iters {
            c.max_iters = n;
        }
        c.mode = match self.mode {
            ModeArg::Mca => Mode::Mca,
            ModeArg::Single => Mode::SingleComponent,
            ModeArg::NoMask => Mode::NoMask,
        };
        c.transform = match self.transform {
            TransformArg::Sft => TransformKind::Sft,
            TransformArg::Haar => TransformKind::Haar,
        };
        c.norm = match self.norm {
            NormArg::Lp => Norm::Lp,
            NormArg::L1 => Norm::L1,
        };
        c
    }
}

fn add_noise(args: &AddNoiseArgs) -> Result<()> {
    let image = read_pgm(&args.input)?;
    let spec = NoiseSpec::new(args.level, args.salt_fraction, args.seed)?;
    let (noisy, corrupted) = add_salt_pepper_noise_counted(&image, &spec)?;
    write_pgm(&noisy, &args.output)?;
    println!("corrupted={corrupted}");
    Ok(())
}

fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn denoise_cmd(args: &DenoiseArgs) -> Result<()> {
    let config = args.config();
    config.validate()?;
    let observed = read_pgm(&args.input)?;
    let reference = args.reference.as_ref().map(read_pgm).transpose()?;
    let result = denoise_with_reference(&observed, &config, reference.as_ref())?;

    write_pgm(&result.recovered, &args.output)?;
    if let Some(path) = &args.cartoon {
        write_pgm(&result.cartoon, path)?;
    }
    if let Some(path) = &args.texture {
        write_pgm(&result.texture, path)?;
    }
    if let Some(path) = &args.trace {
        let file = File::create(path).map_err(io_err(path))?;
        let mut w = BufWriter::new(file);
        result.write_trace_csv(&mut w).map_err(io_err(path))?;
        w.flush().map_err(io_err(path))?;
    }

    let last = result.trace.last().map_or(0.0, |r| r.rel_change);
    println!(
        "iterations={} converged={} rel_change={last:.6e}",
        result.iterations(),
        result.converged
    );
    if let Some(r) = &reference {
        println!("{}", evaluate(r, &result.recovered)?);
    }
    Ok(())
}

fn evaluate_cmd(args: &EvaluateArgs) -> Result<()> {
    let reference = read_pgm(&args.reference)?;
    let test = read_pgm(&args.test)?;
    println!("{}", evaluate(&reference, &test)?);
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::AddNoise(a) => add_noise(a),
        Command::Denoise(a) => denoise_cmd(a),
        Command::Evaluate(a) => evaluate_cmd(a),
    }
}

/// Parses `args` (program name first) and runs the selected subcommand.
pub fn run_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

pub fn run() -> ExitCode {
    run_from(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> std::result::Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("sftlp").chain(args.iter().copied()))
    }

    #[test]
    fn denoise_defaults_match_config() {
        let cli = parse(&["denoise", "in.pgm", "out.pgm"]).unwrap();
        let Command::Denoise(args) = cli.command else {
            panic!()
        };
        assert_eq!(args.config(), SolverConfig::default());
    }

    #[test]
    fn ablation_flags() {
        let cli = parse(&[
            "denoise",
            "a",
            "b",
            "--mode",
            "single",
            "--transform",
            "haar",
            "--norm",
            "l1",
            "--p1",
            "0.8",
        ])
        .unwrap();
        let Command::Denoise(args) = cli.command else {
            panic!()
        };
        let c = args.config();
        assert_eq!(c.mode, Mode::SingleComponent);
        assert_eq!(c.transform, TransformKind::Haar);
        assert_eq!(c.norm, Norm::L1);
        assert_eq!(c.p1, 0.8);
    }

    #[test]
    fn rejects_out_of_range_level() {
        assert!(parse(&["add-noise", "a", "b", "--level", "1.5"]).is_err());
        assert!(parse(&["add-noise", "a", "b"]).is_err());
        assert!(parse(&["evaluate", "a", "b", "--bogus"]).is_err());
    }
}
