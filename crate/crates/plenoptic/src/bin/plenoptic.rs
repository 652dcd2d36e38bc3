//! Thin reproducibility front end over the experiment library. One
//! subcommand per figure-style sweep plus a verification suite; all
//! heavy lifting lives in `plenoptic::experiments`.

use clap::{Parser, Subcommand};
use plenoptic::experiments::{run_experiment, ExperimentConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "plenoptic", version, about = "Reproduces the model's figure sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML experiment config; defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output file; stdout when omitted. Written atomically.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker thread cap (accepted for script compatibility; current
    /// sweeps run single-threaded and are deterministic regardless).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Overrides the verify comparison tolerance.
    #[arg(long, global = true)]
    verify_tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Static entropy-rate bounds swept over p_w (CSV).
    FigBoundsStatic,
    /// Memory-constrained coding penalty vs M, static and dynamic (CSV).
    FigMemory,
    /// Dynamic bounds vs p_i (binary) and rho (Gaussian) (CSV).
    FigDynamicBounds,
    /// Operational DPCM sweep with the analytic bound overlaid (CSV).
    FigDpcm,
    /// Brute-force bound certification suite (JSON; nonzero exit on any
    /// violation).
    Verify,
}

fn experiment_id(cmd: &Command) -> &'static str {
    match cmd {
        Command::FigBoundsStatic => "fig-bounds-static",
        Command::FigMemory => "fig-memory",
        Command::FigDynamicBounds => "fig-dynamic-bounds",
        Command::FigDpcm => "fig-dpcm",
        Command::Verify => "verify",
    }
}

fn run(cli: &Cli) -> plenoptic::Result<bool> {
    let id = experiment_id(&cli.command);
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::default_for(id),
    };
    if config.experiment != id {
        return Err(plenoptic::Error::Config(format!(
            "config is for experiment '{}', subcommand expects '{id}'",
            config.experiment
        )));
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(tol) = cli.verify_tolerance {
        config.tolerance = Some(tol);
    }
    if cli.threads == 0 {
        return Err(plenoptic::Error::Config("--threads must be >= 1".into()));
    }
    let output = run_experiment(&config)?;
    match &cli.out {
        None => print!("{}", output.content),
        Some(path) => {
            // write-then-rename so readers never observe a partial file
            let tmp = path.with_extension(format!("{}.tmp", output.extension));
            std::fs::write(&tmp, &output.content)?;
            std::fs::rename(&tmp, path)?;
        }
    }
    Ok(output.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification reported failures");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
