//! `qbatt`: run collisional charging experiments and write CSV results.

mod check;
mod config;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qbatt::engines::Scenario;

use config::{ExperimentConfig, RunPoint};

#[derive(Debug, Clone)]
pub enum CliError {
    /// Unreadable or invalid configuration.
    Config(String),
    /// An engine failed on a specific run point.
    Run {
        point: String,
        source: qbatt::Error,
    },
    Engine(qbatt::Error),
    Io(String),
    CheckFailed(Vec<&'static str>),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        let engine = |e: &qbatt::Error| match e {
            qbatt::Error::Cutoff { .. } | qbatt::Error::Capacity { .. } => 3,
            qbatt::Error::Config(_) => 2,
            _ => 1,
        };
        match self {
            Self::Config(_) => 2,
            Self::Run { source, .. } => engine(source),
            Self::Engine(e) => engine(e),
            Self::Io(_) | Self::CheckFailed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(m) => write!(f, "invalid configuration: {m}"),
            Self::Run { point, source } => write!(f, "{source}\n  parameters: {point}"),
            Self::Engine(e) => write!(f, "{e}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
            Self::CheckFailed(names) => write!(f, "failed checks: {}", names.join(", ")),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qbatt",
    version,
    about = "Collisional charging of a field-plus-atom-stream quantum battery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scenario and temperature of a config, one after another.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the invariant and oracle suite at desk scale.
    Check {
        /// Take model parameters, K and the first temperature from a config.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run the points of a config concurrently.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        workers: u64,
    },
}

fn check(config: Option<PathBuf>) -> Result<(), CliError> {
    let cfg = match config {
        Some(path) => ExperimentConfig::load(&path)?,
        None => ExperimentConfig::desk_default(),
    };
    let point = RunPoint {
        scenario: Scenario::Uncorrelated,
        k: cfg.k,
        params: cfg.params(cfg.t_bar[0])?,
    };
    println!("check at {point}");
    let rows = check::run_checks(&point, cfg.seed)?;
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in &rows {
        println!(
            "{}  {:width$}  {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
    }
    let failed: Vec<&'static str> = rows.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(failed))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { config } => ExperimentConfig::load(&config).and_then(|c| run::run_config(&c, 1).map(drop)),
        Command::Sweep { config, workers } => {
            ExperimentConfig::load(&config).and_then(|c| run::run_config(&c, workers as usize).map(drop))
        }
        Command::Check { config } => check(config),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qbatt: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
