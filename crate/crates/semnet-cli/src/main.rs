//! `semnet`: semantic-network analysis over ConceptNet assertion dumps.
//!
//! Four commands form a pipeline rooted in one output directory: `ingest`
//! extracts per-(language, relation) graphs from a dump, `analyze` computes
//! per-network statistics with degree-preserving null ensembles, `calibrate`
//! scores similarity/complementarity against the configuration model, and
//! `inflection` studies degree-distribution peaks before and after merging
//! word forms.
//!
//! Exit codes: 0 success, 2 usage/input error, 3 empty result, 4 partial
//! failure.

mod analyze;
mod calibrate;
mod config;
mod inflection;
mod ingest;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable inputs, broken config — exit 2.
    #[error("{0}")]
    Usage(String),
    /// Structurally fine inputs that produce nothing — exit 3.
    #[error("{0}")]
    Empty(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Empty(_) => ExitCode::from(3),
        }
    }
}

/// Partial failure marker returned by commands that isolate per-network
/// errors: outputs exist, a summary lists what broke.
pub const EXIT_PARTIAL: u8 = 4;

#[derive(Parser)]
#[command(name = "semnet", version, about = "Semantic-network analysis over ConceptNet dumps")]
struct Cli {
    /// JSON config file; flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (also where later commands find earlier outputs).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Comma-separated language codes.
    #[arg(long, global = true, value_delimiter = ',')]
    languages: Option<Vec<String>>,
    /// Comma-separated relation names.
    #[arg(long, global = true, value_delimiter = ',')]
    relations: Option<Vec<String>>,
    /// Assertion dump (plain or gzip).
    #[arg(long, global = true)]
    dataset: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract per-(language, relation) edge lists and an ingest report.
    Ingest,
    /// Per-network statistics tables and degree curves, with rewired nulls.
    Analyze {
        /// Skip the rewired ensemble (observed statistics only).
        #[arg(long)]
        skip_rewire: bool,
    },
    /// Calibrate similarity/complementarity coefficients per network.
    Calibrate {
        /// Override the ensemble size for every size class.
        #[arg(long)]
        samples: Option<u32>,
    },
    /// Degree-peak analysis of Related-To networks with Form-Of merging.
    Inflection {
        /// TSV of language<TAB>expected-form-count overriding the built-in.
        #[arg(long)]
        grammar_file: Option<PathBuf>,
        /// Peak height threshold over the baseline fit.
        #[arg(long)]
        theta: Option<f64>,
    },
}

fn effective_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(CliError::Usage)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(languages) = &cli.languages {
        cfg.languages = languages.clone();
    }
    if let Some(relations) = &cli.relations {
        cfg.relations = relations.clone();
    }
    if let Some(dataset) = &cli.dataset {
        cfg.dataset = Some(dataset.clone());
    }
    match &cli.command {
        Command::Analyze { skip_rewire } if *skip_rewire => cfg.rewire.enabled = false,
        Command::Calibrate { samples: Some(r) } => {
            for class in &mut cfg.calibration.size_classes {
                class.samples = *r;
            }
        }
        Command::Inflection { grammar_file, theta } => {
            if let Some(path) = grammar_file {
                cfg.grammar_file = Some(path.clone());
            }
            if let Some(theta) = theta {
                cfg.peak.theta = *theta;
            }
        }
        _ => {}
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let cfg = effective_config(cli)?;
    // Echo the effective settings next to the outputs they will produce.
    io::write_json(
        &cfg.out.join("config.json"),
        &serde_json::json!({ "config": &cfg, "config_hash": cfg.hash(), "rng": cfg.stamp().rng }),
    )?;
    match &cli.command {
        Command::Ingest => ingest::run(&cfg),
        Command::Analyze { .. } => analyze::run(&cfg),
        Command::Calibrate { .. } => calibrate::run(&cfg),
        Command::Inflection { .. } => inflection::run(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
