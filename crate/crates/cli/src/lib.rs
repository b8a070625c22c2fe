//! Batch front-end for the simulator: protocol runs, noise sweeps, correction
//! tables, interferometer synthesis and an invariant self-check.

pub mod config;
mod decompose;
mod run;
mod sweep;
mod table;
mod verify;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};

pub use config::{parse_phase, Config, RunConfig};
pub use decompose::builtin_matrix;
pub use table::SWAP_NOTE;
pub use verify::{verify_suite, CheckResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "bcrsp", version, about = "Bidirectional controlled remote state preparation of qudits")]
pub struct Cli {
    /// JSON config file; `-` or absent reads stdin.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run noiseless protocol trials.
    Run,
    /// Sweep a noise channel over a gamma grid.
    Sweep,
    /// Print the full correction table for one dimension.
    Table {
        #[arg(long, short = 'n', default_value_t = 3)]
        dimension: usize,
    },
    /// Decompose a unitary into beam splitters and phase shifters.
    Decompose {
        /// `charlie4`, `identity`, or a JSON matrix file.
        source: String,
        /// Size of the `identity` builtin.
        #[arg(long, short = 'n', default_value_t = 4)]
        dimension: usize,
    },
    /// Run the invariant self-check.
    Verify,
}

/// Output text plus whether every check it reports succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    pub ok: bool,
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.validate()
}

/// Runs one subcommand. Errors are validation failures; a report with
/// `ok == false` is a completed run whose checks failed.
pub fn execute(cli: &Cli) -> Result<Report> {
    let format = cli.format;
    match &cli.command {
        Command::Run => run::cmd_run(&load_config(cli)?, format.unwrap_or(Format::Csv)),
        Command::Sweep => sweep::cmd_sweep(&load_config(cli)?, format.unwrap_or(Format::Csv)),
        Command::Table { dimension } => table::cmd_table(*dimension, format.unwrap_or(Format::Csv)),
        Command::Decompose { source, dimension } => {
            decompose::cmd_decompose(source, *dimension, format.unwrap_or(Format::Json))
        }
        Command::Verify => verify::cmd_verify(cli.seed.unwrap_or(0), format.unwrap_or(Format::Csv)),
    }
}

pub(crate) fn csv_string<T: serde::Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub(crate) fn json_string<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
