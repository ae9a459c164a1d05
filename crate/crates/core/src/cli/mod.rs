//! Command implementations behind the `socmind` binary.

pub mod metrics_input;
pub mod output;
pub mod run;
pub mod sweep;
pub mod validate;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::sim::{ConfigError, SimError};

pub use output::{OutputFormat, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Metrics(#[from] metrics_input::MetricsInputError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    std::fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Parser)]
#[command(name = "socmind", version, about = "Socially-minded intelligence metrics and simulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute the published worked examples.
    Validate {
        #[arg(long, default_value = "table")]
        format: OutputFormat,
    },
    /// ISMI / GSMI for every row of a CSV file.
    Metrics {
        /// Input CSV (see the format reference in the README).
        input: PathBuf,
        #[arg(long, default_value = "table")]
        format: OutputFormat,
    },
    /// Run one episode and write its log and summary.
    Sim {
        /// Config file, or the name of a bundled scenario.
        #[arg(long)]
        config: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value = "table")]
        format: OutputFormat,
    },
    /// Cross product of parameter values and seeds, one row per cell.
    Sweep {
        #[arg(long)]
        config: String,
        /// `name=v1,v2,...`; repeatable.
        #[arg(long = "param")]
        params: Vec<sweep::SweepParam>,
        /// `0,1,2` or `0..10`.
        #[arg(long, default_value = "0")]
        seeds: String,
        /// A single seed; overrides `--seeds`.
        #[arg(long)]
        seed: Option<u64>,
        /// Result CSV; an existing file from the same sweep is resumed.
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
        #[arg(long, default_value = "table")]
        format: OutputFormat,
    },
}

/// Runs a parsed command, writing its report to `stdout`. Returns the exit status.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let mut emit = |s: String| stdout.write_all(s.as_bytes()).map_err(|e| CliError::Io(e.to_string()));
    match cli.command {
        Command::Validate { format } => {
            let report = validate::cmd_validate();
            emit(report.table().render(format))?;
            if format == OutputFormat::Table {
                emit(format!("{}\n", report.summary_line()))?;
            }
            Ok(report.exit_code())
        }
        Command::Metrics { input, format } => {
            emit(metrics_input::cmd_metrics(&input)?.render(format))?;
            Ok(0)
        }
        Command::Sim {
            config,
            seed,
            out,
            format,
        } => {
            let config = run::load_config(&config)?;
            let result = run::cmd_sim(&config, seed, &out)?;
            emit(run::report_table(&result.report).render(format))?;
            if format == OutputFormat::Table {
                emit(format!(
                    "sites completed: {}\nlog: {}\nsummary: {}\n",
                    result.report.sites_completed,
                    result.log_path.display(),
                    result.summary_path.display()
                ))?;
            }
            Ok(0)
        }
        Command::Sweep {
            config,
            params,
            seeds,
            seed,
            out,
            format,
        } => {
            let seeds = match seed {
                Some(s) => vec![s],
                None => sweep::parse_seeds(&seeds).map_err(CliError::Usage)?,
            };
            let plan = sweep::SweepPlan {
                base: run::load_config(&config)?,
                params,
                seeds,
            };
            let outcome = sweep::cmd_sweep(&plan, &out)?;
            emit(outcome.table.render(format))?;
            if format == OutputFormat::Table {
                emit(format!(
                    "{} rows ({} run now, {} failed) -> {}\n",
                    outcome.table.rows.len(),
                    outcome.executed,
                    outcome.failed,
                    out.display()
                ))?;
            }
            Ok(0)
        }
    }
}
