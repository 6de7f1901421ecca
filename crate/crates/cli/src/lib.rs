//! `ste-lab`: synthesize, simulate, sweep and compare driving protocols
//! from a `key = value` config, writing CSV and gnuplot files.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod plot;
pub mod sweep;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use ste_core::ProtocolKind;

pub use config::{parse_config, RunConfig};
pub use error::CliError;

/// Environment variable that takes precedence over `--out` and `output.dir`.
pub const OUT_ENV: &str = "STE_LAB_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    /// Write protocol CSVs.
    Synth,
    /// Write trajectory CSVs.
    Simulate,
    /// STE and quench figures of merit per duration, plus a gnuplot script.
    Sweep,
    /// STE, quench and adiabatic side by side.
    Compare,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "ste-lab", version, about = "Shortcut-to-equilibration protocol synthesis and simulation")]
pub struct Cli {
    #[arg(value_enum)]
    pub verb: Verb,
    /// `key = value` config file; missing keys keep their defaults.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Comma-separated durations, strictly increasing.
    #[arg(long, value_name = "LIST")]
    pub tf: Option<String>,
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<ProtocolKind>,
    /// Protocol CSV to replay (simulate only).
    #[arg(long, value_name = "PATH")]
    pub protocol: Option<PathBuf>,
    /// Sweep worker threads; 0 uses one per core.
    #[arg(long, value_name = "N")]
    pub workers: Option<usize>,
}

fn parse_kind(s: &str) -> Result<ProtocolKind, String> {
    s.parse()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
    /// Text for stdout, if the verb produces a report.
    pub report: Option<String>,
}

/// Merges the config file, the flags and `env_out` (the value of
/// [`OUT_ENV`], if set), in increasing order of precedence.
pub fn resolve_config(cli: &Cli, env_out: Option<PathBuf>) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
            parse_config(&text).map_err(|source| CliError::Config { path: path.display().to_string(), source })?
        }
        None => RunConfig::default(),
    };
    if let Some(list) = &cli.tf {
        cfg.t_f = config::parse_tf_list(list).map_err(|e| CliError::Usage(format!("--tf: {e}")))?;
    }
    if let Some(kind) = cli.kind {
        cfg.kind = kind;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    if let Some(dir) = env_out.or_else(|| cli.out.clone()) {
        cfg.output_dir = dir;
    }
    Ok(cfg)
}

pub fn run(cli: &Cli, env_out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let cfg = resolve_config(cli, env_out)?;
    if cli.protocol.is_some() && cli.verb != Verb::Simulate {
        return Err(CliError::Usage("--protocol only applies to `simulate`".into()));
    }
    let (written, report) = match cli.verb {
        Verb::Synth => (commands::cmd_synth(&cfg)?, None),
        Verb::Simulate => (commands::cmd_simulate(&cfg, cli.protocol.as_deref())?, None),
        Verb::Sweep => {
            let (rows, written) = commands::cmd_sweep(&cfg)?;
            (written, Some(commands::report(&rows)))
        }
        Verb::Compare => {
            let (report, written) = commands::cmd_compare(&cfg)?;
            (written, Some(report))
        }
    };
    Ok(Outcome { written, report })
}
