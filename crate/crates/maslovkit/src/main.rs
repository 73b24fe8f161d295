use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use maslovkit::{execute, parse_config, Format, Mode, RunConfig, Settings};

/// Case analysis of single-orbit index data.
///
/// Exits 0 when every analyzed configuration is ruled out or handled by an
/// external theorem, 1 when something is feasible or inconclusive, 2 on
/// usage or input errors.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// analyze, sweep, table or resonance
    #[arg(long)]
    mode: Option<Mode>,
    /// Path to a key=value config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Morse series truncation degree (default 400, or MASLOVKIT_TRUNCATION)
    #[arg(long, allow_hyphen_values = true)]
    truncation: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    i1_min: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    i1_max: Option<i64>,
    #[arg(long)]
    q_max: Option<i64>,
    /// text or kv
    #[arg(long)]
    format: Option<Format>,
    /// Number of iterates in table mode
    #[arg(long)]
    m_max: Option<u64>,
}

fn env_truncation() -> anyhow::Result<Option<i64>> {
    match std::env::var("MASLOVKIT_TRUNCATION") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .with_context(|| format!("MASLOVKIT_TRUNCATION='{v}' is not an integer")),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> anyhow::Result<Settings> {
    let file = match &cli.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_config(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => RunConfig::default(),
    };
    let flags = RunConfig {
        mode: cli.mode,
        orbits: Vec::new(),
        truncation: cli.truncation,
        i1_min: cli.i1_min,
        i1_max: cli.i1_max,
        q_max: cli.q_max,
        m_max: cli.m_max,
        format: cli.format,
    };
    Settings::resolve(file, &flags, env_truncation()?)
}

fn main() -> ExitCode {
    let settings = match run(Cli::parse()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match execute(&settings) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            if outcome.certified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
