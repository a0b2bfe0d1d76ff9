//! `surgeflow`: constants tables, flow runs and verification suites.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid
//! topology, configuration or I/O, 3 integrator failure, 4 certificate
//! failure, 5 surgery budget exceeded.

mod config;
mod constants;
mod flow;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use config::FileConfig;
use flow::FlowOutcome;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "surgeflow",
    version,
    about = "Surgered gradient flows, Schwarzian bounds and collar constants"
)]
struct Cli {
    /// TOML file whose keys mirror the long flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the constants ledger for a surface.
    Constants(constants::ConstantsArgs),
    /// Run the surgered flow on a model and check its certificates.
    Flow(flow::FlowArgs),
    /// Run property suites and emit a JSON report.
    Verify(verify::VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn dispatch(cli: &Cli) -> Result<u8> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    match &cli.command {
        Command::Constants(a) => constants::run(a, &file),
        Command::Verify(a) => verify::run(a, &file),
        Command::Flow(a) => Ok(match flow::run(a, &file)? {
            FlowOutcome::Ok => 0,
            FlowOutcome::IntegratorFailure => 3,
            FlowOutcome::CertificateFailure => 4,
            FlowOutcome::BudgetExceeded => 5,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            // an engine error mid-run (bad restart path) is an integrator failure
            let engine = e
                .chain()
                .any(|c| c.downcast_ref::<surgeflow::flow::FlowError>().is_some_and(is_runtime));
            ExitCode::from(if engine { 3 } else { 2 })
        }
    }
}

fn is_runtime(e: &surgeflow::flow::FlowError) -> bool {
    use surgeflow::flow::FlowError::*;
    matches!(e, RestartNotDescending { .. } | EmptyTrace)
}
