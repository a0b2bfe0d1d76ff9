use std::path::PathBuf;

use anyhow::Result;
use surgeflow::verify::{run_suite, Suite, VerifyConfig};

use crate::config::{FileConfig, LedgerArgs};
use crate::{write_file, Format};

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// schwarzian, pathfrac, annulus, constants, flow or all.
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub ledger: LedgerArgs,
    /// Directory for verify_report.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

pub fn run(args: &VerifyArgs, file: &FileConfig) -> Result<u8> {
    let suite: Suite = args
        .suite
        .as_deref()
        .or(file.suite.as_deref())
        .unwrap_or("all")
        .parse()
        .map_err(anyhow::Error::msg)?;
    let cfg = VerifyConfig {
        seed: args.seed.or(file.seed).unwrap_or(42),
        inputs: args.ledger.resolve(file)?,
    };
    let report = run_suite(suite, &cfg);
    let json = report.to_json() + "\n";
    if let Some(dir) = args.out.as_ref().or(file.out.as_ref()) {
        write_file(dir, "verify_report.json", json.as_bytes())?;
    }
    match args.format {
        Format::Json => print!("{json}"),
        Format::Text => {
            for s in &report.suites {
                for c in &s.checks {
                    let tag = if c.passed { "PASS" } else { "FAIL" };
                    println!(
                        "{tag} {}/{}: {:e} {} {:e}  {}",
                        s.suite, c.id, c.value, c.relation, c.threshold, c.detail
                    );
                }
            }
            println!(
                "{} (seed {})",
                if report.passed {
                    "all checks passed"
                } else {
                    "some checks FAILED"
                },
                cfg.seed
            );
        }
    }
    Ok(if report.passed { 0 } else { 1 })
}
