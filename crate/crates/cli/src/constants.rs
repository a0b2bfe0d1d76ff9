use std::path::PathBuf;

use anyhow::Result;
use serde::Serialize;
use surgeflow::surface_bounds::{nearnode_chain, Component, ConstantsLedger, LedgerEntry, NearnodeChain, Provenance};

use crate::config::{FileConfig, LedgerArgs, TopologyArgs};
use crate::{write_file, Format, SCHEMA_VERSION};

#[derive(Debug, clap::Args)]
pub struct ConstantsArgs {
    #[command(flatten)]
    pub topology: TopologyArgs,
    #[command(flatten)]
    pub ledger: LedgerArgs,
    /// Also evaluate A(eps, S) and the near-node chain at this epsilon.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Directory for constants.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Serialize)]
struct ConstantsReport<'a> {
    schema_version: u32,
    components: &'a [Component],
    entries: Vec<LedgerEntry<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nearnode: Option<NearnodeChain<f64>>,
}

fn provenance(p: Provenance) -> &'static str {
    match p {
        Provenance::PaperUniversal => "paper-universal",
        Provenance::ExternalNonconstructive => "external-nonconstructive",
        Provenance::Derived => "derived",
    }
}

pub fn run(args: &ConstantsArgs, file: &FileConfig) -> Result<u8> {
    let topo = args.topology.resolve(file)?;
    let inputs = args.ledger.resolve(file)?;
    let ledger = ConstantsLedger::new(inputs, &topo)?;
    let nearnode = match args.epsilon.or(file.epsilon) {
        Some(eps) => Some(nearnode_chain(eps, &ledger)?),
        None => None,
    };
    let report = ConstantsReport {
        schema_version: SCHEMA_VERSION,
        components: topo.components(),
        entries: ledger.entries(),
        nearnode,
    };
    let json = serde_json::to_string_pretty(&report)? + "\n";
    if let Some(dir) = args.out.as_ref().or(file.out.as_ref()) {
        write_file(dir, "constants.json", json.as_bytes())?;
    }
    match args.format {
        Format::Json => print!("{json}"),
        Format::Text => {
            let comps: Vec<String> = topo
                .components()
                .iter()
                .map(|c| format!("(g={}, k={})", c.genus, c.punctures))
                .collect();
            println!("surface {}  |chi| = {}", comps.join(" + "), topo.abs_euler());
            println!("{:<12} {:>24}  {:<25} formula", "symbol", "value", "provenance");
            for e in &report.entries {
                let value = match e.symbol {
                    "n" | "exponent" => format!("{}", e.value as u64),
                    _ => format!("{:.16e}", e.value),
                };
                println!(
                    "{:<12} {:>24}  {:<25} {}",
                    e.symbol,
                    value,
                    provenance(e.provenance),
                    e.formula
                );
            }
            if let Some(c) = report.nearnode {
                println!("A(eps={:e}) = {:.16e}", c.epsilon, c.a);
                println!("near-node chain: Lambda = {:.6e} < l_drill: {}; C1 K0 eps = {:.6e} <= 1/3: {}; linf_hat within bound: {}",
                    c.lambda, c.lambda_below_l_drill, c.c1_k0_eps, c.below_third, c.linf_within);
            }
        }
    }
    Ok(0)
}
