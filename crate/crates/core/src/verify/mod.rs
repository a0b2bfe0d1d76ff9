//! Property suites with machine-readable, bit-stable JSON reports.
//!
//! Every suite draws from its own ChaCha stream derived from the seed, so a
//! suite run alone reports exactly what it reports inside `all`.

mod annulus_suite;
mod constants_suite;
mod flow_suite;
mod pathfrac_suite;
mod schwarzian_suite;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::surface_bounds::LedgerInputs;

pub use flow_suite::{default_grid_runs, energy_order_study, GridRun};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Schwarzian,
    Pathfrac,
    Annulus,
    Constants,
    Flow,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [
        Suite::Schwarzian,
        Suite::Pathfrac,
        Suite::Annulus,
        Suite::Constants,
        Suite::Flow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Schwarzian => "schwarzian",
            Suite::Pathfrac => "pathfrac",
            Suite::Annulus => "annulus",
            Suite::Constants => "constants",
            Suite::Flow => "flow",
            Suite::All => "all",
        }
    }

    fn stream(self) -> u64 {
        Suite::EACH.iter().position(|&s| s == self).map_or(0, |i| i as u64 + 1)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                format!("unknown suite {s:?}; expected schwarzian, pathfrac, annulus, constants, flow or all")
            })
    }
}

/// One property: `value` compared against `threshold` as described by `relation`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    pub value: f64,
    pub relation: String,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    pub fn at_most(id: &str, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            passed: value <= threshold,
            value,
            relation: "<=".into(),
            threshold,
            detail: detail.into(),
        }
    }

    pub fn at_least(id: &str, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            passed: value >= threshold,
            value,
            relation: ">=".into(),
            threshold,
            detail: detail.into(),
        }
    }

    /// `value` counts failures; passes when zero.
    pub fn none_failed(id: &str, failures: usize, total: usize, detail: impl Into<String>) -> Self {
        let detail = format!("{failures} of {total} failed; {}", detail.into());
        Self {
            id: id.into(),
            passed: failures == 0,
            value: failures as f64,
            relation: "==".into(),
            threshold: 0.0,
            detail,
        }
    }

    pub fn flag(id: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            passed,
            value: if passed { 1.0 } else { 0.0 },
            relation: "==".into(),
            threshold: 1.0,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn suite(&self, s: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|r| r.suite == s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub inputs: LedgerInputs<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            inputs: LedgerInputs::default(),
        }
    }
}

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> VerifyReport {
    let list: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    let suites: Vec<SuiteReport> = list
        .into_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(s.stream());
            let checks = match s {
                Suite::Schwarzian => schwarzian_suite::run(&mut rng),
                Suite::Pathfrac => pathfrac_suite::run(&mut rng),
                Suite::Annulus => annulus_suite::run(&mut rng),
                Suite::Constants => constants_suite::run(&mut rng, &cfg.inputs),
                Suite::Flow => flow_suite::run(),
                Suite::All => unreachable!("expanded above"),
            };
            SuiteReport {
                suite: s,
                passed: checks.iter().all(|c| c.passed),
                checks,
            }
        })
        .collect();
    VerifyReport {
        schema_version: REPORT_SCHEMA_VERSION,
        seed: cfg.seed,
        passed: suites.iter().all(|s| s.passed),
        suites,
    }
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so a broken evaluation cannot pass an upper bound
    values
        .into_iter()
        .fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}
