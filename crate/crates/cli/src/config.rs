//! TOML run configuration. Keys mirror the long flags; a flag given on the
//! command line wins over the file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use surgeflow::flow::Method;
use surgeflow::surface_bounds::{LedgerInputs, SurfaceTopology};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub model: Option<String>,
    pub manifest: Option<PathBuf>,
    pub genus: Option<Vec<u32>>,
    pub punctures: Option<Vec<u32>>,
    pub epsilon: Option<f64>,
    pub lambda: Option<f64>,
    pub delta0: Option<f64>,
    pub cdrill: Option<f64>,
    pub ldrill: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub suite: Option<String>,
    pub budget: Option<usize>,
    pub method: Option<String>,
    pub step: Option<f64>,
    pub t_max: Option<f64>,
    pub grad_tol: Option<f64>,
    pub start: Option<Vec<Vec<f64>>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Ledger overrides shared by `constants` and `verify`.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct LedgerArgs {
    /// Separation scale delta_0 of the strata.
    #[arg(long)]
    pub delta0: Option<f64>,
    /// Drilling constant c_drill.
    #[arg(long)]
    pub cdrill: Option<f64>,
    /// Drilling length threshold l_drill, in (0, 2 arcsinh 1).
    #[arg(long)]
    pub ldrill: Option<f64>,
    /// Skinning contraction lambda, in [0, 1).
    #[arg(long)]
    pub lambda: Option<f64>,
}

impl LedgerArgs {
    pub fn resolve(&self, file: &FileConfig) -> Result<LedgerInputs<f64>> {
        let d = LedgerInputs::<f64>::default();
        let inputs = LedgerInputs {
            delta0: self.delta0.or(file.delta0).unwrap_or(d.delta0),
            c_drill: self.cdrill.or(file.cdrill).unwrap_or(d.c_drill),
            l_drill: self.ldrill.or(file.ldrill).unwrap_or(d.l_drill),
            lambda: self.lambda.or(file.lambda).unwrap_or(d.lambda),
        };
        inputs.validate()?;
        Ok(inputs)
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct TopologyArgs {
    /// Genus of each component, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub genus: Option<Vec<u32>>,
    /// Punctures of each component; omit for closed surfaces.
    #[arg(long, value_delimiter = ',')]
    pub punctures: Option<Vec<u32>>,
}

impl TopologyArgs {
    pub fn resolve(&self, file: &FileConfig) -> Result<SurfaceTopology> {
        let genus = self
            .genus
            .clone()
            .or_else(|| file.genus.clone())
            .unwrap_or_else(|| vec![2]);
        let punctures = self
            .punctures
            .clone()
            .or_else(|| file.punctures.clone())
            .unwrap_or_default();
        Ok(SurfaceTopology::from_lists(&genus, &punctures)?)
    }
}

pub fn parse_method(s: &str) -> Result<Method> {
    Ok(match s {
        "dp5" | "dormand-prince" => Method::DormandPrince,
        "heun" => Method::Heun,
        "rk4" => Method::Rk4,
        _ => bail!("unknown method {s:?}; expected dp5, heun or rk4"),
    })
}

/// Parses `x,y,...`.
pub fn parse_point(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("bad coordinate {t:?} in {s:?}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_keys_mirror_flags() {
        let c: FileConfig = toml::from_str(
            "genus = [2, 3]\npunctures = [0, 1]\ndelta0 = 6.5\nseed = 7\nt-max = 5.0\nstart = [[0.5, 1.0]]\nmethod = \"rk4\"",
        )
        .unwrap();
        assert_eq!(c.genus, Some(vec![2, 3]));
        assert_eq!(c.t_max, Some(5.0));
        assert_eq!(c.start, Some(vec![vec![0.5, 1.0]]));
        assert!(toml::from_str::<FileConfig>("bogus = 1").is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let file = FileConfig {
            delta0: Some(8.0),
            lambda: Some(0.25),
            ..FileConfig::default()
        };
        let args = LedgerArgs {
            delta0: Some(6.5),
            ..LedgerArgs::default()
        };
        let r = args.resolve(&file).unwrap();
        assert_eq!((r.delta0, r.lambda), (6.5, 0.25));
        let bad = LedgerArgs {
            lambda: Some(1.0),
            ..LedgerArgs::default()
        };
        assert!(bad.resolve(&file).is_err());
    }

    #[test]
    fn points_and_methods() {
        assert_eq!(parse_point("0.5, -1").unwrap(), vec![0.5, -1.0]);
        assert!(parse_point("0.5,x").is_err());
        assert_eq!(parse_method("heun").unwrap(), Method::Heun);
        assert!(parse_method("euler").is_err());
    }
}
