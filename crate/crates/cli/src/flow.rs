use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use surgeflow::flow::*;
use surgeflow::models::{builtin_model, default_start_grid, Manifest, ModelInstance, SamplingConfig};

use crate::config::{parse_method, parse_point, FileConfig};
use crate::{write_file, SCHEMA_VERSION};

pub const DEFAULT_OUT: &str = "surgeflow-out";

#[derive(Debug, clap::Args)]
pub struct FlowArgs {
    /// Built-in model: default, quadratic or quadratic:<dim>.
    #[arg(long)]
    pub model: Option<String>,
    /// Custom model manifest (.toml or .json); overrides --model.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Start point `x,y,...`; repeatable. The default model uses its 10x10 grid.
    #[arg(long = "start", allow_hyphen_values = true)]
    pub starts: Vec<String>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Maximal number of surgeries per run.
    #[arg(long)]
    pub budget: Option<usize>,
    /// dp5 (adaptive), heun or rk4.
    #[arg(long)]
    pub method: Option<String>,
    /// Fixed step, or initial step for dp5.
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub grad_tol: Option<f64>,
    /// Output directory for traces and flow_summary.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunSummary {
    start: Vec<f64>,
    status: FlowStatus,
    failure: Option<String>,
    surgeries: usize,
    f_start: f64,
    f_end: f64,
    x_end: Vec<f64>,
    certificate: LowerBoundCertificate<f64>,
    surgery_count: SurgeryCountCheck<f64>,
    trace_checks: TraceReport,
}

#[derive(Serialize)]
struct FlowSummary<'a> {
    schema_version: u32,
    model: &'a str,
    epsilon: f64,
    a_epsilon: f64,
    crossing_drop: f64,
    budget: usize,
    step: StepConfig<f64>,
    stop: StopConfig<f64>,
    runs: Vec<RunSummary>,
}

/// Outcome of a flow command before it is mapped to an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowOutcome {
    Ok,
    IntegratorFailure,
    CertificateFailure,
    BudgetExceeded,
}

fn load_model(args: &FlowArgs, file: &FileConfig) -> Result<ModelInstance<f64>> {
    if let Some(path) = args.manifest.as_ref().or(file.manifest.as_ref()) {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
        let manifest: Manifest = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text)?
        } else {
            toml::from_str(&text)?
        };
        return Ok(manifest.into_model()?);
    }
    let name = args.model.as_deref().or(file.model.as_deref()).unwrap_or("default");
    Ok(builtin_model(name)?)
}

fn default_starts(model: &ModelInstance<f64>) -> Vec<Vec<f64>> {
    if model.name == "default" {
        return default_start_grid().iter().map(|p| p.to_vec()).collect();
    }
    let d = &model.domain;
    vec![d.lower.iter().zip(&d.upper).map(|(a, b)| a + 0.75 * (b - a)).collect()]
}

pub fn run(args: &FlowArgs, file: &FileConfig) -> Result<FlowOutcome> {
    let model = load_model(args, file)?;
    let (model, _) = model.certified(&SamplingConfig::default())?;
    let problem = model.to_problem();
    let eps = args.epsilon.or(file.epsilon).unwrap_or(model.epsilon);
    let inputs = CertificateInputs::from_problem(&problem, eps);
    let v = crossing_drop(&inputs, eps)?;

    let mut step = StepConfig::default();
    if let Some(m) = args.method.as_deref().or(file.method.as_deref()) {
        let method = parse_method(m)?;
        if !method.adaptive() {
            step = StepConfig::fixed(method, 1e-3);
        }
    }
    if let Some(h) = args.step.or(file.step) {
        if h.is_nan() || h <= 0.0 {
            bail!("step must be positive, got {h}");
        }
        step.h0 = h;
        if !step.method.adaptive() {
            step.h_max = h;
        }
    }
    let d = StopConfig::default();
    let stop = StopConfig {
        grad_tol: args.grad_tol.or(file.grad_tol).unwrap_or(d.grad_tol),
        t_max: args.t_max.or(file.t_max).unwrap_or(d.t_max),
    };
    let budget = args.budget.or(file.budget).unwrap_or(16);

    let starts: Vec<Vec<f64>> = if !args.starts.is_empty() {
        args.starts.iter().map(|s| parse_point(s)).collect::<Result<_>>()?
    } else if let Some(s) = &file.start {
        s.clone()
    } else {
        default_starts(&model)
    };
    for s in &starts {
        if s.len() != model.dim() || !model.domain.contains(s) {
            bail!(
                "start {s:?} is not a point of the {}-dimensional model domain",
                model.dim()
            );
        }
    }

    let out = args
        .out
        .clone()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let mut runs = Vec::with_capacity(starts.len());
    let mut outcome = FlowOutcome::Ok;
    for (i, x0) in starts.iter().enumerate() {
        let trace = surgered_flow(&problem, x0, eps, budget, &step, &stop)?;
        write_trace(&out, i, &trace)?;
        let certificate = lower_bound_certificate(&trace, eps, &inputs)?;
        let surgery_count = surgery_count_check(&trace, v, model.count_exponent());
        let trace_checks = check_trace(&trace, &problem, Some(eps));
        let last = trace.last();
        println!(
            "start {:?}: {} after {} surgeries, f {:.10} -> {:.10}; certificate {} (margin {:.3e}); count {} <= {:.3}: {}",
            x0,
            trace.status.as_str(),
            trace.surgeries.len(),
            trace.first().f,
            last.f,
            if certificate.holds { "holds" } else { "FAILS" },
            certificate.margin,
            surgery_count.count,
            surgery_count.bound,
            surgery_count.holds,
        );
        if let Some(msg) = &trace.failure {
            eprintln!("  {msg}");
        }
        let this = match trace.status {
            FlowStatus::StepFailure | FlowStatus::TimeLimit => FlowOutcome::IntegratorFailure,
            _ if !(certificate.holds && surgery_count.holds && trace_checks.all()) => FlowOutcome::CertificateFailure,
            FlowStatus::SurgeryBudgetExceeded => FlowOutcome::BudgetExceeded,
            FlowStatus::Converged => FlowOutcome::Ok,
        };
        outcome = worse(outcome, this);
        runs.push(RunSummary {
            start: x0.clone(),
            status: trace.status,
            failure: trace.failure.clone(),
            surgeries: trace.surgeries.len(),
            f_start: trace.first().f,
            f_end: last.f,
            x_end: last.x.clone(),
            certificate,
            surgery_count,
            trace_checks,
        });
    }
    let summary = FlowSummary {
        schema_version: SCHEMA_VERSION,
        model: &model.name,
        epsilon: eps,
        a_epsilon: inputs.a_eps,
        crossing_drop: v,
        budget,
        step,
        stop,
        runs,
    };
    write_file(
        &out,
        "flow_summary.json",
        (serde_json::to_string_pretty(&summary)? + "\n").as_bytes(),
    )?;
    println!("wrote {} traces to {}", starts.len(), out.display());
    Ok(outcome)
}

fn worse(a: FlowOutcome, b: FlowOutcome) -> FlowOutcome {
    let rank = |o| match o {
        FlowOutcome::Ok => 0,
        FlowOutcome::BudgetExceeded => 1,
        FlowOutcome::CertificateFailure => 2,
        FlowOutcome::IntegratorFailure => 3,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn write_trace(dir: &Path, i: usize, trace: &FlowTrace<f64>) -> Result<()> {
    let mut csv = Vec::new();
    write_trace_csv(trace, &mut csv)?;
    write_file(dir, &format!("trace_{i:03}.csv"), &csv)?;
    let json = serde_json::to_string_pretty(&trace_json(trace))? + "\n";
    write_file(dir, &format!("trace_{i:03}.json"), json.as_bytes())
}
