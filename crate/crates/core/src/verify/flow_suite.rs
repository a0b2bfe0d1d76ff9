use crate::flow::*;
use crate::models::{default_model, default_start_grid, quadratic_model, SamplingConfig};

use super::Check;

/// Budget for the default-grid runs; the worst start needs one surgery.
const GRID_BUDGET: usize = 8;

/// Energy residuals of fixed-step Heun on `|x|^2` from `x = 1` to `t = 1`,
/// paired with the step sizes.
pub fn energy_order_study() -> Result<Vec<(f64, f64)>, FlowError> {
    let model = quadratic_model::<f64>(1).map_err(|e| FlowError::InvalidConfig(e.to_string()))?;
    let p = model.to_problem();
    let stop = StopConfig {
        grad_tol: -1.0,
        t_max: 1.0,
    };
    [0.02, 0.01, 0.005, 0.0025]
        .into_iter()
        .map(|h| {
            let tr = integrate_gradient_flow(&p, &[1.0], &StepConfig::fixed(Method::Heun, h), &stop)?;
            Ok((h, energy_identity_residual(&tr)?))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct GridRun {
    pub start: [f64; 2],
    pub trace: FlowTrace<f64>,
    pub report: TraceReport,
    pub certificate: LowerBoundCertificate<f64>,
    pub count: SurgeryCountCheck<f64>,
}

/// Surgered flow of the certified default model from every start of the 10x10 grid.
pub fn default_grid_runs() -> Result<Vec<GridRun>, String> {
    let (model, axioms) = default_model::<f64>()
        .certified(&SamplingConfig::default())
        .map_err(|e| e.to_string())?;
    if !axioms.passed() {
        return Err("default model fails its axiom checks".into());
    }
    let p = model.to_problem();
    let eps = model.epsilon;
    let inputs = CertificateInputs::from_problem(&p, eps);
    let v = crossing_drop(&inputs, eps).map_err(|e| e.to_string())?;
    let (step, stop) = (StepConfig::default(), StopConfig::default());
    default_start_grid()
        .into_iter()
        .map(|start| {
            let trace = surgered_flow(&p, &start, eps, GRID_BUDGET, &step, &stop).map_err(|e| e.to_string())?;
            let report = check_trace(&trace, &p, Some(eps));
            let certificate = lower_bound_certificate(&trace, eps, &inputs).map_err(|e| e.to_string())?;
            let count = surgery_count_check(&trace, v, model.count_exponent());
            Ok(GridRun {
                start,
                trace,
                report,
                certificate,
                count,
            })
        })
        .collect()
}

pub(super) fn run() -> Vec<Check> {
    let mut checks = Vec::new();
    match energy_order_study() {
        Ok(r) => {
            let slopes: Vec<f64> = r
                .windows(2)
                .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
                .collect();
            let dev = slopes.iter().map(|s| (s - 2.0).abs() / 2.0).fold(0.0, f64::max);
            let dev = if slopes.iter().any(|s| !s.is_finite()) {
                f64::NAN
            } else {
                dev
            };
            let list = slopes.iter().map(|s| format!("{s:.4}")).collect::<Vec<_>>().join(", ");
            checks.push(Check::at_most(
                "energy_order",
                dev,
                0.2,
                format!("Heun residual slopes [{list}] against 2"),
            ));
        }
        Err(e) => checks.push(Check::flag("energy_order", false, e.to_string())),
    }

    let runs = match default_grid_runs() {
        Ok(r) => r,
        Err(e) => {
            checks.push(Check::flag("default_grid", false, e));
            return checks;
        }
    };
    let total = runs.len();
    let xbar = std::f64::consts::FRAC_1_SQRT_2;
    let mut not_conv = 0;
    let mut worst_f = 0.0f64;
    for r in &runs {
        let last = r.trace.last();
        let off = (last.x[0] - xbar).hypot(last.x[1]);
        if r.trace.status != FlowStatus::Converged || off > 1e-4 {
            not_conv += 1;
        }
        worst_f = worst_f.max((last.f - 0.75).abs());
    }
    checks.push(Check::none_failed(
        "grid_converges",
        not_conv,
        total,
        "status converged within 1e-4 of (1/sqrt 2, 0)",
    ));
    checks.push(Check::at_most(
        "grid_final_value",
        worst_f,
        1e-4,
        "max |f_end - 3/4| over the grid",
    ));

    let witnesses = runs
        .iter()
        .filter(|r| {
            r.start[0] <= 0.2
                && r.start[1] * r.start[1] > 0.5
                && r.trace.surgeries.iter().any(|s| s.g_point == [0.0, 0.0])
        })
        .count();
    checks.push(Check::at_least(
        "surgery_witness",
        witnesses as f64,
        1.0,
        "grid starts with y^2 > 1/2 and x <= 0.2 that snap at (0, 0)",
    ));

    let bad_trace = runs.iter().filter(|r| !r.report.all()).count();
    checks.push(Check::none_failed(
        "trace_checks",
        bad_trace,
        total,
        "monotone, ordered times, positive drops, bounds",
    ));
    let bad_cert = runs.iter().filter(|r| !r.certificate.holds).count();
    let margin = runs.iter().map(|r| r.certificate.margin).fold(f64::INFINITY, f64::min);
    checks.push(Check::none_failed(
        "lower_bound_certificate",
        bad_cert,
        total,
        format!("smallest margin {margin:e}"),
    ));
    let bad_count = runs.iter().filter(|r| !r.count.holds).count();
    let most = runs.iter().map(|r| r.count.count).max().unwrap_or(0);
    checks.push(Check::none_failed(
        "surgery_count",
        bad_count,
        total,
        format!("most surgeries on one trace: {most}"),
    ));
    checks
}
