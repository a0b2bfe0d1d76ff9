use std::sync::Arc;

use approx::assert_relative_eq;

use super::*;

struct Quadratic;

impl Objective<f64> for Quadratic {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &[f64]) -> f64 {
        x[0] * x[0]
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![2.0 * x[0]]
    }
}

struct Constant;

impl Objective<f64> for Constant {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, _: &[f64]) -> f64 {
        2.0
    }
    fn gradient(&self, _: &[f64]) -> Vec<f64> {
        vec![0.0]
    }
}

// x^4/4 + x^3/3: degenerate inflection at 0 (f = 0), minimum at -1 (f = -1/12).
// Flow lines from x > 0 creep into 0 and never cross it.
struct Well;

impl Objective<f64> for Well {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &[f64]) -> f64 {
        x[0].powi(4) / 4.0 + x[0].powi(3) / 3.0
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![x[0] * x[0] * (x[0] + 1.0)]
    }
}

fn problem(obj: Arc<dyn Objective<f64>>, g: Vec<DegeneratePoint<f64>>, restart: RestartFn<f64>) -> FlowProblem<f64> {
    FlowProblem {
        objective: obj,
        degenerate: g,
        n_points: 1,
        delta: 1.0,
        small_gradient: Arc::new(|e: f64| 2.0 * e),
        gradient_cap: 100.0,
        floor: -1.0,
        restart,
    }
}

fn quadratic() -> FlowProblem<f64> {
    let g = vec![DegeneratePoint {
        point: vec![0.0],
        value: 0.0,
        terminal: true,
    }];
    problem(Arc::new(Quadratic), g, Arc::new(|_, _| Vec::new()))
}

fn well(restart: RestartFn<f64>) -> FlowProblem<f64> {
    let g = vec![
        DegeneratePoint {
            point: vec![0.0],
            value: 0.0,
            terminal: false,
        },
        DegeneratePoint {
            point: vec![-1.0],
            value: -1.0 / 12.0,
            terminal: true,
        },
    ];
    let mut p = problem(Arc::new(Well), g, restart);
    p.small_gradient = Arc::new(|_| 0.05);
    p
}

fn linear_restart() -> RestartFn<f64> {
    Arc::new(|_, eps| (0..=8).map(|k| vec![-(k as f64) * eps / 16.0]).collect())
}

#[test]
fn quadratic_decays_exponentially() {
    let p = quadratic();
    let stop = StopConfig {
        grad_tol: 1e-12,
        t_max: 5.0,
    };
    let tr = integrate_gradient_flow(&p, &[1.0], &StepConfig::default(), &stop).unwrap();
    for s in &tr.samples {
        assert_relative_eq!(s.x[0], (-2.0 * s.t).exp(), max_relative = 1e-8);
    }
    assert_eq!(tr.status, FlowStatus::TimeLimit);
    assert_eq!(tr.last().t, 5.0);
    assert!(check_trace(&tr, &p, None).all());
}

#[test]
fn critical_start_has_no_steps() {
    let tr = integrate_gradient_flow(&quadratic(), &[0.0], &StepConfig::default(), &StopConfig::default()).unwrap();
    assert_eq!(tr.status, FlowStatus::Converged);
    assert_eq!(tr.step_count(), 0);
}

#[test]
fn energy_residual_cases() {
    let c = problem(Arc::new(Constant), vec![], Arc::new(|_, _| Vec::new()));
    let stop = StopConfig {
        grad_tol: -1.0,
        t_max: 1.0,
    };
    let tr = integrate_gradient_flow(&c, &[0.3], &StepConfig::fixed(Method::Rk4, 0.1), &stop).unwrap();
    assert_eq!(energy_identity_residual(&tr).unwrap(), 0.0);
    let tr = integrate_gradient_flow(&quadratic(), &[1.0], &StepConfig::fixed(Method::Rk4, 5e-4), &stop).unwrap();
    assert!(energy_identity_residual(&tr).unwrap() < 1e-6);
}

#[test]
fn heun_residual_is_second_order() {
    let stop = StopConfig {
        grad_tol: -1.0,
        t_max: 1.0,
    };
    let r: Vec<f64> = [0.02, 0.01, 0.005]
        .iter()
        .map(|&h| {
            let tr = integrate_gradient_flow(&quadratic(), &[1.0], &StepConfig::fixed(Method::Heun, h), &stop).unwrap();
            energy_identity_residual(&tr).unwrap()
        })
        .collect();
    for w in r.windows(2) {
        let slope = (w[0] / w[1]).log2();
        assert!((slope - 2.0).abs() < 0.2, "slope {slope}");
    }
}

#[test]
fn quadratic_certificate() {
    let p = quadratic();
    let stop = StopConfig {
        grad_tol: 2e-6,
        t_max: 100.0,
    };
    let tr = integrate_gradient_flow(&p, &[1.0], &StepConfig::default(), &stop).unwrap();
    assert!(tr.last().x[0] < 1e-6);
    let eps = 0.1;
    let c = lower_bound_certificate(&tr, eps, &CertificateInputs::from_problem(&p, eps)).unwrap();
    assert_relative_eq!(c.lhs, 1.0, epsilon = 1e-10);
    assert!(c.holds && c.rhs > 0.0);
    let still = integrate_gradient_flow(&p, &[0.0], &StepConfig::default(), &stop).unwrap();
    let c = lower_bound_certificate(&still, eps, &CertificateInputs::from_problem(&p, eps)).unwrap();
    assert!(c.rhs <= 0.0 && c.holds);
    assert!(matches!(
        lower_bound_certificate(&tr, 0.5, &CertificateInputs::from_problem(&p, 0.5)),
        Err(FlowError::VacuousCertificate { .. })
    ));
}

#[test]
fn surgery_count_cases() {
    let tr = integrate_gradient_flow(&quadratic(), &[1.0], &StepConfig::default(), &StopConfig::default()).unwrap();
    assert!(surgery_count_check(&tr, 1.0, 0).holds);
    let mut forced = tr.clone();
    let s = Surgery {
        t: 0.0,
        g_index: 0,
        g_point: vec![0.0],
        from: vec![0.0],
        f_before: 1.0,
        f_after: 0.5,
        restart: vec![],
    };
    forced.surgeries = vec![s; 5];
    let c = surgery_count_check(&forced, 1.0, 1);
    assert_eq!(c.bound, 4.0);
    assert!(!c.holds);
}

#[test]
fn well_snaps_then_converges() {
    let p = well(linear_restart());
    let tr = surgered_flow(&p, &[0.5], 0.3, 3, &StepConfig::default(), &StopConfig::default()).unwrap();
    assert_eq!(tr.status, FlowStatus::Converged);
    assert_eq!(tr.surgeries.len(), 1);
    assert_relative_eq!(tr.last().x[0], -1.0, epsilon = 1e-9);
    let near = surgered_flow(&p, &[1e-3], 0.3, 3, &StepConfig::default(), &StopConfig::default()).unwrap();
    assert_eq!(near.samples[1].event, Event::Snap);
    let rep = check_trace(&tr, &p, Some(0.3));
    assert!(rep.all(), "{rep:?}");
    let plain = integrate_gradient_flow(&p, &[-0.5], &StepConfig::default(), &StopConfig::default()).unwrap();
    let surg = surgered_flow(&p, &[-0.5], 0.3, 3, &StepConfig::default(), &StopConfig::default()).unwrap();
    assert_eq!(plain, surg);
}

#[test]
fn budget_and_bad_restart() {
    let p = well(linear_restart());
    let tr = surgered_flow(&p, &[0.5], 0.3, 0, &StepConfig::default(), &StopConfig::default()).unwrap();
    assert_eq!(tr.status, FlowStatus::SurgeryBudgetExceeded);
    assert!(tr.surgeries.is_empty());
    let flat = well(Arc::new(|_, _| vec![vec![0.0], vec![0.0]]));
    let e = surgered_flow(&flat, &[0.5], 0.3, 3, &StepConfig::default(), &StopConfig::default());
    assert_eq!(e, Err(FlowError::RestartNotDescending { index: 0 }));
}

#[test]
fn csv_and_json_output() {
    let stop = StopConfig {
        grad_tol: -1.0,
        t_max: 0.2,
    };
    let tr = integrate_gradient_flow(&quadratic(), &[1.0], &StepConfig::fixed(Method::Rk4, 0.1), &stop).unwrap();
    let mut buf = Vec::new();
    write_trace_csv(&tr, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x0,f,gradnorm,event");
    assert_eq!(
        lines[1],
        "0.0000000000000000e0,1.0000000000000000e0,1.0000000000000000e0,2.0000000000000000e0,start"
    );
    assert_eq!(lines.len(), 4);
    let v = trace_json(&tr);
    assert_eq!(v["schema_version"], 1);
    let back: FlowTrace<f64> = serde_json::from_value(v["trace"].clone()).unwrap();
    assert_eq!(back, tr);
}
