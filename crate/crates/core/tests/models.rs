use approx::assert_relative_eq;
use surgeflow::flow::*;
use surgeflow::models::*;

fn certified_default() -> ModelInstance<f64> {
    default_model::<f64>().certified(&SamplingConfig::default()).unwrap().0
}

// Critical points of x^4 - (1 - 2y^2)x^2 + 1 + y^4 on x >= 0: grad_y = 4y(x^2 + y^2)
// forces y = 0 (or x = y = 0), then grad_x = 2x(2x^2 - 1) gives x = 0 or 1/sqrt 2.
#[test]
fn default_critical_points() {
    let m = default_model::<f64>();
    let obj = m.objective.as_ref();
    for g in &m.degenerate {
        let gr = obj.gradient(&g.point);
        assert!(gr.iter().all(|c| c.abs() < 1e-15), "{gr:?}");
        assert_eq!(obj.value(&g.point), g.value);
    }
    assert_eq!(m.degenerate[0].value, 1.0);
    assert_relative_eq!(m.degenerate[1].value, 0.75, epsilon = 1e-15);
    assert_relative_eq!(m.delta, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-16);
    // y^2 > 1/2 makes df/dx positive for every x > 0
    for i in 1..50 {
        for y in [-1.8, -0.75, 0.72, 1.5] {
            let x = i as f64 * 0.04;
            assert!(obj.gradient(&[x, y])[0] > 0.0);
        }
    }
}

#[test]
fn default_axioms_pass() {
    let (m, rep) = default_model::<f64>().certified(&SamplingConfig::default()).unwrap();
    assert!(rep.passed(), "{:?}", rep.items);
    let ids: Vec<&str> = rep.items.iter().map(|i| i.id.as_str()).collect();
    assert_eq!(ids, ["a", "c", "grad", "e-1", "e-2", "e-3"]);
    assert!(rep.floor_sampled >= 0.75);
    // the minimum outside N_eps(G) sits on the stratum at (0, eps): |grad| = 4 eps^3
    for row in &rep.a_table {
        assert_relative_eq!(row.sampled_min, 4.0 * row.epsilon.powi(3), max_relative = 1e-6);
    }
    let p = m.to_problem();
    assert_relative_eq!((p.small_gradient)(0.3), 0.9 * 0.108, max_relative = 1e-6);
    assert_eq!((p.small_gradient)(0.01), 0.0);
    assert!(p.gradient_cap.is_finite());
}

#[test]
fn missing_critical_point_fails_e1() {
    let mut m = default_model::<f64>();
    m.degenerate.truncate(1);
    m.restart_directions.truncate(1);
    let err = m.certified(&SamplingConfig::default()).err().unwrap();
    assert!(
        matches!(err, ModelError::AxiomViolation { ref item, .. } if item == "e-1"),
        "{err}"
    );
}

#[test]
fn ascending_restart_fails_e3() {
    let mut m = default_model::<f64>();
    m.restart_directions[0] = Some(vec![0.0, 1.0]);
    let rep = validate_axioms(&m, &SamplingConfig::default()).unwrap();
    let failed: Vec<&str> = rep.items.iter().filter(|i| !i.passed).map(|i| i.id.as_str()).collect();
    assert_eq!(failed, ["e-3"]);
}

#[test]
fn quadratic_axioms_and_closed_form() {
    for dim in 1..=3 {
        let (m, rep) = quadratic_model::<f64>(dim)
            .unwrap()
            .certified(&SamplingConfig::default())
            .unwrap();
        assert!(rep.passed(), "{:?}", rep.items);
        assert_eq!((m.to_problem().small_gradient)(0.2), 0.4);
    }
    assert!(quadratic_model::<f64>(0).is_err());
    assert_eq!(builtin_model::<f64>("quadratic:3").unwrap().dim(), 3);
    assert!(builtin_model::<f64>("nope").is_err());
}

#[test]
fn quadratic_exact_trace() {
    let m = quadratic_model::<f64>(1).unwrap();
    let stop = StopConfig {
        grad_tol: 1e-9,
        t_max: 50.0,
    };
    let tr = surgered_flow(&m.to_problem(), &[1.0], 0.1, 3, &StepConfig::default(), &stop).unwrap();
    assert!(tr.surgeries.is_empty());
    for s in &tr.samples {
        assert_relative_eq!(s.x[0], (-2.0 * s.t).exp(), epsilon = 1e-10, max_relative = 1e-7);
    }
}

#[test]
fn manifest_matches_builtin() {
    let json = r#"{
        "name": "saddle",
        "variables": ["x", "y"],
        "f": "x^4 - (1 - 2*y^2)*x^2 + 1 + y^4",
        "floor": 0.75,
        "epsilon": 0.3,
        "domain": {"lower": [0.0, -2.0], "upper": [2.0, 2.0], "open_lower": [true, false]},
        "separation": {"n": 1, "delta": 0.7071067811865476},
        "degenerate": [
            {"point": [0.0, 0.0], "restart_direction": [1.0, 0.0]},
            {"point": [0.7071067811865476, 0.0]}
        ]
    }"#;
    let man: Manifest = serde_json::from_str(json).unwrap();
    let m: ModelInstance<f64> = man.clone().into_model().unwrap();
    let b = default_model::<f64>();
    for p in [[0.3, 1.2], [1.7, -0.4], [1e-3, 0.0]] {
        assert_relative_eq!(m.objective.value(&p), b.objective.value(&p), epsilon = 1e-14);
        let (g, h) = (m.objective.gradient(&p), b.objective.gradient(&p));
        assert_relative_eq!(g[0], h[0], epsilon = 1e-13);
        assert_relative_eq!(g[1], h[1], epsilon = 1e-13);
    }
    assert!(!m.objective.contains(&[0.0, 0.5]));
    let (m, rep) = m.certified(&SamplingConfig::default()).unwrap();
    assert!(rep.passed());
    let tr = surgered_flow(
        &m.to_problem(),
        &[0.001, 1.8],
        0.3,
        3,
        &StepConfig::default(),
        &StopConfig::default(),
    )
    .unwrap();
    assert_eq!(tr.surgeries.len(), 1);

    let mut two_terminal = man.clone();
    two_terminal.degenerate[0].restart_direction = None;
    assert!(two_terminal.into_model::<f64>().is_err());
    let mut bad_f = man;
    bad_f.f = "x^4 +".into();
    assert!(matches!(bad_f.into_model::<f64>(), Err(ModelError::Manifest(_))));
}

#[test]
fn default_flow_examples() {
    let m = certified_default();
    let p = m.to_problem();
    let (step, stop) = (StepConfig::default(), StopConfig::default());
    let tr = integrate_gradient_flow(&p, &[0.9, 0.0], &step, &stop).unwrap();
    assert_eq!(tr.status, FlowStatus::Converged);
    assert_relative_eq!(tr.last().x[0], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-9);
    assert_relative_eq!(tr.last().f, 0.75, epsilon = 1e-12);
    // the energy identity holds to the integrator's accuracy
    assert!(energy_identity_residual(&tr).unwrap() < 1e-3);

    // a start far up the stratum with small x is drawn to the saddle
    let tr = surgered_flow(&p, &[0.001, 1.8], 0.3, 3, &step, &stop).unwrap();
    assert_eq!(tr.surgeries.len(), 1);
    assert_eq!(tr.surgeries[0].g_point, vec![0.0, 0.0]);
    assert!(tr.surgeries[0].drop() > 0.0);
    assert_relative_eq!(tr.last().f, 0.75, epsilon = 1e-10);
    assert!(check_trace(&tr, &p, Some(0.3)).all());

    // starting inside the neighborhood with small gradient snaps at once
    let tr = surgered_flow(&p, &[0.01, 0.25], 0.3, 3, &step, &stop).unwrap();
    assert_eq!(tr.samples[1].event, Event::Snap);

    // a start in the basin of the minimum never comes near the saddle
    let plain = integrate_gradient_flow(&p, &[1.2, 0.3], &step, &stop).unwrap();
    let surg = surgered_flow(&p, &[1.2, 0.3], 0.3, 3, &step, &stop).unwrap();
    assert_eq!(plain, surg);

    let tr = surgered_flow(&p, &[0.001, 1.8], 0.3, 0, &step, &stop).unwrap();
    assert_eq!(tr.status, FlowStatus::SurgeryBudgetExceeded);
}
