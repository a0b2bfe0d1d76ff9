use surgeflow::verify::*;

fn cfg(seed: u64) -> VerifyConfig {
    VerifyConfig {
        seed,
        ..VerifyConfig::default()
    }
}

#[test]
fn every_suite_passes_for_several_seeds() {
    for seed in [42, 7, 1234] {
        let r = run_suite(Suite::All, &cfg(seed));
        for s in &r.suites {
            for c in &s.checks {
                assert!(
                    c.passed,
                    "seed {seed} {}/{}: {} {} {} ({})",
                    s.suite, c.id, c.value, c.relation, c.threshold, c.detail
                );
            }
        }
        assert!(r.passed);
        assert_eq!(r.suites.len(), 5);
    }
}

#[test]
fn reports_are_reproducible() {
    let a = run_suite(Suite::All, &cfg(42)).to_json();
    let b = run_suite(Suite::All, &cfg(42)).to_json();
    assert_eq!(a, b);
    assert!(!a.contains("elapsed") && !a.contains("duration"));
    let other = run_suite(Suite::All, &cfg(43)).to_json();
    assert_ne!(a, other);
}

#[test]
fn single_suite_matches_its_slice_of_all() {
    let all = run_suite(Suite::All, &cfg(9));
    for s in Suite::EACH {
        let one = run_suite(s, &cfg(9));
        assert_eq!(one.suites.len(), 1);
        assert_eq!(Some(&one.suites[0]), all.suite(s));
    }
}

#[test]
fn report_json_shape() {
    let r = run_suite(Suite::Constants, &cfg(42));
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["schema_version"], REPORT_SCHEMA_VERSION);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["suites"][0]["suite"], "constants");
    let back: VerifyReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn suite_names_parse() {
    for s in Suite::EACH.into_iter().chain([Suite::All]) {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("bogus".parse::<Suite>().is_err());
}

#[test]
fn failing_check_marks_report() {
    let c = Check::at_most("x", 2.0, 1.0, "");
    assert!(!c.passed);
    assert!(!Check::at_most("nan", f64::NAN, 1.0, "").passed);
    assert!(Check::none_failed("n", 0, 3, "").passed);
    // every valid input keeps the chain intact; an invalid one fails the suite
    let mut small = cfg(42);
    small.inputs.l_drill = 1e-6;
    assert!(run_suite(Suite::Constants, &small).passed);
    let mut bad = cfg(42);
    bad.inputs.l_drill = 5.0;
    let r = run_suite(Suite::Constants, &bad);
    assert!(!r.passed);
    assert!(!r.suites[0].check("ledger_builds").unwrap().passed);
}
