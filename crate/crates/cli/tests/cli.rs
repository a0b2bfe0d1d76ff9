use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surgeflow"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn constants_genus_two_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["constants"], dir.path());
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    let row = |sym: &str| {
        s.lines()
            .find(|l| l.split_whitespace().next() == Some(sym))
            .unwrap()
            .to_string()
    };
    assert!(row("n").contains(" 3 "));
    assert!(row("exponent").contains(" 9 "));
    let eps2: f64 = row("eps_2").split_whitespace().nth(1).unwrap().parse().unwrap();
    assert_eq!(eps2, 1f64.asinh());
    assert!(row("eps_2").contains("paper-universal"));
    assert!(row("delta0").contains("external-nonconstructive"));
    assert!(row("C1").contains("derived"));
}

#[test]
fn constants_overrides_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(
        &["constants", "--delta0", "6.5", "--format", "json", "--out", "res"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entry = |sym: &str| {
        v["entries"]
            .as_array()
            .unwrap()
            .iter()
            .find(|e| e["symbol"] == sym)
            .unwrap()
            .clone()
    };
    assert_eq!(entry("delta")["value"], 3.25);
    assert_eq!(entry("eps_2")["provenance"], "paper-universal");
    assert_eq!(v["schema_version"], 1);
    let saved = std::fs::read_to_string(dir.path().join("res/constants.json")).unwrap();
    assert_eq!(saved, stdout(&o));

    // lambda near 1 drives A(S) toward zero
    let hi = bin(&["constants", "--lambda", "0.99", "--format", "json"], dir.path());
    let lo = bin(&["constants", "--format", "json"], dir.path());
    let a = |o: &Output| {
        let v: serde_json::Value = serde_json::from_str(&stdout(o)).unwrap();
        v["entries"]
            .as_array()
            .unwrap()
            .iter()
            .find(|e| e["symbol"] == "A(S)")
            .unwrap()["value"]
            .as_f64()
            .unwrap()
    };
    assert!(a(&hi) < a(&lo) * 1e-10 && a(&hi) > 0.0);
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&bin(&["constants", "--genus", "1"], dir.path())), 2);
    assert_eq!(
        code(&bin(&["constants", "--genus", "2,3", "--punctures", "1"], dir.path())),
        2
    );
    assert_eq!(code(&bin(&["constants", "--lambda", "1.5"], dir.path())), 2);
    assert_eq!(code(&bin(&["constants", "--ldrill", "3"], dir.path())), 2);
    assert_eq!(code(&bin(&["verify", "--suite", "bogus"], dir.path())), 2);
    assert_eq!(code(&bin(&["flow", "--model", "bogus"], dir.path())), 2);
    assert_eq!(code(&bin(&["flow", "--start", "-1,0"], dir.path())), 2);
    assert_eq!(code(&bin(&["flow", "--epsilon", "0.5"], dir.path())), 2);
    assert_eq!(code(&bin(&["constants", "--config", "missing.toml"], dir.path())), 2);
}

#[test]
fn flow_default_grid_writes_traces() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["flow", "--out", "run"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let run = dir.path().join("run");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run.join("flow_summary.json")).unwrap()).unwrap();
    let runs = summary["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 100);
    assert!(runs
        .iter()
        .all(|r| r["status"] == "converged" && r["certificate"]["holds"] == true));
    assert!(runs.iter().any(|r| r["surgeries"].as_u64().unwrap() > 0));
    let csv = std::fs::read_to_string(run.join("trace_000.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,x0,x1,f,gradnorm,event");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0.0000000000000000e0");
    assert_eq!(first[5], "start");
    // every float carries 17 significant digits
    for field in &first[..5] {
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.len(), 18, "{field}");
    }
    let trace: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run.join("trace_099.json")).unwrap()).unwrap();
    assert_eq!(trace["schema_version"], 1);

    // same configuration, same bytes
    let again = bin(&["flow", "--out", "run2"], dir.path());
    assert_eq!(code(&again), 0);
    for name in ["flow_summary.json", "trace_000.csv", "trace_042.json"] {
        assert_eq!(
            std::fs::read(run.join(name)).unwrap(),
            std::fs::read(dir.path().join("run2").join(name)).unwrap()
        );
    }
}

#[test]
fn flow_outcomes_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let q = bin(&["flow", "--model", "quadratic", "--out", "q"], dir.path());
    assert_eq!(code(&q), 0);
    assert!(stdout(&q).contains("after 0 surgeries"));

    let b = bin(
        &["flow", "--start", "0.001,1.8", "--budget", "0", "--out", "b"],
        dir.path(),
    );
    assert_eq!(code(&b), 5);
    assert!(stdout(&b).contains("surgery_budget_exceeded"));
    let s = std::fs::read_to_string(dir.path().join("b/flow_summary.json")).unwrap();
    assert!(s.contains("\"surgery_budget_exceeded\""));

    let s = bin(&["flow", "--start", "0.001,1.8", "--out", "s"], dir.path());
    assert_eq!(code(&s), 0);
    assert!(stdout(&s).contains("after 1 surgeries"));

    // a huge fixed step leaves the domain immediately
    let h = bin(
        &[
            "flow",
            "--start",
            "0.001,1.8",
            "--method",
            "heun",
            "--step",
            "0.5",
            "--out",
            "h",
        ],
        dir.path(),
    );
    assert_eq!(code(&h), 3);
    let t = bin(
        &["flow", "--start", "0.001,1.8", "--t-max", "0.01", "--out", "t"],
        dir.path(),
    );
    assert_eq!(code(&t), 3);
}

#[test]
fn flow_from_manifest_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let manifest = format!(
        "name = \"saddle\"\nvariables = [\"x\", \"y\"]\nf = \"x^4 - (1 - 2*y^2)*x^2 + 1 + y^4\"\nfloor = 0.75\nepsilon = 0.3\n\n\
         [domain]\nlower = [0.0, -2.0]\nupper = [2.0, 2.0]\nopen_lower = [true, false]\n\n\
         [separation]\nn = 1\ndelta = {r:?}\n\n[[degenerate]]\npoint = [0.0, 0.0]\nrestart_direction = [1.0, 0.0]\n\n\
         [[degenerate]]\npoint = [{r:?}, 0.0]\n"
    );
    std::fs::write(dir.path().join("m.toml"), manifest).unwrap();
    let a = bin(
        &["flow", "--manifest", "m.toml", "--start", "0.001,1.8", "--out", "a"],
        dir.path(),
    );
    let b = bin(&["flow", "--start", "0.001,1.8", "--out", "b"], dir.path());
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(stdout(&a).lines().next(), stdout(&b).lines().next());

    std::fs::write(dir.path().join("bad.toml"), "name = \"x\"").unwrap();
    assert_eq!(code(&bin(&["flow", "--manifest", "bad.toml"], dir.path())), 2);
}

#[test]
fn verify_reports_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "suite = \"constants\"\nseed = 5\nout = \"rep\"\n",
    )
    .unwrap();
    let o = bin(&["verify", "--config", "run.toml"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("PASS constants/drilling_simplex"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("rep/verify_report.json")).unwrap()).unwrap();
    assert_eq!(v["seed"], 5);
    assert_eq!(v["suites"].as_array().unwrap().len(), 1);
    assert_eq!(v["suites"][0]["suite"], "constants");
    // the flag beats the file
    let o = bin(
        &["verify", "--config", "run.toml", "--seed", "6", "--format", "json"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 6);

    std::fs::write(dir.path().join("typo.toml"), "sede = 5\n").unwrap();
    assert_eq!(code(&bin(&["verify", "--config", "typo.toml"], dir.path())), 2);
}
