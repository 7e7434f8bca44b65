use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lame-susy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().unwrap(), v)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn solve_at_worked_example_parameters_writes_reproducible_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = ["solve", "--m", "3", "--ell", "2", "--ksq", "0.9", "--E", "8", "--out", out];
    assert_eq!(run(&args).status.code(), Some(0));
    let report = &read_json(&dir.path().join("solve.json"))["report"];
    for sign in ["plus", "minus"] {
        assert!(f(&report["residual"][sign]["max_relative"]) < 1e-6);
    }
    assert_eq!(report["solution"]["a"].as_array().unwrap().len(), 6);
    assert_eq!(report["solution"]["b_re"].as_array().unwrap().len(), 5);
    let csv = std::fs::read_to_string(dir.path().join("solve.csv")).unwrap();
    assert!(csv.lines().any(|l| l == "x,psi_plus_re,psi_plus_im,psi_minus_re,psi_minus_im"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 802);
}

#[test]
fn lame_reduction_and_ansatz_cross_check() {
    let (code, v) = json_stdout(&["solve", "--m", "2", "--ell", "0", "--ksq", "0.5", "--E", "1.3", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["lame_reduction"], Value::Bool(true));
    assert_eq!(v["report"]["solution"]["a"].as_array().unwrap().len(), 3);

    let (code, v) = json_stdout(&["solve", "--m", "1", "--ell", "1", "--ksq", "0.7", "--E", "2.2", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["ansatz_cross_check"]["pass"], Value::Bool(true));
    assert!(f(&v["data"]["x"][0]) == 0.0);
}

#[test]
fn band_edges_from_the_command_line() {
    let (code, v) = json_stdout(&["bands", "--format", "json"]);
    assert_eq!(code, 0);
    let edges: Vec<f64> = v["report"]["band_structure"]["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(f)
        .collect();
    for target in [8.1, 8.1031, 11.7154] {
        assert!(edges.iter().any(|e| (e - target).abs() < 5e-4), "{target} not in {edges:?}");
    }

    let (_, v) = json_stdout(&["bands", "--free-particle", "--E-range", "-1,20", "--format", "json"]);
    let gaps = v["report"]["band_structure"]["gaps"].as_array().unwrap();
    assert!(gaps.iter().all(|g| f(&g[1]) <= 0.0), "{gaps:?}");

    let (_, v) = json_stdout(&["bands", "--m", "1", "--ell", "0", "--ksq", "0.5", "--E-range", "0,5", "--format", "json"]);
    let edges = v["report"]["band_structure"]["edges"].as_array().unwrap();
    for (e, want) in edges.iter().zip([0.5, 1.0, 1.5]) {
        assert!((f(e) - want).abs() < 5e-4);
    }
}

#[test]
fn partner_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |sub: &str| {
        let out = dir.path().join(sub);
        let mut a: Vec<String> = ["partner", "--order", "2", "--eps1", "10", "--eps2", "10.1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        a.extend(["--lambda1", "1", "--lambda2", "-1.5", "--out"].map(String::from));
        a.push(out.to_str().unwrap().to_string());
        a
    };
    for sub in ["a", "b"] {
        let a = args(sub);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_eq!(run(&a).status.code(), Some(0));
    }
    for file in ["partner.csv", "partner.json"] {
        let x = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let y = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(x, y, "{file}");
    }
    let meta = read_json(&dir.path().join("a/partner.json"));
    assert_eq!(meta["report"]["partner"]["periodicity"], "asymptotically-periodic");
    assert!(f(&meta["report"]["max_darboux_deviation"]) < 1e-6);
}

#[test]
fn precondition_failures_exit_with_validation_status() {
    let (code, v) = json_stdout(&["partner", "--eps", "8.1"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "domain");

    let (code, v) = json_stdout(&["partner", "--lambda", "-1"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "nodal-seed");

    let (code, _) = json_stdout(&["solve", "--m", "1", "--ell", "2"]);
    assert_eq!(code, 2);
    assert_eq!(run(&["solve", "--no-such-flag"]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_detects_a_corrupted_coefficient() {
    let (code, v) = json_stdout(&["verify"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["report"]["pass"], Value::Bool(true));

    let (code, v) = json_stdout(&["verify", "--corrupt-coefficient", "3"]);
    assert_eq!(code, 3);
    let failed: Vec<&str> = v["report"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == Value::Bool(false))
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(!failed.is_empty() && failed.iter().all(|n| *n == "coefficients.recurrence"));

    let (code, v) = json_stdout(&["verify", "--m", "1", "--ell", "1", "--E", "2.5"]);
    assert_eq!(code, 0);
    assert!(v["report"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "ansatz.product_matches_closed_form" && c["pass"] == Value::Bool(true)));
}

#[test]
fn config_file_sits_between_defaults_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"m": 2, "ell": 1, "ksq": 0.6, "E": 4.0}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let (code, v) = json_stdout(&["--config", c, "--E", "5", "--show-config"]);
    assert_eq!(code, 0);
    assert_eq!((f(&v["E"]), v["m"].as_u64(), f(&v["ksq"])), (5.0, Some(2), 0.6));
    assert_eq!(v["samples"].as_u64(), Some(801));

    let (code, v) = json_stdout(&["solve", "--config", c, "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(f(&v["config"]["E"]), 4.0);
    assert_eq!(f(&v["report"]["solution"]["E"]), 4.0);
}
