use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_logspace"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn lebesgue(dir: &Path, name: &str, measure: f64) {
    write(
        dir,
        name,
        &format!(r#"{{"components":[{{"weight_label":"aleph_0","measure":{measure}}}]}}"#),
    );
}

#[test]
fn norm_of_indicator() {
    let dir = TempDir::new().unwrap();
    lebesgue(dir.path(), "s.json", 1.0);
    write(
        dir.path(),
        "f.json",
        r#"{"space":"s.json","step_parts":[[{"length":0.4,"value":1},{"length":0.6,"value":0}]]}"#,
    );
    let out = run(dir.path(), &["norm", "f.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out)["fnorm"].as_f64().unwrap();
    assert!((v - 0.4 * std::f64::consts::LN_2).abs() < 1e-15);
    assert!((v - 0.27726).abs() < 1e-5);
}

#[test]
fn distance_between_functions() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "s.json", r#"{"atoms":[{"weight":0.5},{"weight":1.5}]}"#);
    write(dir.path(), "f.json", r#"{"space":"s.json","atom_values":[1,0]}"#);
    write(dir.path(), "g.json", r#"{"space":"s.json","atom_values":[0,3]}"#);
    let out = run(dir.path(), &["dist", "f.json", "g.json"]);
    assert_eq!(out.status.code(), Some(0));
    let expected = 0.5 * 2f64.ln() + 1.5 * 4f64.ln();
    assert!((json(&out)["distance"].as_f64().unwrap() - expected).abs() < 1e-15);
}

#[test]
fn passport_report() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "s.json",
        r#"{"atoms":[{"weight":0.2},{"weight":0.7}],"components":[
            {"weight_label":"aleph_1","measure":1},
            {"weight_label":"aleph_0","measure":0.5},
            {"weight_label":"aleph_1","measure":2}]}"#,
    );
    let out = run(dir.path(), &["passport", "s.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["atom_weights"], serde_json::json!([0.7, 0.2]));
    assert_eq!(v["rows"][0]["weight_label"], "aleph_0");
    assert_eq!(v["rows"][1]["alpha"], 3.0);
}

#[test]
fn decide_equal_spaces_gives_identity() {
    let dir = TempDir::new().unwrap();
    lebesgue(dir.path(), "a.json", 1.0);
    let out = run(dir.path(), &["decide", "a.json", "a.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["isometric"], true);
    assert_eq!(v["refutation"], Value::Null);
    let seg = &v["witness"]["segments"][0];
    assert_eq!(seg["source_start"], 0.0);
    assert_eq!(seg["target_start"], 0.0);
    assert_eq!(seg["source_length"], 1.0);
    assert_eq!(seg["target_length"], 1.0);
}

#[test]
fn decide_different_totals() {
    let dir = TempDir::new().unwrap();
    lebesgue(dir.path(), "a.json", 1.0);
    lebesgue(dir.path(), "b.json", 2.0);
    let out = run(dir.path(), &["decide", "a.json", "b.json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["isometric"], false);
    assert_eq!(v["witness"], Value::Null);
    let r = &v["refutation"];
    assert_eq!(r["kind"], "TotalMeasureMismatch");
    assert_eq!(r["t"], 2.0);
    assert!(r["lhs"].as_f64().unwrap() > r["rhs"].as_f64().unwrap());
}

#[test]
fn build_apply_and_verify_signed_swap() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "s.json", r#"{"atoms":[{"weight":0.5},{"weight":0.5}]}"#);
    write(dir.path(), "u.json", r#"{"atom_map":[1,0],"signs":[1,-1]}"#);
    write(dir.path(), "f.json", r#"{"space":"s.json","atom_values":[2,5]}"#);

    let out = run(dir.path(), &["build-iso", "s.json", "s.json", "u.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verification"]["pass"], true);

    let out = run(dir.path(), &["apply", "s.json", "s.json", "u.json", "f.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["atom_values"], serde_json::json!([-5.0, 2.0]));

    let out = run(dir.path(), &["verify", "s.json", "s.json", "u.json", "--trials", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["trials"], 30);
}

#[test]
fn verify_rejects_weight_mismatch() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "a.json", r#"{"atoms":[{"weight":0.5},{"weight":0.5}]}"#);
    write(dir.path(), "b.json", r#"{"atoms":[{"weight":0.4},{"weight":0.6}]}"#);
    write(dir.path(), "u.json", r#"{"atom_map":[0,1]}"#);
    let out = run(dir.path(), &["verify", "a.json", "b.json", "u.json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert_eq!(v["violated_theorem"], "measure-preservation");
}

#[test]
fn decompose_permutation_and_mixing() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "s.json", r#"{"atoms":[{"weight":1},{"weight":1}]}"#);
    write(dir.path(), "p.json", r#"{"matrix":[[0,-1],[1,0]]}"#);
    write(dir.path(), "m.json", r#"{"matrix":[[0.5,0.5],[0.5,0.5]]}"#);

    let out = run(dir.path(), &["decompose", "s.json", "s.json", "p.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["isometry"]["atom_map"], serde_json::json!([1, 0]));
    assert_eq!(v["isometry"]["signs"], serde_json::json!([1.0, -1.0]));

    let out = run(dir.path(), &["decompose", "s.json", "s.json", "m.json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["error"], "DisjointnessViolation");
    assert_eq!(v["violated_theorem"], "disjointness-preservation");
}

#[test]
fn decompose_duplicating_map() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "one.json", r#"{"atoms":[{"weight":1}]}"#);
    write(dir.path(), "two.json", r#"{"atoms":[{"weight":0.5},{"weight":0.5}]}"#);
    write(dir.path(), "dup.json", r#"{"matrix":[[1],[1]]}"#);
    let out = run(dir.path(), &["decompose", "one.json", "two.json", "dup.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["isometry"], Value::Null);
    assert_eq!(v["atom_images"], serde_json::json!([[0, 1]]));
    assert_eq!(v["lambda_density"], serde_json::json!([1.0, 1.0]));
}

#[test]
fn separate_identity_candidate() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "mu.json", r#"{"atoms":[{"weight":1}]}"#);
    write(dir.path(), "nu.json", r#"{"atoms":[{"weight":2}]}"#);
    let out = run(dir.path(), &["separate", "mu.json", "nu.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["threshold"]["lambda_star"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    let c = &v["certificate"];
    assert_eq!(c["lambda"], 3.0);
    assert!((c["lhs"].as_f64().unwrap() - 2.0 * 4f64.ln()).abs() < 1e-14);
    assert!((c["rhs"].as_f64().unwrap() - 4f64.ln()).abs() < 1e-14);

    let out = run(dir.path(), &["separate", "mu.json", "mu.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("EqualTotals"));
}

#[test]
fn selftest_passes_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = run(dir.path(), &["selftest", "--seed", "11"]);
    let b = run(dir.path(), &["selftest", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["pass"], true);
    assert!(v["suites"].as_array().unwrap().len() >= 8);
}

#[test]
fn selftest_fault_hook_fails_named_suite() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["selftest", "--fault", "separation-certificate"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    for suite in v["suites"].as_array().unwrap() {
        let faulty = suite["name"] == "separation-certificate";
        assert_eq!(suite["pass"], !faulty);
    }
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "neg.json", r#"{"atoms":[{"weight":-1}]}"#);
    write(dir.path(), "bad.json", "{\n  \"atoms\": [\n    {\"weight\": }\n  ]\n}");
    write(dir.path(), "hi.json", r#"{"components":[{"weight_label":"aleph_1","measure":1,"realized":true}]}"#);

    let out = run(dir.path(), &["passport", "neg.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("InvalidMeasure"));

    let out = run(dir.path(), &["passport", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    assert_eq!(run(dir.path(), &["passport", "hi.json"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["passport", "missing.json"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["frobnicate", "missing.json"]).status.code(), Some(2));
}

#[test]
fn out_file_is_complete_or_absent() {
    let dir = TempDir::new().unwrap();
    lebesgue(dir.path(), "a.json", 1.0);
    let target = dir.path().join("report.json");

    let out = run(dir.path(), &["decide", "a.json", "a.json", "--out", "report.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["isometric"], true);

    let fresh = dir.path().join("never.json");
    let out = run(dir.path(), &["decide", "a.json", "nope.json", "--out", "never.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!fresh.exists());
    let leftovers: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty(), "{leftovers:?}");
}

#[test]
fn reports_round_trip_floats() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "s.json", r#"{"atoms":[{"weight":0.1},{"weight":0.7000000000000001}]}"#);
    write(dir.path(), "f.json", r#"{"space":"s.json","atom_values":[0.30000000000000004,1e-300]}"#);
    let out = run(dir.path(), &["norm", "f.json"]);
    let reported = json(&out)["fnorm"].as_f64().unwrap();
    let expected = 0.1 * 0.30000000000000004f64.ln_1p() + 0.7000000000000001 * 1e-300f64.ln_1p();
    assert_eq!(reported.to_bits(), expected.to_bits());
}
