use std::process::{Command, Output};

use serde_json::Value;

fn fhharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fhharm"))
        .args(args)
        .env("FHHARM_THREADS", "1")
        .output()
        .expect("spawn fhharm")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn axial_pretty() {
    let out = fhharm(&["--pretty", "axial", "--m", "2", "--N", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("x1^2"), "{text}");
    assert!(text.contains("1/2 x2^2"), "{text}");
}

#[test]
fn envelope_fields() {
    let v = json(&fhharm(&["axial", "--m", "3"]));
    assert_eq!(v["mode"], "literal");
    assert_eq!(v["precision_bits"], 256);
    assert_eq!(v["config"]["command"]["command"], "axial");
    assert_eq!(v["config"]["run"]["N"], 3);
}

#[test]
fn density_ratio_near_target() {
    let v = json(&fhharm(&["density", "--k", "1", "--ell", "5", "--T", "100000000"]));
    assert_eq!(v["data"]["report"]["count"], 499_992);
    assert_eq!(v["data"]["report"]["target"], "1/200");
}

#[test]
fn density_boundaries_assert_monotonicity() {
    let v = json(&fhharm(&["density", "--T", "1000000", "--boundaries", "20"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["data"]["nondecreasing"], true);
}

#[test]
fn decompose_and_primitive() {
    let v = json(&fhharm(&["decompose", "--H", "x1 x2 + x3"]));
    assert!(v["data"]["components"].as_array().unwrap().len() == 2);
    let v = json(&fhharm(&["primitive", "--H", "x1^2 - x2^2", "--k", "2"]));
    assert_eq!(v["data"]["inverse_holds"], true);
}

#[test]
fn relaxed_selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"mode": "relaxed", "k_max": 3, "dense": {"generators": ["1", "x3", "x1 x2"]}}"#).unwrap();
    let v = json(&fhharm(&["--config", cfg.to_str().unwrap(), "selftest"]));
    assert_eq!(v["passed"], true);
}

#[test]
fn empty_plan_selftest_is_trivial() {
    let v = json(&fhharm(&["--relaxed", "--k-max", "0", "selftest"]));
    assert_eq!(v["passed"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["--relaxed", "--k-max", "3", "plan"];
    let a = fhharm(&args);
    let b = fhharm(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["plan_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn csv_output_has_comment_header() {
    let out = fhharm(&["--relaxed", "--k-max", "3", "--format", "csv", "plan"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# mode: relaxed"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("k,F_k,m_k")));
}

#[test]
fn invalid_input_exits_with_two() {
    assert_eq!(fhharm(&["axial", "--m", "2", "--N", "1"]).status.code(), Some(2));
    assert_eq!(fhharm(&["decompose", "--H", "x1^2"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"bogus": true}"#).unwrap();
    assert_eq!(fhharm(&["--config", cfg.to_str().unwrap(), "axial", "--m", "1"]).status.code(), Some(2));
    let cfg = dir.path().join("prec.json");
    std::fs::write(&cfg, r#"{"precision": 64}"#).unwrap();
    assert_eq!(fhharm(&["--config", cfg.to_str().unwrap(), "axial", "--m", "1"]).status.code(), Some(2));
}
