//! End-to-end CLI behavior: output schemas, exit codes and report
//! determinism, driven through the compiled binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_artinres"))
}

fn rings_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../rings")
        .canonicalize()
        .unwrap()
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .current_dir(rings_dir())
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn ring_info_reports_classification() {
    let out = run(&["ring-info", "x2y2.json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["dim"], 4);
    assert_eq!(v["hilbert"], serde_json::json!([1, 2, 1]));
    assert_eq!(v["short"], true);
    assert_eq!(v["ci4_candidate"], true);
}

#[test]
fn ring_info_m2zero_is_not_short() {
    let out = run(&["ring-info", "m2zero.json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["dim"], 3);
    assert_eq!(v["hilbert"], serde_json::json!([1, 2]));
    assert_eq!(v["short"], false);
}

#[test]
fn ring_info_rejects_malformed_file() {
    let dir = std::env::temp_dir().join("artinres-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = bin().args(["ring-info"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ring_info_rejects_nonlocal_relation() {
    let dir = std::env::temp_dir().join("artinres-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nonlocal.json");
    std::fs::write(
        &path,
        r#"{"name":"bad","char":7,"vars":["x"],"relations":["x - 1"],"graded":false,"truncate":3}"#,
    )
    .unwrap();
    let out = bin().args(["ring-info"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("constant term"), "stderr: {err}");
}

#[test]
fn resolve_periodic_cyclic_module() {
    let out = run(&["resolve", "x2y2.json", "mod_ax.json", "--stages", "10"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["betti"], serde_json::json!(vec![1; 11]));
    assert_eq!(v["lengths"], serde_json::json!(vec![2; 11]));
    assert_eq!(v["periodic"]["i"], 0);
    assert_eq!(v["periodic"]["j"], 1);
    assert_eq!(v["truncated"], false);
}

#[test]
fn resolve_free_module() {
    let out = run(&["resolve", "x2y2.json", "mod_free.json", "--stages", "4"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["betti"], serde_json::json!([1, 0, 0, 0, 0]));
}

#[test]
fn resolve_stage_zero_gives_beta0_only() {
    let out = run(&["resolve", "x2y2.json", "mod_ax.json", "--stages", "0"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["betti"], serde_json::json!([1]));
}

#[test]
fn resolve_truncation_exits_three() {
    let out = run(&[
        "resolve",
        "m2zero.json",
        "mod_k.json",
        "--stages",
        "12",
        "--cap",
        "24",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let v = json_of(&out);
    assert_eq!(v["truncated"], true);
    // partial table still present
    assert!(v["betti"].as_array().unwrap().len() > 1);
}

#[test]
fn resolve_csv_output() {
    let out = run(&[
        "resolve",
        "x2y2.json",
        "mod_ax.json",
        "--stages",
        "3",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "stage,beta,length");
    assert_eq!(lines[1], "0,1,2");
    assert_eq!(lines.len(), 5);
}

#[test]
fn verify_ci4_passes_and_is_deterministic() {
    let args = [
        "verify", "ci4", "x2y2.json", "--count", "8", "--controls", "3", "--stages", "8",
        "--seed", "1", "--cap", "1024",
    ];
    let out1 = run(&args);
    assert_eq!(out1.status.code(), Some(0));
    let out2 = run(&args);
    assert_eq!(out1.stdout, out2.stdout, "reports must be byte-identical");
    let v = json_of(&out1);
    assert_eq!(v["pass"], true);
    assert_eq!(v["suite"], "ci4");
    assert_eq!(v["config"]["seed"], 1);
    assert!(v["tool"]["version"].is_string());
}

#[test]
fn verify_wrong_ring_class_exits_four() {
    let out = run(&["verify", "ci4", "m2zero.json"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_unknown_suite_exits_four() {
    let out = run(&["verify", "frobnicate", "x2y2.json"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_limits_from_cli() {
    let out = run(&["verify", "limits", "--growth", "2,3,5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["assertions"].as_array().unwrap().len(), 12);
}

#[test]
fn verify_monomial_ci_bad_exponents() {
    let out = run(&["verify", "monomial-ci", "--exponents", "3,3"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_flat_from_cli() {
    let out = run(&[
        "verify", "flat", "uv22.json", "z3.json", "--count", "2", "--controls", "2",
        "--stages", "8", "--cap", "512", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["tensor_ring"]["dim"], 12);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_csv_report() {
    let out = run(&[
        "verify", "ci4", "x2y2.json", "--count", "2", "--controls", "2", "--stages", "6",
        "--cap", "512", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("id,source,length,beta0"));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("artinres-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let _ = std::fs::remove_file(&path);
    let out = run(&[
        "ring-info",
        "x2y2.json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"dim\": 4"));
}
