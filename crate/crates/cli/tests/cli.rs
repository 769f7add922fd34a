use std::process::{Command, Output};

use serde_json::Value;

fn takagi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_takagi")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

#[test]
fn eval_reports_maximum_and_singular_value() {
    let out = takagi(&["eval", "--x", "0.(01)", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["command"], "eval");
    assert_eq!(doc["rows"][0]["tau"], "2/3");
    assert_eq!(doc["rows"][0]["tau_s"], "1/1");
    assert_eq!(doc["rows"][0]["in_omega"], true);
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(summary.contains("tau = 2/3"), "{summary}");
}

#[test]
fn eval_accepts_fractions() {
    let out = takagi(&["eval", "--x", "5/16"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0.0101,5/16,5/8,"), "{}", stdout(&out));
}

#[test]
fn levelset_csv_lists_the_six_reals() {
    let out = takagi(&["levelset", "--y", "5/8", "--depth", "12", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# command: levelset");
    assert!(lines[1].starts_with("# config: "));
    assert!(lines[2].starts_with("# version: "));
    assert_eq!(lines[3], "# seed: 0");
    assert_eq!(lines[4], "kind,left,right,point");
    for v in ["5/16", "3/8", "7/16", "9/16", "5/8", "11/16"] {
        assert!(text.contains(&format!("confirmed,{v},{v},")), "missing {v}");
    }
}

#[test]
fn output_file_and_summary_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.csv");
    let out = takagi(&["dim", "--r-max", "16", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("dim: spectrum"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("r,alpha,count,gamma_dim_lo,gamma_dim_hi,paper_bound"));
}

#[test]
fn svg_documents() {
    let out = takagi(&["eval", "--x", "1/3", "--depth", "10", "--format", "svg"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout(&out);
    assert!(doc.starts_with("<svg"));
    let points = doc.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
    assert_eq!(points.split_whitespace().count(), 1025);

    let out = takagi(&["measure", "--what", "staircase", "--depth", "12", "--format", "svg"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("<polyline"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(takagi(&["nonsense"]).status.code(), Some(2));
    assert_eq!(takagi(&["levelset", "--y", "1/2", "--depth", "65"]).status.code(), Some(2));
    assert_eq!(takagi(&["eval", "--x", "0.2"]).status.code(), Some(2));
    assert_eq!(takagi(&["omega", "--what", "membership"]).status.code(), Some(2));
    assert_eq!(takagi(&["omega", "--format", "svg"]).status.code(), Some(2));
    assert_eq!(takagi(&["dim", "--r-max", "1"]).status.code(), Some(2));
}

#[test]
fn help_and_version_exit_cleanly() {
    assert_eq!(takagi(&["--help"]).status.code(), Some(0));
    assert_eq!(takagi(&["--version"]).status.code(), Some(0));
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_takagi"))
        .args(["omega", "--what", "counts"])
        .env("TAKAGI_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_takagi"))
        .args(["omega", "--what", "counts"])
        .env("TAKAGI_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_passes_with_seed() {
    let out = takagi(&["verify", "--suite", "measure", "--samples", "300", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("# seed: 42"));
}
