use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn matbeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matbeta")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    matbeta(args).status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    let mut rows = vec![header];
    rows.extend(r.records().map(|x| x.unwrap().iter().map(String::from).collect()));
    rows
}

fn column(rows: &[Vec<String>], name: &str) -> Vec<String> {
    let i = rows[0].iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows[1..].iter().map(|r| r[i].clone()).collect()
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&["verify", "euler", "--alpha", "2", "--beta", "3"]), 0);
    assert_eq!(code(&["verify", "wilson", "--form", "published"]), 1);
    assert_eq!(code(&["verify", "gindikin-gamma", "--field", "R", "--n", "2", "--s", "1,0.2"]), 2);
    assert_eq!(code(&["verify", "lattice-zeta", "--B", "10"]), 3);
    assert_eq!(code(&["verify", "lattice-zeta", "--alpha", "10,7", "--beta", "-5,-4", "--B", "100000"]), 4);
}

#[test]
fn usage_errors_are_invalid() {
    assert_eq!(code(&["verify", "no-such-identity"]), 2);
    assert_eq!(code(&["verify", "euler", "--gamma", "1"]), 2);
    assert_eq!(code(&["verify", "euler", "--alpha", "x"]), 2);
    assert_eq!(code(&["--samples", "0", "verify", "euler"]), 2);
    assert_eq!(code(&["--engine", "bogus", "verify", "euler"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["--help"]), 0);
    let o = matbeta(&["verify", "euler", "--alpha", "-1"]);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn euler_lhs_value() {
    let o = matbeta(&["--json", "verify", "euler", "--alpha", "2", "--beta", "3"]);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((r["lhs"]["value"].as_f64().unwrap() - 1.0 / 12.0).abs() < 1e-12);
    assert_eq!(r["verdict"], "pass");
}

#[test]
fn json_reports_are_deterministic() {
    let args = ["--json", "--engine", "mc", "--seed", "9", "--samples", "20000", "verify", "hua-symm", "--n", "2"];
    let a = stdout(&matbeta(&args));
    assert_eq!(a, stdout(&matbeta(&args)));
    let r: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(r["lhs"]["engine"], "mc");
    assert_eq!(r["lhs"]["seed"], 9);
}

#[test]
fn list_json_carries_notes() {
    let o = matbeta(&["list", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let all: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(all.len() >= 20);
    let g = all.iter().find(|i| i["id"] == "gindikin-gamma").unwrap();
    assert!(g["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("sign convention")));
    assert!(g["params"].as_array().unwrap().iter().any(|p| p["name"] == "s"));
}

#[test]
fn tabulate_selberg_grid() {
    let o = matbeta(&["tabulate", "selberg-box", "--grid", "n=1,2", "--grid", "gamma=0.5,1,2", "--alpha", "2", "--beta", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len() - 1, 6);
    // n = 1 rows do not depend on γ
    let rhs = column(&rows, "rhs");
    assert_eq!(rhs[0], rhs[1]);
    assert_eq!(rhs[1], rhs[2]);
}

#[test]
fn tabulate_lattice_tail_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeta.csv");
    let p = path.to_str().unwrap();
    let status = code(&["tabulate", "lattice-zeta", "--n", "1", "--grid", "B=10,100,1000", "--lhs", "-o", p]);
    assert_eq!(status, 3);
    let rows = csv_rows(&fs::read_to_string(&path).unwrap());
    let tail: Vec<f64> = column(&rows, "errbound").iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(tail.len(), 3);
    assert!(tail.windows(2).all(|w| w[1] < w[0]), "{tail:?}");
}

#[test]
fn tabulate_rayleigh_rhs_is_finite() {
    let o = matbeta(&["tabulate", "rayleigh-d", "--n", "2", "--grid", "d=0.5,1,2,4"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    let rhs = column(&rows, "rhs");
    assert_eq!(rhs.len(), 4);
    assert!(rhs.iter().all(|s| s.parse::<f64>().unwrap().is_finite()));
}

#[test]
fn tabulate_marks_failing_rows() {
    let o = matbeta(&["tabulate", "euler", "--grid", "alpha=2,-1", "--beta", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let rows = csv_rows(&stdout(&o));
    let err = column(&rows, "error");
    assert!(err[0].is_empty());
    assert!(!err[1].is_empty());
}

#[test]
fn config_file_sets_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# quick run\nseed = 5\nsamples = 3000\njson = true\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = matbeta(&["--config", c, "verify", "hua-symm", "--n", "2", "--engine", "mc"]);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["lhs"]["seed"], 5);
    assert_eq!(r["lhs"]["samples"], 3000);
    // command line overrides the file
    let o = matbeta(&["--config", c, "--seed", "6", "verify", "hua-symm", "--n", "2", "--engine", "mc"]);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["lhs"]["seed"], 6);
    assert_eq!(code(&["--config", dir.path().join("missing").to_str().unwrap(), "list"]), 2);
    fs::write(&cfg, "seed 5\n").unwrap();
    assert_eq!(code(&["--config", c, "list"]), 2);
}

#[test]
fn sample_sweep_summarizes() {
    let o = matbeta(&["--samples", "5000", "sample", "hua-symm", "--n", "2", "--seeds", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("|z| > 3 in"));
    assert_eq!(text.lines().filter(|l| l.trim_end().ends_with("pass") || l.trim_end().ends_with("fail")).count(), 10);
}
