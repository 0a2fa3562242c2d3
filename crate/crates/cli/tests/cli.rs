use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_f2orders")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn has_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_f64(),
        Value::Array(xs) => xs.iter().any(has_float),
        Value::Object(m) => m.values().any(has_float),
        _ => false,
    }
}

#[test]
fn sign_of_commutator() {
    let o = run(&["sign", "abAB"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "+");
}

#[test]
fn cmp_and_arch() {
    let o = run(&["cmp", "b", "a"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "<");
    assert_eq!(stdout(&run(&["arch", "a", "abAB"])), ">>");
    assert_eq!(stdout(&run(&["arch", "a", "aa"])), "~~");
}

#[test]
fn order_flag_accepts_file_and_inline_json() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("order.json");
    fs::write(&p, r#"{"base":"magnus","transforms":[{"kind":"convex_flip","params":{"threshold":"AA"}}]}"#).unwrap();
    assert_eq!(stdout(&run(&["sign", "abAB", "--order", p.to_str().unwrap()])), "-");
    assert_eq!(stdout(&run(&["sign", "a", "--order", p.to_str().unwrap()])), "+");
    assert_eq!(stdout(&run(&["sign", "b", "--order", r#"{"transforms":[{"kind":"reverse"}]}"#])), "-");
    assert_eq!(stdout(&run(&["cmp", "b", "a", "--order", "magnus-swapped"])), ">");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["sign", "abx"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["sign", "a", "--order", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["sign", "a", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn truncation_exceeded_exits_1() {
    let o = run(&["sign", "abAB", "--degree", "1", "--max-degree", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn saturate_reports_contradiction() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("report.json");
    let o = run(&["saturate", "--positives", "a,b", "--negatives", "ab", "--length", "2", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = read_json(&p);
    assert_eq!(r["outcome"], "Contradiction");
    assert_eq!(r["exhausted"], false);
    assert_eq!(r["config"]["length_bound"], 2);
    assert!(!has_float(&r));

    let o = run(&["saturate", "--positives", "a,b", "--length", "2", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = read_json(&p);
    assert_eq!(r["outcome"], "Consistent");
    let derived: Vec<&str> = r["derivations"].as_array().unwrap().iter().map(|d| d["word"].as_str().unwrap()).collect();
    assert!(derived.contains(&"ab"));
}

#[test]
fn witness_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cert.json");
    let args = ["witness", "--positives", "a,b", "--length", "4", "--out", p.to_str().unwrap()];
    assert_eq!(run(&args).status.code(), Some(0));
    let first = fs::read(&p).unwrap();
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(first, fs::read(&p).unwrap(), "witness output is deterministic");

    let cert = read_json(&p);
    assert!(!has_float(&cert));
    assert_eq!(cert["witness_word"], "abAB");
    let v = run(&["verify", p.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));

    let mut bad = cert.clone();
    let flipped = if bad["signs"]["alternative"] == "+" { "-" } else { "+" };
    bad["signs"]["alternative"] = Value::from(flipped);
    let t = dir.path().join("tampered.json");
    fs::write(&t, serde_json::to_string_pretty(&bad).unwrap()).unwrap();
    let v = run(&["verify", t.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&v)).unwrap();
    assert_eq!(report["valid"], false);
}

#[test]
fn census_budget_exhaustion_is_reported() {
    let o = run(&["census", "--positives", "a,b", "--length", "2", "--budget", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["exhausted"], true);
}

#[test]
fn census_counts_completions() {
    let o = run(&["census", "--positives", "a,b", "--length", "2", "--conj", "2"]);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["count"], 2);
    let o = run(&["census", "--positives", "a,b", "--length", "2", "--conj", "2", "--mode", "left"]);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["count"], 4);
}

#[test]
fn sweep_small() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("sweep.json");
    let o = run(&["sweep", "--max-constraints", "1", "--max-word-length", "2", "--length", "4", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = read_json(&p);
    assert_eq!(r["certified"], r["total"]);
    assert_eq!(r["verified"], r["total"]);
    assert!(!has_float(&r));
}

#[test]
fn dynreal_writes_stage_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("stage.json");
    let svg = dir.path().join("realization.svg");
    let o = run(&[
        "dynreal",
        "--elements",
        "30",
        "--tau-length",
        "2",
        "--word",
        "ab",
        "--out",
        out.to_str().unwrap(),
        "--plot",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = read_json(&out);
    assert_eq!(r["N"], 30);
    assert_eq!(r["t"][0]["word"], "e");
    assert_eq!(r["t"][0]["value"], "0");
    let tau = r["tau"].as_array().unwrap();
    assert_eq!(tau.len(), 2);
    assert_eq!(tau[0]["class"], "B");
    assert_eq!(tau[0]["endpoints"][0], "1/3");
    assert!(!has_float(&r));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let o = run(&["dynreal", "--elements", "5", "--format", "csv"]);
    assert!(stdout(&o).starts_with("word,t\ne,0\n"));
}

#[test]
fn wreath_demo_passes() {
    for instance in ["f2-magnus", "lamplighter"] {
        let o = run(&["wreath-demo", "--instance", instance, "--samples", "300", "--seed", "5"]);
        assert_eq!(o.status.code(), Some(0));
        let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(r["passed"], true);
        assert_eq!(r["config"]["seed"], 5);
    }
}

#[test]
fn class_census_csv() {
    let o = run(&["class-census", "--length", "4", "--format", "csv"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "class,representative,count");
    assert!(rows.iter().any(|r| r.starts_with("AB,")));
}
