use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn qmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmf")).args(args).output().expect("qmf runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (i32, Value, PathBuf) {
    let path = dir.join(name);
    let mut all = args.to_vec();
    all.extend(["--out", path.to_str().unwrap()]);
    let out = qmf(&all);
    let report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (out.status.code().unwrap(), report, path)
}

#[test]
fn verify_sy_reports_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r, _) = run_to(dir.path(), "sy.json", &["verify", "sy"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["S_y^2 == lP*I6"], Value::Bool(true));
    assert_eq!(r["schema"], "1");
    assert_eq!(r["config"]["prime"], 313);
    assert_eq!(r["config"]["seed"], 1);
}

#[test]
fn dominance_ranks_contain_126() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r, _) = run_to(dir.path(), "dom.json", &["dominance", "--trials", "3", "--seed", "7"]);
    assert_eq!(code, 0);
    let ranks = r["data"]["ranks"].as_array().unwrap();
    assert_eq!(ranks.len(), 3);
    assert!(ranks.contains(&Value::from(126)));
}

#[test]
fn sl6_first_ext_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r, _) = run_to(dir.path(), "ext.json", &["ext", "--family", "sl6-x5", "--i", "1", "--seed", "11"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["dim_ext"], 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qmf(&["no-such-task"]).status.code(), Some(2));
    assert_eq!(qmf(&["ext", "--family", "sl7-x5"]).status.code(), Some(2));
    assert_eq!(qmf(&["ext", "--family", "sl6-x5", "--i", "4"]).status.code(), Some(2));
}

#[test]
fn exploratory_values_exit_0_as_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r, _) = run_to(dir.path(), "odd.json", &["verify", "moment-odd"]);
    assert_eq!(code, 0);
    let statuses: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["status"].as_str().unwrap()).collect();
    assert!(statuses.contains(&"recorded"));
    assert!(!statuses.contains(&"fail"));
}

#[test]
fn reports_hash_identically_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "moment-even", "--seed", "3"];
    let (_, a, pa) = run_to(dir.path(), "a.json", &args);
    let (_, b, _) = run_to(dir.path(), "a.json", &args);
    assert_eq!(a["hash"], b["hash"]);
    assert_eq!(a["checks"], b["checks"]);
    assert_eq!(a["config"], b["config"]);
    let (_, c, _) = run_to(dir.path(), "c.json", &["verify", "moment-even", "--seed", "4"]);
    let a: Value = serde_json::from_str(&std::fs::read_to_string(pa).unwrap()).unwrap();
    assert_ne!(a["hash"], c["hash"]);
}

#[test]
fn merge_edge_cases() {
    let out = qmf(&["merge"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);

    let dir = tempfile::tempdir().unwrap();
    let (_, _, a) = run_to(dir.path(), "a.json", &["verify", "sy"]);
    let (_, _, b) = run_to(dir.path(), "b.json", &["verify", "sy", "--prime", "331"]);
    let out = qmf(&["merge", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("conflicting primes"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"schema":"0"}"#).unwrap();
    assert_eq!(qmf(&["merge", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn suite_merges_into_at_least_twelve_rows() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r, path) = run_to(dir.path(), "suite.json", &["suite", "--threads", "1"]);
    assert_eq!(code, 0, "{}", r["checks"]);
    assert_eq!(r["data"]["extended"]["status"], "skipped");
    let out = qmf(&["merge", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let m: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(m["rows"].as_array().unwrap().len() >= 12);
}

#[test]
fn export_writes_a_factorization_directory() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("mf");
    let out = qmf(&["export", "mf", "--family", "sl6-x5", "--seed", "11", "--dir", d.to_str().unwrap()]);
    assert!(out.status.success());
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(d.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["n"], 6);
    assert_eq!(manifest["ring"]["weights"], serde_json::json!([1, 1, 1, 1, 1, 1, 2]));
    for sub in ["B", "C"] {
        assert_eq!(std::fs::read_dir(d.join(sub)).unwrap().count(), 36);
    }
    let w = std::fs::read_to_string(d.join("potential.txt")).unwrap();
    assert!(w.lines().all(|l| l.split_whitespace().count() == 8));
}

#[test]
fn extension_field_values_compare_as_field_elements() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r, _) = run_to(dir.path(), "odd331.json", &["verify", "moment-odd", "--prime", "331"]);
    assert_eq!(code, 0, "{}", r["checks"]);
}
