use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn clusterfan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clusterfan"))
        .args(args)
        .env("RUST_LOG", "warn")
        .env_remove("CLUSTERFAN_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("clusterfan-{}-{name}", std::process::id()))
}

#[test]
fn enumerate_prints_counts() {
    let o = clusterfan(&["enumerate", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("seeds=14 mutable_vars=9\n"), "{}", stdout(&o));
    let o = clusterfan(&["enumerate", "--n", "3"]);
    assert!(stdout(&o).starts_with("seeds=2 mutable_vars=2\n"));
}

#[test]
fn truncated_enumeration_is_flagged() {
    let o = clusterfan(&["enumerate", "--n", "6", "--max-depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("truncated=true"), "{text}");
    assert!(text.contains("unexpanded="), "{text}");
}

#[test]
fn graph_export_is_versioned_json() {
    let path = scratch("graph.json");
    let o = clusterfan(&["enumerate", "--n", "4", "--polynomials", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(doc["schema"], "clusterfan/exchange-graph");
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["seeds"].as_array().unwrap().len(), 14);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 21);
    let vars = doc["variables"].as_array().unwrap();
    assert_eq!(vars.len(), 16);
    assert!(vars.iter().all(|v| v["polynomial"].is_string() && v["label"]["rows"].is_array()));
}

#[test]
fn json_format_on_stdout() {
    let o = clusterfan(&["--format", "json", "variables", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["schema"], "clusterfan/variables");
    let vars = doc["variables"].as_array().unwrap();
    assert_eq!(vars.iter().filter(|v| v["frozen"] == false).count(), 9);
    assert!(vars.iter().any(|v| v["tableau"] == "124|3"));
}

#[test]
fn verify_passes_for_n4() {
    let o = clusterfan(&["verify", "--n", "4", "--samples", "10000", "--rng-seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("pairs_checked=91/91"), "{text}");
    assert!(text.contains("10000/10000 covered"), "{text}");
    assert!(text.contains("result: pass"), "{text}");
}

#[test]
fn verify_report_is_reproducible() {
    let args = ["--format", "json", "verify", "--n", "4", "--samples", "2000", "--rng-seed", "3"];
    let (a, b) = (json(&clusterfan(&args)), json(&clusterfan(&args)));
    assert_eq!(a["schema"], "clusterfan/verify-report");
    assert_eq!(a["fan"], b["fan"]);
    assert_eq!(a["coverage"], b["coverage"]);
    assert_eq!(a["coverage"]["covered"], 2000);
}

#[test]
fn single_worker_matches_default() {
    let one = Command::new(env!("CARGO_BIN_EXE_clusterfan"))
        .args(["--format", "json", "enumerate", "--n", "5"])
        .env("CLUSTERFAN_JOBS", "1")
        .env("RUST_LOG", "warn")
        .output()
        .unwrap();
    let many = clusterfan(&["--format", "json", "--jobs", "2", "enumerate", "--n", "5"]);
    let (a, b) = (json(&one), json(&many));
    assert_eq!(a["seeds"], b["seeds"]);
    assert_eq!(a["edges"], b["edges"]);
    assert_eq!(a["variables"], b["variables"]);
}

#[test]
fn project_prints_quotient_coordinates() {
    let o = clusterfan(&["project", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("basis: 3 23 2\n"), "{text}");
    assert!(text.contains("124|3        (1,-1,0)"), "{text}");
    assert!(text.contains("24           (-1,0,1)"), "{text}");
    let doc = json(&clusterfan(&["--format", "json", "project", "--n", "4"]));
    assert_eq!(doc["fan"]["cones"].as_array().unwrap().len(), 14);
    assert_eq!(doc["fan"]["rays"].as_array().unwrap().len(), 16);
    assert_eq!(doc["projected"]["rays"].as_array().unwrap().len(), 9);
}

#[test]
fn paper_suite_filters() {
    let o = clusterfan(&["paper-suite", "--only", "n4-rays"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("1/1 paper claims reproduced\n"));
    let doc = json(&clusterfan(&["--format", "json", "paper-suite", "--only", "n5-tableaux,n4-relations"]));
    assert_eq!(doc["passed"], 2);
    assert_eq!(doc["claims"][0]["id"], "n4-relations");
    let listed = clusterfan(&["paper-suite", "--list"]);
    assert_eq!(stdout(&listed).lines().count(), 15);
}

#[test]
fn bad_input_exits_with_one() {
    assert_eq!(clusterfan(&["enumerate", "--n", "2"]).status.code(), Some(1));
    assert_eq!(clusterfan(&["paper-suite", "--only", "bogus"]).status.code(), Some(1));
    assert_eq!(clusterfan(&["verify", "--n", "4", "--samples", "0"]).status.code(), Some(1));
    let o = clusterfan(&["enumerate", "--n", "3", "--out", "/nonexistent-dir/graph.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonexistent-dir"));
    assert_eq!(clusterfan(&["--help"]).status.code(), Some(0));
}
