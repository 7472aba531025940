use std::process::{Command, Output};

use serde_json::Value;
use statkit::io::{canonical_json, config_hash};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_statkit")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    format!("{FIXTURES}/{name}")
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn ci_reports_plugin_interval() {
    let v = json(&run(&["ci", "--n", "400", "--successes", "136", "--alpha", "0.01", "--variance", "plugin"]));
    let r = &v["result"];
    assert!((r["lower"].as_f64().unwrap() - 0.28).abs() < 5e-3);
    assert!((r["upper"].as_f64().unwrap() - 0.40).abs() < 5e-3);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["artifact"], "ci");
    assert_eq!(v["config_hash"].as_str().unwrap(), config_hash(&v["config"]));
}

#[test]
fn ols_fit_on_students() {
    let v = json(&run(&["fit", "--model", "ols", "--data", &fixture("students.csv"), "--target", "y"]));
    let slope = v["result"]["fit"]["coefficients"][1].as_f64().unwrap();
    assert!((slope - 0.8726).abs() < 5e-4);
}

#[test]
fn reports_are_canonical() {
    for args in [
        vec!["dist", "--dist", "normal:mean=1,variance=4", "--at", "0,1.5", "--quantile", "0.975"],
        vec!["bound", "--kind", "hoeffding", "--range", "0,1", "--epsilon", "0.1", "--n", "100", "--delta", "0.05"],
        vec!["simulate", "--dist", "bernoulli:p=0.5", "--sizes", "5,20", "--replicates", "200", "--seed", "3"],
        vec!["test", "--n", "137", "--successes", "131", "--p0", "0.75", "--alpha", "0.01", "--method", "z"],
    ] {
        let out = run(&args);
        let v = json(&out);
        assert_eq!(canonical_json(&v).as_bytes(), &out.stdout[..], "{args:?}");
    }
}

#[test]
fn seed_is_echoed_and_changes_draws() {
    let a = json(&run(&["simulate", "--dist", "uniform:a=0,b=1", "--sizes", "10", "--replicates", "50", "--seed", "1"]));
    let b = json(&run(&["simulate", "--dist", "uniform:a=0,b=1", "--sizes", "10", "--replicates", "50", "--seed", "2"]));
    assert_eq!(a["seed"], 1);
    assert_ne!(a["result"], b["result"]);
    assert_ne!(a["config_hash"], b["config_hash"]);
}

#[test]
fn map_with_prior_file() {
    let data = std::env::temp_dir().join("statkit_cli_map.csv");
    std::fs::write(&data, "toss\n0\n0\n1\n0\n").unwrap();
    let v = json(&run(&[
        "estimate",
        "--family",
        "ber",
        "--method",
        "map",
        "--prior",
        &fixture("prior_skewed.json"),
        data.to_str().unwrap(),
    ]));
    assert_eq!(v["result"]["estimate"].as_f64().unwrap(), 0.7);
}

#[test]
fn quoted_comma_header_is_one_column() {
    let v = json(&run(&["fit", "--model", "ols", "--data", &fixture("quoted_comma.csv"), "--target", "homework"]));
    let labels: Vec<&str> = v["result"]["fit"]["labels"].as_array().unwrap().iter().map(|l| l.as_str().unwrap()).collect();
    assert_eq!(labels, ["intercept", "exam, final"]);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["ci", "--alpha"],
        vec!["fit", "--model", "ols", "--data", &fixture("students.csv"), "--target", "nope"],
        vec!["fit", "--model", "spline", "--data", &fixture("students.csv"), "--target", "y"],
        vec!["bound", "--kind", "hoeffding", "--range", "0,1,2", "--epsilon", "0.1"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn computation_errors_exit_one() {
    let bad = std::env::temp_dir().join("statkit_cli_bad.csv");
    std::fs::write(&bad, "x,y\n1,2\n3,oops\n").unwrap();
    let out = run(&["fit", "--model", "ols", "--data", bad.to_str().unwrap(), "--target", "y"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row 3") && err.contains('y'), "{err}");

    let empty = std::env::temp_dir().join("statkit_cli_empty.csv");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(run(&["fit", "--model", "ols", "--data", empty.to_str().unwrap(), "--target", "y"]).status.code(), Some(1));

    assert_eq!(run(&["dist", "--dist", "cauchy", "--at", "0"]).status.code(), Some(0));
    assert_eq!(run(&["ci", "--n", "10", "--successes", "11"]).status.code(), Some(1));
}

#[test]
fn out_and_plot_data_files() {
    let dir = std::env::temp_dir();
    let out = dir.join("statkit_cli_fit.json");
    let plot = dir.join("statkit_cli_fit.csv");
    let res = run(&[
        "fit",
        "--model",
        "basis",
        "--basis",
        "poly:2",
        "--data",
        &fixture("salary10.csv"),
        "--target",
        "salary",
        "--out",
        out.to_str().unwrap(),
        "--plot-data",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert!(res.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["config"]["args"].get("out").is_none());
    let csv = std::fs::read_to_string(&plot).unwrap();
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn reproduce_is_deterministic() {
    let a = run(&["reproduce", "--all"]);
    let b = run(&["reproduce", "--all"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["result"]["passed"].as_u64().unwrap() > 100);
    assert!(String::from_utf8_lossy(&a.stderr).contains("students_slope"));
    assert_eq!(run(&["reproduce", "--all", "--strict"]).status.code(), Some(1));
}
