//! End-to-end CLI contract tests: exit codes, output schemas, atomic writes,
//! and the plot-data round trip.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_breg-anneal")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("breg-anneal-test-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn two_blob_csv() -> String {
    // Two tight 1-d blobs with a ground-truth label column.
    let mut rows = String::from("value,label\n");
    for i in 0..20 {
        rows.push_str(&format!("{},0\n", 1.0 + 0.01 * i as f64));
        rows.push_str(&format!("{},1\n", 50.0 + 0.01 * i as f64));
    }
    rows
}

#[test]
fn cluster_reports_perfect_ari_on_separated_blobs() {
    let dir = temp_dir("blobs");
    write(&dir, "data.csv", &two_blob_csv());
    write(
        &dir,
        "config.json",
        r#"{
  "input": {"csv": "data.csv", "label_column": 1},
  "method": "bregman_power",
  "k": 2,
  "s0": -1.0,
  "seed": 11,
  "output": "result.json"
}"#,
    );
    let out = run_in(&dir, &["cluster", "--config", "config.json"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("effective seed: 11"));

    let result: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("result.json")).unwrap()).unwrap();
    assert_eq!(result["schema_version"], 1);
    assert_eq!(result["metrics"]["ari"], 1.0);
    assert_eq!(result["labels"].as_array().unwrap().len(), 40);
    assert_eq!(result["centroids"].as_array().unwrap().len(), 2);
    assert_eq!(result["wall_time_s"], 0.0);
}

#[test]
fn missing_csv_exits_3_and_names_the_path() {
    let dir = temp_dir("missing");
    write(
        &dir,
        "config.json",
        r#"{
  "input": {"csv": "no-such-file.csv"},
  "method": "lloyd",
  "k": 2,
  "seed": 1,
  "output": "result.json"
}"#,
    );
    let out = run_in(&dir, &["cluster", "--config", "config.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-file.csv"));
    assert!(!dir.join("result.json").exists(), "failed run must not leave output");
}

#[test]
fn k_larger_than_n_exits_2() {
    let dir = temp_dir("bigk");
    write(&dir, "data.csv", "1.0\n2.0\n3.0\n");
    write(
        &dir,
        "config.json",
        r#"{
  "input": {"csv": "data.csv"},
  "method": "lloyd",
  "k": 10,
  "seed": 1,
  "output": "result.json"
}"#,
    );
    let out = run_in(&dir, &["cluster", "--config", "config.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.join("result.json").exists());
}

#[test]
fn unknown_config_keys_rejected() {
    let dir = temp_dir("unknown-key");
    write(
        &dir,
        "config.json",
        r#"{
  "input": {"csv": "x.csv"},
  "method": "lloyd",
  "k": 2,
  "typo_key": true,
  "output": "result.json"
}"#,
    );
    let out = run_in(&dir, &["cluster", "--config", "config.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("typo_key"));
}

#[test]
fn euclidean_methods_reject_bregman_divergences() {
    let dir = temp_dir("method-div");
    write(&dir, "data.csv", "1.0\n2.0\n3.0\n");
    write(
        &dir,
        "config.json",
        r#"{
  "input": {"csv": "data.csv"},
  "method": "lloyd",
  "divergence": {"family": "gamma", "shape": 4.0},
  "k": 2,
  "seed": 1,
  "output": "result.json"
}"#,
    );
    let out = run_in(&dir, &["cluster", "--config", "config.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn experiment_1_report_has_sixteen_rows() {
    let dir = temp_dir("exp1");
    write(
        &dir,
        "config.json",
        r#"{
  "input": {"experiment": 1},
  "trials": 2,
  "seed": 5,
  "output": "report.json"
}"#,
    );
    let out = run_in(&dir, &["experiment", "--config", "config.json"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 16);

    let csv = fs::read_to_string(dir.join("report.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "method,setting,mean_ari,sd_ari,mean_runtime_s,trials"
    );
    assert_eq!(lines.count(), 16);
}

#[test]
fn experiment_3_report_has_fifty_rows() {
    let dir = temp_dir("exp3");
    write(
        &dir,
        "config.json",
        r#"{
  "input": {"experiment": 3},
  "trials": 1,
  "seed": 5,
  "output": "report.json"
}"#,
    );
    let out = run_in(&dir, &["experiment", "--config", "config.json"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count() - 1, 50, "5 dims x 10 method rows");
}

#[test]
fn plotdata_round_trips_report_values() {
    let dir = temp_dir("plot2");
    write(
        &dir,
        "config.json",
        r#"{
  "input": {"experiment": 2},
  "trials": 1,
  "seed": 9,
  "output": "report.json"
}"#,
    );
    let out = run_in(&dir, &["experiment", "--config", "config.json"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let out = run_in(
        &dir,
        &["plotdata", "--report", "report.json", "--plot", "figure2", "--out", "fig2.csv"],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let fig = fs::read_to_string(dir.join("fig2.csv")).unwrap();
    let mut lines = fig.lines();
    assert_eq!(lines.next().unwrap(), "x,y,series");
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), 80, "20 alpha values x 4 method series");

    // Every (x, y) pair is copied from the report, not recomputed.
    let parsed: Vec<(f64, f64, String)> = body
        .iter()
        .filter(|l| !l.is_empty())
        .map(|l| {
            let mut cells = l.split(',');
            (
                cells.next().unwrap().parse().unwrap(),
                cells.next().unwrap().parse().unwrap(),
                cells.next().unwrap().to_string(),
            )
        })
        .collect();
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    for row in report["rows"].as_array().unwrap() {
        let alpha: f64 = row["setting"]
            .as_str()
            .unwrap()
            .strip_prefix("alpha=")
            .unwrap()
            .parse()
            .unwrap();
        let ari = row["mean_ari"].as_f64().unwrap();
        let method = row["method"].as_str().unwrap();
        assert!(
            parsed.iter().any(|(x, y, s)| *x == alpha && *y == ari && s == method),
            "missing point ({alpha}, {ari}, {method})"
        );
    }
}

#[test]
fn plotdata_rejects_wrong_experiment() {
    let dir = temp_dir("plot-wrong");
    write(
        &dir,
        "config.json",
        r#"{
  "input": {"experiment": 1},
  "trials": 1,
  "seed": 2,
  "output": "report.json"
}"#,
    );
    assert!(run_in(&dir, &["experiment", "--config", "config.json"]).status.success());
    let out = run_in(
        &dir,
        &["plotdata", "--report", "report.json", "--plot", "figure2", "--out", "fig.csv"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.join("fig.csv").exists());

    let out = run_in(
        &dir,
        &["plotdata", "--report", "report.json", "--plot", "nonsense", "--out", "fig.csv"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure3_extraction_is_monotone_in_n() {
    let dir = temp_dir("plot3");
    write(
        &dir,
        "config.json",
        r#"{
  "input": {"experiment": 4},
  "trials": 2,
  "seed": 4,
  "output": "report.json"
}"#,
    );
    let out = run_in(&dir, &["experiment", "--config", "config.json"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let out = run_in(
        &dir,
        &["plotdata", "--report", "report.json", "--plot", "figure3", "--out", "fig3.csv"],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let fig = fs::read_to_string(dir.join("fig3.csv")).unwrap();
    let xs: Vec<u64> = fig
        .lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(xs, vec![4, 8, 16, 32, 64, 128]);
}

#[test]
fn custom_experiment_grid_accepted() {
    let dir = temp_dir("custom");
    write(
        &dir,
        "config.json",
        r#"{
  "input": {"experiment": {
    "family": {"family": "poisson"},
    "prototype": [[10.0, 10.0], [30.0, 30.0]],
    "dims": [2, 4],
    "s0": [-1.0],
    "n_per_cluster": 10
  }},
  "trials": 2,
  "seed": 8,
  "methods": ["bregman_power"],
  "output": "report.json"
}"#,
    );
    let out = run_in(&dir, &["experiment", "--config", "config.json"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["experiment"], "custom");
    assert_eq!(report["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors_exit_2() {
    let dir = temp_dir("usage");
    assert_eq!(run_in(&dir, &[]).status.code(), Some(2));
    assert_eq!(run_in(&dir, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run_in(&dir, &["cluster"]).status.code(), Some(2));
    assert_eq!(
        run_in(&dir, &["plotdata", "--report", "r.json", "--plot", "figure2"]).status.code(),
        Some(2)
    );
}
