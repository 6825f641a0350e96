use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn uavfog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uavfog")).args(args).output().expect("binary runs")
}

fn error_json(out: &Output) -> Value {
    assert!(!out.status.success());
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON object")
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("small.toml");
    let text = r#"
seed = 3
horizon = 2.0

[area]
width = 600.0
height = 600.0

[roads]
grid_x = 4
grid_y = 4

[rsu]
positions = [[300.0, 300.0]]

[vehicles]
task = 4
serving = 3

[uav]
start = "centers"
"#;
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn run_writes_outputs_and_prints_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out_dir = dir.path().join("out");
    let out = uavfog(&["run", "--config", &cfg, "--seed", "9", "--horizon", "1.5", "--solver", "greedy", "--out", out_dir.to_str().unwrap(), "--plots"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let printed: Value = serde_json::from_slice(&out.stdout).unwrap();
    let written: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(printed, written);
    assert_eq!(printed["seed"], 9);
    assert_eq!(printed["horizon"], 1.5);
    assert_eq!(printed["solver"]["kind"], "greedy");
    for f in ["metrics.csv", "events.jsonl", "chain.jsonl", "latency.svg", "tx_rate.svg"] {
        assert!(out_dir.join(f).is_file(), "{f}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    for name in ["a", "b"] {
        let d = dir.path().join(name);
        assert!(uavfog(&["run", "--config", &cfg, "--out", d.to_str().unwrap()]).status.success());
    }
    for f in ["summary.json", "events.jsonl", "metrics.csv", "chain.jsonl"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert!(a == b, "{f} differs");
    }
}

#[test]
fn errors_are_json_on_stderr() {
    let e = error_json(&uavfog(&["run", "--preset", "unknown"]));
    assert_eq!(e["error"], "unknown_preset");
    assert!(e["message"].as_str().unwrap().contains("resource-allocation"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "horizon = \"long\"\n").unwrap();
    assert_eq!(error_json(&uavfog(&["run", "--config", bad.to_str().unwrap()]))["error"], "toml");

    std::fs::write(&bad, "horizon = -4.0\n").unwrap();
    assert_eq!(error_json(&uavfog(&["run", "--config", bad.to_str().unwrap()]))["error"], "config");

    assert_eq!(error_json(&uavfog(&["run", "--solver", "best"]))["error"], "usage");
    assert_eq!(error_json(&uavfog(&["replicate", "--seeds", "9..2"]))["error"], "config");
    assert_eq!(error_json(&uavfog(&["solve", "--instance", "/nonexistent.json"]))["error"], "io");
}

#[test]
fn instance_then_solve_with_each_solver() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let p = inst.to_str().unwrap();
    assert!(uavfog(&["instance", "--tasks", "2", "--nodes", "2", "--slots", "6", "--seed", "4", "--out", p]).status.success());
    let mut objectives = Vec::new();
    for solver in ["greedy", "who", "oracle"] {
        let out = uavfog(&["solve", "--instance", p, "--solver", solver]);
        assert!(out.status.success(), "{solver}: {}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["solver"], solver);
        objectives.push(v["objective"].as_f64().unwrap());
    }
    // The exact oracle is never beaten.
    assert!(objectives[2] <= objectives[0] + 1e-9 && objectives[2] <= objectives[1] + 1e-9, "{objectives:?}");
}

#[test]
fn replicate_reports_runs_in_seed_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = uavfog(&["replicate", "--config", &cfg, "--horizon", "1", "--seeds", "1..=3", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let seeds: Vec<u64> = v["runs"].as_array().unwrap().iter().map(|r| r["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, [1, 2, 3]);
    assert!(v["stats"]["success_ratio"]["mean"].is_number());
    assert!(dir.path().join("replication.json").is_file());
}

#[test]
fn sweep_presets_print_one_entry_per_point() {
    let out = uavfog(&["run", "--preset", "trajectory", "--horizon", "0.5"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let labels: Vec<&str> = v.as_array().unwrap().iter().map(|p| p["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["uav-4", "uav-6"]);
}

#[test]
fn replicate_covers_each_sweep_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = uavfog(&["replicate", "--preset", "trajectory", "--horizon", "0.5", "--seeds", "1..3", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let points = v.as_array().unwrap();
    assert_eq!(points.len(), 2);
    assert_eq!(points[1]["replication"]["runs"][0]["uavs"], 6);
    assert!(dir.path().join("uav-6/replication.json").is_file());
}
