use std::fs;

use uavfog::config::ScenarioConfig;
use uavfog::harness::{mission_preset, plots_from_csv, run_scenario, run_sweep, simulate};

fn short(horizon: f64) -> ScenarioConfig {
    let mut c = mission_preset("resource-allocation").unwrap();
    c.sweep.clear();
    c.horizon = horizon;
    c
}

#[test]
fn run_writes_every_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = short(3.0);
    c.output.dir = Some(dir.path().to_path_buf());
    c.output.dump_links = true;
    c.output.plots = true;
    run_scenario(c).unwrap();
    for f in [
        "metrics.csv",
        "events.jsonl",
        "summary.json",
        "chain.jsonl",
        "reputation.csv",
        "timing.json",
        "config.toml",
        "links.csv",
        "latency.svg",
        "success_ratio.svg",
        "tx_rate.svg",
    ] {
        assert!(dir.path().join(f).is_file(), "{f} missing");
    }
    let csv = fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    assert_eq!(csv.lines().count(), 61);
    let links = fs::read_to_string(dir.path().join("links.csv")).unwrap();
    assert!(links.lines().count() > 1);
    let back = ScenarioConfig::load(&dir.path().join("config.toml")).unwrap();
    assert_eq!(back.horizon, 3.0);
}

#[test]
fn plots_regenerate_identically_from_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = short(2.0);
    c.output.dir = Some(dir.path().to_path_buf());
    c.output.plots = true;
    run_scenario(c).unwrap();
    let csv = fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    for (name, svg) in plots_from_csv(&csv).unwrap() {
        assert_eq!(fs::read_to_string(dir.path().join(&name)).unwrap(), svg, "{name}");
    }
}

#[test]
fn zero_task_vehicles_report_no_tasks() {
    let mut c = short(2.0);
    c.vehicles.task = 0;
    let s = simulate(c).unwrap().metrics.summary;
    assert!(s.no_tasks);
    assert_eq!((s.generated, s.success_ratio, s.mean_latency), (0, 1.0, None));
    assert!(s.chain_valid);
}

#[test]
fn sweep_points_get_their_own_directories() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = mission_preset("trajectory").unwrap();
    c.horizon = 1.0;
    c.vehicles.task = 4;
    c.vehicles.serving = 2;
    c.output.dir = Some(dir.path().to_path_buf());
    let runs = run_sweep(&c).unwrap();
    let labels: Vec<&str> = runs.iter().map(|(l, _)| l.as_str()).collect();
    assert_eq!(labels, ["uav-4", "uav-6"]);
    assert_eq!(runs[1].1.metrics.summary.uavs, 6);
    assert!(dir.path().join("uav-6/summary.json").is_file());
}

#[test]
fn documented_default_config_matches_the_defaults() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml");
    assert_eq!(ScenarioConfig::load(&path).unwrap(), ScenarioConfig::default());
}
