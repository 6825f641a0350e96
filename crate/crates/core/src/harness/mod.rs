//! Scenario runs, presets, replication and output files.

pub mod metrics;
pub mod output;
pub mod plot;
pub mod presets;
pub mod replicate;

use std::path::Path;
use std::time::Instant;

pub use metrics::{EnergySummary, RunMetrics, SolverSummary, Summary, Timing};
pub use output::{events_jsonl, links_csv, metrics_csv, summary_json, write_outputs};
pub use plot::{line_plot, plots_from_csv, Series};
pub use presets::{mission_preset, PRESETS};
pub use replicate::{parse_seeds, run_replications, Replication, Stat};

use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::sim::{Event, World};

/// Everything one run produced.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub world: World,
    pub events: Vec<Event>,
    pub metrics: RunMetrics,
    pub timing: Timing,
}

/// Runs a config to its horizon without touching the file system.
pub fn simulate(config: ScenarioConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let dump = config.output.dump_links;
    let mut world = World::new(config)?;
    world.record_links = dump;
    let mut events = Vec::new();
    while !world.finished() {
        events.extend(world.advance_tti()?);
    }
    let metrics = RunMetrics { series: world.runtime.series.clone(), summary: Summary::from_world(&world) };
    let timing = Timing {
        wall_seconds: started.elapsed().as_secs_f64(),
        solver_seconds: world.solver_seconds,
        ttis: world.runtime.clock.tti_index,
    };
    Ok(RunOutput { world, events, metrics, timing })
}

/// Runs a config and writes its files when `output.dir` is set.
pub fn run_scenario(config: ScenarioConfig) -> Result<RunOutput> {
    let dir = config.output.dir.clone();
    let out = simulate(config)?;
    if let Some(dir) = dir {
        write_outputs(&dir, &out)?;
    }
    Ok(out)
}

/// Runs the base config, or every sweep point in order when a sweep is set.
/// Sweep points write into subdirectories named by their labels.
pub fn run_sweep(config: &ScenarioConfig) -> Result<Vec<(String, RunOutput)>> {
    if config.sweep.is_empty() {
        return Ok(vec![(String::new(), run_scenario(config.clone())?)]);
    }
    let mut out = Vec::with_capacity(config.sweep.len());
    for p in &config.sweep {
        let mut c = config.with_point(p);
        c.sweep.clear();
        if let Some(d) = &config.output.dir {
            c.output.dir = Some(Path::new(d).join(&p.label));
        }
        c.validate()?;
        out.push((p.label.clone(), run_scenario(c)?));
    }
    Ok(out)
}
