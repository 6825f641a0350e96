//! Command-line front end: scenario runs, offline solver runs and seed
//! replication.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use uavfog::config::ScenarioConfig;
use uavfog::harness::{mission_preset, parse_seeds, run_replications, run_sweep};
use uavfog::offload::{objective, random::random_instance, solve, OffloadInstance, SolverKind, WhoConfig};

#[derive(Parser)]
#[command(name = "uavfog", version, about = "UAV-assisted vehicular fog computing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario (or each point of its sweep) and print the summary.
    Run(RunArgs),
    /// Solve one offloading instance offline.
    Solve(SolveArgs),
    /// Write a random offloading instance as JSON.
    Instance(InstanceArgs),
    /// Run a scenario (or each point of its sweep) over several seeds and
    /// print per-metric statistics.
    Replicate(ReplicateArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario config (TOML).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Mission preset: deployment, trajectory, offloading, security or
    /// resource-allocation.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    solver: Option<SolverKind>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long)]
    seed: Option<u64>,
    /// Also write `links.csv` with every link of every TTI.
    #[arg(long)]
    dump_links: bool,
    /// Also write SVG plots of the metric series.
    #[arg(long)]
    plots: bool,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (JSON).
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "who")]
    solver: SolverKind,
    /// Solver settings (TOML, the `offload.who` table of a config).
    #[arg(long)]
    who: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    tasks: usize,
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 20)]
    slots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Draw a new uplink rate for every slot.
    #[arg(long)]
    varying: bool,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplicateArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Seeds: `a..b`, `a..=b` or a comma-separated list.
    #[arg(long)]
    seeds: String,
}

#[derive(Debug)]
enum Failure {
    Usage(clap::Error),
    Sim(uavfog::Error),
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Sim(e) => e.kind(),
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(e) => e.to_string().trim_end().to_string(),
            Failure::Sim(e) => e.to_string(),
        }
    }
}

impl From<uavfog::Error> for Failure {
    fn from(e: uavfog::Error) -> Self {
        Failure::Sim(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Sim(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Sim(e.into())
    }
}

fn base_config(a: &ScenarioArgs) -> Result<ScenarioConfig, Failure> {
    let mut c = match (&a.config, &a.preset) {
        (Some(path), _) => ScenarioConfig::load(path)?,
        (None, Some(name)) => mission_preset(name)?,
        (None, None) => ScenarioConfig::default(),
    };
    if let Some(h) = a.horizon {
        c.horizon = h;
    }
    if let Some(s) = a.solver {
        c.solver = s;
    }
    if let Some(out) = &a.out {
        c.output.dir = Some(out.clone());
    }
    Ok(c)
}

fn print_json(v: &Value) -> Result<(), Failure> {
    print_text(&serde_json::to_string_pretty(v)?)
}

fn print_text(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run(a: RunArgs) -> Result<(), Failure> {
    let mut c = base_config(&a.scenario)?;
    if let Some(s) = a.seed {
        c.seed = s;
    }
    c.output.dump_links |= a.dump_links;
    c.output.plots |= a.plots;
    c.validate()?;
    let runs = run_sweep(&c)?;
    if c.sweep.is_empty() {
        return print_json(&serde_json::to_value(&runs[0].1.metrics.summary)?);
    }
    let all = runs
        .iter()
        .map(|(label, out)| Ok(json!({ "label": label, "summary": serde_json::to_value(&out.metrics.summary)? })))
        .collect::<Result<Vec<Value>, Failure>>()?;
    print_json(&Value::Array(all))
}

fn solve_cmd(a: SolveArgs) -> Result<(), Failure> {
    let inst = OffloadInstance::from_json(&std::fs::read_to_string(&a.instance)?)?;
    let who: WhoConfig = match &a.who {
        Some(p) => toml::from_str(&std::fs::read_to_string(p)?).map_err(uavfog::Error::from)?,
        None => WhoConfig::default(),
    };
    let started = Instant::now();
    let (schedule, stats) = solve(a.solver, &inst, &who)?;
    let wall = started.elapsed().as_secs_f64();
    print_json(&json!({
        "solver": a.solver.name(),
        "tasks": inst.tasks.len(),
        "nodes": inst.nodes.len(),
        "assigned": schedule.assigned_count(),
        "objective": objective(&schedule, &inst)?,
        "wall_seconds": wall,
        "stats": stats,
        "schedule": schedule,
    }))
}

fn instance_cmd(a: InstanceArgs) -> Result<(), Failure> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
    let inst = random_instance(&mut rng, a.tasks, a.nodes, a.slots, a.varying);
    let text = inst.to_json()?;
    match &a.out {
        Some(p) => write_file(p, &text),
        None => print_text(&text),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn replicate(a: ReplicateArgs) -> Result<(), Failure> {
    let c = base_config(&a.scenario)?;
    c.validate()?;
    let seeds = parse_seeds(&a.seeds)?;
    let replicate_into = |c: &ScenarioConfig, dir: Option<PathBuf>| -> Result<Value, Failure> {
        let v = serde_json::to_value(run_replications(c, &seeds)?)?;
        if let Some(dir) = dir {
            write_file(&dir.join("replication.json"), &(serde_json::to_string_pretty(&v)? + "\n"))?;
        }
        Ok(v)
    };
    if c.sweep.is_empty() {
        let v = replicate_into(&c, c.output.dir.clone())?;
        return print_json(&v);
    }
    let mut all = Vec::with_capacity(c.sweep.len());
    for p in &c.sweep {
        let point = c.with_point(p);
        point.validate()?;
        let dir = c.output.dir.as_ref().map(|d| d.join(&p.label));
        let v = replicate_into(&point, dir)?;
        all.push(json!({ "label": p.label, "replication": v }));
    }
    print_json(&Value::Array(all))
}

fn main() -> ExitCode {
    let result = match Cli::try_parse() {
        Ok(cli) => match cli.command {
            Command::Run(a) => run(a),
            Command::Solve(a) => solve_cmd(a),
            Command::Instance(a) => instance_cmd(a),
            Command::Replicate(a) => replicate(a),
        },
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => Err(Failure::Usage(e)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.kind(), "message": f.message() }));
            ExitCode::FAILURE
        }
    }
}
