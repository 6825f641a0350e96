//! Multi-seed replication with per-metric statistics.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{simulate, Summary};
use crate::config::ScenarioConfig;
use crate::error::{Error, Result};

/// Mean, population standard deviation and range of one metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Self { mean, std: var.sqrt(), min, max })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replication {
    pub seeds: Vec<u64>,
    pub runs: Vec<Summary>,
    /// Keyed by dotted summary path, e.g. `energy.total_joules`. Booleans
    /// count as 0/1; metrics that are `null` in some run cover the others.
    pub stats: BTreeMap<String, Stat>,
}

fn flatten(prefix: &str, v: &Value, out: &mut BTreeMap<String, Vec<f64>>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Number(n) => out.entry(prefix.to_string()).or_default().extend(n.as_f64()),
        Value::Bool(b) => out.entry(prefix.to_string()).or_default().push(f64::from(u8::from(*b))),
        _ => {}
    }
}

/// Runs `config` once per seed in parallel. Results are in seed order and
/// independent of the thread count.
pub fn run_replications(config: &ScenarioConfig, seeds: &[u64]) -> Result<Replication> {
    let results: Vec<Result<Summary>> = seeds
        .par_iter()
        .map(|&seed| {
            let mut c = config.clone();
            c.seed = seed;
            c.output.dir = None;
            simulate(c).map(|o| o.metrics.summary).map_err(|e| Error::Replication { seed, source: Box::new(e) })
        })
        .collect();
    let runs = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut values = BTreeMap::new();
    for r in &runs {
        flatten("", &serde_json::to_value(r)?, &mut values);
    }
    let stats = values.into_iter().filter_map(|(k, v)| Stat::of(&v).map(|s| (k, s))).collect();
    Ok(Replication { seeds: seeds.to_vec(), runs, stats })
}

/// Parses `a..b` (half-open), `a..=b`, a single seed, or a comma-separated
/// list of those.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::Config(format!("invalid seed list {text:?}: expected a..b, a..=b or n[,n...]"));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    let mut out = Vec::new();
    for part in text.split(',') {
        if let Some((a, b)) = part.split_once("..=") {
            out.extend(num(a)?..=num(b)?);
        } else if let Some((a, b)) = part.split_once("..") {
            out.extend(num(a)?..num(b)?);
        } else {
            out.push(num(part)?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}
