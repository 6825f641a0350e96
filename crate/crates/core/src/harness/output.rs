//! File writers. Every writer is a pure function of its input, so a rerun
//! with the same config and seed reproduces the files byte for byte (apart
//! from `timing.json`).

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::metrics::Summary;
use super::plot::plots_from_csv;
use super::RunOutput;
use crate::error::Result;
use crate::sim::{Event, LinkRecord, TtiMetrics};

pub fn metrics_csv(series: &[TtiMetrics]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if series.is_empty() {
        w.write_record(METRIC_COLUMNS)?;
    }
    for row in series {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is UTF-8"))
}

/// Column order of `metrics.csv`.
pub const METRIC_COLUMNS: [&str; 14] = [
    "tti",
    "time",
    "generated",
    "completed",
    "failed",
    "in_flight",
    "completions",
    "failures",
    "tx_certified",
    "blocks",
    "mean_latency",
    "energy_tx",
    "energy_comp",
    "energy_fly",
];

#[derive(Serialize)]
struct LinkRow<'a> {
    tti: u64,
    tx: u64,
    rx: u64,
    mode: &'a str,
    pl_db: f64,
    s_db: f64,
    h: f64,
    rb_list: String,
    sinr_db: f64,
    capacity_bps: f64,
}

/// One row per active link and TTI; resource blocks are `;`-separated.
pub fn links_csv(links: &[LinkRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if links.is_empty() {
        w.write_record(["tti", "tx", "rx", "mode", "pl_db", "s_db", "h", "rb_list", "sinr_db", "capacity_bps"])?;
    }
    for l in links {
        w.serialize(LinkRow {
            tti: l.tti,
            tx: l.tx,
            rx: l.rx,
            mode: l.mode.name(),
            pl_db: l.pl_db,
            s_db: l.s_db,
            h: l.h,
            rb_list: l.rb_list.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(";"),
            sinr_db: l.sinr_db,
            capacity_bps: l.capacity_bps,
        })?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is UTF-8"))
}

pub fn events_jsonl(events: &[Event]) -> Result<String> {
    let mut s = String::new();
    for e in events {
        s.push_str(&serde_json::to_string(e)?);
        s.push('\n');
    }
    Ok(s)
}

pub fn summary_json(summary: &Summary) -> Result<String> {
    Ok(serde_json::to_string_pretty(summary)? + "\n")
}

/// Writes `metrics.csv`, `events.jsonl`, `summary.json`, `chain.jsonl`,
/// `reputation.csv`, `timing.json` and the effective `config.toml`, plus
/// `links.csv` and the SVG plots when the config asks for them. Returns the
/// written paths.
pub fn write_outputs(dir: &Path, out: &RunOutput) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let cfg = &out.world.config;
    let mut written = Vec::new();
    let mut put = |name: &str, body: &str| -> Result<()> {
        let p = dir.join(name);
        fs::write(&p, body)?;
        written.push(p);
        Ok(())
    };
    let csv = metrics_csv(&out.metrics.series)?;
    put("metrics.csv", &csv)?;
    put("events.jsonl", &events_jsonl(&out.events)?)?;
    put("summary.json", &summary_json(&out.metrics.summary)?)?;
    let mut chain = Vec::new();
    out.world.runtime.chain.export_jsonl(&mut chain)?;
    put("chain.jsonl", &String::from_utf8(chain).expect("JSON is UTF-8"))?;
    put("reputation.csv", &out.world.runtime.reputation.to_csv())?;
    put("timing.json", &(serde_json::to_string_pretty(&out.timing)? + "\n"))?;
    put("config.toml", &cfg.to_toml()?)?;
    if cfg.output.dump_links {
        put("links.csv", &links_csv(&out.world.links)?)?;
    }
    if cfg.output.plots {
        for (name, svg) in plots_from_csv(&csv)? {
            put(&name, &svg)?;
        }
    }
    Ok(written)
}
