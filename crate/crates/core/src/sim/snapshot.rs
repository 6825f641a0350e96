//! World snapshots: the scenario config plus the full runtime state as JSON.

use serde::{Deserialize, Serialize};

use super::world::{Runtime, World};
use crate::config::ScenarioConfig;
use crate::error::Result;

#[derive(Serialize)]
struct SnapshotRef<'a> {
    config: &'a ScenarioConfig,
    runtime: &'a Runtime,
}

#[derive(Deserialize)]
struct Snapshot {
    config: ScenarioConfig,
    runtime: Runtime,
}

impl World {
    pub fn snapshot(&self) -> Result<String> {
        Ok(serde_json::to_string(&SnapshotRef { config: &self.config, runtime: &self.runtime })?)
    }

    /// Restores a world saved with [`World::snapshot`]; stepping it continues
    /// the original run draw for draw.
    pub fn from_snapshot(text: &str) -> Result<Self> {
        let s: Snapshot = serde_json::from_str(text)?;
        s.config.validate()?;
        Ok(Self { config: s.config, runtime: s.runtime, record_links: false, links: Vec::new(), solver_seconds: 0.0 })
    }
}
