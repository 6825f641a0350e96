//! Run summary and metric series.

use serde::{Deserialize, Serialize};

use crate::offload::SolverKind;
use crate::sim::{FailReason, TtiMetrics, World};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySummary {
    pub tx_joules: f64,
    pub comp_joules: f64,
    pub fly_joules: f64,
    pub total_joules: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub kind: SolverKind,
    pub calls: u64,
    /// Oracle calls answered by WHO because the instance was too large.
    pub fallbacks: u64,
    /// Plans that failed validation and were replaced by the greedy plan.
    pub repairs: u64,
}

/// Final figures of one run. Every scenario produces the same keys; figures
/// that do not exist for a run are `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub seed: u64,
    pub horizon: f64,
    pub task_vehicles: usize,
    pub serving_vehicles: usize,
    pub uavs: usize,
    pub rsus: usize,
    pub solver: SolverSummary,
    pub generated: u64,
    pub completed: u64,
    pub failed: u64,
    pub in_flight: u64,
    pub failed_deadline: u64,
    pub failed_unassigned: u64,
    pub failed_orphaned: u64,
    /// Set when no task was generated; the success ratio is then 1.0.
    pub no_tasks: bool,
    /// `completed / (completed + failed)`: tasks still in flight at the
    /// horizon are not counted.
    pub success_ratio: f64,
    /// `completed / generated`.
    pub completion_ratio: Option<f64>,
    /// Mean latency of completed tasks, seconds.
    pub mean_latency: Option<f64>,
    pub tx_submitted: u64,
    pub tx_rejected: u64,
    pub tx_certified: u64,
    pub tx_per_second: f64,
    pub blocks: u64,
    pub max_block_txs: Option<usize>,
    pub payments_withheld: u64,
    pub audits: u64,
    pub spoof_attempts: u64,
    pub spoof_rejected: u64,
    pub blacklisted: Vec<u64>,
    pub chain_valid: bool,
    pub energy: EnergySummary,
}

impl Summary {
    pub fn from_world(w: &World) -> Self {
        let c = &w.runtime.counters;
        let cfg = &w.config;
        let reason = |r| c.failed_by_reason.get(&r).copied().unwrap_or(0);
        let finished = c.completed + c.failed;
        let elapsed = w.runtime.clock.now();
        let e = w.runtime.energy.totals();
        Self {
            seed: cfg.seed,
            horizon: cfg.horizon,
            task_vehicles: cfg.vehicles.task,
            serving_vehicles: cfg.vehicles.serving,
            uavs: cfg.uav.count,
            rsus: cfg.rsu.positions.len(),
            solver: SolverSummary {
                kind: cfg.solver,
                calls: c.solver_calls,
                fallbacks: c.solver_fallbacks,
                repairs: c.solver_repairs,
            },
            generated: c.generated,
            completed: c.completed,
            failed: c.failed,
            in_flight: w.in_flight(),
            failed_deadline: reason(FailReason::Deadline),
            failed_unassigned: reason(FailReason::Unassigned),
            failed_orphaned: reason(FailReason::Orphaned),
            no_tasks: c.generated == 0,
            success_ratio: if finished == 0 { 1.0 } else { c.completed as f64 / finished as f64 },
            completion_ratio: (c.generated > 0).then(|| c.completed as f64 / c.generated as f64),
            mean_latency: (c.completed > 0).then(|| c.latency_sum / c.completed as f64),
            tx_submitted: c.tx_submitted,
            tx_rejected: c.tx_rejected,
            tx_certified: c.tx_certified,
            tx_per_second: if elapsed > 0.0 { c.tx_certified as f64 / elapsed } else { 0.0 },
            blocks: c.blocks,
            max_block_txs: w.runtime.chain.blocks.iter().map(|b| b.transactions.len()).max(),
            payments_withheld: c.payments_withheld,
            audits: c.audits,
            spoof_attempts: c.spoof_attempts,
            spoof_rejected: c.spoof_rejected,
            blacklisted: w.runtime.blacklisted.iter().copied().collect(),
            chain_valid: w.runtime.chain.replay().is_ok(),
            energy: EnergySummary {
                tx_joules: e.tx_joules,
                comp_joules: e.comp_joules,
                fly_joules: e.fly_joules,
                total_joules: e.total(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub series: Vec<TtiMetrics>,
    pub summary: Summary,
}

/// Wall-clock figures, kept apart from the deterministic summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
    pub solver_seconds: f64,
    pub ttis: u64,
}
