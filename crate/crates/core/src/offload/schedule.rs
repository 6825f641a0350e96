//! Schedules and the constraint validator.
//!
//! Times are absolute slot indices. Start times are the first active slot and
//! end times are exclusive (last active slot + 1), so a task created in slot
//! `t'` that uploads in `t'` and computes in `t' + 1` has `comp_end = t' + 2`
//! and a latency of two slots.

use serde::{Deserialize, Serialize};

use super::instance::OffloadInstance;
use crate::error::{Error, Result};

const SHARE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskTimes {
    pub tran_start: i64,
    pub tran_end: i64,
    pub comp_start: i64,
    pub comp_end: i64,
}

/// Assignment plus per-slot resource shares.
///
/// `tx_share[k][t]` is the fraction of the band given to task `k` in relative
/// slot `t`; `cpu_share[k][t]` the fraction of its node's CPU. The binary
/// indicators are derived: a slot is a transmit (compute) slot iff its share
/// is positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub assignment: Vec<Option<usize>>,
    pub tx_share: Vec<Vec<f64>>,
    pub cpu_share: Vec<Vec<f64>>,
    pub times: Vec<Option<TaskTimes>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub label: String,
    pub task: Option<usize>,
    pub slot: Option<usize>,
    pub detail: String,
}

impl Violation {
    fn new(label: &str, task: Option<usize>, slot: Option<usize>, detail: impl Into<String>) -> Self {
        Self { label: label.to_string(), task, slot, detail: detail.into() }
    }
}

impl Schedule {
    pub fn empty(inst: &OffloadInstance) -> Self {
        let n = inst.tasks.len();
        Self {
            assignment: vec![None; n],
            tx_share: vec![vec![0.0; inst.slots]; n],
            cpu_share: vec![vec![0.0; inst.slots]; n],
            times: vec![None; n],
        }
    }

    pub fn x(&self, k: usize, t: usize) -> bool {
        self.tx_share[k][t] > SHARE_EPS
    }

    pub fn y(&self, k: usize, t: usize) -> bool {
        self.cpu_share[k][t] > SHARE_EPS
    }

    pub fn assigned_count(&self) -> usize {
        self.assignment.iter().filter(|a| a.is_some()).count()
    }

    /// Clears every share and time of task `k` and marks it unassigned.
    pub fn unassign(&mut self, k: usize) {
        self.assignment[k] = None;
        self.tx_share[k].iter_mut().for_each(|s| *s = 0.0);
        self.cpu_share[k].iter_mut().for_each(|s| *s = 0.0);
        self.times[k] = None;
    }

    /// Recomputes start/end times from the shares.
    pub fn derive_times(&mut self, inst: &OffloadInstance) {
        for k in 0..inst.tasks.len() {
            self.times[k] = self.assignment[k].map(|j| derive_task_times(self, inst, k, j));
        }
    }

    /// Binary indicator vectors flattened, for iteration-change norms.
    pub fn indicator_distance(&self, other: &Schedule) -> (f64, f64) {
        let mut dx = 0usize;
        let mut dy = 0usize;
        for k in 0..self.tx_share.len() {
            for t in 0..self.tx_share[k].len() {
                dx += (self.x(k, t) != other.x(k, t)) as usize;
                dy += (self.y(k, t) != other.y(k, t)) as usize;
            }
        }
        ((dx as f64).sqrt(), (dy as f64).sqrt())
    }

    /// Sum of completion slots plus `punish` per unassigned task. Does not
    /// validate; see [`objective`].
    pub fn raw_objective(&self, inst: &OffloadInstance) -> f64 {
        let mut total = 0.0;
        for k in 0..inst.tasks.len() {
            match (self.assignment[k], self.times[k]) {
                (Some(_), Some(tt)) => total += tt.comp_end as f64,
                _ => total += inst.punish,
            }
        }
        total
    }

    /// Checks C1-C15. An empty vector means the schedule is feasible.
    pub fn validate(&self, inst: &OffloadInstance) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = inst.tasks.len();
        let shape_ok = self.assignment.len() == n
            && self.tx_share.len() == n
            && self.cpu_share.len() == n
            && self.times.len() == n
            && self.tx_share.iter().chain(self.cpu_share.iter()).all(|r| r.len() == inst.slots);
        if !shape_ok {
            out.push(Violation::new("C1", None, None, "schedule shape does not match instance"));
            return out;
        }

        // C1, C12, C13: shares are proper fractions; C2: one node index, in range.
        for k in 0..n {
            if let Some(j) = self.assignment[k] {
                if j >= inst.nodes.len() {
                    out.push(Violation::new("C2", Some(k), None, format!("unknown node {j}")));
                    return out;
                }
            }
            for t in 0..inst.slots {
                for (label, s) in [("C12", self.tx_share[k][t]), ("C13", self.cpu_share[k][t])] {
                    if !s.is_finite() || s < 0.0 {
                        out.push(Violation::new("C1", Some(k), Some(t), format!("share {s} is not a fraction")));
                    } else if s > 1.0 + SHARE_EPS {
                        out.push(Violation::new(label, Some(k), Some(t), format!("share {s} exceeds the resource")));
                    }
                }
            }
        }

        for k in 0..n {
            let task = &inst.tasks[k];
            let Some(j) = self.assignment[k] else {
                // C3 with sum(mu) = 0 forbids any activity.
                if (0..inst.slots).any(|t| self.x(k, t) || self.y(k, t)) {
                    out.push(Violation::new("C3", Some(k), None, "unassigned task holds resources"));
                }
                continue;
            };
            if let Some(p) = task.pinned {
                if p != j {
                    out.push(Violation::new("C2", Some(k), None, format!("pinned to {p} but assigned to {j}")));
                }
            }
            let release = inst.release(k);
            for t in 0..inst.slots {
                if self.x(k, t) && self.y(k, t) {
                    out.push(Violation::new("C3", Some(k), Some(t), "transmits and computes in one slot"));
                }
                if t < release && (self.x(k, t) || self.y(k, t)) {
                    out.push(Violation::new("C7", Some(k), Some(t), "active before creation"));
                }
            }
            let Some(tt) = self.times[k] else {
                out.push(Violation::new("C4", Some(k), None, "assigned task without times"));
                continue;
            };
            let abs = |t: usize| inst.start_slot + t as i64;
            for t in 0..inst.slots {
                if self.y(k, t) {
                    if tt.comp_end < abs(t) + 1 {
                        out.push(Violation::new("C4", Some(k), Some(t), "compute slot after comp_end"));
                    }
                    if tt.comp_start > abs(t) {
                        out.push(Violation::new("C5", Some(k), Some(t), "compute slot before comp_start"));
                    }
                }
                if self.x(k, t) {
                    if tt.tran_end < abs(t) + 1 {
                        out.push(Violation::new("C6", Some(k), Some(t), "transmit slot after tran_end"));
                    }
                    if tt.tran_start > abs(t) {
                        out.push(Violation::new("C7", Some(k), Some(t), "transmit slot before tran_start"));
                    }
                }
            }
            let gap = inst.gap(k, j) as i64;
            if tt.tran_end + gap > tt.comp_start {
                out.push(Violation::new(
                    "C8",
                    Some(k),
                    None,
                    format!("computation starts at {} before upload ends at {}", tt.comp_start, tt.tran_end + gap),
                ));
            }
            if tt.comp_end > inst.latest_end_abs(k) || tt.comp_end > inst.end_slot() {
                out.push(Violation::new(
                    "C9",
                    Some(k),
                    None,
                    format!("completes at {} past latest {}", tt.comp_end, inst.latest_end_abs(k).min(inst.end_slot())),
                ));
            }
            let sent: f64 = (0..inst.slots).map(|t| self.tx_share[k][t] * inst.slot_bits(k, j, t)).sum();
            if sent + tol(task.up) < task.up {
                out.push(Violation::new("C14", Some(k), None, format!("{sent} of {} bits delivered", task.up)));
            }
            let done: f64 = (0..inst.slots).map(|t| self.cpu_share[k][t] * inst.slot_cycles(j)).sum();
            if done + tol(task.req) < task.req {
                out.push(Violation::new("C15", Some(k), None, format!("{done} of {} cycles executed", task.req)));
            }
        }

        for t in 0..inst.slots {
            let band: f64 = (0..n).map(|k| self.tx_share[k][t]).sum();
            if band > 1.0 + SHARE_EPS {
                out.push(Violation::new("C10", None, Some(t), format!("band share {band} exceeds 1")));
            }
            for j in 0..inst.nodes.len() {
                let cpu: f64 = (0..n).filter(|&k| self.assignment[k] == Some(j)).map(|k| self.cpu_share[k][t]).sum();
                if cpu > 1.0 + SHARE_EPS {
                    out.push(Violation::new("C11", None, Some(t), format!("node {j} CPU share {cpu} exceeds 1")));
                }
            }
        }
        out
    }
}

fn tol(amount: f64) -> f64 {
    1e-7 * amount.max(1.0)
}

fn derive_task_times(s: &Schedule, inst: &OffloadInstance, k: usize, j: usize) -> TaskTimes {
    let base = inst.start_slot;
    let release = base + inst.release(k) as i64;
    let first = |v: &[f64]| v.iter().position(|x| *x > SHARE_EPS);
    let last = |v: &[f64]| v.iter().rposition(|x| *x > SHARE_EPS);
    let (tran_start, tran_end) = match (first(&s.tx_share[k]), last(&s.tx_share[k])) {
        (Some(a), Some(b)) => (base + a as i64, base + b as i64 + 1),
        _ => (release, release),
    };
    let ready = tran_end + inst.gap(k, j) as i64;
    let (comp_start, comp_end) = match (first(&s.cpu_share[k]), last(&s.cpu_share[k])) {
        (Some(a), Some(b)) => (base + a as i64, base + b as i64 + 1),
        _ => (ready, ready),
    };
    TaskTimes { tran_start, tran_end, comp_start, comp_end }
}

/// Objective value of a feasible schedule: the sum of completion slots plus
/// `punish` for every task left unassigned.
pub fn objective(schedule: &Schedule, inst: &OffloadInstance) -> Result<f64> {
    let v = schedule.validate(inst);
    if !v.is_empty() {
        return Err(Error::InvalidSchedule(v));
    }
    Ok(schedule.raw_objective(inst))
}
