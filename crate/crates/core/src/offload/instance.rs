use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A task row of an offloading instance.
///
/// `up` and `req` are the *remaining* bits and cycles, so in-flight tasks of a
/// running simulation can be re-planned with the same structure.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceTask {
    pub id: u64,
    /// Absolute slot in which the task was generated.
    pub created: i64,
    pub up: f64,
    pub req: f64,
    /// Delay tolerance in seconds.
    pub deadline: f64,
    /// Node the task is already committed to, if any.
    #[serde(default)]
    pub pinned: Option<usize>,
    /// Absolute slot from which a fully uploaded input is usable at the node.
    #[serde(default)]
    pub available: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceNode {
    pub id: u64,
    pub cpu_freq: f64,
    /// Whole slots between upload completion and the earliest compute slot
    /// (wired backhaul for remote servers).
    #[serde(default)]
    pub release_gap: usize,
}

/// Task-to-node assignment and slot allocation problem over a finite window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffloadInstance {
    /// Absolute index of the first planned slot.
    #[serde(default)]
    pub start_slot: i64,
    pub slots: usize,
    pub dt: f64,
    #[serde(default = "default_ws")]
    pub ws: usize,
    pub punish: f64,
    /// Resource blocks in the shared band; transmission shares produced by the
    /// heuristics are multiples of `1 / rb_count`.
    #[serde(default = "default_rb_count")]
    pub rb_count: usize,
    pub tasks: Vec<InstanceTask>,
    pub nodes: Vec<InstanceNode>,
    /// Full-band uplink capacity in bits/s, indexed `[task][node][slot]`.
    /// Zero means the node is unreachable from the task's vehicle.
    pub capacity: Vec<Vec<Vec<f64>>>,
}

fn default_ws() -> usize {
    10
}

fn default_rb_count() -> usize {
    20
}

impl OffloadInstance {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.ws == 0 {
            return bad("window length must be at least one slot".into());
        }
        if !(self.dt > 0.0) {
            return bad("slot length must be positive".into());
        }
        if self.rb_count == 0 {
            return bad("rb_count must be positive".into());
        }
        if self.capacity.len() != self.tasks.len() {
            return bad("capacity tensor must have one row per task".into());
        }
        for (k, row) in self.capacity.iter().enumerate() {
            if row.len() != self.nodes.len() {
                return bad(format!("capacity row {k} must cover every node"));
            }
            for series in row {
                if series.len() != self.slots {
                    return bad(format!("capacity series of task {k} must cover every slot"));
                }
                if series.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
                    return bad(format!("capacities of task {k} must be finite and non-negative"));
                }
            }
        }
        for (k, t) in self.tasks.iter().enumerate() {
            if t.up < 0.0 || t.req < 0.0 || t.deadline < 0.0 {
                return bad(format!("task {k} has a negative attribute"));
            }
            if let Some(j) = t.pinned {
                if j >= self.nodes.len() {
                    return bad(format!("task {k} pinned to unknown node {j}"));
                }
            }
        }
        if self.nodes.iter().any(|n| !(n.cpu_freq > 0.0)) {
            return bad("every node needs a positive CPU frequency".into());
        }
        Ok(())
    }

    pub fn end_slot(&self) -> i64 {
        self.start_slot + self.slots as i64
    }

    /// First slot (relative) in which the task may use any resource.
    pub fn release(&self, k: usize) -> usize {
        let t = &self.tasks[k];
        let from = t.available.map_or(t.created, |a| a.max(t.created));
        (from - self.start_slot).clamp(0, self.slots as i64) as usize
    }

    /// Slots between upload end and compute start for task `k` on node `j`;
    /// zero once nothing is left to upload.
    pub fn gap(&self, k: usize, j: usize) -> usize {
        if self.tasks[k].up > 0.0 {
            self.nodes[j].release_gap
        } else {
            0
        }
    }

    /// Latest absolute completion slot allowed by the delay constraint.
    pub fn latest_end_abs(&self, k: usize) -> i64 {
        let t = &self.tasks[k];
        t.created + (t.deadline / self.dt + 1e-9).floor() as i64
    }

    /// Latest completion (relative, exclusive slot bound) inside the window.
    pub fn latest_end(&self, k: usize) -> usize {
        let rel = self.latest_end_abs(k) - self.start_slot;
        rel.clamp(0, self.slots as i64) as usize
    }

    /// Bits deliverable with the whole band in relative slot `t`.
    pub fn slot_bits(&self, k: usize, j: usize, t: usize) -> f64 {
        self.capacity[k][j][t] * self.dt
    }

    /// Cycles a node executes in one slot at full share.
    pub fn slot_cycles(&self, j: usize) -> f64 {
        self.nodes[j].cpu_freq * self.dt
    }

    pub fn reachable(&self, k: usize, j: usize) -> bool {
        self.capacity[k][j].iter().any(|c| *c > 0.0)
    }

    /// True when node `j`'s capacity for task `k` is constant over the window.
    pub fn constant_capacity(&self, k: usize, j: usize) -> bool {
        let s = &self.capacity[k][j];
        s.windows(2).all(|w| w[0] == w[1])
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Self = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> OffloadInstance {
        OffloadInstance {
            start_slot: 0,
            slots: 4,
            dt: 0.05,
            ws: 10,
            punish: 100.0,
            rb_count: 20,
            tasks: vec![InstanceTask { id: 0, created: 1, up: 1e5, req: 1e8, deadline: 0.2, pinned: None, available: None }],
            nodes: vec![InstanceNode { id: 7, cpu_freq: 2.5e9, release_gap: 0 }],
            capacity: vec![vec![vec![1e7; 4]]],
        }
    }

    #[test]
    fn derived_bounds() {
        let inst = tiny();
        assert_eq!(inst.release(0), 1);
        assert_eq!(inst.latest_end_abs(0), 5);
        assert_eq!(inst.latest_end(0), 4);
        assert!(inst.constant_capacity(0, 0));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let inst = tiny();
        let back = OffloadInstance::from_json(&inst.to_json().unwrap()).unwrap();
        assert_eq!(back, inst);

        let mut broken = tiny();
        broken.capacity[0][0].pop();
        assert!(broken.validate().is_err());
        let mut zero_ws = tiny();
        zero_ws.ws = 0;
        assert!(zero_ws.validate().is_err());
    }
}
