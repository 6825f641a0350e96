use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Discipline {
    #[default]
    Fifo,
}

/// Tasks committed to one node, in arrival order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskQueue {
    pub owner: u64,
    pub tasks: Vec<u64>,
    pub discipline: Discipline,
}

impl TaskQueue {
    pub fn new(owner: u64) -> Self {
        Self { owner, tasks: Vec::new(), discipline: Discipline::Fifo }
    }

    pub fn push(&mut self, task: u64, assigned_node: u64) -> Result<()> {
        if assigned_node != self.owner {
            return Err(Error::Config(format!("task {task} belongs to node {assigned_node}, not {}", self.owner)));
        }
        if self.tasks.contains(&task) {
            return Err(Error::Config(format!("task {task} already queued at node {}", self.owner)));
        }
        self.tasks.push(task);
        Ok(())
    }

    pub fn remove(&mut self, task: u64) -> bool {
        let before = self.tasks.len();
        self.tasks.retain(|&t| t != task);
        self.tasks.len() != before
    }

    pub fn contains(&self, task: u64) -> bool {
        self.tasks.contains(&task)
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }
}

/// CPU share of each task at each node for one TTI.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CpuShareMap {
    pub shares: BTreeMap<u64, BTreeMap<u64, f64>>,
}

impl CpuShareMap {
    pub fn set(&mut self, node: u64, task: u64, share: f64) {
        if share > 0.0 {
            self.shares.entry(node).or_default().insert(task, share.min(1.0));
        }
    }

    pub fn get(&self, node: u64, task: u64) -> f64 {
        self.shares.get(&node).and_then(|m| m.get(&task)).copied().unwrap_or(0.0)
    }

    pub fn node(&self, node: u64) -> Option<&BTreeMap<u64, f64>> {
        self.shares.get(&node)
    }

    /// Equal split among `tasks` at `node`.
    pub fn equal_split(&mut self, node: u64, tasks: &[u64]) {
        let e = 1.0 / tasks.len().max(1) as f64;
        for &t in tasks {
            self.set(node, t, e);
        }
    }

    /// Checks share bounds, per-node sums and queue membership.
    pub fn validate(&self, queues: &BTreeMap<u64, TaskQueue>) -> Result<()> {
        for (node, m) in &self.shares {
            let sum: f64 = m.values().sum();
            if sum > 1.0 + 1e-9 {
                return Err(Error::Config(format!("node {node} shares sum to {sum}")));
            }
            for (task, &e) in m {
                if !(0.0..=1.0).contains(&e) {
                    return Err(Error::Config(format!("share {e} of task {task} out of range")));
                }
                if e > 0.0 && !queues.get(node).is_some_and(|q| q.contains(*task)) {
                    return Err(Error::Config(format!("task {task} has a share at node {node} without being queued")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn queue_rules() {
        let mut q = TaskQueue::new(3);
        q.push(1, 3).unwrap();
        assert!(q.push(1, 3).is_err());
        assert!(q.push(2, 4).is_err());
        q.push(2, 3).unwrap();
        assert_eq!(q.tasks, vec![1, 2]);
        assert!(q.remove(1) && !q.remove(1));
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn share_validation() {
        let mut queues = BTreeMap::new();
        let mut q = TaskQueue::new(3);
        q.push(1, 3).unwrap();
        q.push(2, 3).unwrap();
        queues.insert(3, q);

        let mut m = CpuShareMap::default();
        m.equal_split(3, &[1, 2]);
        assert_eq!(m.get(3, 1), 0.5);
        assert!(m.validate(&queues).is_ok());

        m.set(3, 7, 0.1);
        assert!(m.validate(&queues).is_err());

        let mut over = CpuShareMap::default();
        over.set(3, 1, 0.7);
        over.set(3, 2, 0.7);
        assert!(over.validate(&queues).is_err());
    }
}
