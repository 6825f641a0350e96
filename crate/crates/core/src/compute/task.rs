use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::event::FailReason;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskState {
    Pending,
    Transmitting,
    Queued,
    Computing,
    Done,
    Failed,
}

impl TaskState {
    pub fn is_final(self) -> bool {
        matches!(self, TaskState::Done | TaskState::Failed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub id: u64,
    pub origin: u64,
    /// Bits.
    pub up: f64,
    /// CPU cycles.
    pub req: f64,
    /// Delay tolerance in seconds.
    pub deadline: f64,
    pub created_tti: u64,
    pub assigned_node: Option<u64>,
    /// Radio receiver when the assigned node sits behind a wired link.
    #[serde(default)]
    pub relay: Option<u64>,
    pub remaining_bits: f64,
    pub remaining_cycles: f64,
    pub state: TaskState,
    /// TTI in which the upload finished.
    pub tran_end: Option<u64>,
    /// First TTI in which the uploaded input is usable at the node.
    pub available_tti: Option<u64>,
    pub comp_end: Option<u64>,
    pub fail_reason: Option<FailReason>,
}

impl Task {
    pub fn new(id: u64, origin: u64, up: f64, req: f64, deadline: f64, created_tti: u64) -> Self {
        Self {
            id,
            origin,
            up,
            req,
            deadline,
            created_tti,
            assigned_node: None,
            relay: None,
            remaining_bits: up,
            remaining_cycles: req,
            state: TaskState::Pending,
            tran_end: None,
            available_tti: None,
            comp_end: None,
            fail_reason: None,
        }
    }

    /// Seconds from creation to the end of TTI `tti`.
    pub fn elapsed_at_end(&self, tti: u64, dt: f64) -> f64 {
        (tti + 1).saturating_sub(self.created_tti) as f64 * dt
    }

    pub fn latency(&self, dt: f64) -> Option<f64> {
        self.comp_end.map(|t| self.elapsed_at_end(t, dt))
    }

    pub fn fail(&mut self, reason: FailReason) {
        self.state = TaskState::Failed;
        self.fail_reason = Some(reason);
    }
}

/// Bits left below this count as delivered.
pub const BIT_TOL: f64 = 1e-6;
/// Cycles left below this count as executed.
pub const CYCLE_TOL: f64 = 1e-3;

/// `req / (epsilon F)` seconds.
pub fn compute_delay(req: f64, epsilon: f64, f: f64) -> Result<f64> {
    if req == 0.0 {
        return Ok(0.0);
    }
    if !(epsilon > 0.0) || !(f > 0.0) {
        return Err(Error::ZeroCpuShare);
    }
    Ok(req / (epsilon * f))
}

/// `up / C` seconds; infinite when the link carries nothing.
pub fn transmission_delay(up: f64, c: f64) -> f64 {
    if up == 0.0 {
        0.0
    } else if c > 0.0 {
        up / c
    } else {
        f64::INFINITY
    }
}

/// Moves `capacity * dt` bits; returns true when the upload completes in
/// TTI `tti`, which leaves the task `Queued`.
pub fn step_transmit(task: &mut Task, capacity: f64, dt: f64, tti: u64) -> bool {
    if task.state != TaskState::Transmitting {
        return false;
    }
    task.remaining_bits = (task.remaining_bits - capacity.max(0.0) * dt).max(0.0);
    if task.remaining_bits <= BIT_TOL {
        task.remaining_bits = 0.0;
        task.state = TaskState::Queued;
        task.tran_end = Some(tti);
        return true;
    }
    false
}

/// Executes `epsilon F dt` cycles and returns the cycles actually consumed.
/// A finished task becomes `Done` with `comp_end = tti`.
pub fn step_compute_task(task: &mut Task, epsilon: f64, f: f64, dt: f64, tti: u64) -> f64 {
    if !matches!(task.state, TaskState::Queued | TaskState::Computing) || epsilon <= 0.0 {
        return 0.0;
    }
    task.state = TaskState::Computing;
    let before = task.remaining_cycles;
    task.remaining_cycles = (before - epsilon * f * dt).max(0.0);
    if task.remaining_cycles <= CYCLE_TOL {
        task.remaining_cycles = 0.0;
        task.state = TaskState::Done;
        task.comp_end = Some(tti);
    }
    before - task.remaining_cycles
}

/// Advances every task holding a share at one node. Returns the finished task
/// ids and the total cycles executed.
pub fn step_compute(
    freq: f64,
    shares: &BTreeMap<u64, f64>,
    tasks: &mut BTreeMap<u64, Task>,
    dt: f64,
    tti: u64,
) -> (Vec<u64>, f64) {
    let mut done = Vec::new();
    let mut cycles = 0.0;
    for (&id, &e) in shares {
        let Some(t) = tasks.get_mut(&id) else { continue };
        cycles += step_compute_task(t, e, freq, dt, tti);
        if t.state == TaskState::Done && t.comp_end == Some(tti) {
            done.push(id);
        }
    }
    (done, cycles)
}

/// Fails every live task whose elapsed time at the end of `tti` exceeds its
/// tolerance. Unassigned tasks fail as `Unassigned`, others as `Deadline`.
pub fn enforce_deadlines<'a>(
    tasks: impl IntoIterator<Item = &'a mut Task>,
    tti: u64,
    dt: f64,
) -> Vec<(u64, FailReason)> {
    let mut out = Vec::new();
    for t in tasks {
        if t.state.is_final() || t.elapsed_at_end(tti, dt) <= t.deadline + 1e-9 {
            continue;
        }
        let reason = if t.assigned_node.is_none() { FailReason::Unassigned } else { FailReason::Deadline };
        t.fail(reason);
        out.push((t.id, reason));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn transmitting(bits: f64) -> Task {
        let mut t = Task::new(1, 0, bits, 1e8, 0.5, 0);
        t.state = TaskState::Transmitting;
        t.assigned_node = Some(9);
        t
    }

    #[test]
    fn delays() {
        assert!((compute_delay(0.2e9, 1.0, 2.5e9).unwrap() - 0.08).abs() < 1e-15);
        assert_eq!(compute_delay(0.0, 0.0, 2.5e9).unwrap(), 0.0);
        assert_eq!(compute_delay(1e8, 0.5, 1e9).unwrap(), 2.0 * compute_delay(1e8, 1.0, 1e9).unwrap());
        assert!(matches!(compute_delay(1e8, 0.0, 1e9), Err(Error::ZeroCpuShare)));
        assert_eq!(transmission_delay(1e6, 2e7), 0.05);
        assert_eq!(transmission_delay(0.0, 0.0), 0.0);
        assert_eq!(transmission_delay(1e6, 4e7), transmission_delay(1e6, 2e7) / 2.0);
        assert!(transmission_delay(1.0, 0.0).is_infinite());
    }

    #[test]
    fn transmit_steps() {
        let mut t = transmitting(1e4);
        assert!(!step_transmit(&mut t, 0.0, 0.05, 0));
        assert_eq!(t.remaining_bits, 1e4);
        assert!(step_transmit(&mut t, 1e6, 0.05, 2));
        assert_eq!((t.state, t.tran_end, t.remaining_bits), (TaskState::Queued, Some(2), 0.0));

        let mut exact = transmitting(5e4);
        assert!(step_transmit(&mut exact, 1e6, 0.05, 0));
        assert_eq!(exact.remaining_bits, 0.0);
    }

    #[test]
    fn compute_steps() {
        let mut t = transmitting(0.0);
        t.state = TaskState::Queued;
        t.remaining_cycles = 1e9;
        assert_eq!(step_compute_task(&mut t, 0.0, 5e9, 0.05, 0), 0.0);
        assert!((step_compute_task(&mut t, 1.0, 5e9, 0.05, 0) - 2.5e8).abs() < 1e-3);
        assert_eq!(t.state, TaskState::Computing);

        let mut a = t.clone();
        let mut b = t.clone();
        assert_eq!(step_compute_task(&mut a, 0.5, 5e9, 0.05, 1), step_compute_task(&mut b, 0.5, 5e9, 0.05, 1));
    }

    #[test]
    fn node_step_splits_evenly() {
        let mut tasks = BTreeMap::new();
        for id in [1, 2] {
            let mut t = Task::new(id, 0, 0.0, 2.5e8, 1.0, 0);
            t.state = TaskState::Queued;
            tasks.insert(id, t);
        }
        let shares = BTreeMap::from([(1, 0.5), (2, 0.5)]);
        let (done, cycles) = step_compute(5e9, &shares, &mut tasks, 0.05, 0);
        assert!(done.is_empty());
        assert!((cycles - 2.5e8).abs() < 1e-3);
        assert_eq!(tasks[&1].remaining_cycles, tasks[&2].remaining_cycles);
        let (done, _) = step_compute(5e9, &shares, &mut tasks, 0.05, 1);
        assert_eq!(done, vec![1, 2]);
    }

    #[test]
    fn compute_never_starts_before_upload() {
        let mut t = transmitting(1e5);
        assert_eq!(step_compute_task(&mut t, 1.0, 5e9, 0.05, 0), 0.0);
        assert_eq!(t.state, TaskState::Transmitting);
    }

    #[test]
    fn deadline_boundary() {
        // 0.2 s at 0.05 s per TTI: alive through the end of TTI 3.
        let mut tasks = vec![Task::new(1, 0, 1.0, 1.0, 0.2, 0)];
        assert!(enforce_deadlines(tasks.iter_mut(), 0, 0.05).is_empty());
        assert!(enforce_deadlines(tasks.iter_mut(), 3, 0.05).is_empty());
        assert_eq!(enforce_deadlines(tasks.iter_mut(), 4, 0.05), vec![(1, FailReason::Unassigned)]);
        assert_eq!(tasks[0].state, TaskState::Failed);

        let mut assigned = vec![transmitting(1e6)];
        assert_eq!(enforce_deadlines(assigned.iter_mut(), 20, 0.05), vec![(1, FailReason::Deadline)]);
    }
}
