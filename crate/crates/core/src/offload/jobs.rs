//! Fill jobs derived from an instance, shared by all solvers.

use super::fill::{edf_feasible, fill_one, FillJob};
use super::instance::OffloadInstance;
use super::schedule::Schedule;
use super::slot_lp::solve_slot_lp;

pub(crate) fn tx_job(inst: &OffloadInstance, k: usize, j: usize, deadline: usize) -> FillJob {
    FillJob {
        release: inst.release(k),
        deadline,
        demand: inst.tasks[k].up,
        rate: (0..inst.slots).map(|t| inst.slot_bits(k, j, t)).collect(),
    }
}

pub(crate) fn comp_job(inst: &OffloadInstance, k: usize, j: usize, release: usize) -> FillJob {
    FillJob {
        release,
        deadline: inst.latest_end(k),
        demand: inst.tasks[k].req,
        rate: vec![inst.slot_cycles(j); inst.slots],
    }
}

/// Whole slots of computation at a full share.
pub(crate) fn min_compute_slots(inst: &OffloadInstance, k: usize, j: usize) -> usize {
    let units = inst.tasks[k].req / inst.slot_cycles(j);
    (units - 1e-9).ceil().max(0.0) as usize
}

/// Upload end with the whole band from the release slot, if reachable.
pub(crate) fn earliest_tx_end(inst: &OffloadInstance, k: usize, j: usize) -> Option<usize> {
    let job = tx_job(inst, k, j, inst.slots);
    let mut avail = vec![1.0; inst.slots];
    fill_one(&job, &mut avail, None).map(|r| r.end)
}

/// Earliest completion of task `k` alone on node `j`.
pub(crate) fn earliest_completion(inst: &OffloadInstance, k: usize, j: usize) -> Option<usize> {
    let e = earliest_tx_end(inst, k, j)?;
    let end = e + inst.gap(k, j) + min_compute_slots(inst, k, j);
    (end <= inst.latest_end(k)).then_some(end)
}

/// Residual band per slot after the given schedule's transmissions.
pub(crate) fn residual_band(inst: &OffloadInstance, s: &Schedule) -> Vec<f64> {
    (0..inst.slots).map(|t| (1.0 - s.tx_share.iter().map(|r| r[t]).sum::<f64>()).max(0.0)).collect()
}

/// Residual CPU of node `j` per slot.
pub(crate) fn residual_cpu(inst: &OffloadInstance, s: &Schedule, j: usize) -> Vec<f64> {
    (0..inst.slots)
        .map(|t| {
            let used: f64 = (0..inst.tasks.len()).filter(|&k| s.assignment[k] == Some(j)).map(|k| s.cpu_share[k][t]).sum();
            (1.0 - used).max(0.0)
        })
        .collect()
}

/// Relative upload end of an assigned task in a schedule.
pub(crate) fn rel_tran_end(inst: &OffloadInstance, s: &Schedule, k: usize) -> usize {
    s.times[k].map_or(inst.release(k), |t| (t.tran_end - inst.start_slot).max(0) as usize)
}

pub(crate) fn rel_comp_start(inst: &OffloadInstance, s: &Schedule, k: usize) -> usize {
    s.times[k].map_or(inst.slots, |t| (t.comp_start - inst.start_slot).max(0) as usize)
}

/// Sum of relative upload ends, a secondary objective for the upload phase.
pub(crate) fn tran_end_sum(inst: &OffloadInstance, s: &Schedule) -> usize {
    (0..inst.tasks.len()).filter(|&k| s.assignment[k].is_some()).map(|k| rel_tran_end(inst, s, k)).sum()
}

/// Tries to append task `k` on node `j` into the residual resources of `s`.
pub(crate) fn try_insert(inst: &OffloadInstance, s: &mut Schedule, k: usize, j: usize, quantum: Option<f64>) -> bool {
    if inst.tasks[k].pinned.is_some_and(|p| p != j) {
        return false;
    }
    let gap = inst.gap(k, j);
    let need = min_compute_slots(inst, k, j);
    let Some(deadline) = inst.latest_end(k).checked_sub(gap + need) else {
        return false;
    };
    let mut band = residual_band(inst, s);
    let Some(tx) = fill_one(&tx_job(inst, k, j, deadline), &mut band, quantum) else {
        return false;
    };
    let mut cpu = residual_cpu(inst, s, j);
    let Some(cp) = fill_one(&comp_job(inst, k, j, tx.end + gap), &mut cpu, None) else {
        return false;
    };
    s.assignment[k] = Some(j);
    s.tx_share[k] = tx.shares;
    s.cpu_share[k] = cp.shares;
    s.derive_times(inst);
    true
}

/// Upload shares that finish every listed task by its end slot, or `None`.
/// Exact: EDF when each rate is constant, a linear program otherwise.
pub(crate) fn uploads_meeting(
    inst: &OffloadInstance,
    mu: &[Option<usize>],
    tasks: &[usize],
    ends: &[usize],
) -> Option<Vec<Vec<f64>>> {
    let jobs: Vec<FillJob> = tasks.iter().map(|&k| tx_job(inst, k, mu[k].expect("assigned"), ends[k])).collect();
    if tasks.iter().all(|&k| inst.constant_capacity(k, mu[k].expect("assigned"))) {
        edf_feasible(&jobs, inst.slots).map(|r| r.into_iter().map(|f| f.shares).collect())
    } else {
        solve_slot_lp::<f64>(&jobs, &vec![1.0; inst.slots]).ok().map(|s| s.shares)
    }
}
