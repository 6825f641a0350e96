//! Exact solver for small instances.
//!
//! Enumerates every assignment and, per assignment, every vector of upload
//! end slots. Upload feasibility for a vector of end slots is exact: EDF
//! filling when each task's rate is constant over the window, a linear
//! program otherwise. Given the upload ends, each node is an independent
//! preemptive single-resource problem with release slots; the best completion
//! vector is met by EDF on its own completion slots, so the minimum over all
//! static priority orders is optimal.

use super::fill::{for_each_permutation, priority_fill, FillJob, FillResult};
use super::instance::OffloadInstance;
use super::jobs::{comp_job, earliest_completion, earliest_tx_end, min_compute_slots, uploads_meeting};
use super::schedule::Schedule;
use crate::error::{Error, Result};

pub const MAX_TASKS: usize = 3;
pub const MAX_NODES: usize = 3;
pub const MAX_SLOTS: usize = 20;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub objective: f64,
    pub schedule: Schedule,
}

struct Best {
    value: f64,
    mu: Vec<Option<usize>>,
    ends: Vec<usize>,
}

pub fn exact_oracle(inst: &OffloadInstance) -> Result<OracleResult> {
    let n = inst.tasks.len();
    if n > MAX_TASKS || inst.nodes.len() > MAX_NODES || inst.slots > MAX_SLOTS {
        return Err(Error::InstanceTooLarge { tasks: n, nodes: inst.nodes.len(), slots: inst.slots });
    }
    inst.validate()?;

    let mut best = Best { value: inst.punish * n as f64, mu: vec![None; n], ends: vec![0; n] };
    let choices: Vec<Vec<Option<usize>>> = (0..n)
        .map(|k| {
            let mut c = vec![None];
            for j in 0..inst.nodes.len() {
                let pinned_ok = inst.tasks[k].pinned.is_none_or(|p| p == j);
                if pinned_ok && earliest_completion(inst, k, j).is_some() {
                    c.push(Some(j));
                }
            }
            c
        })
        .collect();

    let mut mu = vec![None; n];
    enumerate_mu(inst, &choices, 0, &mut mu, &mut best);

    let schedule = reconstruct(inst, &best)?;
    let objective = super::schedule::objective(&schedule, inst)?;
    Ok(OracleResult { objective, schedule })
}

fn enumerate_mu(inst: &OffloadInstance, choices: &[Vec<Option<usize>>], k: usize, mu: &mut Vec<Option<usize>>, best: &mut Best) {
    if k == mu.len() {
        evaluate_mu(inst, mu, best);
        return;
    }
    for c in &choices[k] {
        mu[k] = *c;
        enumerate_mu(inst, choices, k + 1, mu, best);
    }
}

fn lower_bound(inst: &OffloadInstance, mu: &[Option<usize>]) -> f64 {
    mu.iter()
        .enumerate()
        .map(|(k, m)| match m {
            Some(j) => (inst.start_slot + earliest_completion(inst, k, *j).unwrap_or(inst.slots) as i64) as f64,
            None => inst.punish,
        })
        .sum()
}

fn evaluate_mu(inst: &OffloadInstance, mu: &[Option<usize>], best: &mut Best) {
    let base = lower_bound(inst, mu);
    if base >= best.value {
        return;
    }
    let assigned: Vec<usize> = (0..mu.len()).filter(|&k| mu[k].is_some()).collect();
    let mut ranges = Vec::with_capacity(assigned.len());
    for &k in &assigned {
        let j = mu[k].expect("assigned");
        let lo = earliest_tx_end(inst, k, j).expect("reachable by construction");
        let Some(mut hi) = inst.latest_end(k).checked_sub(inst.gap(k, j) + min_compute_slots(inst, k, j)) else {
            return;
        };
        if inst.tasks[k].up <= 0.0 {
            hi = hi.min(lo);
        }
        if lo > hi {
            return;
        }
        ranges.push((lo, hi));
    }
    let mut ends = vec![0usize; mu.len()];
    enumerate_ends(inst, mu, &assigned, &ranges, 0, &mut ends, best);
}

fn enumerate_ends(
    inst: &OffloadInstance,
    mu: &[Option<usize>],
    assigned: &[usize],
    ranges: &[(usize, usize)],
    i: usize,
    ends: &mut Vec<usize>,
    best: &mut Best,
) {
    if assigned.is_empty() {
        let value = inst.punish * mu.len() as f64;
        if value < best.value {
            *best = Best { value, mu: mu.to_vec(), ends: ends.clone() };
        }
        return;
    }
    let k = assigned[i];
    let (lo, hi) = ranges[i];
    let last = i + 1 == assigned.len();
    for e in lo..=hi {
        ends[k] = e;
        if last {
            // Later upload ends never help the last task once feasible.
            if tx_feasible(inst, mu, assigned, ends).is_some() {
                if let Some(cost) = compute_cost(inst, mu, ends) {
                    let value = cost + inst.punish * (mu.len() - assigned.len()) as f64;
                    if value < best.value {
                        *best = Best { value, mu: mu.to_vec(), ends: ends.clone() };
                    }
                }
                break;
            }
        } else {
            enumerate_ends(inst, mu, assigned, ranges, i + 1, ends, best);
        }
    }
}

fn tx_feasible(inst: &OffloadInstance, mu: &[Option<usize>], assigned: &[usize], ends: &[usize]) -> Option<Vec<Vec<f64>>> {
    uploads_meeting(inst, mu, assigned, ends)
}

/// Best compute fill of one node's tasks, returned per task, with its cost.
fn node_best(inst: &OffloadInstance, j: usize, tasks: &[usize], ends: &[usize]) -> Option<(f64, Vec<FillResult>)> {
    let jobs: Vec<FillJob> = tasks.iter().map(|&k| comp_job(inst, k, j, ends[k] + inst.gap(k, j))).collect();
    let mut best: Option<(f64, Vec<FillResult>)> = None;
    for_each_permutation(jobs.len(), |order| {
        let mut avail = vec![1.0; inst.slots];
        let out = priority_fill(&jobs, order, &mut avail, None);
        if let Some(res) = out.into_iter().collect::<Option<Vec<_>>>() {
            let cost: f64 = res.iter().map(|r| (inst.start_slot + r.end as i64) as f64).sum();
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                best = Some((cost, res));
            }
        }
    });
    best
}

fn compute_cost(inst: &OffloadInstance, mu: &[Option<usize>], ends: &[usize]) -> Option<f64> {
    let mut total = 0.0;
    for j in 0..inst.nodes.len() {
        let tasks: Vec<usize> = (0..mu.len()).filter(|&k| mu[k] == Some(j)).collect();
        if tasks.is_empty() {
            continue;
        }
        total += node_best(inst, j, &tasks, ends)?.0;
    }
    Some(total)
}

fn reconstruct(inst: &OffloadInstance, best: &Best) -> Result<Schedule> {
    let mut s = Schedule::empty(inst);
    let assigned: Vec<usize> = (0..best.mu.len()).filter(|&k| best.mu[k].is_some()).collect();
    if assigned.is_empty() {
        return Ok(s);
    }
    let tx = tx_feasible(inst, &best.mu, &assigned, &best.ends).ok_or(Error::Infeasible { tasks: assigned.clone() })?;
    for (i, &k) in assigned.iter().enumerate() {
        s.assignment[k] = best.mu[k];
        s.tx_share[k] = tx[i].clone();
    }
    for j in 0..inst.nodes.len() {
        let tasks: Vec<usize> = assigned.iter().copied().filter(|&k| best.mu[k] == Some(j)).collect();
        if tasks.is_empty() {
            continue;
        }
        let (_, res) = node_best(inst, j, &tasks, &best.ends).ok_or(Error::Infeasible { tasks: tasks.clone() })?;
        for (k, r) in tasks.iter().zip(res) {
            s.cpu_share[*k] = r.shares;
        }
    }
    s.derive_times(inst);
    Ok(s)
}
