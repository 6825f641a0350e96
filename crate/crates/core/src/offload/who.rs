//! Window-based Hungarian assignment followed by alternating refinement.

use serde::{Deserialize, Serialize};

use super::ao::{ao_refine, plan_for_assignment, AoConfig};
use super::hungarian::hungarian_solve;
use super::instance::OffloadInstance;
use super::jobs::{earliest_tx_end, min_compute_slots, try_insert};
use super::schedule::Schedule;
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct WindowPlan {
    pub schedule: Schedule,
    /// Estimated cost of each task's matched column, in seconds.
    pub estimates: Vec<Option<f64>>,
    /// Tasks with no admissible node in this window.
    pub gated: Vec<bool>,
}

/// Weight of a task's full-band upload time, in slots, added to its window
/// costs. Breaks ties between nodes toward the one that uses less band.
const BAND_TIE_BREAK: f64 = 1e-3;

/// Stand-alone completion estimate of task `k` on node `j`, in slots from the
/// task's release: full-band upload, backhaul gap, whole-CPU computation.
fn slot_estimate(inst: &OffloadInstance, k: usize, j: usize) -> Option<(usize, f64)> {
    let e = earliest_tx_end(inst, k, j)?;
    let r = inst.release(k);
    let p = inst.tasks[k].req / inst.slot_cycles(j);
    Some((e - r + inst.gap(k, j) + min_compute_slots(inst, k, j), p))
}

/// Builds the window cost matrix and a provisional earliest-slot plan.
///
/// Columns are (node, position) pairs: a task in position `r` from the end of
/// a node's sequence delays `r` completions by its processing time, so the
/// entry is `release + upload + gap + r * processing`, plus a small band
/// usage term. Entries whose
/// stand-alone estimate exceeds `min(tau, ws * dt)` (or the task's absolute
/// deadline, for in-flight tasks) are forbidden.
pub fn window_offload(inst: &OffloadInstance, cfg: &AoConfig) -> WindowPlan {
    let n = inst.tasks.len();
    let m = inst.nodes.len();
    let mut schedule = Schedule::empty(inst);
    if n == 0 || m == 0 {
        return WindowPlan { schedule, estimates: vec![None; n], gated: vec![true; n] };
    }
    let positions = n;
    let mut cost = vec![vec![None; m * positions]; n];
    for k in 0..n {
        let task = &inst.tasks[k];
        for j in 0..m {
            if task.pinned.is_some_and(|p| p != j) {
                continue;
            }
            let Some((est, p)) = slot_estimate(inst, k, j) else { continue };
            let release = inst.release(k);
            if release + est > inst.latest_end(k) {
                continue;
            }
            if task.pinned.is_none() {
                let waited = (inst.start_slot + release as i64 - task.created).max(0) as usize;
                let gate = task.deadline.min(inst.ws as f64 * inst.dt);
                if ((waited + est) as f64) * inst.dt > gate + 1e-9 {
                    continue;
                }
            }
            let base = (release + est) as f64 - p.ceil().max(0.0);
            let band = (task.up / inst.slot_bits(k, j, release).max(f64::MIN_POSITIVE)).min(inst.slots as f64);
            for r in 1..=positions {
                cost[k][j * positions + r - 1] = Some((base + r as f64 * p + BAND_TIE_BREAK * band) * inst.dt);
            }
        }
    }
    let gated: Vec<bool> = cost.iter().map(|row| row.iter().all(|c| c.is_none())).collect();
    let matching = hungarian_solve(&cost);
    let mut estimates = vec![None; n];
    let mut order: Vec<(f64, usize)> = Vec::new();
    for k in 0..n {
        if let Some(c) = matching.assignment[k] {
            let v = cost[k][c].expect("matched entries are finite");
            estimates[k] = Some(v);
            order.push((v, k));
        }
    }
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let quantum = Some(1.0 / inst.rb_count as f64);
    let mut matched = vec![None; n];
    let mut failed = Vec::new();
    for &(_, k) in &order {
        let j = matching.assignment[k].expect("matched") / positions;
        matched[k] = Some(j);
        if !try_insert(inst, &mut schedule, k, j, quantum) {
            failed.push(k);
        }
    }
    // Sequential insertion can block a later task that a joint plan fits.
    // Plan the matched set jointly, shedding the latest-created failing task
    // until a plan exists, and keep whichever plan is better.
    while !failed.is_empty() {
        let mut joint = Schedule::empty(inst);
        joint.assignment = matched.clone();
        if let Some(p) = plan_for_assignment(inst, &joint, cfg) {
            if p.raw_objective(inst) < schedule.raw_objective(inst) {
                schedule = p;
            }
            break;
        }
        let drop = *failed.iter().max_by_key(|&&k| (inst.tasks[k].created, k)).expect("nonempty");
        matched[drop] = None;
        failed.retain(|&k| k != drop);
    }
    for k in 0..n {
        if schedule.assignment[k].is_none() {
            estimates[k] = None;
        }
    }
    schedule.derive_times(inst);
    WindowPlan { schedule, estimates, gated }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub iterations: usize,
    pub objective_trace: Vec<f64>,
    pub lp_solves: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WhoConfig {
    pub ao: AoConfig,
    /// Rounds of single-task reassignment after refinement; zero keeps the
    /// Hungarian assignment as is.
    pub polish_rounds: usize,
}

impl Default for WhoConfig {
    fn default() -> Self {
        Self { ao: AoConfig::default(), polish_rounds: 2 }
    }
}

#[derive(Debug, Clone)]
pub struct WhoOutcome {
    pub schedule: Schedule,
    pub stats: SolverStats,
}

/// Full pipeline: Hungarian window assignment, alternating refinement, then
/// rounds of local moves: one admissible task to another node (or onto a
/// node, if it was left out), or two tasks exchanging nodes. Each move is
/// re-refined and kept only if it lowers the objective.
pub fn who_solve(inst: &OffloadInstance, cfg: &WhoConfig) -> Result<WhoOutcome> {
    inst.validate()?;
    let plan = window_offload(inst, &cfg.ao);
    let out = ao_refine(&plan.schedule, inst, &cfg.ao)?;
    let mut stats = SolverStats { iterations: out.iterations, objective_trace: out.trace.clone(), lp_solves: out.lp_solves };
    let mut best = out.schedule;
    let mut best_obj = best.raw_objective(inst);

    let quantum = Some(1.0 / inst.rb_count as f64);
    let movable: Vec<usize> =
        (0..inst.tasks.len()).filter(|&k| inst.tasks[k].pinned.is_none() && !plan.gated[k]).collect();
    for _ in 0..cfg.polish_rounds {
        let mut improved = false;
        for &k in &movable {
            for j in 0..inst.nodes.len() {
                if best.assignment[k] == Some(j) || slot_estimate(inst, k, j).is_none() {
                    continue;
                }
                let mut cand = best.clone();
                cand.unassign(k);
                cand.derive_times(inst);
                if !try_insert(inst, &mut cand, k, j, quantum) {
                    cand.assignment[k] = Some(j);
                }
                let Ok(o) = ao_refine(&cand, inst, &cfg.ao) else { continue };
                stats.iterations += o.iterations;
                stats.lp_solves += o.lp_solves;
                let v = o.schedule.raw_objective(inst);
                if v < best_obj - 1e-9 {
                    best = o.schedule;
                    best_obj = v;
                    stats.objective_trace.push(v);
                    improved = true;
                }
            }
        }
        for (ai, &a) in movable.iter().enumerate() {
            for &b in &movable[ai + 1..] {
                let (Some(ja), Some(jb)) = (best.assignment[a], best.assignment[b]) else { continue };
                if ja == jb || slot_estimate(inst, a, jb).is_none() || slot_estimate(inst, b, ja).is_none() {
                    continue;
                }
                let mut cand = Schedule::empty(inst);
                cand.assignment = best.assignment.clone();
                cand.assignment[a] = Some(jb);
                cand.assignment[b] = Some(ja);
                let Ok(o) = ao_refine(&cand, inst, &cfg.ao) else { continue };
                stats.iterations += o.iterations;
                stats.lp_solves += o.lp_solves;
                let v = o.schedule.raw_objective(inst);
                if v < best_obj - 1e-9 {
                    best = o.schedule;
                    best_obj = v;
                    stats.objective_trace.push(v);
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(WhoOutcome { schedule: best, stats })
}
