//! Alternating refinement of slot allocations under a fixed assignment.
//!
//! Each round first holds the uploads fixed and re-plans computation node by
//! node, then holds computation fixed and re-plans uploads so they finish as
//! early as possible. Both subproblems are solved as linear relaxations whose
//! priority order, together with a few classic orders (or every order when a
//! node holds few tasks), seeds an earliest-slot rounding. A candidate is
//! kept only when it validates and does not worsen the objective, so the
//! trace is non-increasing.

use serde::{Deserialize, Serialize};

use super::fill::{done_tol, edf_order, for_each_permutation, priority_fill, FillJob, FillResult};
use super::instance::OffloadInstance;
use super::jobs::{uploads_meeting, comp_job, min_compute_slots, rel_comp_start, rel_tran_end, tran_end_sum, tx_job};
use super::schedule::Schedule;
use super::slot_lp::{lp_order, solve_slot_lp};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AoConfig {
    pub tol: f64,
    pub max_iters: usize,
    /// Nodes with at most this many tasks try every priority order.
    pub exhaustive_orders: usize,
    /// Relaxations with more variables than this are skipped in favour of the
    /// classic orders alone.
    pub max_lp_vars: usize,
}

impl Default for AoConfig {
    fn default() -> Self {
        Self { tol: 1e-6, max_iters: 20, exhaustive_orders: 5, max_lp_vars: 400 }
    }
}

#[derive(Debug, Clone)]
pub struct AoOutcome {
    pub schedule: Schedule,
    pub iterations: usize,
    /// Objective after initialization and after every round.
    pub trace: Vec<f64>,
    pub lp_solves: usize,
}

pub fn ao_refine(schedule: &Schedule, inst: &OffloadInstance, cfg: &AoConfig) -> Result<AoOutcome> {
    let mut cur = schedule.clone();
    cur.derive_times(inst);
    let assigned: Vec<usize> = (0..inst.tasks.len()).filter(|&k| cur.assignment[k].is_some()).collect();
    if !relaxation_feasible(inst, &cur, &assigned) {
        return Err(Error::Infeasible { tasks: assigned });
    }
    let mut lp_solves = 0;
    if !cur.validate(inst).is_empty() {
        cur = initial_plan(inst, &cur, cfg, &mut lp_solves).ok_or_else(|| Error::Infeasible { tasks: assigned.clone() })?;
    }
    let mut obj = cur.raw_objective(inst);
    let mut trace = vec![obj];
    // Coordinate steps cannot reorder uploads past fixed compute starts, so a
    // joint re-plan is offered once up front.
    if let Some(cand) = initial_plan(inst, &cur, cfg, &mut lp_solves) {
        let v = cand.raw_objective(inst);
        if v < obj - 1e-9 {
            cur = cand;
            obj = v;
            trace.push(obj);
        }
    }
    let mut iterations = 0;
    for _ in 0..cfg.max_iters.max(1) {
        iterations += 1;
        let prev = cur.clone();

        if let Some(cand) = compute_step(inst, &cur, cfg, &mut lp_solves) {
            let v = cand.raw_objective(inst);
            if v < obj - 1e-9 && cand.validate(inst).is_empty() {
                cur = cand;
                obj = v;
            }
        }
        if let Some(cand) = transmit_step(inst, &cur, cfg, &mut lp_solves) {
            if tran_end_sum(inst, &cand) < tran_end_sum(inst, &cur)
                && cand.raw_objective(inst) <= obj
                && cand.validate(inst).is_empty()
            {
                cur = cand;
            }
        }
        if let Some(cand) = tighten_step(inst, &cur, obj, cfg, &mut lp_solves) {
            cur = cand;
            obj = cur.raw_objective(inst);
        }
        trace.push(obj);
        let (dx, dy) = cur.indicator_distance(&prev);
        if dx < cfg.tol && dy < cfg.tol {
            break;
        }
    }
    Ok(AoOutcome { schedule: cur, iterations, trace, lp_solves })
}

/// Necessary condition: uploads fit the shared band with every task leaving
/// itself just enough slots to compute alone.
fn relaxation_feasible(inst: &OffloadInstance, s: &Schedule, assigned: &[usize]) -> bool {
    let mut jobs = Vec::new();
    for &k in assigned {
        let j = s.assignment[k].expect("assigned");
        let Some(d) = inst.latest_end(k).checked_sub(inst.gap(k, j) + min_compute_slots(inst, k, j)) else {
            return false;
        };
        if d < inst.release(k) && inst.tasks[k].up > 0.0 {
            return false;
        }
        jobs.push(tx_job(inst, k, j, d));
    }
    if jobs.iter().all(|j| j.demand <= done_tol(j.demand)) {
        return true;
    }
    match solve_slot_lp::<f64>(&jobs, &vec![1.0; inst.slots]) {
        Ok(_) => true,
        Err(Error::LpInfeasible) => false,
        Err(_) => true,
    }
}

fn candidate_orders(jobs: &[FillJob], lp: Option<Vec<usize>>, current: Vec<usize>, cfg: &AoConfig) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if jobs.len() <= cfg.exhaustive_orders {
        for_each_permutation(jobs.len(), |p| out.push(p.to_vec()));
        return out;
    }
    if let Some(o) = lp {
        out.push(o);
    }
    out.push(current);
    out.push(edf_order(jobs));
    let mut srpt: Vec<usize> = (0..jobs.len()).collect();
    srpt.sort_by(|&a, &b| jobs[a].slot_units().total_cmp(&jobs[b].slot_units()).then(a.cmp(&b)));
    out.push(srpt);
    let mut fifo: Vec<usize> = (0..jobs.len()).collect();
    fifo.sort_by_key(|&k| (jobs[k].release, k));
    out.push(fifo);
    out.dedup();
    out
}

fn lp_candidate(jobs: &[FillJob], slots: usize, cfg: &AoConfig, lp_solves: &mut usize) -> Option<Vec<usize>> {
    if jobs.len() <= cfg.exhaustive_orders {
        return None;
    }
    let vars: usize = jobs.iter().map(|j| j.deadline.min(slots).saturating_sub(j.release)).sum();
    if vars > cfg.max_lp_vars {
        return None;
    }
    *lp_solves += 1;
    let sol = solve_slot_lp::<f64>(jobs, &vec![1.0; slots]).ok()?;
    Some(lp_order(jobs, &sol.shares))
}

/// Best rounding over candidate orders by `score`; all jobs must fit.
fn best_rounding(
    jobs: &[FillJob],
    orders: Vec<Vec<usize>>,
    slots: usize,
    quantum: Option<f64>,
    score: impl Fn(&[FillResult]) -> usize,
) -> Option<Vec<FillResult>> {
    let mut best: Option<(usize, Vec<FillResult>)> = None;
    for order in orders {
        let mut avail = vec![1.0; slots];
        let out = priority_fill(jobs, &order, &mut avail, quantum);
        let Some(res) = out.into_iter().collect::<Option<Vec<_>>>() else {
            continue;
        };
        let sc = score(&res);
        if best.as_ref().is_none_or(|(b, _)| sc < *b) {
            best = Some((sc, res));
        }
    }
    best.map(|(_, r)| r)
}

/// Re-plans computation per node with uploads fixed.
fn compute_step(inst: &OffloadInstance, cur: &Schedule, cfg: &AoConfig, lp_solves: &mut usize) -> Option<Schedule> {
    let mut next = cur.clone();
    for j in 0..inst.nodes.len() {
        let tasks: Vec<usize> = (0..inst.tasks.len()).filter(|&k| cur.assignment[k] == Some(j)).collect();
        if tasks.is_empty() {
            continue;
        }
        let jobs: Vec<FillJob> =
            tasks.iter().map(|&k| comp_job(inst, k, j, rel_tran_end(inst, cur, k) + inst.gap(k, j))).collect();
        let mut current: Vec<usize> = (0..tasks.len()).collect();
        current.sort_by_key(|&i| (cur.times[tasks[i]].map_or(i64::MAX, |t| t.comp_end), i));
        let lp = lp_candidate(&jobs, inst.slots, cfg, lp_solves);
        let orders = candidate_orders(&jobs, lp, current, cfg);
        let res = best_rounding(&jobs, orders, inst.slots, None, |r| r.iter().map(|f| f.end).sum())?;
        for (k, r) in tasks.iter().zip(res) {
            next.cpu_share[*k] = r.shares;
        }
    }
    next.derive_times(inst);
    Some(next)
}

/// Re-plans uploads with computation fixed, finishing each before its
/// computation starts.
fn transmit_step(inst: &OffloadInstance, cur: &Schedule, cfg: &AoConfig, lp_solves: &mut usize) -> Option<Schedule> {
    let tasks: Vec<usize> = (0..inst.tasks.len()).filter(|&k| cur.assignment[k].is_some()).collect();
    if tasks.is_empty() {
        return None;
    }
    let jobs: Vec<FillJob> = tasks
        .iter()
        .map(|&k| {
            let j = cur.assignment[k].expect("assigned");
            let d = rel_comp_start(inst, cur, k).saturating_sub(inst.gap(k, j));
            tx_job(inst, k, j, d)
        })
        .collect();
    let mut current: Vec<usize> = (0..tasks.len()).collect();
    current.sort_by_key(|&i| (rel_tran_end(inst, cur, tasks[i]), i));
    let lp = lp_candidate(&jobs, inst.slots, cfg, lp_solves);
    let orders = candidate_orders(&jobs, lp, current, cfg);
    let quantum = Some(1.0 / inst.rb_count as f64);
    let res = best_rounding(&jobs, orders, inst.slots, quantum, |r| r.iter().map(|f| f.end).sum())?;
    let mut next = cur.clone();
    for (k, r) in tasks.iter().zip(res) {
        next.tx_share[*k] = r.shares;
    }
    next.derive_times(inst);
    Some(next)
}

/// Pulls single upload ends one slot earlier while the uploads stay
/// feasible, re-planning computation after each; the first strict
/// improvement of the objective is returned.
fn tighten_step(inst: &OffloadInstance, cur: &Schedule, obj: f64, cfg: &AoConfig, lp_solves: &mut usize) -> Option<Schedule> {
    let tasks: Vec<usize> = (0..inst.tasks.len()).filter(|&k| cur.assignment[k].is_some() && inst.tasks[k].up > 0.0).collect();
    let constant = tasks.iter().all(|&k| inst.constant_capacity(k, cur.assignment[k].expect("assigned")));
    let vars: usize = tasks.iter().map(|&k| rel_tran_end(inst, cur, k).saturating_sub(inst.release(k))).sum();
    if tasks.is_empty() || (!constant && vars > cfg.max_lp_vars) {
        return None;
    }
    let mut ends = vec![0usize; inst.tasks.len()];
    for &k in &tasks {
        ends[k] = rel_tran_end(inst, cur, k);
    }
    let mut by_end = tasks.clone();
    by_end.sort_by_key(|&k| (std::cmp::Reverse(ends[k]), k));
    for &k in &by_end {
        if ends[k] <= inst.release(k) + 1 {
            continue;
        }
        ends[k] -= 1;
        if !constant {
            *lp_solves += 1;
        }
        let shares = uploads_meeting(inst, &cur.assignment, &tasks, &ends);
        ends[k] += 1;
        let Some(shares) = shares else { continue };
        let mut next = cur.clone();
        for (t, sh) in tasks.iter().zip(shares) {
            next.tx_share[*t] = sh;
        }
        next.derive_times(inst);
        let Some(planned) = compute_step(inst, &next, cfg, lp_solves) else { continue };
        if planned.raw_objective(inst) < obj - 1e-9 && planned.validate(inst).is_empty() {
            return Some(planned);
        }
    }
    None
}

/// A feasible plan for the assignment of `s` built from scratch, or `None`.
pub(crate) fn plan_for_assignment(inst: &OffloadInstance, s: &Schedule, cfg: &AoConfig) -> Option<Schedule> {
    let mut lp_solves = 0;
    initial_plan(inst, s, cfg, &mut lp_solves)
}

/// Uploads by each candidate priority order, with deadlines that leave room
/// to compute, followed by the computation step; the best valid result wins.
fn initial_plan(inst: &OffloadInstance, s: &Schedule, cfg: &AoConfig, lp_solves: &mut usize) -> Option<Schedule> {
    let tasks: Vec<usize> = (0..inst.tasks.len()).filter(|&k| s.assignment[k].is_some()).collect();
    let jobs: Vec<FillJob> = tasks
        .iter()
        .map(|&k| {
            let j = s.assignment[k].expect("assigned");
            let d = inst.latest_end(k).saturating_sub(inst.gap(k, j) + min_compute_slots(inst, k, j));
            tx_job(inst, k, j, d)
        })
        .collect();
    let lp = lp_candidate(&jobs, inst.slots, cfg, lp_solves);
    let orders = candidate_orders(&jobs, lp, edf_order(&jobs), cfg);
    let quantum = Some(1.0 / inst.rb_count as f64);
    let mut best: Option<(f64, Schedule)> = None;
    // Whole resource blocks first; fractional shares only win when strictly better.
    for (order, q) in orders.iter().map(|o| (o, quantum)).chain(orders.iter().map(|o| (o, None))) {
        let mut avail = vec![1.0; inst.slots];
        let out = priority_fill(&jobs, order, &mut avail, q);
        let Some(tx) = out.into_iter().collect::<Option<Vec<_>>>() else {
            continue;
        };
        let mut next = Schedule::empty(inst);
        for (k, r) in tasks.iter().zip(tx) {
            next.assignment[*k] = s.assignment[*k];
            next.tx_share[*k] = r.shares;
        }
        next.derive_times(inst);
        let Some(planned) = compute_step(inst, &next, cfg, lp_solves) else {
            continue;
        };
        let v = planned.raw_objective(inst);
        if best.as_ref().is_none_or(|(b, _)| v < *b) && planned.validate(inst).is_empty() {
            best = Some((v, planned));
        }
    }
    best.map(|(_, p)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::offload::instance::{InstanceNode, InstanceTask};
    use crate::offload::jobs::try_insert;

    fn inst() -> OffloadInstance {
        OffloadInstance {
            start_slot: 0,
            slots: 20,
            dt: 0.05,
            ws: 10,
            punish: 200.0,
            rb_count: 20,
            tasks: vec![InstanceTask { id: 0, created: 0, up: 0.5e6, req: 0.3e9, deadline: 1.0, ..Default::default() }],
            nodes: vec![InstanceNode { id: 0, cpu_freq: 2.5e9, release_gap: 0 }],
            capacity: vec![vec![vec![4e6; 20]]],
        }
    }

    #[test]
    fn single_task_matches_closed_form() {
        let i = inst();
        let mut s = Schedule::empty(&i);
        s.assignment[0] = Some(0);
        let out = ao_refine(&s, &i, &AoConfig::default()).unwrap();
        let t = out.schedule.times[0].unwrap();
        let tx_slots = (0.5e6f64 / (4e6 * 0.05)).ceil() as i64;
        assert_eq!(t.tran_end, tx_slots);
        assert_eq!(t.comp_start, tx_slots);
        assert_eq!(t.comp_end, tx_slots + 3);
        assert!(out.schedule.validate(&i).is_empty());
    }

    #[test]
    fn optimal_input_is_a_fixed_point() {
        let i = inst();
        let mut s = Schedule::empty(&i);
        assert!(try_insert(&i, &mut s, 0, 0, Some(0.05)));
        let out = ao_refine(&s, &i, &AoConfig::default()).unwrap();
        assert_eq!(out.iterations, 1);
        assert_eq!(out.schedule, s);
    }

    #[test]
    fn overcommitted_assignment_is_reported() {
        let mut i = inst();
        i.tasks[0].deadline = 0.2;
        let mut s = Schedule::empty(&i);
        s.assignment[0] = Some(0);
        assert!(matches!(ao_refine(&s, &i, &AoConfig::default()), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn improves_a_bad_compute_order() {
        let mut i = inst();
        i.tasks[0] = InstanceTask { id: 0, created: 0, up: 0.1e6, req: 0.375e9, deadline: 1.0, ..Default::default() };
        i.tasks.push(InstanceTask { id: 1, created: 0, up: 0.1e6, req: 0.125e9, deadline: 1.0, ..Default::default() });
        i.capacity = vec![vec![vec![1e8; 20]]; 2];
        let mut s = Schedule::empty(&i);
        assert!(try_insert(&i, &mut s, 0, 0, Some(0.05)));
        assert!(try_insert(&i, &mut s, 1, 0, Some(0.05)));
        let before = s.raw_objective(&i);
        let out = ao_refine(&s, &i, &AoConfig::default()).unwrap();
        assert!(out.trace.windows(2).all(|w| w[1] <= w[0]));
        // Long task first: 4 + 5; short first: 2 + 5.
        assert_eq!(before, 9.0);
        assert_eq!(out.schedule.raw_objective(&i), 7.0);
    }
}
