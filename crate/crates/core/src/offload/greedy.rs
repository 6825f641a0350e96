//! Load-oblivious greedy baseline.
//!
//! Tasks pick, in creation order, the node with the smallest stand-alone
//! delay estimate (upload at the current full-band rate plus computation on
//! the whole CPU). Execution then shares resource blocks round-robin among
//! uploading tasks and each CPU equally among its computing tasks.

use super::instance::OffloadInstance;
use super::jobs::min_compute_slots;
use super::schedule::Schedule;

/// Stand-alone delay estimate in seconds, `None` if the node is unreachable.
pub fn greedy_estimate(inst: &OffloadInstance, k: usize, j: usize) -> Option<f64> {
    let t = &inst.tasks[k];
    let cap = inst.capacity[k][j][inst.release(k).min(inst.slots.saturating_sub(1))];
    let tx = if t.up <= 0.0 {
        0.0
    } else if cap > 0.0 {
        t.up / cap
    } else {
        return None;
    };
    Some(tx + t.req / inst.nodes[j].cpu_freq + inst.gap(k, j) as f64 * inst.dt)
}

/// Node choice per task.
pub fn greedy_choice(inst: &OffloadInstance) -> Vec<Option<usize>> {
    let mut order: Vec<usize> = (0..inst.tasks.len()).collect();
    order.sort_by_key(|&k| (inst.tasks[k].created, k));
    let mut out = vec![None; inst.tasks.len()];
    for k in order {
        if let Some(p) = inst.tasks[k].pinned {
            out[k] = Some(p);
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for j in 0..inst.nodes.len() {
            let Some(est) = greedy_estimate(inst, k, j) else { continue };
            if est > inst.tasks[k].deadline + 1e-12 {
                continue;
            }
            if best.is_none_or(|(b, _)| est < b) {
                best = Some((est, j));
            }
        }
        out[k] = best.map(|(_, j)| j);
    }
    out
}

/// Simulates equal sharing for a fixed assignment. The result is the raw
/// execution: tasks may finish past their deadline or not at all.
pub fn simulate_equal_share(inst: &OffloadInstance, assignment: &[Option<usize>]) -> Schedule {
    let n = inst.tasks.len();
    let mut s = Schedule::empty(inst);
    s.assignment = assignment.to_vec();
    let rb = inst.rb_count;
    let q = 1.0 / rb as f64;
    let mut bits: Vec<f64> = inst.tasks.iter().map(|t| t.up).collect();
    let mut cycles: Vec<f64> = inst.tasks.iter().map(|t| t.req).collect();
    // Slot from which computation may run.
    let mut ready: Vec<Option<usize>> = (0..n)
        .map(|k| match assignment[k] {
            Some(_) if inst.tasks[k].up <= 0.0 => Some(inst.release(k)),
            _ => None,
        })
        .collect();
    let late = |k: usize, t: usize| t >= inst.latest_end(k);

    for t in 0..inst.slots {
        // Uploads: hand out blocks one at a time, round-robin.
        let mut up: Vec<usize> = (0..n)
            .filter(|&k| assignment[k].is_some() && ready[k].is_none() && t >= inst.release(k) && !late(k, t))
            .collect();
        if !up.is_empty() {
            let rot = t % up.len();
            up.rotate_left(rot);
            let need: Vec<usize> = up
                .iter()
                .map(|&k| {
                    let per_rb = inst.slot_bits(k, assignment[k].expect("assigned"), t) * q;
                    if per_rb > 0.0 {
                        ((bits[k] / per_rb) - 1e-9).ceil().max(1.0) as usize
                    } else {
                        0
                    }
                })
                .collect();
            let mut got = vec![0usize; up.len()];
            let mut left = rb;
            while left > 0 {
                let mut progressed = false;
                for i in 0..up.len() {
                    if left > 0 && got[i] < need[i] {
                        got[i] += 1;
                        left -= 1;
                        progressed = true;
                    }
                }
                if !progressed {
                    break;
                }
            }
            for (i, &k) in up.iter().enumerate() {
                if got[i] == 0 {
                    continue;
                }
                let share = got[i] as f64 * q;
                s.tx_share[k][t] = share;
                bits[k] -= share * inst.slot_bits(k, assignment[k].expect("assigned"), t);
                if bits[k] <= 1e-9 * inst.tasks[k].up.max(1.0) {
                    bits[k] = 0.0;
                    ready[k] = Some(t + 1 + inst.gap(k, assignment[k].expect("assigned")));
                }
            }
        }
        // Computation: water-filled equal split per node.
        for j in 0..inst.nodes.len() {
            let cap = inst.slot_cycles(j);
            let mut active: Vec<usize> = (0..n)
                .filter(|&k| {
                    assignment[k] == Some(j) && ready[k].is_some_and(|r| r <= t) && cycles[k] > 0.0 && !late(k, t)
                })
                .collect();
            let mut left = 1.0f64;
            while !active.is_empty() && left > 1e-12 {
                let each = left / active.len() as f64;
                let mut still = Vec::new();
                let mut used = 0.0;
                for &k in &active {
                    let need = cycles[k] / cap - s.cpu_share[k][t];
                    if need <= each {
                        s.cpu_share[k][t] += need;
                        used += need;
                    } else {
                        s.cpu_share[k][t] += each;
                        used += each;
                        still.push(k);
                    }
                }
                left -= used;
                if still.len() == active.len() {
                    break;
                }
                active = still;
            }
            for k in 0..n {
                if assignment[k] == Some(j) && s.cpu_share[k][t] > 0.0 {
                    cycles[k] -= s.cpu_share[k][t] * cap;
                    if cycles[k] <= 1e-9 * inst.tasks[k].req.max(1.0) {
                        cycles[k] = 0.0;
                    }
                }
            }
        }
    }
    s.derive_times(inst);
    s
}

/// Greedy assignment followed by equal-share execution. Tasks that miss their
/// deadline are dropped one at a time (latest created first) and the
/// execution is replayed, so the returned schedule always validates.
pub fn greedy_assign(inst: &OffloadInstance) -> Schedule {
    let mut assignment = greedy_choice(inst);
    loop {
        let s = simulate_equal_share(inst, &assignment);
        let late: Vec<usize> = (0..inst.tasks.len())
            .filter(|&k| assignment[k].is_some() && !completes(inst, &s, k))
            .collect();
        let Some(&drop) = late.iter().max_by_key(|&&k| (inst.tasks[k].created, k)) else {
            return s;
        };
        assignment[drop] = None;
    }
}

fn completes(inst: &OffloadInstance, s: &Schedule, k: usize) -> bool {
    let Some(j) = s.assignment[k] else { return true };
    let sent: f64 = (0..inst.slots).map(|t| s.tx_share[k][t] * inst.slot_bits(k, j, t)).sum();
    let done: f64 = (0..inst.slots).map(|t| s.cpu_share[k][t] * inst.slot_cycles(j)).sum();
    let t = &inst.tasks[k];
    sent + 1e-7 * t.up.max(1.0) >= t.up
        && done + 1e-7 * t.req.max(1.0) >= t.req
        && s.times[k].is_some_and(|tt| tt.comp_end <= inst.latest_end_abs(k))
        && min_compute_slots(inst, k, j) <= inst.slots
}
