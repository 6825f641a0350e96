//! Earliest-slot priority filling of a shared per-slot resource.
//!
//! Jobs are served in priority order; each takes as much of the residual
//! resource as it needs from its release slot onward. This is the same as
//! preemptive static-priority scheduling, so filling in deadline order is EDF.

#[derive(Debug, Clone, PartialEq)]
pub struct FillJob {
    /// First usable slot.
    pub release: usize,
    /// Exclusive slot bound by which the demand must be met.
    pub deadline: usize,
    pub demand: f64,
    /// Units delivered per slot at a full share, indexed by slot.
    pub rate: Vec<f64>,
}

impl FillJob {
    /// Demand in whole-share slots when the rate is constant.
    pub fn slot_units(&self) -> f64 {
        let r = self.rate.get(self.release).copied().unwrap_or(0.0);
        if self.demand <= done_tol(self.demand) {
            0.0
        } else if r > 0.0 {
            self.demand / r
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FillResult {
    pub shares: Vec<f64>,
    /// Exclusive end slot (last used slot + 1), or the release slot for
    /// zero demand.
    pub end: usize,
}

const AVAIL_EPS: f64 = 1e-12;

pub(crate) fn done_tol(demand: f64) -> f64 {
    1e-9 * demand.max(1.0)
}

/// Fills one job into `avail`, consuming what it takes. Shares are multiples
/// of `quantum` when one is given. Returns `None` (leaving `avail` untouched)
/// when the demand cannot be met before the deadline.
pub fn fill_one(job: &FillJob, avail: &mut [f64], quantum: Option<f64>) -> Option<FillResult> {
    let slots = avail.len();
    let mut shares = vec![0.0; slots];
    let mut left = job.demand;
    if left <= done_tol(job.demand) {
        return Some(FillResult { shares, end: job.release.min(slots) });
    }
    let mut end = None;
    for t in job.release..job.deadline.min(slots) {
        let rate = job.rate[t];
        if rate <= 0.0 || avail[t] <= AVAIL_EPS {
            continue;
        }
        let need = left / rate;
        let take = match quantum {
            None => need.min(avail[t]),
            Some(q) => {
                let have = (avail[t] / q + 1e-9).floor() * q;
                let want = (need / q - 1e-9).ceil().max(1.0) * q;
                want.min(have)
            }
        };
        if take <= AVAIL_EPS {
            continue;
        }
        shares[t] = take;
        left -= take * rate;
        if left <= done_tol(job.demand) {
            end = Some(t + 1);
            break;
        }
    }
    let end = end?;
    for (a, s) in avail.iter_mut().zip(&shares) {
        *a -= s;
        if *a < AVAIL_EPS {
            *a = 0.0;
        }
    }
    Some(FillResult { shares, end })
}

/// Fills jobs in `order`. Jobs that do not fit get `None` and consume nothing.
pub fn priority_fill(jobs: &[FillJob], order: &[usize], avail: &mut [f64], quantum: Option<f64>) -> Vec<Option<FillResult>> {
    let mut out = vec![None; jobs.len()];
    for &k in order {
        out[k] = fill_one(&jobs[k], avail, quantum);
    }
    out
}

/// Order by deadline, then release, then index.
pub fn edf_order(jobs: &[FillJob]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by_key(|&k| (jobs[k].deadline, jobs[k].release, k));
    order
}

/// Exact feasibility for time-constant rates: every job meets its deadline
/// iff EDF filling succeeds.
pub fn edf_feasible(jobs: &[FillJob], slots: usize) -> Option<Vec<FillResult>> {
    let mut avail = vec![1.0; slots];
    let out = priority_fill(jobs, &edf_order(jobs), &mut avail, None);
    out.into_iter().collect()
}

/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(release: usize, deadline: usize, demand: f64) -> FillJob {
        FillJob { release, deadline, demand, rate: vec![1.0; 10] }
    }

    #[test]
    fn fills_earliest_slots() {
        let mut avail = vec![1.0; 10];
        let r = fill_one(&job(2, 10, 1.5), &mut avail, None).unwrap();
        assert_eq!(r.end, 4);
        assert_eq!(r.shares[2], 1.0);
        assert!((r.shares[3] - 0.5).abs() < 1e-12);
        assert!((avail[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quantized_shares_round_up() {
        let mut avail = vec![1.0; 10];
        let r = fill_one(&job(0, 10, 0.12), &mut avail, Some(0.05)).unwrap();
        assert_eq!(r.end, 1);
        assert!((r.shares[0] - 0.15).abs() < 1e-12);
    }

    #[test]
    fn missing_deadline_consumes_nothing() {
        let mut avail = vec![1.0; 10];
        assert!(fill_one(&job(0, 2, 2.5), &mut avail, None).is_none());
        assert!(avail.iter().all(|a| *a == 1.0));
    }

    #[test]
    fn edf_beats_a_bad_order() {
        let jobs = vec![job(0, 10, 3.0), job(0, 2, 2.0)];
        let mut avail = vec![1.0; 10];
        let bad = priority_fill(&jobs, &[0, 1], &mut avail, None);
        assert!(bad[1].is_none());
        assert!(edf_feasible(&jobs, 10).is_some());
    }

    #[test]
    fn permutations_are_complete() {
        let mut seen = std::collections::BTreeSet::new();
        for_each_permutation(4, |p| {
            seen.insert(p.to_vec());
        });
        assert_eq!(seen.len(), 24);
    }
}
