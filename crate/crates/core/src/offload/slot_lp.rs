//! Continuous relaxation of one slot-allocation subproblem.
//!
//! With the opposite phase fixed, each job has a release, a deadline and a
//! demand on a shared per-slot resource. The relaxation minimizes the sum of
//! fractional completion times `sum_t (t + 1) * rate_t * s_t / demand`.

use super::fill::{done_tol, FillJob};
use super::simplex::{LinearProgram, Relation};
use crate::error::Result;
use crate::scalar::LpScalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SlotLpSolution<T> {
    /// `shares[k][t]`, zero outside the job's window.
    pub shares: Vec<Vec<T>>,
    pub value: T,
    pub pivots: usize,
}

impl<T: LpScalar> SlotLpSolution<T> {
    pub fn shares_f64(&self) -> Vec<Vec<f64>> {
        self.shares.iter().map(|r| r.iter().map(|v| v.to_f64_lossy()).collect()).collect()
    }
}

/// Solves the relaxation. `avail[t]` is the residual resource in slot `t`.
/// An infeasible program means the jobs over-commit the resource.
pub fn solve_slot_lp<T: LpScalar>(jobs: &[FillJob], avail: &[f64]) -> Result<SlotLpSolution<T>> {
    let slots = avail.len();
    let mut index = Vec::new();
    for (k, job) in jobs.iter().enumerate() {
        if job.demand <= done_tol(job.demand) {
            continue;
        }
        for t in job.release..job.deadline.min(slots) {
            if job.rate[t] > 0.0 && avail[t] > 0.0 {
                index.push((k, t));
            }
        }
    }
    let mut lp = LinearProgram::<T>::new(index.len());
    for (v, &(k, t)) in index.iter().enumerate() {
        let w = T::from_f64_lossy(jobs[k].rate[t]) / T::from_f64_lossy(jobs[k].demand);
        lp.objective[v] = T::from_f64_lossy((t + 1) as f64) * w;
    }
    for (k, job) in jobs.iter().enumerate() {
        if job.demand <= done_tol(job.demand) {
            continue;
        }
        let coeffs: Vec<(usize, T)> = index
            .iter()
            .enumerate()
            .filter(|(_, &(kk, _))| kk == k)
            .map(|(v, &(_, t))| (v, T::from_f64_lossy(job.rate[t]) / T::from_f64_lossy(job.demand)))
            .collect();
        lp.add(coeffs, Relation::Ge, T::one());
    }
    for (t, a) in avail.iter().enumerate() {
        let coeffs: Vec<(usize, T)> =
            index.iter().enumerate().filter(|(_, &(_, tt))| tt == t).map(|(v, _)| (v, T::one())).collect();
        if coeffs.len() > 0 {
            lp.add(coeffs, Relation::Le, T::from_f64_lossy(*a));
        }
    }
    let sol = lp.solve()?;
    let mut shares = vec![vec![T::zero(); slots]; jobs.len()];
    for (v, &(k, t)) in index.iter().enumerate() {
        shares[k][t] = sol.x[v].clone();
    }
    Ok(SlotLpSolution { shares, value: sol.value, pivots: sol.pivots })
}

/// Priority order by fractional completion time in an LP solution.
pub fn lp_order(jobs: &[FillJob], shares: &[Vec<f64>]) -> Vec<usize> {
    let key = |k: usize| -> f64 {
        let j = &jobs[k];
        if j.demand <= done_tol(j.demand) {
            return j.release as f64;
        }
        shares[k].iter().enumerate().map(|(t, s)| (t + 1) as f64 * s * j.rate[t] / j.demand).sum()
    };
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    let keys: Vec<f64> = order.iter().map(|&k| key(k)).collect();
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::scalar::rational;
    use num_rational::BigRational;

    fn job(release: usize, deadline: usize, demand: f64, slots: usize) -> FillJob {
        FillJob { release, deadline, demand, rate: vec![1.0; slots] }
    }

    #[test]
    fn single_job_takes_whole_slot() {
        let sol = solve_slot_lp::<f64>(&[job(0, 1, 1.0, 1)], &[1.0]).unwrap();
        assert!((sol.shares[0][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_jobs_share_symmetrically_or_sequentially() {
        // Two unit jobs on one resource over two slots: any optimum has value
        // 1.5 + 1.5 = 3 (fractional completions); sequential and split agree.
        let jobs = [job(0, 2, 1.0, 2), job(0, 2, 1.0, 2)];
        let q = solve_slot_lp::<BigRational>(&jobs, &[1.0, 1.0]).unwrap();
        assert_eq!(q.value, rational(3, 1));
        let f = solve_slot_lp::<f64>(&jobs, &[1.0, 1.0]).unwrap();
        assert!((f.value - 3.0).abs() < 1e-9);
        for t in 0..2 {
            assert!((f.shares[0][t] + f.shares[1][t] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn over_commitment_is_infeasible() {
        let jobs = [job(0, 2, 1.5, 2), job(0, 2, 1.0, 2)];
        assert!(matches!(solve_slot_lp::<f64>(&jobs, &[1.0, 1.0]), Err(Error::LpInfeasible)));
        assert!(matches!(solve_slot_lp::<BigRational>(&jobs, &[1.0, 1.0]), Err(Error::LpInfeasible)));
    }

    #[test]
    fn exact_and_float_routes_agree() {
        let jobs = [
            FillJob { release: 0, deadline: 4, demand: 3.0, rate: vec![2.0, 2.0, 1.0, 1.0] },
            FillJob { release: 1, deadline: 3, demand: 1.25, rate: vec![1.0, 1.0, 0.5, 0.5] },
        ];
        let avail = [1.0, 1.0, 1.0, 0.5];
        let q = solve_slot_lp::<BigRational>(&jobs, &avail).unwrap();
        let f = solve_slot_lp::<f64>(&jobs, &avail).unwrap();
        assert!((q.value.to_f64_lossy() - f.value).abs() < 1e-9);
        let order = lp_order(&jobs, &f.shares_f64());
        assert_eq!(order.len(), 2);
    }
}
