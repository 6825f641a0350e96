//! Dense two-phase simplex over any [`LpScalar`].
//!
//! Minimizes `c.x` subject to sparse rows `a.x (<=|=|>=) b` and `x >= 0`.
//! Pricing is Dantzig's rule, switching to Bland's rule after a run of
//! degenerate pivots so the method cannot cycle.

use crate::error::{Error, Result};
use crate::scalar::LpScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint<T> {
    pub coeffs: Vec<(usize, T)>,
    pub rel: Relation,
    pub rhs: T,
}

#[derive(Debug, Clone)]
pub struct LinearProgram<T> {
    pub vars: usize,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub x: Vec<T>,
    pub value: T,
    pub pivots: usize,
}

impl<T: LpScalar> LinearProgram<T> {
    pub fn new(vars: usize) -> Self {
        Self { vars, objective: vec![T::zero(); vars], constraints: Vec::new() }
    }

    pub fn add(&mut self, coeffs: Vec<(usize, T)>, rel: Relation, rhs: T) {
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn solve(&self) -> Result<LpSolution<T>> {
        Tableau::build(self).run(self)
    }
}

const DEGENERATE_RUN: usize = 50;
const MAX_PIVOTS: usize = 50_000;

struct Tableau<T> {
    /// `rows x (cols + 1)`; the last column is the right-hand side.
    a: Vec<Vec<T>>,
    basis: Vec<usize>,
    cols: usize,
    /// Columns from this index on are artificial.
    first_artificial: usize,
    pivots: usize,
}

impl<T: LpScalar> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let m = lp.constraints.len();
        let slack_count = lp.constraints.iter().filter(|c| c.rel != Relation::Eq).count();
        let mut art_count = 0;
        let mut flips = Vec::with_capacity(m);
        for c in &lp.constraints {
            let flip = c.rhs.is_negative();
            let rel = match (c.rel, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            if rel != Relation::Le {
                art_count += 1;
            }
            flips.push((flip, rel));
        }
        let first_slack = lp.vars;
        let first_artificial = first_slack + slack_count;
        let cols = first_artificial + art_count;
        let mut a = vec![vec![T::zero(); cols + 1]; m];
        let mut basis = vec![0; m];
        let (mut s, mut r) = (first_slack, first_artificial);
        for (i, c) in lp.constraints.iter().enumerate() {
            let (flip, rel) = flips[i];
            let sign = if flip { -T::one() } else { T::one() };
            for (j, v) in &c.coeffs {
                a[i][*j] = a[i][*j].clone() + sign.clone() * v.clone();
            }
            a[i][cols] = sign * c.rhs.clone();
            match rel {
                Relation::Le => {
                    a[i][s] = T::one();
                    basis[i] = s;
                    s += 1;
                }
                Relation::Ge => {
                    a[i][s] = -T::one();
                    s += 1;
                    a[i][r] = T::one();
                    basis[i] = r;
                    r += 1;
                }
                Relation::Eq => {
                    a[i][r] = T::one();
                    basis[i] = r;
                    r += 1;
                }
            }
        }
        Self { a, basis, cols, first_artificial, pivots: 0 }
    }

    fn run(mut self, lp: &LinearProgram<T>) -> Result<LpSolution<T>> {
        if self.first_artificial < self.cols {
            let mut phase1 = vec![T::zero(); self.cols];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = T::one();
            }
            let value = self.optimize(&phase1, self.cols)?;
            if value.is_pos() {
                return Err(Error::LpInfeasible);
            }
            self.drive_out_artificials();
        }
        let mut cost = vec![T::zero(); self.cols];
        for (j, c) in lp.objective.iter().enumerate() {
            cost[j] = c.clone();
        }
        let value = self.optimize(&cost, self.first_artificial)?;
        let mut x = vec![T::zero(); lp.vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < lp.vars {
                x[b] = self.a[i][self.cols].clone();
            }
        }
        Ok(LpSolution { x, value, pivots: self.pivots })
    }

    /// Reduced costs `c_j - c_B B^-1 A_j` for columns below `limit`.
    fn reduced(&self, cost: &[T], limit: usize) -> Vec<T> {
        let mut r: Vec<T> = cost[..limit].to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (j, rj) in r.iter_mut().enumerate() {
                let aij = &self.a[i][j];
                if !aij.is_zero() {
                    *rj = rj.clone() - cb.clone() * aij.clone();
                }
            }
        }
        r
    }

    fn value(&self, cost: &[T]) -> T {
        let mut v = T::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            v = v + cost[b].clone() * self.a[i][self.cols].clone();
        }
        v
    }

    fn optimize(&mut self, cost: &[T], limit: usize) -> Result<T> {
        let mut degenerate = 0usize;
        loop {
            let red = self.reduced(cost, limit);
            let bland = degenerate >= DEGENERATE_RUN;
            let mut enter: Option<usize> = None;
            for (j, rj) in red.iter().enumerate() {
                if !rj.is_neg() {
                    continue;
                }
                match enter {
                    None => enter = Some(j),
                    Some(e) if !bland && *rj < red[e] => enter = Some(j),
                    _ => {}
                }
                if bland {
                    break;
                }
            }
            let Some(e) = enter else {
                return Ok(self.value(cost));
            };
            let mut leave: Option<usize> = None;
            let mut best: Option<T> = None;
            for i in 0..self.a.len() {
                let aie = &self.a[i][e];
                if !aie.is_pos() {
                    continue;
                }
                let ratio = self.a[i][self.cols].clone() / aie.clone();
                let better = match &best {
                    None => true,
                    Some(b) => {
                        let d = ratio.clone() - b.clone();
                        d.is_neg() || (d.near_zero() && self.basis[i] < self.basis[leave.expect("set with best")])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
            let Some(l) = leave else {
                return Err(Error::LpUnbounded);
            };
            if best.as_ref().is_some_and(|b| b.near_zero()) {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(l, e);
            if self.pivots > MAX_PIVOTS {
                return Err(Error::LpUnbounded);
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        self.pivots += 1;
        let p = self.a[row][col].clone();
        for v in self.a[row].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() / p.clone();
            }
        }
        let pivot_row = self.a[row].clone();
        for (i, r) in self.a.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in r.iter_mut().zip(pivot_row.iter()) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            if T::tolerance().is_pos() {
                for v in r.iter_mut() {
                    if v.near_zero() {
                        *v = T::zero();
                    }
                }
            }
        }
        self.basis[row] = col;
    }

    /// After phase one, pivots each zero-valued artificial out of the basis,
    /// dropping rows that turn out to be redundant.
    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.a[i][j].near_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.a.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        for r in self.a.iter_mut() {
            for v in r[self.first_artificial..self.cols].iter_mut() {
                *v = T::zero();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use num_rational::BigRational;

    #[test]
    fn single_share_bound() {
        // max s subject to s <= 1.
        let mut lp = LinearProgram::<f64>::new(1);
        lp.objective[0] = -1.0;
        lp.add(vec![(0, 1.0)], Relation::Le, 1.0);
        let s = lp.solve().unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn textbook_problem_in_both_fields() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), value 36.
        let mut f = LinearProgram::<f64>::new(2);
        f.objective = vec![-3.0, -5.0];
        f.add(vec![(0, 1.0)], Relation::Le, 4.0);
        f.add(vec![(1, 2.0)], Relation::Le, 12.0);
        f.add(vec![(0, 3.0), (1, 2.0)], Relation::Le, 18.0);
        let s = f.solve().unwrap();
        assert!((s.value + 36.0).abs() < 1e-9);

        let mut q = LinearProgram::<BigRational>::new(2);
        q.objective = vec![rational(-3, 1), rational(-5, 1)];
        q.add(vec![(0, rational(1, 1))], Relation::Le, rational(4, 1));
        q.add(vec![(1, rational(2, 1))], Relation::Le, rational(12, 1));
        q.add(vec![(0, rational(3, 1)), (1, rational(2, 1))], Relation::Le, rational(18, 1));
        let s = q.solve().unwrap();
        assert_eq!(s.value, rational(-36, 1));
        assert_eq!(s.x, vec![rational(2, 1), rational(6, 1)]);
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + y, x + y = 2, x >= 0.5, y >= 1/3.
        let mut q = LinearProgram::<BigRational>::new(2);
        q.objective = vec![rational(1, 1), rational(2, 1)];
        q.add(vec![(0, rational(1, 1)), (1, rational(1, 1))], Relation::Eq, rational(2, 1));
        q.add(vec![(0, rational(1, 1))], Relation::Ge, rational(1, 2));
        q.add(vec![(1, rational(1, 1))], Relation::Ge, rational(1, 3));
        let s = q.solve().unwrap();
        assert_eq!(s.x, vec![rational(5, 3), rational(1, 3)]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::<f64>::new(1);
        lp.add(vec![(0, 1.0)], Relation::Le, 1.0);
        lp.add(vec![(0, 1.0)], Relation::Ge, 2.0);
        assert!(matches!(lp.solve(), Err(Error::LpInfeasible)));

        let mut lp = LinearProgram::<f64>::new(1);
        lp.objective[0] = -1.0;
        lp.add(vec![(0, 1.0)], Relation::Ge, 1.0);
        assert!(matches!(lp.solve(), Err(Error::LpUnbounded)));
    }

    #[test]
    fn negative_rhs_and_redundant_equalities() {
        // -x <= -1 (x >= 1), x + y = 3 twice; min y.
        let mut lp = LinearProgram::<f64>::new(2);
        lp.objective = vec![0.0, 1.0];
        lp.add(vec![(0, -1.0)], Relation::Le, -1.0);
        lp.add(vec![(0, 1.0), (1, 1.0)], Relation::Eq, 3.0);
        lp.add(vec![(0, 1.0), (1, 1.0)], Relation::Eq, 3.0);
        lp.add(vec![(0, 1.0)], Relation::Le, 10.0);
        let s = lp.solve().unwrap();
        assert!(s.value.abs() < 1e-9);
        assert!((s.x[0] - 3.0).abs() < 1e-9);
    }
}
