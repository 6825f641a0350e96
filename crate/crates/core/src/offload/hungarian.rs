//! Kuhn-Munkres assignment with potentials, O(n^2 m).
//!
//! Entries are `Option<T>`; `None` marks a forbidden pair. Forbidden pairs are
//! internally priced at `M = 1 + sum of finite entries`, which is the same as
//! padding with infinite-cost dummies: a row whose only options are forbidden
//! ends up matched to a dummy and is reported as unassigned.

use crate::scalar::Cost;

#[derive(Debug, Clone, PartialEq)]
pub struct Matching<T> {
    /// Column matched to each row, `None` for dummy matches.
    pub assignment: Vec<Option<usize>>,
    /// Sum of the matched finite entries.
    pub total: T,
}

impl<T: Cost> Matching<T> {
    pub fn assigned(&self) -> usize {
        self.assignment.iter().filter(|a| a.is_some()).count()
    }
}

/// Solves a dense matrix with every entry finite.
pub fn hungarian_dense<T: Cost>(cost: &[Vec<T>]) -> Matching<T> {
    let wrapped: Vec<Vec<Option<T>>> = cost.iter().map(|r| r.iter().map(|&c| Some(c)).collect()).collect();
    hungarian_solve(&wrapped)
}

/// Minimum-cost matching of a rectangular matrix. Every row is matched when
/// rows <= columns and every column otherwise, unless forbidden entries make
/// that impossible; among maximum-cardinality matchings over allowed pairs the
/// cheapest is returned.
pub fn hungarian_solve<T: Cost>(cost: &[Vec<Option<T>>]) -> Matching<T> {
    let rows = cost.len();
    let cols = cost.first().map_or(0, |r| r.len());
    assert!(cost.iter().all(|r| r.len() == cols), "cost matrix must be rectangular");
    if rows == 0 || cols == 0 {
        return Matching { assignment: vec![None; rows], total: T::zero() };
    }

    let mut big = T::one();
    for c in cost.iter().flatten().flatten() {
        big = big + *c;
    }
    let transpose = rows > cols;
    let (n, m) = if transpose { (cols, rows) } else { (rows, cols) };
    let at = |i: usize, j: usize| -> T {
        let e = if transpose { cost[j][i] } else { cost[i][j] };
        e.unwrap_or(big)
    };

    let col_of_row = solve_square_or_wide(n, m, at);

    let mut assignment = vec![None; rows];
    if transpose {
        for (r, c) in col_of_row.iter().enumerate() {
            assignment[*c] = Some(r);
        }
    } else {
        for (r, c) in col_of_row.iter().enumerate() {
            assignment[r] = Some(*c);
        }
    }
    let mut total = T::zero();
    for (r, a) in assignment.iter_mut().enumerate() {
        if let Some(c) = *a {
            match cost[r][c] {
                Some(v) => total = total + v,
                None => *a = None,
            }
        }
    }
    Matching { assignment, total }
}

/// Potentials method for n <= m. Returns the column of every row.
fn solve_square_or_wide<T: Cost>(n: usize, m: usize, a: impl Fn(usize, usize) -> T) -> Vec<usize> {
    let zero = T::zero();
    let mut u = vec![zero; n + 1];
    let mut v = vec![zero; m + 1];
    // p[j]: row matched to column j (1-based, 0 = free); way[j]: previous column on the path.
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<T>> = vec![None; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<T> = None;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if minv[j].is_none_or(|mv| cur < mv) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].expect("set above");
                if delta.is_none_or(|d| mj < d) {
                    delta = Some(mj);
                    j1 = j;
                }
            }
            let delta = delta.expect("a free column exists while n <= m");
            for j in 0..=m {
                if used[j] {
                    u[p[j]] = u[p[j]] + delta;
                    v[j] = v[j] - delta;
                } else if let Some(mv) = minv[j] {
                    minv[j] = Some(mv - delta);
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut col_of_row = vec![0usize; n];
    for j in 1..=m {
        if p[j] != 0 {
            col_of_row[p[j] - 1] = j - 1;
        }
    }
    col_of_row
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use proptest::prelude::*;

    /// Exhaustive oracle over injective row-to-column maps.
    fn brute_force(cost: &[Vec<i64>]) -> i64 {
        fn rec(cost: &[Vec<i64>], row: usize, used: &mut Vec<bool>, acc: i64, best: &mut i64) {
            if row == cost.len() {
                *best = (*best).min(acc);
                return;
            }
            for c in 0..cost[row].len() {
                if !used[c] {
                    used[c] = true;
                    rec(cost, row + 1, used, acc + cost[row][c], best);
                    used[c] = false;
                }
            }
        }
        let cols = cost[0].len();
        let mut best = i64::MAX;
        rec(cost, 0, &mut vec![false; cols], 0, &mut best);
        best
    }

    #[test]
    fn two_by_two_example() {
        let m = hungarian_dense(&[vec![4i64, 1], vec![2, 3]]);
        assert_eq!(m.assignment, vec![Some(1), Some(0)]);
        assert_eq!(m.total, 3);
    }

    #[test]
    fn zero_diagonal_is_identity() {
        let c = vec![vec![0i64, 5, 9], vec![7, 0, 4], vec![6, 8, 0]];
        let m = hungarian_dense(&c);
        assert_eq!(m.assignment, vec![Some(0), Some(1), Some(2)]);
        assert_eq!(m.total, 0);
    }

    #[test]
    fn forbidden_row_goes_to_dummy() {
        let c = vec![vec![None, None], vec![Some(3i64), Some(1)]];
        let m = hungarian_solve(&c);
        assert_eq!(m.assignment, vec![None, Some(1)]);
        assert_eq!(m.total, 1);
    }

    #[test]
    fn forbidden_entries_prefer_cardinality() {
        // Only row 0 can use column 0; row 1 can use either.
        let c = vec![vec![Some(10i64), None], vec![Some(0), Some(5)]];
        let m = hungarian_solve(&c);
        assert_eq!(m.assignment, vec![Some(0), Some(1)]);
        assert_eq!(m.total, 15);
    }

    #[test]
    fn rectangular_both_ways() {
        let wide = vec![vec![5i64, 1, 7], vec![2, 9, 3]];
        let m = hungarian_dense(&wide);
        assert_eq!(m.total, 3);
        let tall = vec![vec![5i64, 2], vec![1, 9], vec![7, 3]];
        let m = hungarian_dense(&tall);
        assert_eq!(m.total, 3);
        assert_eq!(m.assigned(), 2);
        assert_eq!(m.assignment[2], None);
    }

    #[test]
    fn works_in_floats_and_rationals() {
        let f = hungarian_dense(&[vec![0.5f64, 0.25], vec![0.125, 1.0]]);
        assert_eq!(f.total, 0.375);
        let r = hungarian_dense(&[vec![Ratio::new(1i64, 3), Ratio::new(1, 2)], vec![Ratio::new(1, 4), Ratio::new(1, 5)]]);
        assert_eq!(r.total, Ratio::new(1, 3) + Ratio::new(1, 5));
    }

    #[test]
    fn empty_matrix() {
        let m = hungarian_solve::<i64>(&[]);
        assert!(m.assignment.is_empty());
        assert_eq!(m.total, 0);
    }

    fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=7, 1usize..=7)
            .prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(0i64..100, c), r))
    }

    proptest! {
        #[test]
        fn matches_exhaustive_minimum(cost in matrix()) {
            let m = hungarian_dense(&cost);
            let expected = if cost.len() <= cost[0].len() {
                brute_force(&cost)
            } else {
                let t: Vec<Vec<i64>> = (0..cost[0].len()).map(|c| cost.iter().map(|r| r[c]).collect()).collect();
                brute_force(&t)
            };
            prop_assert_eq!(m.total, expected);
            let mut seen = std::collections::BTreeSet::new();
            for (r, a) in m.assignment.iter().enumerate() {
                if let Some(c) = a {
                    prop_assert!(seen.insert(*c));
                    let _ = r;
                }
            }
            prop_assert_eq!(m.assigned(), cost.len().min(cost[0].len()));
        }
    }
}
