//! Lloyd's k-means with k-means++ seeding, used to place UAVs over vehicle
//! clusters.

use rand::Rng;

use crate::scalar::{Point2, Scalar};

pub const MAX_ITERS: usize = 20;
/// Centers moving less than this (meters) count as converged.
pub const MOVE_TOL: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct KmeansOutcome<T> {
    /// Sorted by x, then y.
    pub centers: Vec<Point2<T>>,
    /// Cluster of each input point, indexing `centers`.
    pub labels: Vec<usize>,
    /// Sum of squared distances after each assignment step.
    pub objective_trace: Vec<T>,
    pub iterations: usize,
    /// Set when `k` exceeds the number of distinct positions.
    pub duplicate_centers: bool,
    pub distinct_points: usize,
}

fn sq<T: Scalar>(a: &Point2<T>, b: &Point2<T>) -> T {
    let (dx, dy) = (a.x - b.x, a.y - b.y);
    dx * dx + dy * dy
}

fn nearest<T: Scalar>(p: &Point2<T>, centers: &[Point2<T>]) -> (usize, T) {
    let mut best = (0, sq(p, &centers[0]));
    for (i, c) in centers.iter().enumerate().skip(1) {
        let d = sq(p, c);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

pub fn kmeans_objective<T: Scalar>(points: &[Point2<T>], centers: &[Point2<T>], labels: &[usize]) -> T {
    points.iter().zip(labels).fold(T::zero(), |acc, (p, &l)| acc + sq(p, &centers[l]))
}

fn seed_plus_plus<T: Scalar>(points: &[Point2<T>], k: usize, rng: &mut impl Rng) -> Vec<Point2<T>> {
    let mut centers = vec![points[rng.random_range(0..points.len())]];
    while centers.len() < k {
        let d: Vec<T> = points.iter().map(|p| nearest(p, &centers).1).collect();
        let total = d.iter().fold(T::zero(), |a, &b| a + b);
        if total <= T::zero() {
            centers.push(points[rng.random_range(0..points.len())]);
            continue;
        }
        let mut r = T::lit(rng.random::<f64>()) * total;
        let mut pick = points.len() - 1;
        for (i, &di) in d.iter().enumerate() {
            if r < di {
                pick = i;
                break;
            }
            r = r - di;
        }
        centers.push(points[pick]);
    }
    centers
}

fn distinct<T: Scalar>(points: &[Point2<T>]) -> usize {
    let mut v: Vec<(T, T)> = points.iter().map(|p| (p.x, p.y)).collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    v.dedup();
    v.len()
}

/// Clusters `points` into `k` groups. With no points, or `k == 0`, the
/// previous targets are returned unchanged.
pub fn plan_uav_kmeans<T: Scalar>(
    points: &[Point2<T>],
    k: usize,
    rng: &mut impl Rng,
    previous: &[Point2<T>],
) -> KmeansOutcome<T> {
    if points.is_empty() || k == 0 {
        return KmeansOutcome {
            centers: previous.to_vec(),
            labels: Vec::new(),
            objective_trace: Vec::new(),
            iterations: 0,
            duplicate_centers: false,
            distinct_points: 0,
        };
    }
    let distinct_points = distinct(points);
    let mut centers = seed_plus_plus(points, k, rng);
    let mut labels = vec![0usize; points.len()];
    let mut trace = Vec::new();
    let mut iterations = 0;
    let tol = T::lit(MOVE_TOL);
    for _ in 0..MAX_ITERS {
        iterations += 1;
        for (p, l) in points.iter().zip(labels.iter_mut()) {
            *l = nearest(p, &centers).0;
        }
        trace.push(kmeans_objective(points, &centers, &labels));
        let mut moved = T::zero();
        for (c, center) in centers.iter_mut().enumerate() {
            let (mut sx, mut sy, mut n) = (T::zero(), T::zero(), 0usize);
            for (p, &l) in points.iter().zip(&labels) {
                if l == c {
                    sx = sx + p.x;
                    sy = sy + p.y;
                    n += 1;
                }
            }
            if n == 0 {
                continue;
            }
            let nt = T::from_usize(n).expect("count fits");
            let next = Point2::new(sx / nt, sy / nt);
            moved = moved.max(center.distance(&next));
            *center = next;
        }
        if moved < tol {
            break;
        }
    }
    for (p, l) in points.iter().zip(labels.iter_mut()) {
        *l = nearest(p, &centers).0;
    }

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        (centers[a].x, centers[a].y).partial_cmp(&(centers[b].x, centers[b].y)).expect("finite").then(a.cmp(&b))
    });
    let mut rank = vec![0usize; k];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    KmeansOutcome {
        centers: order.iter().map(|&c| centers[c]).collect(),
        labels: labels.iter().map(|&l| rank[l]).collect(),
        objective_trace: trace,
        iterations,
        duplicate_centers: k > distinct_points,
        distinct_points,
    }
}
