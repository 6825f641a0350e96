//! Poisson task arrivals at task vehicles.

use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TaskRanges {
    /// Seconds.
    pub deadline: [f64; 2],
    /// Bits.
    pub up: [f64; 2],
    /// Cycles.
    pub req: [f64; 2],
}

impl Default for TaskRanges {
    fn default() -> Self {
        Self { deadline: [0.2, 1.0], up: [0.02e6, 1e6], req: [0.1e9, 0.3e9] }
    }
}

impl TaskRanges {
    pub fn validate(&self) -> Result<()> {
        for (name, [lo, hi]) in [("deadline", self.deadline), ("up", self.up), ("req", self.req)] {
            if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
                return Err(Error::Config(format!("task range {name} must satisfy 0 <= lo <= hi")));
            }
        }
        Ok(())
    }
}

/// Arrival rate classes (tasks per second) and their probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LambdaMix {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Default for LambdaMix {
    fn default() -> Self {
        Self { values: vec![2.0, 5.0, 10.0], weights: vec![0.6, 0.3, 0.1] }
    }
}

impl LambdaMix {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() || self.values.len() != self.weights.len() {
            return Err(Error::Config("lambda values and weights must be nonempty and equally long".into()));
        }
        if self.values.iter().any(|v| !(*v >= 0.0)) || WeightedIndex::new(&self.weights).is_err() {
            return Err(Error::Config("lambda values must be >= 0 and weights a valid distribution".into()));
        }
        Ok(())
    }

    /// Rate drawn once when a task vehicle spawns.
    pub fn draw(&self, rng: &mut impl Rng) -> f64 {
        let idx = WeightedIndex::new(&self.weights).expect("validated weights");
        self.values[idx.sample(rng)]
    }
}

/// Attributes of one generated task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskDraw {
    pub up: f64,
    pub req: f64,
    pub deadline: f64,
}

fn uniform(rng: &mut impl Rng, [lo, hi]: [f64; 2]) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

/// Arrivals in one TTI: `Poisson(lambda dt)` tasks with uniform attributes.
pub fn generate_tasks(lambda: f64, dt: f64, ranges: &TaskRanges, rng: &mut impl Rng) -> Vec<TaskDraw> {
    let mean = lambda * dt;
    if !(mean > 0.0) {
        return Vec::new();
    }
    let n = Poisson::new(mean).expect("positive mean").sample(rng) as usize;
    (0..n)
        .map(|_| TaskDraw { up: uniform(rng, ranges.up), req: uniform(rng, ranges.req), deadline: uniform(rng, ranges.deadline) })
        .collect()
}
