//! Beta reputation with audits.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub alpha: u64,
    pub beta: u64,
}

impl Record {
    pub fn score(&self) -> f64 {
        (self.alpha as f64 + 1.0) / ((self.alpha + self.beta) as f64 + 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditOutcome {
    Unaudited,
    VerifiedCorrect,
    CaughtFalse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReputationLedger {
    pub records: BTreeMap<u64, Record>,
    /// Nodes scoring below this are blacklisted.
    pub theta: f64,
}

impl Default for ReputationLedger {
    fn default() -> Self {
        Self { records: BTreeMap::new(), theta: 0.3 }
    }
}

impl ReputationLedger {
    pub fn new(theta: f64) -> Self {
        Self { records: BTreeMap::new(), theta }
    }

    pub fn score(&self, node: u64) -> f64 {
        self.records.get(&node).copied().unwrap_or_default().score()
    }

    pub fn blacklisted(&self, node: u64) -> bool {
        self.score(node) < self.theta
    }

    /// Re-verifies a result with probability `p_audit`. Audited results move
    /// the node's counts; unaudited ones leave them untouched.
    pub fn audit_and_update(&mut self, node: u64, correct: bool, p_audit: f64, rng: &mut impl Rng) -> AuditOutcome {
        if !rng.random_bool(p_audit.clamp(0.0, 1.0)) {
            return AuditOutcome::Unaudited;
        }
        let r = self.records.entry(node).or_default();
        if correct {
            r.alpha += 1;
            AuditOutcome::VerifiedCorrect
        } else {
            r.beta += 1;
            AuditOutcome::CaughtFalse
        }
    }

    /// One CSV row per node: `node,alpha,beta,score`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("node,alpha,beta,score\n");
        for (id, r) in &self.records {
            s.push_str(&format!("{id},{},{},{}\n", r.alpha, r.beta, r.score()));
        }
        s
    }
}
