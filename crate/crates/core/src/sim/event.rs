use serde::{Deserialize, Serialize};

/// Why a task ended without a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailReason {
    /// Assigned, but not finished by its deadline.
    Deadline,
    /// Its vehicle left the simulated area.
    Orphaned,
    /// Never placed on a fog node.
    Unassigned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EventKind {
    TaskCreated { task: u64, origin: u64, up: f64, req: f64, deadline: f64 },
    TaskAssigned { task: u64, node: u64 },
    TranStart { task: u64 },
    TranEnd { task: u64 },
    CompStart { task: u64 },
    CompEnd { task: u64 },
    TaskDone { task: u64, node: u64, latency: f64 },
    TaskFailed { task: u64, reason: FailReason },
    DistanceClamped { tx: u64, rx: u64 },
    DuplicateCenters { k: usize, distinct: usize },
    VehicleDeparted { vehicle: u64 },
    CloudSaturated { arrival: f64, service: f64 },
    SolverFallback { tasks: usize, nodes: usize },
    ResultAudited { task: u64, node: u64, correct: bool },
    PaymentWithheld { task: u64, payer: u64, payee: u64 },
    Blacklisted { node: u64, score: f64 },
    TxSubmitted { tx: u64 },
    TxRejected { tx: u64, reason: String },
    AttackDetected { node: u64, attack: String },
    BlockForged { height: u64, validator: u64, txs: usize },
    ValidatorUnavailable { pool: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub tti: u64,
    /// Seconds since the start of the run.
    pub time: f64,
    #[serde(flatten)]
    pub kind: EventKind,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_line_shape() {
        let e = Event { tti: 3, time: 0.15, kind: EventKind::TaskFailed { task: 9, reason: FailReason::Unassigned } };
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"tti":3,"time":0.15,"type":"task_failed","task":9,"reason":"unassigned"}"#);
        assert_eq!(serde_json::from_str::<Event>(&s).unwrap(), e);
    }
}
