//! Task assignment and slot allocation.

pub mod ao;
pub mod fill;
pub mod greedy;
pub mod hungarian;
pub mod instance;
mod jobs;
pub mod oracle;
pub mod random;
pub mod schedule;
pub mod simplex;
pub mod slot_lp;
pub mod who;

use serde::{Deserialize, Serialize};

pub use ao::{ao_refine, AoConfig, AoOutcome};
pub use greedy::greedy_assign;
pub use hungarian::{hungarian_dense, hungarian_solve, Matching};
pub use instance::{InstanceNode, InstanceTask, OffloadInstance};
pub use oracle::{exact_oracle, OracleResult};
pub use schedule::{objective, Schedule, TaskTimes, Violation};
pub use slot_lp::solve_slot_lp;
pub use who::{who_solve, window_offload, SolverStats, WhoConfig, WhoOutcome, WindowPlan};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Greedy,
    Who,
    Oracle,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Greedy => "greedy",
            SolverKind::Who => "who",
            SolverKind::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(SolverKind::Greedy),
            "who" => Ok(SolverKind::Who),
            "oracle" => Ok(SolverKind::Oracle),
            other => Err(Error::Config(format!("unknown solver {other:?}; expected greedy, who or oracle"))),
        }
    }
}

/// Runs one solver on an instance and returns its (validated) schedule.
pub fn solve(kind: SolverKind, inst: &OffloadInstance, cfg: &WhoConfig) -> Result<(Schedule, SolverStats)> {
    inst.validate()?;
    let (schedule, stats) = match kind {
        SolverKind::Greedy => (greedy_assign(inst), SolverStats::default()),
        SolverKind::Who => {
            let out = who_solve(inst, cfg)?;
            (out.schedule, out.stats)
        }
        SolverKind::Oracle => (exact_oracle(inst)?.schedule, SolverStats::default()),
    };
    let violations = schedule.validate(inst);
    if !violations.is_empty() {
        return Err(Error::InvalidSchedule(violations));
    }
    Ok((schedule, stats))
}
