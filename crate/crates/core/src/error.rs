use thiserror::Error;

use crate::offload::schedule::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no zone manager configured")]
    NoZoneManager,

    #[error("unstable queue: arrival rate {arrival} >= service rate {service}")]
    UnstableQueue { arrival: f64, service: f64 },

    #[error("computation delay undefined for a zero CPU share")]
    ZeroCpuShare,

    #[error("instance exceeds the exact solver guard: {tasks} tasks, {nodes} nodes, {slots} slots")]
    InstanceTooLarge { tasks: usize, nodes: usize, slots: usize },

    #[error("assignment over-commits resources for tasks {tasks:?}")]
    Infeasible { tasks: Vec<usize> },

    #[error("linear program infeasible")]
    LpInfeasible,

    #[error("linear program unbounded")]
    LpUnbounded,

    #[error("schedule violates {}", .0.iter().map(|v| v.label.as_str()).collect::<Vec<_>>().join(", "))]
    InvalidSchedule(Vec<Violation>),

    #[error("unknown preset {name:?}; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error("no eligible validator holds stake")]
    NoValidator,

    #[error("seed {seed}: {source}")]
    Replication {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    TomlDe(#[from] toml::de::Error),

    #[error(transparent)]
    TomlSer(#[from] toml::ser::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable category used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Parse { .. } => "parse",
            Error::NoZoneManager => "no_zone_manager",
            Error::UnstableQueue { .. } => "unstable_queue",
            Error::ZeroCpuShare => "zero_cpu_share",
            Error::InstanceTooLarge { .. } => "instance_too_large",
            Error::Infeasible { .. } => "infeasible",
            Error::LpInfeasible => "lp_infeasible",
            Error::LpUnbounded => "lp_unbounded",
            Error::InvalidSchedule(_) => "invalid_schedule",
            Error::UnknownPreset { .. } => "unknown_preset",
            Error::NoValidator => "no_validator",
            Error::Csv(_) => "csv",
            Error::Replication { .. } => "replication",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::TomlDe(_) | Error::TomlSer(_) => "toml",
        }
    }
}
