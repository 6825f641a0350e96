//! Tasks, queues, progress accounting, deadlines and energy.

pub mod energy;
pub mod generate;
pub mod queue;
pub mod task;

pub use energy::{EnergyCounters, EnergyMeter, EnergyParams};
pub use generate::{generate_tasks, LambdaMix, TaskDraw, TaskRanges};
pub use queue::{CpuShareMap, TaskQueue};
pub use task::{
    compute_delay, enforce_deadlines, step_compute, step_compute_task, step_transmit, transmission_delay, Task, TaskState,
};
