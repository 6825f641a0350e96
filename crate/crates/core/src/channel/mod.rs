//! Path loss, shadowing, fading, SINR and link capacity.

pub mod fading;
pub mod link;
pub mod pathloss;
pub mod shadow;
pub mod wired;

pub use fading::{channel_gain_linear, ergodic_rate, planning_rate, sample_fast_fading};
pub use link::{capacity, shannon_capacity, sinr, sinr_per_rb, LinkState, RbPlan};
pub use pathloss::{path_loss_db, PathLossParams, D_MIN};
pub use shadow::{update_shadowing, update_shadowing_db, ShadowModel, ShadowState};
pub use wired::{sample_wired_delay, wired_delay};
