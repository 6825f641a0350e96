//! Discrete-time simulator for UAV-assisted vehicular fog computing.
//!
//! Vehicles drive a road grid and generate computation tasks; serving
//! vehicles, UAVs, RSUs and a cloud server compute them. Every TTI the
//! simulator updates mobility and channels, plans offloading with one of
//! three solvers (greedy, WHO, exact oracle), transmits and computes, and
//! settles payments on a proof-of-stake ledger with result audits and
//! reputation.
//!
//! Geometry, channel and solver code is generic over the scalar; the
//! aliases below fix it to `f64`, which the simulation uses throughout.

pub mod channel;
pub mod compute;
pub mod config;
pub mod error;
pub mod harness;
pub mod ledger;
pub mod mobility;
pub mod offload;
pub mod scalar;
pub mod sim;

pub use config::ScenarioConfig;
pub use error::{Error, Result};
pub use offload::SolverKind;
pub use scalar::{Cost, LpScalar, Scalar};
pub use sim::{Event, World};

/// Scalar used by the simulation.
pub type Real = f64;
pub type Pos2 = scalar::Point2<Real>;
pub type Pos3 = scalar::Point3<Real>;
pub type RoadNetwork = mobility::RoadNetwork<Real>;
pub type VehicleMotion = mobility::VehicleMotion<Real>;
pub type UavMotion = mobility::UavMotion<Real>;
pub type PathLossParams = channel::PathLossParams<Real>;
pub type ShadowState = channel::ShadowState<Real>;
pub type Matching = offload::Matching<Real>;
