//! Vehicle and UAV motion, UAV placement and service zones.

pub mod kmeans;
pub mod road;
pub mod trace;
pub mod uav;
pub mod zone;

pub use kmeans::{plan_uav_kmeans, KmeansOutcome};
pub use road::{step_vehicle, step_vehicles, OnArrival, RoadNetwork, StepOutcome, VehicleMotion};
pub use trace::{load_trace, parse_trace, Trace};
pub use uav::UavMotion;
pub use zone::assign_service_zone;
