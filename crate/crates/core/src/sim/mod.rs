//! Clock, entities, random streams, events and the per-TTI world loop.

pub mod clock;
pub mod event;
pub mod node;
pub mod plan;
pub mod rng;
pub mod snapshot;
pub mod world;

pub use clock::SimClock;
pub use event::{Event, EventKind, FailReason};
pub use node::{LinkMode, Node, NodeKind};
pub use world::{Counters, LinkRecord, Runtime, TtiMetrics, World, FORGED_TX_BASE};
