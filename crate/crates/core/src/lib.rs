//! Monte Carlo simulation of pointing, acquisition and tracking for a
//! bidirectional ground-to-aircraft free-space optical link.

pub mod angle;
pub mod channel;
pub mod cli;
pub mod config;
pub mod devices;
pub mod error;
pub mod harness;
pub mod pat;
pub mod streams;
pub mod trace;

pub use angle::Angle2;
pub use config::ScenarioConfig;
pub use error::{Error, Result};
pub use pat::{AlgorithmVariant, SessionPhase};
pub use trace::SlotRecord;
