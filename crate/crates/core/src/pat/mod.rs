//! Pointing, acquisition and tracking control logic.

pub mod disturbance;
pub mod link;
pub mod olcp;
pub mod scan;
pub mod session;
pub mod terminal;
pub mod tracking;
mod variant;

pub use disturbance::{disturbance_step, disturbance_step_detailed, DisturbanceSpec};
pub use link::{LinkModel, SlotFades};
pub use olcp::{olcp_step, OlcpOutcome, OlcpProgress, OlcpStage};
pub use scan::{build_scan_pattern, ScanPattern};
pub use session::{LinkSet, Session, SessionContext, SessionPhase, SlotOverrides};
pub use terminal::{TerminalDevices, TerminalState};
pub use tracking::{clcp_step, fine_tracking_step, ClcpOutcome, FineOutcome};
pub use variant::AlgorithmVariant;
