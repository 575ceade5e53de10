//! Terminal hardware models: coarse gimbal, fast steering mirror, quadcell and
//! focal-plane-array sensors, corner-cube retroreflector array and GNSS/AoA
//! positioning.

pub mod ccr;
pub mod detector;
pub mod fsm;
pub mod gimbal;
pub mod positioning;

pub use ccr::{ccr_return, CcrArraySpec, RetroReturn};
pub use detector::{
    fpa_detect, nea_sigma, quadcell_measure, quadcell_response, snr_linear, FpaReading, FpaSpec,
    QuadcellReading, QuadcellSpec,
};
pub use fsm::{fsm_correct, FsmOutput, FsmSpec};
pub use gimbal::{gimbal_closed_loop_correct, gimbal_open_loop_point, GimbalSpec};
pub use positioning::{aoa_estimate, fuse_estimates, gnss_estimate, PositioningSpec};
