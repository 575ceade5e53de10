use serde::{Deserialize, Serialize};

use crate::angle::Angle2;
use crate::devices::{FpaSpec, FsmSpec, GimbalSpec, QuadcellSpec};
use crate::error::Result;

/// Pointing state of one terminal. All angles are relative to the true line
/// of sight, so the boresight error is simply their sum.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TerminalState {
    pub gimbal_dir: Angle2,
    pub fsm_tilt: Angle2,
    pub disturbance: Angle2,
    pub scan_index: usize,
    pub slots_since_clcp: u32,
}

impl TerminalState {
    /// Error of the shared optical axis used by every beam and sensor of the terminal.
    pub fn boresight_error(&self) -> Angle2 {
        self.gimbal_dir + self.disturbance + self.fsm_tilt
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TerminalDevices {
    pub gimbal: GimbalSpec,
    pub fsm: FsmSpec,
    pub quadcell: QuadcellSpec,
    pub fpa: FpaSpec,
}

impl TerminalDevices {
    pub fn validate(&self) -> Result<()> {
        self.gimbal.validate()?;
        self.fsm.validate()?;
        self.quadcell.validate()?;
        self.fpa.validate()
    }
}
