use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::angle::Angle2;
use crate::error::{require_non_negative, require_positive, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FsmSpec {
    pub residual_sigma_rad: f64,
    /// Maximum radial tilt.
    pub range_rad: f64,
}

impl FsmSpec {
    pub fn validate(&self) -> Result<()> {
        require_non_negative(self.residual_sigma_rad, "fsm_sigma_rad")?;
        require_positive(self.range_rad, "fsm_range_rad")
    }

    /// Hard bound on the tilt magnitude, allowing for residual noise at the stop.
    pub fn tilt_bound(&self) -> f64 {
        self.range_rad + 3.0 * self.residual_sigma_rad
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsmOutput {
    pub tilt: Angle2,
    pub saturated: bool,
}

/// Apply an incremental tilt command. The commanded tilt is clipped radially
/// to the mirror range before residual noise is added.
pub fn fsm_correct<R: Rng + ?Sized>(
    command: Angle2,
    tilt: Angle2,
    spec: &FsmSpec,
    rng: &mut R,
) -> FsmOutput {
    let noise = Angle2::gaussian(spec.residual_sigma_rad, rng);
    let wanted = tilt + command;
    let saturated = wanted.norm() > spec.range_rad;
    let clipped = wanted.clamp_norm(spec.range_rad);
    FsmOutput {
        tilt: (clipped + noise).clamp_norm(spec.tilt_bound()),
        saturated,
    }
}
