//! Aircraft attitude disturbance: a first-order Gauss-Markov jitter per axis
//! plus Poisson-timed step jumps from abrupt posture changes.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::angle::Angle2;
use crate::error::{require, require_non_negative, require_positive, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisturbanceSpec {
    pub gm_sigma_rad: f64,
    pub gm_tau_s: f64,
    pub jump_rate_per_s: f64,
    pub jump_min_rad: f64,
    pub jump_max_rad: f64,
}

impl DisturbanceSpec {
    pub const NONE: DisturbanceSpec = DisturbanceSpec {
        gm_sigma_rad: 0.0,
        gm_tau_s: 1.0,
        jump_rate_per_s: 0.0,
        jump_min_rad: 0.0,
        jump_max_rad: 0.0,
    };

    pub fn validate(&self, prefix: &str) -> Result<()> {
        require_non_negative(self.gm_sigma_rad, &format!("{prefix}_gm_sigma_rad"))?;
        require_positive(self.gm_tau_s, &format!("{prefix}_gm_tau_s"))?;
        require_non_negative(self.jump_rate_per_s, &format!("{prefix}_jump_rate_per_s"))?;
        require_non_negative(self.jump_min_rad, &format!("{prefix}_jump_min_rad"))?;
        require(
            self.jump_max_rad.is_finite() && self.jump_max_rad >= self.jump_min_rad,
            &format!("{prefix}_jump_max_rad"),
            "must be finite and >= the minimum jump",
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisturbanceStep {
    pub state: Angle2,
    pub jumped: bool,
}

pub fn disturbance_step<R: Rng + ?Sized>(
    state: Angle2,
    spec: &DisturbanceSpec,
    dt: f64,
    rng: &mut R,
) -> Angle2 {
    disturbance_step_detailed(state, spec, dt, rng).state
}

/// Same as [`disturbance_step`] but also reports whether a jump occurred.
/// The number of draws is fixed regardless of outcome.
pub fn disturbance_step_detailed<R: Rng + ?Sized>(
    state: Angle2,
    spec: &DisturbanceSpec,
    dt: f64,
    rng: &mut R,
) -> DisturbanceStep {
    debug_assert!(dt > 0.0);
    let a = (-dt / spec.gm_tau_s).exp();
    let drive = (1.0 - a * a).sqrt() * spec.gm_sigma_rad;
    let nx: f64 = rng.sample(StandardNormal);
    let ny: f64 = rng.sample(StandardNormal);
    let mut next = state * a + Angle2::new(nx, ny) * drive;

    let u_jump: f64 = rng.random();
    let u_mag: f64 = rng.random();
    let u_dir: f64 = rng.random();
    let jumped = u_jump < spec.jump_rate_per_s * dt;
    if jumped {
        let mag = spec.jump_min_rad + u_mag * (spec.jump_max_rad - spec.jump_min_rad);
        next += Angle2::polar(mag, 2.0 * PI * u_dir);
    }
    DisturbanceStep {
        state: next,
        jumped,
    }
}
