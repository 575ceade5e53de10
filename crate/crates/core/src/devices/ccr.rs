//! Corner-cube retroreflector array on the aircraft. Each element returns the
//! incident light along its arrival direction, so the return carries no
//! aircraft pointing error. The array sums incoherently and the aggregate is
//! averaged over the elements, trading a single deep fade for a shallower one.

use serde::{Deserialize, Serialize};

use crate::angle::Angle2;
use crate::channel::db_to_lin;
use crate::error::{require, require_finite, require_positive, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CcrArraySpec {
    pub count: usize,
    pub ring_radius_m: f64,
    /// Return efficiency of a single element (reflectance, filter, speckle).
    pub per_ccr_gain_db: f64,
}

impl CcrArraySpec {
    pub fn validate(&self) -> Result<()> {
        require(self.count >= 1, "ccr_count", "must be >= 1")?;
        require_positive(self.ring_radius_m, "ccr_ring_radius_m")?;
        require_finite(self.per_ccr_gain_db, "ccr_gain_db")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetroReturn {
    /// Linear power gain of the array relative to a single unit-gain element.
    pub gain: f64,
    /// Angular error of the returned beam relative to the incident direction.
    pub direction_error: Angle2,
}

/// Aggregate return for the given per-element (uplink, downlink) fades.
/// The gain does not depend on the incidence angle within the element
/// acceptance cone, and the return direction is always the incident one.
pub fn ccr_return(
    spec: &CcrArraySpec,
    fades: &[(f64, f64)],
    incident: Angle2,
) -> Result<RetroReturn> {
    spec.validate()?;
    require(
        fades.len() == spec.count,
        "ccr_count",
        "fade sample count does not match the array size",
    )?;
    require(incident.is_finite(), "incident_offset", "must be finite")?;
    let sum: f64 = fades.iter().map(|&(up, down)| up * down).sum();
    Ok(RetroReturn {
        gain: db_to_lin(spec.per_ccr_gain_db) * sum / spec.count as f64,
        direction_error: Angle2::ZERO,
    })
}
