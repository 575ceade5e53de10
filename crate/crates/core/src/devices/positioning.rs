use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::angle::Angle2;
use crate::error::{require_non_negative, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositioningSpec {
    pub gnss_sigma_m: f64,
    pub aoa_sigma_rad: f64,
}

impl PositioningSpec {
    pub fn validate(&self) -> Result<()> {
        require_non_negative(self.gnss_sigma_m, "gnss_sigma_m")?;
        require_non_negative(self.aoa_sigma_rad, "aoa_sigma_rad")
    }

    /// GNSS position error projected to an angle at the link distance.
    pub fn gnss_sigma_rad(&self, distance_km: f64) -> f64 {
        self.gnss_sigma_m / (distance_km * 1000.0)
    }
}

pub fn gnss_estimate<R: Rng + ?Sized>(truth: Angle2, sigma_rad: f64, rng: &mut R) -> Angle2 {
    truth + Angle2::gaussian(sigma_rad, rng)
}

/// Angle-of-arrival estimate from the RF link.
pub fn aoa_estimate<R: Rng + ?Sized>(truth: Angle2, spec: &PositioningSpec, rng: &mut R) -> Angle2 {
    truth + Angle2::gaussian(spec.aoa_sigma_rad, rng)
}

/// Inverse-variance weighted combination of two independent estimates.
/// An exact (zero-sigma) input dominates.
pub fn fuse_estimates(gnss: Angle2, sigma_g: f64, aoa: Angle2, sigma_a: f64) -> (Angle2, f64) {
    if sigma_g == 0.0 {
        return (gnss, 0.0);
    }
    if sigma_a == 0.0 {
        return (aoa, 0.0);
    }
    let wg = 1.0 / (sigma_g * sigma_g);
    let wa = 1.0 / (sigma_a * sigma_a);
    let est = (gnss * wg + aoa * wa) * (1.0 / (wg + wa));
    (est, (1.0 / (wg + wa)).sqrt())
}
