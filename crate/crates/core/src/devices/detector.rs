//! Angle sensors. Both sensors report the offset between the terminal
//! boresight and the direction of the incoming beam.

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::angle::Angle2;
use crate::error::{require_finite, require_non_negative, require_positive, Result};

/// Per-axis noise-equivalent angle: sensor noise shrinks with the square root
/// of the linear SNR.
pub fn nea_sigma(snr_linear: f64, coeff_rad: f64) -> f64 {
    debug_assert!(snr_linear > 0.0);
    coeff_rad / snr_linear.sqrt()
}

/// Linear SNR, normalised so that a signal exactly at the detection
/// threshold has SNR 1.
pub fn snr_linear(rx_power_dbm: f64, threshold_dbm: f64) -> f64 {
    10f64.powf((rx_power_dbm - threshold_dbm) / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadcellSpec {
    /// Half-angle field of view; also the spot radius on the cell.
    pub fov_rad: f64,
    pub threshold_dbm: f64,
    pub nea_coeff_rad: f64,
}

impl QuadcellSpec {
    pub fn validate(&self) -> Result<()> {
        require_positive(self.fov_rad, "quadcell_fov_rad")?;
        require_finite(self.threshold_dbm, "quadcell_threshold_dbm")?;
        require_non_negative(self.nea_coeff_rad, "quadcell_nea_rad")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadcellReading {
    Measured(Angle2),
    OutOfFov,
    LowPower,
}

fn quadcell_axis(x: f64, spot: f64) -> f64 {
    // Normalised difference signal of a Gaussian spot, inverted with the
    // small-offset linear calibration (unit slope at the origin).
    let s = erf(std::f64::consts::SQRT_2 * x / spot);
    s * spot * std::f64::consts::PI.sqrt() / (2.0 * std::f64::consts::SQRT_2)
}

/// Noise-free quadcell estimate of `offset`. It is exact to first order and
/// compresses large offsets, so the bias grows roughly with the cube of the offset.
pub fn quadcell_response(offset: Angle2, spec: &QuadcellSpec) -> Angle2 {
    Angle2::new(
        quadcell_axis(offset.az, spec.fov_rad),
        quadcell_axis(offset.el, spec.fov_rad),
    )
}

pub fn quadcell_measure<R: Rng + ?Sized>(
    offset: Angle2,
    rx_power_dbm: f64,
    spec: &QuadcellSpec,
    rng: &mut R,
) -> QuadcellReading {
    let unit = Angle2::gaussian(1.0, rng);
    if offset.norm() > spec.fov_rad {
        return QuadcellReading::OutOfFov;
    }
    if rx_power_dbm < spec.threshold_dbm {
        return QuadcellReading::LowPower;
    }
    let sigma = nea_sigma(
        snr_linear(rx_power_dbm, spec.threshold_dbm),
        spec.nea_coeff_rad,
    );
    QuadcellReading::Measured(quadcell_response(offset, spec) + unit * sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FpaSpec {
    pub fov_rad: f64,
    pub threshold_dbm: f64,
    pub nea_coeff_rad: f64,
}

impl FpaSpec {
    pub fn validate(&self) -> Result<()> {
        require_positive(self.fov_rad, "fpa_fov_rad")?;
        require_finite(self.threshold_dbm, "fpa_threshold_dbm")?;
        require_non_negative(self.nea_coeff_rad, "fpa_nea_rad")
    }

    pub fn sees(&self, offset: Angle2, rx_power_dbm: f64) -> bool {
        offset.norm() <= self.fov_rad && rx_power_dbm >= self.threshold_dbm
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FpaReading {
    Measured(Angle2),
    NotDetected,
}

/// Centroid estimate of the beacon spot on the focal-plane array.
pub fn fpa_detect<R: Rng + ?Sized>(
    offset: Angle2,
    rx_power_dbm: f64,
    spec: &FpaSpec,
    rng: &mut R,
) -> FpaReading {
    let unit = Angle2::gaussian(1.0, rng);
    if !spec.sees(offset, rx_power_dbm) {
        return FpaReading::NotDetected;
    }
    let sigma = nea_sigma(
        snr_linear(rx_power_dbm, spec.threshold_dbm),
        spec.nea_coeff_rad,
    );
    FpaReading::Measured(offset + unit * sigma)
}
