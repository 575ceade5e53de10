//! Atmospheric channel: visibility-driven attenuation, geometric link budget,
//! Gaussian-beam pointing loss and gamma-gamma scintillation.

mod gamma_gamma;

pub use gamma_gamma::{
    gg_params_from_rytov, sample_gg, sample_gg_correlated, GammaGammaSampler, TurbulenceParams,
};

use serde::{Deserialize, Serialize};

use crate::angle::Angle2;
use crate::error::{require_finite, require_positive, Result};

/// 10 / ln(10): converts a natural-log power ratio to decibels.
pub const DB_PER_NEPER: f64 = 4.342_944_819_032_518;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSpec {
    pub wavelength_nm: f64,
    /// Full-angle divergence in radians.
    pub divergence_rad: f64,
    pub tx_power_dbm: f64,
}

impl BeamSpec {
    pub fn validate(&self, name: &str) -> Result<()> {
        require_positive(self.wavelength_nm, &format!("{name}_wavelength_nm"))?;
        require_positive(self.divergence_rad, &format!("{name}_divergence_rad"))?;
        require_finite(self.tx_power_dbm, &format!("{name}_tx_power_dbm"))
    }

    /// Gaussian beam radius (1/e^2 intensity) as an angle.
    pub fn half_width(&self) -> f64 {
        0.5 * self.divergence_rad
    }
}

/// Size-distribution exponent of the Kim visibility model.
pub fn kim_exponent(visibility_km: f64) -> f64 {
    let v = visibility_km;
    if v > 50.0 {
        1.6
    } else if v > 6.0 {
        1.3
    } else if v > 1.0 {
        0.16 * v + 0.34
    } else if v > 0.5 {
        v - 0.5
    } else {
        0.0
    }
}

/// Atmospheric extinction coefficient in 1/km.
pub fn kim_attenuation_coeff(visibility_km: f64, wavelength_nm: f64) -> Result<f64> {
    require_positive(visibility_km, "visibility_km")?;
    require_positive(wavelength_nm, "wavelength_nm")?;
    let q = kim_exponent(visibility_km);
    Ok(3.91 / visibility_km * (wavelength_nm / 550.0).powf(-q))
}

/// One-way atmospheric loss in dB (non-positive).
pub fn atmospheric_loss_db(
    visibility_km: f64,
    wavelength_nm: f64,
    distance_km: f64,
) -> Result<f64> {
    require_positive(distance_km, "link_distance_km")?;
    Ok(-DB_PER_NEPER * kim_attenuation_coeff(visibility_km, wavelength_nm)? * distance_km)
}

/// Deterministic gain in dB from transmitter to receiver aperture: atmospheric
/// extinction plus geometric spreading of the beam footprint over the aperture.
/// The geometric term saturates at 0 dB when the aperture captures the whole beam.
pub fn link_budget_gain(
    beam: &BeamSpec,
    distance_km: f64,
    rx_aperture_m: f64,
    visibility_km: f64,
) -> Result<f64> {
    beam.validate("beam")?;
    require_positive(rx_aperture_m, "rx_aperture_m")?;
    let atm = atmospheric_loss_db(visibility_km, beam.wavelength_nm, distance_km)?;
    let footprint_m = beam.divergence_rad * distance_km * 1000.0;
    let geometric = (20.0 * (rx_aperture_m / footprint_m).log10()).min(0.0);
    Ok(atm + geometric)
}

/// Gaussian-beam pointing loss in dB for an offset between beam axis and receiver.
pub fn pointing_loss_db(offset: Angle2, divergence_rad: f64) -> f64 {
    let w = 0.5 * divergence_rad;
    -2.0 * DB_PER_NEPER * offset.norm_sq() / (w * w)
}

pub fn lin_to_db(x: f64) -> f64 {
    10.0 * x.max(f64::MIN_POSITIVE).log10()
}

pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kim_exponent_regimes() {
        assert_eq!(kim_exponent(60.0), 1.6);
        assert_eq!(kim_exponent(10.0), 1.3);
        assert!((kim_exponent(3.0) - 0.82).abs() < 1e-12);
        assert!((kim_exponent(0.8) - 0.3).abs() < 1e-12);
        assert_eq!(kim_exponent(0.2), 0.0);
    }

    #[test]
    fn clear_air_at_1550() {
        // q = 0.82 at 3 km: 3.91/3 * (1550/550)^-0.82
        let expected = 3.91 / 3.0 * (-0.82 * (1550.0f64 / 550.0).ln()).exp();
        let beta = kim_attenuation_coeff(3.0, 1550.0).unwrap();
        assert!((beta - expected).abs() < 1e-12);
        assert!((beta - 0.5573).abs() < 1e-3);
        let loss = atmospheric_loss_db(3.0, 1550.0, 2.0).unwrap();
        assert!((loss + 4.84).abs() < 0.01);
    }

    #[test]
    fn fog_is_wavelength_flat() {
        let a = kim_attenuation_coeff(0.2, 850.0).unwrap();
        let b = kim_attenuation_coeff(0.2, 1550.0).unwrap();
        assert_eq!(a, b);
        assert!((a - 19.55).abs() < 1e-9);
        assert!((a * DB_PER_NEPER - 84.9).abs() < 0.1);
    }

    #[test]
    fn budget_includes_geometric_spreading() {
        let beam = BeamSpec {
            wavelength_nm: 1550.0,
            divergence_rad: 500e-6,
            tx_power_dbm: 27.0,
        };
        // 1 m footprint on a 10 cm aperture: -20 dB.
        let g = link_budget_gain(&beam, 2.0, 0.1, 3.0).unwrap();
        let atm = atmospheric_loss_db(3.0, 1550.0, 2.0).unwrap();
        assert!((g - (atm - 20.0)).abs() < 1e-9);
        // Aperture larger than footprint: no geometric gain above 0 dB.
        let g2 = link_budget_gain(&beam, 2.0, 5.0, 3.0).unwrap();
        assert!((g2 - atm).abs() < 1e-12);
    }

    #[test]
    fn budget_rejects_bad_inputs() {
        let beam = BeamSpec {
            wavelength_nm: 1550.0,
            divergence_rad: 500e-6,
            tx_power_dbm: 27.0,
        };
        assert!(link_budget_gain(&beam, 0.0, 0.1, 3.0).is_err());
        assert!(link_budget_gain(&beam, 2.0, -0.1, 3.0).is_err());
        assert!(link_budget_gain(&beam, 2.0, 0.1, 0.0).is_err());
        let bad = BeamSpec {
            divergence_rad: 0.0,
            ..beam
        };
        assert!(link_budget_gain(&bad, 2.0, 0.1, 3.0).is_err());
    }

    #[test]
    fn pointing_loss_at_beam_radius() {
        let w = 250e-6;
        let pl = pointing_loss_db(Angle2::new(w, 0.0), 2.0 * w);
        // 10 log10(e^-2)
        assert!((pl - 10.0 * (-2.0f64).exp().log10()).abs() < 1e-12);
        assert!((pl + 8.686).abs() < 1e-3);
        assert_eq!(pointing_loss_db(Angle2::ZERO, 2.0 * w), 0.0);
    }
}
