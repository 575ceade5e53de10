//! Scenario configuration: every tunable of a mission in one flat record,
//! addressable by the same `key` names used in config files.

use serde::Serialize;

use crate::channel::{gg_params_from_rytov, BeamSpec, TurbulenceParams};
use crate::devices::{CcrArraySpec, FpaSpec, FsmSpec, GimbalSpec, PositioningSpec, QuadcellSpec};
use crate::error::{
    require, require_finite, require_non_negative, require_positive, Error, Result,
};
use crate::pat::{AlgorithmVariant, DisturbanceSpec, TerminalDevices};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub variant: AlgorithmVariant,
    pub seed: u64,
    pub mission_duration_s: f64,
    pub slot_dt_s: f64,
    pub link_distance_km: f64,

    pub visibility_km: f64,
    pub fading_enabled: bool,
    pub gg_alpha: f64,
    pub gg_beta: f64,
    /// When set, overrides `gg_alpha`/`gg_beta` via the plane-wave conversion.
    pub rytov_variance: Option<f64>,
    pub rho: f64,
    pub beam_wander_sigma_rad: f64,

    pub comm_wavelength_nm: f64,
    pub comm_divergence_rad: f64,
    pub comm_tx_power_dbm: f64,
    pub beacon_wavelength_nm: f64,
    pub beacon_divergence_rad: f64,
    pub beacon_tx_power_dbm: f64,
    pub gw_aperture_m: f64,
    pub ac_aperture_m: f64,
    pub comm_threshold_dbm: f64,

    pub quadcell_fov_rad: f64,
    pub quadcell_threshold_dbm: f64,
    pub quadcell_nea_rad: f64,
    pub fpa_fov_rad: f64,
    pub fpa_threshold_dbm: f64,
    pub fpa_nea_rad: f64,
    pub clcp_rate_hz: f64,
    pub gimbal_open_loop_sigma_rad: f64,
    pub gimbal_closed_loop_sigma_rad: f64,
    pub fsm_sigma_rad: f64,
    pub fsm_range_rad: f64,

    pub gnss_sigma_m: f64,
    pub aoa_sigma_rad: f64,
    pub scan_overlap: f64,
    pub max_scan_repeats: u32,
    pub handshake_retries: u32,

    pub ccr_count: usize,
    pub ccr_ring_radius_m: f64,
    pub ccr_gain_db: f64,

    pub ac_dist_gm_sigma_rad: f64,
    pub ac_dist_gm_tau_s: f64,
    pub ac_dist_jump_rate_per_s: f64,
    pub ac_dist_jump_min_rad: f64,
    pub ac_dist_jump_max_rad: f64,
    pub gw_dist_gm_sigma_rad: f64,
    pub gw_dist_gm_tau_s: f64,
    pub gw_dist_jump_rate_per_s: f64,
    pub gw_dist_jump_min_rad: f64,
    pub gw_dist_jump_max_rad: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            variant: AlgorithmVariant::Proposed,
            seed: 0,
            mission_duration_s: 1800.0,
            slot_dt_s: 0.1,
            link_distance_km: 2.0,

            visibility_km: 3.0,
            fading_enabled: true,
            gg_alpha: 4.2,
            gg_beta: 1.4,
            rytov_variance: None,
            rho: 0.4,
            beam_wander_sigma_rad: 0.0,

            comm_wavelength_nm: 1550.0,
            comm_divergence_rad: 500e-6,
            comm_tx_power_dbm: 27.0,
            beacon_wavelength_nm: 1550.0,
            beacon_divergence_rad: 5e-3,
            beacon_tx_power_dbm: 30.0,
            gw_aperture_m: 0.1,
            ac_aperture_m: 0.05,
            comm_threshold_dbm: -35.0,

            quadcell_fov_rad: 2e-3,
            quadcell_threshold_dbm: -40.0,
            quadcell_nea_rad: 0.5e-3,
            fpa_fov_rad: 40e-3,
            fpa_threshold_dbm: -45.0,
            fpa_nea_rad: 3e-4,
            clcp_rate_hz: 1.0,
            gimbal_open_loop_sigma_rad: 3e-3,
            gimbal_closed_loop_sigma_rad: 0.3e-3,
            fsm_sigma_rad: 100e-6,
            fsm_range_rad: 2e-3,

            gnss_sigma_m: 5.0,
            aoa_sigma_rad: 1e-3,
            scan_overlap: 1.0,
            max_scan_repeats: 3,
            handshake_retries: 3,

            ccr_count: 4,
            ccr_ring_radius_m: 0.15,
            ccr_gain_db: -10.0,

            ac_dist_gm_sigma_rad: 0.5e-3,
            ac_dist_gm_tau_s: 5.0,
            ac_dist_jump_rate_per_s: 0.5 / 60.0,
            ac_dist_jump_min_rad: 10e-3,
            ac_dist_jump_max_rad: 40e-3,
            gw_dist_gm_sigma_rad: 0.0,
            gw_dist_gm_tau_s: 5.0,
            gw_dist_jump_rate_per_s: 0.0,
            gw_dist_jump_min_rad: 0.0,
            gw_dist_jump_max_rad: 0.0,
        }
    }
}

/// Text form of a config value.
trait ConfigValue: Sized {
    fn parse_value(s: &str) -> std::result::Result<Self, String>;
    fn render(&self) -> String;
}

impl ConfigValue for f64 {
    fn parse_value(s: &str) -> std::result::Result<Self, String> {
        s.parse::<f64>()
            .map_err(|_| format!("`{s}` is not a number"))
    }
    fn render(&self) -> String {
        format!("{self:?}")
    }
}

impl ConfigValue for u64 {
    fn parse_value(s: &str) -> std::result::Result<Self, String> {
        s.parse::<u64>()
            .map_err(|_| format!("`{s}` is not a non-negative integer"))
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl ConfigValue for u32 {
    fn parse_value(s: &str) -> std::result::Result<Self, String> {
        s.parse::<u32>()
            .map_err(|_| format!("`{s}` is not a non-negative integer"))
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl ConfigValue for usize {
    fn parse_value(s: &str) -> std::result::Result<Self, String> {
        s.parse::<usize>()
            .map_err(|_| format!("`{s}` is not a non-negative integer"))
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl ConfigValue for bool {
    fn parse_value(s: &str) -> std::result::Result<Self, String> {
        match s {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(format!("`{s}` is not `true` or `false`")),
        }
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl ConfigValue for AlgorithmVariant {
    fn parse_value(s: &str) -> std::result::Result<Self, String> {
        s.parse()
    }
    fn render(&self) -> String {
        self.token().to_string()
    }
}

impl ConfigValue for Option<f64> {
    fn parse_value(s: &str) -> std::result::Result<Self, String> {
        if s == "none" {
            Ok(None)
        } else {
            f64::parse_value(s).map(Some)
        }
    }
    fn render(&self) -> String {
        match self {
            Some(v) => v.render(),
            None => "none".to_string(),
        }
    }
}

macro_rules! config_keys {
    ($($field:ident),* $(,)?) => {
        impl ScenarioConfig {
            /// All recognised config keys, in echo order.
            pub const KEYS: &'static [&'static str] = &[$(stringify!($field)),*];

            /// Set one field from its text form. Does not validate cross-field constraints.
            pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
                match key {
                    $(stringify!($field) => {
                        self.$field = ConfigValue::parse_value(value)
                            .map_err(|reason| Error::config(key, reason))?;
                    })*
                    _ => return Err(Error::config(key, "unknown config key")),
                }
                Ok(())
            }

            pub fn get(&self, key: &str) -> Option<String> {
                match key {
                    $(stringify!($field) => Some(self.$field.render()),)*
                    _ => None,
                }
            }

            /// Every field as `(key, text value)`.
            pub fn entries(&self) -> Vec<(&'static str, String)> {
                vec![$((stringify!($field), self.$field.render())),*]
            }
        }
    };
}

config_keys!(
    variant,
    seed,
    mission_duration_s,
    slot_dt_s,
    link_distance_km,
    visibility_km,
    fading_enabled,
    gg_alpha,
    gg_beta,
    rytov_variance,
    rho,
    beam_wander_sigma_rad,
    comm_wavelength_nm,
    comm_divergence_rad,
    comm_tx_power_dbm,
    beacon_wavelength_nm,
    beacon_divergence_rad,
    beacon_tx_power_dbm,
    gw_aperture_m,
    ac_aperture_m,
    comm_threshold_dbm,
    quadcell_fov_rad,
    quadcell_threshold_dbm,
    quadcell_nea_rad,
    fpa_fov_rad,
    fpa_threshold_dbm,
    fpa_nea_rad,
    clcp_rate_hz,
    gimbal_open_loop_sigma_rad,
    gimbal_closed_loop_sigma_rad,
    fsm_sigma_rad,
    fsm_range_rad,
    gnss_sigma_m,
    aoa_sigma_rad,
    scan_overlap,
    max_scan_repeats,
    handshake_retries,
    ccr_count,
    ccr_ring_radius_m,
    ccr_gain_db,
    ac_dist_gm_sigma_rad,
    ac_dist_gm_tau_s,
    ac_dist_jump_rate_per_s,
    ac_dist_jump_min_rad,
    ac_dist_jump_max_rad,
    gw_dist_gm_sigma_rad,
    gw_dist_gm_tau_s,
    gw_dist_jump_rate_per_s,
    gw_dist_jump_min_rad,
    gw_dist_jump_max_rad,
);

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        require_positive(self.slot_dt_s, "slot_dt_s")?;
        require(
            self.mission_duration_s.is_finite() && self.mission_duration_s >= self.slot_dt_s,
            "mission_duration_s",
            "must be finite and >= slot_dt_s",
        )?;
        require_positive(self.link_distance_km, "link_distance_km")?;
        require_positive(self.visibility_km, "visibility_km")?;
        self.turbulence()?;
        require((0.0..=1.0).contains(&self.rho), "rho", "must lie in [0, 1]")?;
        require_non_negative(self.beam_wander_sigma_rad, "beam_wander_sigma_rad")?;
        self.comm_beam().validate("comm")?;
        self.beacon_beam().validate("beacon")?;
        require_positive(self.gw_aperture_m, "gw_aperture_m")?;
        require_positive(self.ac_aperture_m, "ac_aperture_m")?;
        require_finite(self.comm_threshold_dbm, "comm_threshold_dbm")?;
        self.terminal_devices().validate()?;
        require_positive(self.clcp_rate_hz, "clcp_rate_hz")?;
        require(
            self.clcp_period_slots() >= 1,
            "clcp_rate_hz",
            "period must be at least one slot",
        )?;
        self.positioning().validate()?;
        require(
            self.scan_overlap.is_finite() && self.scan_overlap > 0.0 && self.scan_overlap <= 1.0,
            "scan_overlap",
            "must lie in (0, 1]",
        )?;
        require(
            self.max_scan_repeats >= 1,
            "max_scan_repeats",
            "must be >= 1",
        )?;
        require(
            self.handshake_retries >= 1,
            "handshake_retries",
            "must be >= 1",
        )?;
        self.ccr().validate()?;
        self.ac_disturbance().validate("ac_dist")?;
        self.gw_disturbance().validate("gw_dist")?;
        Ok(())
    }

    pub fn slot_count(&self) -> u64 {
        (self.mission_duration_s / self.slot_dt_s).round() as u64
    }

    pub fn clcp_period_slots(&self) -> u64 {
        (1.0 / (self.clcp_rate_hz * self.slot_dt_s)).round() as u64
    }

    pub fn turbulence(&self) -> Result<TurbulenceParams> {
        match self.rytov_variance {
            Some(s2) => gg_params_from_rytov(s2),
            None => TurbulenceParams::new(self.gg_alpha, self.gg_beta),
        }
    }

    pub fn comm_beam(&self) -> BeamSpec {
        BeamSpec {
            wavelength_nm: self.comm_wavelength_nm,
            divergence_rad: self.comm_divergence_rad,
            tx_power_dbm: self.comm_tx_power_dbm,
        }
    }

    pub fn beacon_beam(&self) -> BeamSpec {
        BeamSpec {
            wavelength_nm: self.beacon_wavelength_nm,
            divergence_rad: self.beacon_divergence_rad,
            tx_power_dbm: self.beacon_tx_power_dbm,
        }
    }

    /// Both terminals carry identical hardware.
    pub fn terminal_devices(&self) -> TerminalDevices {
        TerminalDevices {
            gimbal: GimbalSpec {
                open_loop_sigma_rad: self.gimbal_open_loop_sigma_rad,
                closed_loop_sigma_rad: self.gimbal_closed_loop_sigma_rad,
            },
            fsm: FsmSpec {
                residual_sigma_rad: self.fsm_sigma_rad,
                range_rad: self.fsm_range_rad,
            },
            quadcell: QuadcellSpec {
                fov_rad: self.quadcell_fov_rad,
                threshold_dbm: self.quadcell_threshold_dbm,
                nea_coeff_rad: self.quadcell_nea_rad,
            },
            fpa: FpaSpec {
                fov_rad: self.fpa_fov_rad,
                threshold_dbm: self.fpa_threshold_dbm,
                nea_coeff_rad: self.fpa_nea_rad,
            },
        }
    }

    pub fn positioning(&self) -> PositioningSpec {
        PositioningSpec {
            gnss_sigma_m: self.gnss_sigma_m,
            aoa_sigma_rad: self.aoa_sigma_rad,
        }
    }

    pub fn ccr(&self) -> CcrArraySpec {
        CcrArraySpec {
            count: self.ccr_count,
            ring_radius_m: self.ccr_ring_radius_m,
            per_ccr_gain_db: self.ccr_gain_db,
        }
    }

    pub fn ac_disturbance(&self) -> DisturbanceSpec {
        DisturbanceSpec {
            gm_sigma_rad: self.ac_dist_gm_sigma_rad,
            gm_tau_s: self.ac_dist_gm_tau_s,
            jump_rate_per_s: self.ac_dist_jump_rate_per_s,
            jump_min_rad: self.ac_dist_jump_min_rad,
            jump_max_rad: self.ac_dist_jump_max_rad,
        }
    }

    pub fn gw_disturbance(&self) -> DisturbanceSpec {
        DisturbanceSpec {
            gm_sigma_rad: self.gw_dist_gm_sigma_rad,
            gm_tau_s: self.gw_dist_gm_tau_s,
            jump_rate_per_s: self.gw_dist_jump_rate_per_s,
            jump_min_rad: self.gw_dist_jump_min_rad,
            jump_max_rad: self.gw_dist_jump_max_rad,
        }
    }

    /// A configuration with every noise source, fade and disturbance removed.
    pub fn noiseless() -> Self {
        Self {
            fading_enabled: false,
            gimbal_open_loop_sigma_rad: 0.0,
            gimbal_closed_loop_sigma_rad: 0.0,
            fsm_sigma_rad: 0.0,
            quadcell_nea_rad: 0.0,
            fpa_nea_rad: 0.0,
            gnss_sigma_m: 0.0,
            aoa_sigma_rad: 0.0,
            ac_dist_gm_sigma_rad: 0.0,
            ac_dist_jump_rate_per_s: 0.0,
            ..Self::default()
        }
    }
}
