//! Received power on the four constituent links given both terminals'
//! boresight errors and one slot's channel realisation.

use serde::{Deserialize, Serialize};

use crate::angle::Angle2;
use crate::channel::{
    atmospheric_loss_db, lin_to_db, link_budget_gain, pointing_loss_db, BeamSpec, GammaGammaSampler,
};
use crate::config::ScenarioConfig;
use crate::devices::{ccr_return, CcrArraySpec};
use crate::error::Result;
use crate::streams::{SlotRngs, Subsystem};

use super::AlgorithmVariant;

/// One slot's channel state: linear irradiance fades and beam-wander offsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotFades {
    pub up_beacon: f64,
    pub down_beacon: f64,
    pub up_comm: f64,
    pub down_comm: f64,
    /// Per-retroreflector (uplink, downlink) fades.
    pub ccr: Vec<(f64, f64)>,
    pub wander_up: Angle2,
    pub wander_down: Angle2,
}

impl SlotFades {
    pub fn clear(ccr_count: usize) -> Self {
        Self {
            up_beacon: 1.0,
            down_beacon: 1.0,
            up_comm: 1.0,
            down_comm: 1.0,
            ccr: vec![(1.0, 1.0); ccr_count],
            wander_up: Angle2::ZERO,
            wander_down: Angle2::ZERO,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LinkModel {
    pub variant: AlgorithmVariant,
    pub comm: BeamSpec,
    pub beacon: BeamSpec,
    pub ccr: CcrArraySpec,
    pub rho: f64,
    pub wander_sigma_rad: f64,
    up_beacon_gain_db: f64,
    down_beacon_gain_db: f64,
    up_comm_gain_db: f64,
    down_comm_gain_db: f64,
    /// Extra atmospheric pass of the retroreflected beacon.
    return_pass_db: f64,
    sampler: Option<GammaGammaSampler>,
}

impl LinkModel {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        let comm = cfg.comm_beam();
        let beacon = cfg.beacon_beam();
        let z = cfg.link_distance_km;
        let v = cfg.visibility_km;
        let sampler = if cfg.fading_enabled {
            Some(GammaGammaSampler::new(cfg.turbulence()?)?)
        } else {
            None
        };
        Ok(Self {
            variant: cfg.variant,
            comm,
            beacon,
            ccr: cfg.ccr(),
            rho: cfg.rho,
            wander_sigma_rad: cfg.beam_wander_sigma_rad,
            up_beacon_gain_db: link_budget_gain(&beacon, z, cfg.ac_aperture_m, v)?,
            down_beacon_gain_db: link_budget_gain(&beacon, z, cfg.gw_aperture_m, v)?,
            up_comm_gain_db: link_budget_gain(&comm, z, cfg.ac_aperture_m, v)?,
            down_comm_gain_db: link_budget_gain(&comm, z, cfg.gw_aperture_m, v)?,
            return_pass_db: atmospheric_loss_db(v, beacon.wavelength_nm, z)?,
            sampler,
        })
    }

    /// Draw this slot's fades. Each link reads its own stream.
    pub fn draw_fades(&self, rngs: &mut SlotRngs<'_>) -> SlotFades {
        let mut f = SlotFades::clear(self.ccr.count);
        if let Some(s) = &self.sampler {
            f.up_beacon = s.sample(rngs.get(Subsystem::FadeUpBeacon));
            f.up_comm = s.sample(rngs.get(Subsystem::FadeUpComm));
            f.down_comm = s.sample(rngs.get(Subsystem::FadeDownComm));
            if self.variant.uses_ccr() {
                let rng = rngs.get(Subsystem::CcrFades);
                for pair in f.ccr.iter_mut() {
                    *pair = s
                        .sample_correlated(self.rho, rng)
                        .expect("rho validated with the config");
                }
            } else {
                f.down_beacon = s.sample(rngs.get(Subsystem::FadeDownBeacon));
            }
        }
        if self.wander_sigma_rad > 0.0 {
            let rng = rngs.get(Subsystem::BeamWander);
            f.wander_up = Angle2::gaussian(self.wander_sigma_rad, rng);
            f.wander_down = Angle2::gaussian(self.wander_sigma_rad, rng);
        }
        f
    }

    pub fn up_beacon_dbm(&self, f: &SlotFades, e_gw: Angle2) -> f64 {
        self.beacon.tx_power_dbm
            + self.up_beacon_gain_db
            + pointing_loss_db(e_gw + f.wander_up, self.beacon.divergence_rad)
            + lin_to_db(f.up_beacon)
    }

    pub fn up_comm_dbm(&self, f: &SlotFades, e_gw: Angle2) -> f64 {
        self.comm.tx_power_dbm
            + self.up_comm_gain_db
            + pointing_loss_db(e_gw + f.wander_up, self.comm.divergence_rad)
            + lin_to_db(f.up_comm)
    }

    pub fn down_comm_dbm(&self, f: &SlotFades, e_ac: Angle2) -> f64 {
        self.comm.tx_power_dbm
            + self.down_comm_gain_db
            + pointing_loss_db(e_ac + f.wander_down, self.comm.divergence_rad)
            + lin_to_db(f.down_comm)
    }

    /// Downlink beacon power at the gateway camera and the pointing error the
    /// aircraft contributes to it. With the retroreflector array the return is
    /// the gateway's own uplink beacon, so only the gateway pointing matters.
    pub fn down_beacon(&self, f: &SlotFades, e_gw: Angle2, e_ac: Angle2) -> (f64, f64) {
        if self.variant.uses_ccr() {
            let ret = ccr_return(&self.ccr, &f.ccr, e_ac).expect("array validated with the config");
            let p = self.beacon.tx_power_dbm
                + self.down_beacon_gain_db
                + self.return_pass_db
                + pointing_loss_db(e_gw + f.wander_up, self.beacon.divergence_rad)
                + lin_to_db(ret.gain);
            (p, ret.direction_error.norm())
        } else {
            let p = self.beacon.tx_power_dbm
                + self.down_beacon_gain_db
                + pointing_loss_db(e_ac + f.wander_down, self.beacon.divergence_rad)
                + lin_to_db(f.down_beacon);
            (p, e_ac.norm())
        }
    }
}
