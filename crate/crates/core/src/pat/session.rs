//! Five-phase session machine over one mission slot.
//!
//! Each slot first advances the disturbances and draws the channel, then runs
//! the phase-specific control step, and finally records the state at the end
//! of the slot.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::angle::Angle2;
use crate::channel::pointing_loss_db;
use crate::config::ScenarioConfig;
use crate::devices::{fuse_estimates, gimbal_open_loop_point};
use crate::error::Result;
use crate::streams::{SlotRngs, StreamSet, Subsystem};
use crate::trace::SlotRecord;

use super::disturbance::{disturbance_step, DisturbanceSpec};
use super::link::{LinkModel, SlotFades};
use super::olcp::{olcp_step, OlcpEnv, OlcpOutcome, OlcpProgress};
use super::scan::{build_scan_pattern, ScanPattern};
use super::terminal::{TerminalDevices, TerminalState};
use super::tracking::{clcp_step, fine_tracking_step, ClcpOutcome, FineOutcome};
use super::AlgorithmVariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionPhase {
    LinkRequest,
    Olcp,
    WellConnected,
    FineTrackingOutage,
    LinkOutage,
}

impl SessionPhase {
    pub const ALL: [SessionPhase; 5] = [
        SessionPhase::LinkRequest,
        SessionPhase::Olcp,
        SessionPhase::WellConnected,
        SessionPhase::FineTrackingOutage,
        SessionPhase::LinkOutage,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn token(self) -> &'static str {
        match self {
            SessionPhase::LinkRequest => "link_request",
            SessionPhase::Olcp => "olcp",
            SessionPhase::WellConnected => "well_connected",
            SessionPhase::FineTrackingOutage => "ft_outage",
            SessionPhase::LinkOutage => "link_outage",
        }
    }

    /// Whether the session machine may move from `self` to `next` in one slot.
    pub fn can_transition_to(self, next: SessionPhase) -> bool {
        use SessionPhase::*;
        self == next
            || matches!(
                (self, next),
                (LinkRequest, Olcp)
                    | (Olcp, WellConnected)
                    | (Olcp, LinkRequest)
                    | (WellConnected, FineTrackingOutage)
                    | (FineTrackingOutage, WellConnected)
                    | (WellConnected, LinkOutage)
                    | (FineTrackingOutage, LinkOutage)
                    | (LinkOutage, Olcp)
                    | (LinkOutage, LinkRequest)
            )
    }
}

impl fmt::Display for SessionPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for SessionPhase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        SessionPhase::ALL
            .into_iter()
            .find(|p| p.token() == s)
            .ok_or_else(|| format!("unknown phase `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LinkSet {
    pub up_beacon: bool,
    pub down_beacon: bool,
    pub up_comm: bool,
    pub down_comm: bool,
}

/// Immutable per-mission model derived from a validated config.
#[derive(Debug, Clone)]
pub struct SessionContext {
    pub variant: AlgorithmVariant,
    pub dt: f64,
    pub clcp_period: u64,
    pub comm_threshold_dbm: f64,
    pub devices: TerminalDevices,
    pub ac_disturbance: DisturbanceSpec,
    pub gw_disturbance: DisturbanceSpec,
    pub link: LinkModel,
    pub gnss_sigma_rad: f64,
    pub aoa_sigma_rad: f64,
    pub gnss_pattern: Arc<ScanPattern>,
    pub fused_pattern: Arc<ScanPattern>,
    pub max_scan_repeats: u32,
    pub handshake_retries: u32,
}

fn pattern_for(sigma: f64, cfg: &ScenarioConfig) -> Result<ScanPattern> {
    if sigma > 0.0 {
        build_scan_pattern(sigma, cfg.beacon_divergence_rad, cfg.scan_overlap)
    } else {
        Ok(ScanPattern {
            dwells: vec![Angle2::ZERO],
            coverage_radius: cfg.scan_overlap * cfg.beacon_divergence_rad / 2.0,
            extent: 0.0,
        })
    }
}

impl SessionContext {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let positioning = cfg.positioning();
        let gnss_sigma_rad = positioning.gnss_sigma_rad(cfg.link_distance_km);
        let (_, fused_sigma) = fuse_estimates(
            Angle2::ZERO,
            gnss_sigma_rad,
            Angle2::ZERO,
            cfg.aoa_sigma_rad,
        );
        Ok(Self {
            variant: cfg.variant,
            dt: cfg.slot_dt_s,
            clcp_period: cfg.clcp_period_slots(),
            comm_threshold_dbm: cfg.comm_threshold_dbm,
            devices: cfg.terminal_devices(),
            ac_disturbance: cfg.ac_disturbance(),
            gw_disturbance: cfg.gw_disturbance(),
            link: LinkModel::new(cfg)?,
            gnss_sigma_rad,
            aoa_sigma_rad: cfg.aoa_sigma_rad,
            gnss_pattern: Arc::new(pattern_for(gnss_sigma_rad, cfg)?),
            fused_pattern: Arc::new(pattern_for(fused_sigma, cfg)?),
            max_scan_repeats: cfg.max_scan_repeats,
            handshake_retries: cfg.handshake_retries,
        })
    }
}

/// Test hooks that replace parts of a slot's random realisation.
#[derive(Debug, Clone, Default)]
pub struct SlotOverrides {
    pub fades: Option<SlotFades>,
    /// Added to the aircraft disturbance after its regular update.
    pub ac_kick: Option<Angle2>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub phase: SessionPhase,
    pub gw: TerminalState,
    pub ac: TerminalState,
    pub olcp: Option<OlcpProgress>,
    started: bool,
}

impl Default for Session {
    fn default() -> Self {
        Self::new()
    }
}

impl Session {
    /// A mission starts in link outage with a link request pending.
    pub fn new() -> Self {
        Self {
            phase: SessionPhase::LinkOutage,
            gw: TerminalState::default(),
            ac: TerminalState::default(),
            olcp: None,
            started: false,
        }
    }

    pub fn step(&mut self, ctx: &SessionContext, streams: &StreamSet, slot: u64) -> SlotRecord {
        self.step_with(ctx, streams, slot, &SlotOverrides::default())
    }

    /// Advance one slot. Float fields are rounded to their CSV precision.
    pub fn step_with(
        &mut self,
        ctx: &SessionContext,
        streams: &StreamSet,
        slot: u64,
        overrides: &SlotOverrides,
    ) -> SlotRecord {
        self.advance(ctx, streams, slot, overrides).quantized()
    }

    /// Like [`Session::step_with`] but with unrounded floats.
    pub(crate) fn advance(
        &mut self,
        ctx: &SessionContext,
        streams: &StreamSet,
        slot: u64,
        overrides: &SlotOverrides,
    ) -> SlotRecord {
        let mut rngs = SlotRngs::new(streams, slot);
        self.ac.disturbance = disturbance_step(
            self.ac.disturbance,
            &ctx.ac_disturbance,
            ctx.dt,
            rngs.get(Subsystem::AcDisturbance),
        );
        if let Some(kick) = overrides.ac_kick {
            self.ac.disturbance += kick;
        }
        self.gw.disturbance = disturbance_step(
            self.gw.disturbance,
            &ctx.gw_disturbance,
            ctx.dt,
            rngs.get(Subsystem::GwDisturbance),
        );
        let fades = match &overrides.fades {
            Some(f) => f.clone(),
            None => ctx.link.draw_fades(&mut rngs),
        };
        self.ac.slots_since_clcp = self.ac.slots_since_clcp.saturating_add(1);
        self.gw.slots_since_clcp = self.gw.slots_since_clcp.saturating_add(1);

        match self.phase {
            SessionPhase::LinkOutage if !self.started => {
                self.phase = SessionPhase::LinkRequest;
            }
            SessionPhase::LinkRequest | SessionPhase::LinkOutage => {
                self.begin_olcp(ctx, &mut rngs);
                self.olcp_slot(ctx, &fades, &mut rngs);
            }
            SessionPhase::Olcp => self.olcp_slot(ctx, &fades, &mut rngs),
            SessionPhase::WellConnected | SessionPhase::FineTrackingOutage => {
                self.tracking_slot(ctx, &fades, &mut rngs, slot)
            }
        }
        self.started = true;
        self.record(ctx, &fades, slot)
    }

    fn begin_olcp(&mut self, ctx: &SessionContext, rngs: &mut SlotRngs<'_>) {
        let rng = rngs.get(Subsystem::Positioning);
        let gnss = Angle2::gaussian(ctx.gnss_sigma_rad, rng);
        let (estimate, pattern) = if ctx.variant.uses_aoa() {
            let aoa = Angle2::gaussian(ctx.aoa_sigma_rad, rng);
            let (fused, _) = fuse_estimates(gnss, ctx.gnss_sigma_rad, aoa, ctx.aoa_sigma_rad);
            (fused, Arc::clone(&ctx.fused_pattern))
        } else {
            (gnss, Arc::clone(&ctx.gnss_pattern))
        };
        // The aircraft points open loop at the gateway from its own position knowledge.
        self.ac.gimbal_dir = gimbal_open_loop_point(
            -self.ac.disturbance,
            &ctx.devices.gimbal,
            rngs.get(Subsystem::AcGimbal),
        );
        self.ac.fsm_tilt = Angle2::ZERO;
        self.gw.fsm_tilt = Angle2::ZERO;
        self.olcp = Some(OlcpProgress::new(estimate, pattern));
        self.phase = SessionPhase::Olcp;
    }

    fn olcp_slot(&mut self, ctx: &SessionContext, fades: &SlotFades, rngs: &mut SlotRngs<'_>) {
        let env = OlcpEnv {
            devices: &ctx.devices,
            link: &ctx.link,
            fades,
            max_scan_repeats: ctx.max_scan_repeats,
            handshake_retries: ctx.handshake_retries,
        };
        let progress = self
            .olcp
            .as_mut()
            .expect("olcp progress exists in Olcp phase");
        match olcp_step(progress, &mut self.gw, &mut self.ac, &env, rngs) {
            OlcpOutcome::Scanning => self.phase = SessionPhase::Olcp,
            OlcpOutcome::Acquired => {
                self.phase = SessionPhase::WellConnected;
                self.olcp = None;
            }
            OlcpOutcome::Failed => {
                self.phase = SessionPhase::LinkRequest;
                self.olcp = None;
            }
        }
    }

    fn tracking_slot(
        &mut self,
        ctx: &SessionContext,
        fades: &SlotFades,
        rngs: &mut SlotRngs<'_>,
        slot: u64,
    ) {
        let link = &ctx.link;
        let dev = &ctx.devices;
        let e_gw = self.gw.boresight_error();
        let e_ac = self.ac.boresight_error();
        let p_ub = link.up_beacon_dbm(fades, e_gw);
        let (p_db, _) = link.down_beacon(fades, e_gw, e_ac);
        let p_uc = link.up_comm_dbm(fades, e_gw);

        if slot.is_multiple_of(ctx.clcp_period) {
            let (s, g) = rngs.pair(Subsystem::AcFpa, Subsystem::AcGimbal);
            let ac = clcp_step(&self.ac, e_ac, p_ub, &dev.fpa, &dev.gimbal, s, g);
            let (s, g) = rngs.pair(Subsystem::GwFpa, Subsystem::GwGimbal);
            let gw = clcp_step(&self.gw, e_gw, p_db, &dev.fpa, &dev.gimbal, s, g);
            if ac.outcome == ClcpOutcome::NotDetected || gw.outcome == ClcpOutcome::NotDetected {
                self.phase = SessionPhase::LinkOutage;
                return;
            }
            self.ac = ac.terminal;
            self.gw = gw.terminal;
        }

        // The aircraft quadcell sees the uplink comm beam; the gateway sees the downlink.
        let (s, f) = rngs.pair(Subsystem::AcQuadcell, Subsystem::AcFsm);
        let ac = fine_tracking_step(
            &self.ac,
            self.ac.boresight_error(),
            p_uc,
            &dev.quadcell,
            &dev.fsm,
            s,
            f,
        );
        // The gateway quadcell sees the downlink after the aircraft mirror has moved.
        let p_dc = link.down_comm_dbm(fades, ac.terminal.boresight_error());
        let (s, f) = rngs.pair(Subsystem::GwQuadcell, Subsystem::GwFsm);
        let gw = fine_tracking_step(
            &self.gw,
            self.gw.boresight_error(),
            p_dc,
            &dev.quadcell,
            &dev.fsm,
            s,
            f,
        );
        self.ac = ac.terminal;
        self.gw = gw.terminal;
        self.phase = if ac.outcome == FineOutcome::Tracking && gw.outcome == FineOutcome::Tracking {
            SessionPhase::WellConnected
        } else {
            SessionPhase::FineTrackingOutage
        };
    }

    fn record(&self, ctx: &SessionContext, fades: &SlotFades, slot: u64) -> SlotRecord {
        let link = &ctx.link;
        let fpa = &ctx.devices.fpa;
        let e_gw = self.gw.boresight_error();
        let e_ac = self.ac.boresight_error();
        let p_ub = link.up_beacon_dbm(fades, e_gw);
        let (p_db, ac_beacon_err) = link.down_beacon(fades, e_gw, e_ac);
        let p_uc = link.up_comm_dbm(fades, e_gw);
        let p_dc = link.down_comm_dbm(fades, e_ac);
        let up_beacon = fpa.sees(e_ac, p_ub);
        let down_beacon = fpa.sees(e_gw, p_db);
        let comm_on = matches!(
            self.phase,
            SessionPhase::WellConnected | SessionPhase::FineTrackingOutage
        );
        SlotRecord {
            slot,
            t_s: slot as f64 * ctx.dt,
            phase: self.phase,
            links: LinkSet {
                up_beacon,
                down_beacon,
                up_comm: comm_on && down_beacon && p_uc >= ctx.comm_threshold_dbm,
                down_comm: comm_on && up_beacon && p_dc >= ctx.comm_threshold_dbm,
            },
            err_down_comm_rad: e_ac.norm(),
            pl_down_comm_db: pointing_loss_db(e_ac, link.comm.divergence_rad),
            p_rx_up_beacon_dbm: p_ub,
            p_rx_down_beacon_dbm: p_db,
            p_rx_up_comm_dbm: p_uc,
            p_rx_down_comm_dbm: p_dc,
            scan_index: self.gw.scan_index,
            ac_down_beacon_err_rad: ac_beacon_err,
        }
    }
}
