//! Open-loop coarse pointing: the gateway steps its beacon through the scan
//! pattern until the aircraft camera sees it, then both ends close their
//! coarse loops in a three-step handshake (aircraft aligns, gateway aligns,
//! both confirm).

use std::sync::Arc;

use crate::angle::Angle2;
use crate::devices::gimbal_open_loop_point;
use crate::streams::{SlotRngs, Subsystem};

use super::link::{LinkModel, SlotFades};
use super::scan::ScanPattern;
use super::terminal::{TerminalDevices, TerminalState};
use super::tracking::{clcp_step, ClcpOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OlcpStage {
    Scan,
    GwAlign,
    Confirm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OlcpOutcome {
    Acquired,
    Scanning,
    Failed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OlcpProgress {
    pub stage: OlcpStage,
    /// Estimated aircraft direction relative to the true line of sight.
    pub estimate: Angle2,
    pub pattern: Arc<ScanPattern>,
    pub dwell: usize,
    pub pass: u32,
    pub tries: u32,
}

impl OlcpProgress {
    pub fn new(estimate: Angle2, pattern: Arc<ScanPattern>) -> Self {
        Self {
            stage: OlcpStage::Scan,
            estimate,
            pattern,
            dwell: 0,
            pass: 0,
            tries: 0,
        }
    }

    fn next_dwell(&mut self, max_passes: u32) -> OlcpOutcome {
        self.stage = OlcpStage::Scan;
        self.tries = 0;
        self.dwell += 1;
        if self.dwell == self.pattern.len() {
            self.dwell = 0;
            self.pass += 1;
            if self.pass >= max_passes {
                return OlcpOutcome::Failed;
            }
        }
        OlcpOutcome::Scanning
    }

    fn retry(&mut self, limit: u32, max_passes: u32) -> OlcpOutcome {
        self.tries += 1;
        if self.tries >= limit {
            self.next_dwell(max_passes)
        } else {
            OlcpOutcome::Scanning
        }
    }
}

/// Everything fixed for the duration of one slot.
pub struct OlcpEnv<'a> {
    pub devices: &'a TerminalDevices,
    pub link: &'a LinkModel,
    pub fades: &'a SlotFades,
    pub max_scan_repeats: u32,
    pub handshake_retries: u32,
}

/// Advance the acquisition by one slot.
pub fn olcp_step(
    p: &mut OlcpProgress,
    gw: &mut TerminalState,
    ac: &mut TerminalState,
    env: &OlcpEnv<'_>,
    rngs: &mut SlotRngs<'_>,
) -> OlcpOutcome {
    let dev = env.devices;
    if p.stage == OlcpStage::Scan {
        let center = p.pattern.dwells[p.dwell];
        gw.gimbal_dir = gimbal_open_loop_point(
            p.estimate + center - gw.disturbance,
            &dev.gimbal,
            rngs.get(Subsystem::GwGimbal),
        );
        gw.fsm_tilt = Angle2::ZERO;
        gw.scan_index = p.dwell;
    }

    let e_gw = gw.boresight_error();
    let e_ac = ac.boresight_error();
    let p_ub = env.link.up_beacon_dbm(env.fades, e_gw);
    let (p_db, _) = env.link.down_beacon(env.fades, e_gw, e_ac);

    let (s, g) = rngs.pair(Subsystem::AcFpa, Subsystem::AcGimbal);
    let ac_step = clcp_step(ac, e_ac, p_ub, &dev.fpa, &dev.gimbal, s, g);
    if ac_step.outcome == ClcpOutcome::NotDetected {
        return if p.stage == OlcpStage::Scan {
            p.next_dwell(env.max_scan_repeats)
        } else {
            p.retry(env.handshake_retries, env.max_scan_repeats)
        };
    }
    *ac = ac_step.terminal;

    match p.stage {
        OlcpStage::Scan => {
            p.stage = OlcpStage::GwAlign;
            p.tries = 0;
            OlcpOutcome::Scanning
        }
        OlcpStage::GwAlign | OlcpStage::Confirm => {
            let (s, g) = rngs.pair(Subsystem::GwFpa, Subsystem::GwGimbal);
            let gw_step = clcp_step(gw, e_gw, p_db, &dev.fpa, &dev.gimbal, s, g);
            if gw_step.outcome == ClcpOutcome::NotDetected {
                return p.retry(env.handshake_retries, env.max_scan_repeats);
            }
            *gw = gw_step.terminal;
            if p.stage == OlcpStage::GwAlign {
                p.stage = OlcpStage::Confirm;
                p.tries = 0;
                return OlcpOutcome::Scanning;
            }
            let fov = dev.quadcell.fov_rad;
            if gw.boresight_error().norm() < fov && ac.boresight_error().norm() < fov {
                OlcpOutcome::Acquired
            } else {
                p.retry(env.handshake_retries, env.max_scan_repeats)
            }
        }
    }
}
