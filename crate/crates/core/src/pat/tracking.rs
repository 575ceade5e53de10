//! Closed-loop tracking: the quadcell/FSM fine loop that runs every slot and
//! the FPA/gimbal coarse loop (CLCP) that also unloads the FSM.

use rand::Rng;

use crate::angle::Angle2;
use crate::devices::{
    fpa_detect, fsm_correct, gimbal_closed_loop_correct, quadcell_measure, FpaReading, FpaSpec,
    FsmSpec, GimbalSpec, QuadcellReading, QuadcellSpec,
};

use super::terminal::TerminalState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FineOutcome {
    Tracking,
    OutOfFov,
    LowPower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FineTrackingResult {
    pub terminal: TerminalState,
    pub residual: Angle2,
    pub outcome: FineOutcome,
    pub saturated: bool,
}

/// One deadbeat fine-tracking update. `true_offset` is the terminal's
/// current boresight error as seen by the quadcell.
pub fn fine_tracking_step<R: Rng + ?Sized>(
    terminal: &TerminalState,
    true_offset: Angle2,
    rx_power_dbm: f64,
    quadcell: &QuadcellSpec,
    fsm: &FsmSpec,
    sensor_rng: &mut R,
    fsm_rng: &mut R,
) -> FineTrackingResult {
    let outcome = match quadcell_measure(true_offset, rx_power_dbm, quadcell, sensor_rng) {
        QuadcellReading::Measured(m) => m,
        QuadcellReading::OutOfFov => {
            return unchanged(terminal, true_offset, FineOutcome::OutOfFov)
        }
        QuadcellReading::LowPower => {
            return unchanged(terminal, true_offset, FineOutcome::LowPower)
        }
    };
    let out = fsm_correct(-outcome, terminal.fsm_tilt, fsm, fsm_rng);
    let mut next = *terminal;
    next.fsm_tilt = out.tilt;
    FineTrackingResult {
        terminal: next,
        residual: true_offset + (out.tilt - terminal.fsm_tilt),
        outcome: FineOutcome::Tracking,
        saturated: out.saturated,
    }
}

fn unchanged(terminal: &TerminalState, offset: Angle2, outcome: FineOutcome) -> FineTrackingResult {
    FineTrackingResult {
        terminal: *terminal,
        residual: offset,
        outcome,
        saturated: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClcpOutcome {
    Locked,
    NotDetected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClcpResult {
    pub terminal: TerminalState,
    pub residual: Angle2,
    pub outcome: ClcpOutcome,
}

/// Coarse correction from the beacon camera. The gimbal takes over both the
/// measured offset and the current mirror tilt, and the mirror is re-centred.
pub fn clcp_step<R: Rng + ?Sized>(
    terminal: &TerminalState,
    beacon_offset: Angle2,
    rx_power_dbm: f64,
    fpa: &FpaSpec,
    gimbal: &GimbalSpec,
    sensor_rng: &mut R,
    gimbal_rng: &mut R,
) -> ClcpResult {
    let measured = match fpa_detect(beacon_offset, rx_power_dbm, fpa, sensor_rng) {
        FpaReading::Measured(m) => m,
        FpaReading::NotDetected => {
            return ClcpResult {
                terminal: *terminal,
                residual: beacon_offset,
                outcome: ClcpOutcome::NotDetected,
            }
        }
    };
    let correction = gimbal_closed_loop_correct(measured, gimbal, gimbal_rng);
    let mut next = *terminal;
    next.gimbal_dir = terminal.gimbal_dir + terminal.fsm_tilt + correction;
    next.fsm_tilt = Angle2::ZERO;
    next.slots_since_clcp = 0;
    ClcpResult {
        terminal: next,
        residual: beacon_offset + correction,
        outcome: ClcpOutcome::Locked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qc() -> QuadcellSpec {
        QuadcellSpec {
            fov_rad: 2e-3,
            threshold_dbm: -40.0,
            nea_coeff_rad: 5e-4,
        }
    }

    fn fsm(sigma: f64) -> FsmSpec {
        FsmSpec {
            residual_sigma_rad: sigma,
            range_rad: 2e-3,
        }
    }

    fn fpa() -> FpaSpec {
        FpaSpec {
            fov_rad: 40e-3,
            threshold_dbm: -45.0,
            nea_coeff_rad: 1e-3,
        }
    }

    #[test]
    fn out_of_fov_leaves_fsm_alone() {
        let t = TerminalState {
            fsm_tilt: Angle2::new(1e-4, 0.0),
            ..Default::default()
        };
        let mut a = ChaCha8Rng::seed_from_u64(0);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        let r = fine_tracking_step(
            &t,
            Angle2::new(2.5e-3, 0.0),
            0.0,
            &qc(),
            &fsm(1e-4),
            &mut a,
            &mut b,
        );
        assert_eq!(r.outcome, FineOutcome::OutOfFov);
        assert_eq!(r.terminal, t);
    }

    #[test]
    fn steady_residual_matches_loop_algebra() {
        let mut a = ChaCha8Rng::seed_from_u64(2);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        let q = qc();
        let f = fsm(100e-6);
        let p_rx = -20.0;
        let nea = q.nea_coeff_rad / 10f64.powf((p_rx - q.threshold_dbm) / 20.0);
        let mut t = TerminalState {
            gimbal_dir: Angle2::new(1e-3, 0.0),
            ..Default::default()
        };
        let n = 20_000;
        let mut s2 = 0.0;
        for i in 0..n {
            let r = fine_tracking_step(&t, t.boresight_error(), p_rx, &q, &f, &mut a, &mut b);
            assert_eq!(r.outcome, FineOutcome::Tracking);
            assert!((r.residual - r.terminal.boresight_error()).norm() < 1e-15);
            t = r.terminal;
            if i > 10 {
                s2 += r.residual.az * r.residual.az;
            }
        }
        let std = (s2 / (n - 11) as f64).sqrt();
        let want = (100e-6f64.powi(2) + nea * nea).sqrt();
        assert!((std / want - 1.0).abs() < 0.05, "std={std} want={want}");
    }

    #[test]
    fn clcp_unloads_fsm() {
        let g = GimbalSpec {
            open_loop_sigma_rad: 3e-3,
            closed_loop_sigma_rad: 0.0,
        };
        let t = TerminalState {
            gimbal_dir: Angle2::new(2e-3, 0.0),
            fsm_tilt: Angle2::new(-1.6e-3, 0.0),
            ..Default::default()
        };
        let mut a = ChaCha8Rng::seed_from_u64(0);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        // Very high SNR so the camera is effectively noiseless.
        let r = clcp_step(&t, t.boresight_error(), 200.0, &fpa(), &g, &mut a, &mut b);
        assert_eq!(r.outcome, ClcpOutcome::Locked);
        assert_eq!(r.terminal.fsm_tilt, Angle2::ZERO);
        assert!(r.terminal.boresight_error().norm() < 1e-12);
        assert!((r.terminal.gimbal_dir.az - 0.0).abs() < 1e-12);
    }

    #[test]
    fn clcp_outside_fpa_fov() {
        let g = GimbalSpec {
            open_loop_sigma_rad: 3e-3,
            closed_loop_sigma_rad: 3e-4,
        };
        let t = TerminalState::default();
        let mut a = ChaCha8Rng::seed_from_u64(0);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        let r = clcp_step(&t, Angle2::new(50e-3, 0.0), 0.0, &fpa(), &g, &mut a, &mut b);
        assert_eq!(r.outcome, ClcpOutcome::NotDetected);
        assert_eq!(r.terminal, t);
    }

    #[test]
    fn clcp_residual_std_is_gimbal_sigma() {
        let g = GimbalSpec {
            open_loop_sigma_rad: 3e-3,
            closed_loop_sigma_rad: 3e-4,
        };
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(8);
        let n = 10_000;
        let mut s2 = 0.0;
        for i in 0..n {
            let t = TerminalState {
                gimbal_dir: Angle2::new(1e-3 * (i % 7) as f64, -2e-3),
                ..Default::default()
            };
            let r = clcp_step(&t, t.boresight_error(), 200.0, &fpa(), &g, &mut a, &mut b);
            s2 += r.residual.az * r.residual.az;
        }
        let std = (s2 / n as f64).sqrt();
        assert!((std / 3e-4 - 1.0).abs() < 0.05, "std={std}");
    }
}
