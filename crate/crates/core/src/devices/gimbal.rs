use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::angle::Angle2;
use crate::error::{require_non_negative, Result};

/// Coarse pointing mechanism. Open-loop pointing relies on position knowledge
/// only; closed-loop corrections act on a sensor measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GimbalSpec {
    pub open_loop_sigma_rad: f64,
    pub closed_loop_sigma_rad: f64,
}

impl GimbalSpec {
    pub fn validate(&self) -> Result<()> {
        require_non_negative(self.open_loop_sigma_rad, "gimbal_open_loop_sigma_rad")?;
        require_non_negative(self.closed_loop_sigma_rad, "gimbal_closed_loop_sigma_rad")
    }
}

/// Achieved pointing direction when commanded to `target`.
pub fn gimbal_open_loop_point<R: Rng + ?Sized>(
    target: Angle2,
    spec: &GimbalSpec,
    rng: &mut R,
) -> Angle2 {
    target + Angle2::gaussian(spec.open_loop_sigma_rad, rng)
}

/// Applied correction when nulling a measured offset.
pub fn gimbal_closed_loop_correct<R: Rng + ?Sized>(
    measured: Angle2,
    spec: &GimbalSpec,
    rng: &mut R,
) -> Angle2 {
    -measured + Angle2::gaussian(spec.closed_loop_sigma_rad, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn noiseless_gimbal_is_exact() {
        let spec = GimbalSpec {
            open_loop_sigma_rad: 0.0,
            closed_loop_sigma_rad: 0.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let t = Angle2::new(1e-3, -2e-3);
        assert_eq!(gimbal_open_loop_point(t, &spec, &mut rng), t);
        assert_eq!(gimbal_closed_loop_correct(t, &spec, &mut rng), -t);
    }

    #[test]
    fn residual_spread_matches_sigma() {
        let spec = GimbalSpec {
            open_loop_sigma_rad: 3e-3,
            closed_loop_sigma_rad: 3e-4,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 20_000;
        let (mut so, mut sc) = (0.0, 0.0);
        for _ in 0..n {
            so += gimbal_open_loop_point(Angle2::ZERO, &spec, &mut rng).norm_sq();
            sc += gimbal_closed_loop_correct(Angle2::ZERO, &spec, &mut rng).norm_sq();
        }
        // E|n|^2 = 2 sigma^2 for an isotropic 2D Gaussian.
        assert!(((so / n as f64 / 2.0).sqrt() / 3e-3 - 1.0).abs() < 0.03);
        assert!(((sc / n as f64 / 2.0).sqrt() / 3e-4 - 1.0).abs() < 0.03);
    }
}
