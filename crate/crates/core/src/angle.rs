//! Two-axis small-angle offsets (azimuth, elevation) in radians.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Angle2 {
    pub az: f64,
    pub el: f64,
}

impl Angle2 {
    pub const ZERO: Angle2 = Angle2 { az: 0.0, el: 0.0 };

    pub const fn new(az: f64, el: f64) -> Self {
        Self { az, el }
    }

    pub fn polar(radius: f64, theta: f64) -> Self {
        Self::new(radius * theta.cos(), radius * theta.sin())
    }

    pub fn norm(self) -> f64 {
        self.az.hypot(self.el)
    }

    pub fn norm_sq(self) -> f64 {
        self.az * self.az + self.el * self.el
    }

    /// Scale the vector down so its norm does not exceed `max`.
    pub fn clamp_norm(self, max: f64) -> Self {
        let n = self.norm();
        if n > max && n > 0.0 {
            self * (max / n)
        } else {
            self
        }
    }

    /// Isotropic Gaussian offset with per-axis standard deviation `sigma`.
    pub fn gaussian<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> Self {
        let az: f64 = rng.sample(StandardNormal);
        let el: f64 = rng.sample(StandardNormal);
        Self::new(sigma * az, sigma * el)
    }

    pub fn is_finite(self) -> bool {
        self.az.is_finite() && self.el.is_finite()
    }
}

impl Add for Angle2 {
    type Output = Angle2;
    fn add(self, rhs: Angle2) -> Angle2 {
        Angle2::new(self.az + rhs.az, self.el + rhs.el)
    }
}

impl Sub for Angle2 {
    type Output = Angle2;
    fn sub(self, rhs: Angle2) -> Angle2 {
        Angle2::new(self.az - rhs.az, self.el - rhs.el)
    }
}

impl Neg for Angle2 {
    type Output = Angle2;
    fn neg(self) -> Angle2 {
        Angle2::new(-self.az, -self.el)
    }
}

impl Mul<f64> for Angle2 {
    type Output = Angle2;
    fn mul(self, k: f64) -> Angle2 {
        Angle2::new(self.az * k, self.el * k)
    }
}

impl AddAssign for Angle2 {
    fn add_assign(&mut self, rhs: Angle2) {
        *self = *self + rhs;
    }
}

impl SubAssign for Angle2 {
    fn sub_assign(&mut self, rhs: Angle2) {
        *self = *self - rhs;
    }
}
