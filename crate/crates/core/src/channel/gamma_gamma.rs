//! Unit-mean gamma-gamma irradiance fading.
//!
//! Independent samples are drawn as the product of two unit-mean gamma
//! variates. Correlated pairs (the CCR up/down paths) use a Gaussian copula on
//! each gamma factor: normal scores with correlation `rho` are mapped through
//! the gamma quantile function, which is tabulated once per sampler.

use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use crate::error::{require, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurbulenceParams {
    pub alpha: f64,
    pub beta: f64,
}

impl TurbulenceParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        require(
            alpha.is_finite() && alpha > 0.0,
            "gg_alpha",
            "must be finite and > 0",
        )?;
        require(
            beta.is_finite() && beta > 0.0,
            "gg_beta",
            "must be finite and > 0",
        )?;
        Ok(Self { alpha, beta })
    }

    pub fn scintillation_index(&self) -> f64 {
        1.0 / self.alpha + 1.0 / self.beta + 1.0 / (self.alpha * self.beta)
    }
}

/// Plane-wave large/small-scale parameters for a given Rytov variance.
pub fn gg_params_from_rytov(rytov_variance: f64) -> Result<TurbulenceParams> {
    require(
        rytov_variance.is_finite() && rytov_variance > 0.0,
        "rytov_variance",
        "must be finite and > 0",
    )?;
    let s2 = rytov_variance;
    let s125 = s2.powf(1.2);
    let ln_x = 0.49 * s2 / (1.0 + 1.11 * s125).powf(7.0 / 6.0);
    let ln_y = 0.51 * s2 / (1.0 + 0.69 * s125).powf(5.0 / 6.0);
    TurbulenceParams::new(1.0 / ln_x.exp_m1(), 1.0 / ln_y.exp_m1())
}

/// Independent unit-mean gamma-gamma sample.
pub fn sample_gg<R: Rng + ?Sized>(params: &TurbulenceParams, rng: &mut R) -> f64 {
    let x = Gamma::new(params.alpha, 1.0 / params.alpha)
        .expect("validated shape")
        .sample(rng);
    let y = Gamma::new(params.beta, 1.0 / params.beta)
        .expect("validated shape")
        .sample(rng);
    (x * y).max(f64::MIN_POSITIVE)
}

/// One correlated pair. Builds quantile tables on every call; hot loops should
/// hold a [`GammaGammaSampler`] instead.
pub fn sample_gg_correlated<R: Rng + ?Sized>(
    params: &TurbulenceParams,
    rho: f64,
    rng: &mut R,
) -> Result<(f64, f64)> {
    GammaGammaSampler::new(*params)?.sample_correlated(rho, rng)
}

#[derive(Debug, Clone)]
pub struct GammaGammaSampler {
    params: TurbulenceParams,
    alpha_dist: Gamma<f64>,
    beta_dist: Gamma<f64>,
    alpha_q: Arc<QuantileTable>,
    beta_q: Arc<QuantileTable>,
}

impl GammaGammaSampler {
    pub fn new(params: TurbulenceParams) -> Result<Self> {
        let params = TurbulenceParams::new(params.alpha, params.beta)?;
        let gamma = |k: f64| {
            Gamma::new(k, 1.0 / k).map_err(|e| Error::config("gg_alpha/gg_beta", e.to_string()))
        };
        Ok(Self {
            params,
            alpha_dist: gamma(params.alpha)?,
            beta_dist: gamma(params.beta)?,
            alpha_q: Arc::new(QuantileTable::build(params.alpha)),
            beta_q: Arc::new(QuantileTable::build(params.beta)),
        })
    }

    pub fn params(&self) -> TurbulenceParams {
        self.params
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = self.alpha_dist.sample(rng);
        let y = self.beta_dist.sample(rng);
        (x * y).max(f64::MIN_POSITIVE)
    }

    /// Pair of unit-mean samples whose gamma factors are coupled by a
    /// Gaussian copula with correlation `rho`.
    pub fn sample_correlated<R: Rng + ?Sized>(&self, rho: f64, rng: &mut R) -> Result<(f64, f64)> {
        require((-1.0..=1.0).contains(&rho), "rho", "must lie in [-1, 1]")?;
        let c = (1.0 - rho * rho).sqrt();
        let mut pair = |table: &QuantileTable| {
            let n1: f64 = rng.sample(StandardNormal);
            let n2: f64 = rng.sample(StandardNormal);
            (table.at(n1), table.at(rho * n1 + c * n2))
        };
        let (xa, xb) = pair(&self.alpha_q);
        let (ya, yb) = pair(&self.beta_q);
        Ok((
            (xa * ya).max(f64::MIN_POSITIVE),
            (xb * yb).max(f64::MIN_POSITIVE),
        ))
    }
}

const Z_MAX: f64 = 8.5;
const TABLE_NODES: usize = 2049;

/// Quantile function of Gamma(k, 1/k) indexed by standard normal score,
/// stored as ln(x) on a uniform z grid.
#[derive(Debug, Clone)]
struct QuantileTable {
    dz: f64,
    ln_x: Vec<f64>,
}

impl QuantileTable {
    fn build(shape: f64) -> Self {
        let dz = 2.0 * Z_MAX / (TABLE_NODES - 1) as f64;
        let ln_x = (0..TABLE_NODES)
            .map(|i| gamma_quantile_from_z(shape, -Z_MAX + i as f64 * dz).ln())
            .collect();
        Self { dz, ln_x }
    }

    fn at(&self, z: f64) -> f64 {
        let pos = ((z + Z_MAX) / self.dz).clamp(0.0, (TABLE_NODES - 1) as f64);
        let i = (pos as usize).min(TABLE_NODES - 2);
        let f = pos - i as f64;
        (self.ln_x[i] * (1.0 - f) + self.ln_x[i + 1] * f).exp()
    }
}

/// Lower-tail CDF of Gamma(k, 1/k).
#[cfg(test)]
pub(crate) fn unit_gamma_cdf(shape: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        gamma_lr(shape, shape * x)
    }
}

fn unit_gamma_ln_pdf(shape: f64, x: f64) -> f64 {
    shape * shape.ln() + (shape - 1.0) * x.ln() - shape * x - ln_gamma(shape)
}

/// x such that P(X <= x) = Phi(z) for X ~ Gamma(k, 1/k). The tail nearest to
/// z is solved directly so extreme scores keep full relative precision.
fn gamma_quantile_from_z(shape: f64, z: f64) -> f64 {
    let lower = z < 0.0;
    // Target probability of the tail being solved.
    let target = 0.5 * erfc(z.abs() / std::f64::consts::SQRT_2);
    let ln_target = target.ln();
    let tail = |x: f64| {
        if lower {
            gamma_lr(shape, shape * x)
        } else {
            gamma_ur(shape, shape * x)
        }
    };

    // Wilson-Hilferty start, falling back to the small-x series.
    let c = 1.0 / (9.0 * shape);
    let wh = 1.0 - c + z * c.sqrt();
    let mut t = if wh > 0.05 {
        3.0 * wh.ln()
    } else {
        let p = 0.5 * erfc(-z / std::f64::consts::SQRT_2);
        ((p.ln() + ln_gamma(shape + 1.0)) / shape) - shape.ln()
    };
    let (mut lo, mut hi) = (-745.0_f64, 12.0_f64);
    t = t.clamp(lo + 1.0, hi - 1.0);

    for _ in 0..200 {
        let x = t.exp();
        let p = tail(x);
        // g(t) = ln(tail) - ln(target); increasing in t for the lower tail.
        let g = if p > 0.0 {
            p.ln() - ln_target
        } else {
            f64::NEG_INFINITY
        };
        let increasing_root_side = if lower { g > 0.0 } else { g < 0.0 };
        if increasing_root_side {
            hi = hi.min(t);
        } else {
            lo = lo.max(t);
        }
        let dlnp = (unit_gamma_ln_pdf(shape, x) + t - p.max(f64::MIN_POSITIVE).ln()).exp();
        let slope = if lower { dlnp } else { -dlnp };
        let mut next = t - g / slope;
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() < 1e-13 * (1.0 + t.abs()) {
            t = next;
            break;
        }
        t = next;
    }
    t.exp()
}
