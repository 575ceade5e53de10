//! Spiral scan over the position-uncertainty cone.
//!
//! Dwells are laid out ring by ring outward from the estimate. Each ring is
//! placed as far out as the spacing limits allow while still overlapping the
//! area already covered, so the union of dwell footprints is gap-free.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angle::Angle2;
use crate::error::{require, require_positive, Result};

/// Rotation between consecutive rings so dwell seams do not line up.
const RING_TWIST: f64 = 2.399_963_229_728_653;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPattern {
    pub dwells: Vec<Angle2>,
    /// Radius each dwell is guaranteed to cover.
    pub coverage_radius: f64,
    /// Radius of the disc the pattern covers (3 sigma).
    pub extent: f64,
}

impl ScanPattern {
    pub fn len(&self) -> usize {
        self.dwells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dwells.is_empty()
    }

    /// Index of the first dwell whose footprint contains `offset`.
    pub fn first_covering(&self, offset: Angle2) -> Option<usize> {
        let r2 = self.coverage_radius * self.coverage_radius;
        self.dwells
            .iter()
            .position(|d| (*d - offset).norm_sq() <= r2)
    }
}

#[derive(Debug, Clone, Copy)]
struct Ring {
    count: usize,
    radius: f64,
    outer: f64,
}

/// Best ring placement with `n` dwells given the covered radius `covered`
/// and previous ring radius `prev`.
fn place_ring(n: usize, r: f64, covered: f64, prev: f64) -> Option<Ring> {
    let s = (PI / n as f64).sin();
    let c = (PI / n as f64).cos();
    let disc = r * r - covered * covered * s * s;
    if disc < 0.0 {
        return None;
    }
    // Largest radius whose inner coverage edge still reaches `covered`.
    let inner_limit = covered * c + disc.sqrt();
    let radius = (r / (2.0 * s)).min(inner_limit).min(prev + r);
    let half = (r * r - radius * radius * s * s).max(0.0).sqrt();
    let outer = radius * c + half;
    if radius * c - half > covered * (1.0 + 1e-12) || outer <= covered * (1.0 + 1e-12) {
        return None;
    }
    Some(Ring {
        count: n,
        radius,
        outer,
    })
}

pub fn build_scan_pattern(
    uncertainty_sigma: f64,
    beacon_divergence_full: f64,
    overlap: f64,
) -> Result<ScanPattern> {
    require_positive(uncertainty_sigma, "uncertainty_sigma")?;
    require_positive(beacon_divergence_full, "beacon_divergence_rad")?;
    require(
        overlap.is_finite() && overlap > 0.0 && overlap <= 1.0,
        "scan_overlap",
        "must lie in (0, 1]",
    )?;
    let r = overlap * beacon_divergence_full / 2.0;
    let extent = 3.0 * uncertainty_sigma;
    if extent <= r {
        return Ok(ScanPattern {
            dwells: vec![Angle2::ZERO],
            coverage_radius: r,
            extent,
        });
    }

    // Rings are grown by a fixed rule that does not look at the extent. At
    // every stage we also price finishing immediately with the smallest ring
    // that reaches the extent, and keep the cheapest finish overall. This
    // makes the dwell count non-decreasing in the extent.
    let mut grown: Vec<Ring> = Vec::new();
    let mut used = 1usize;
    let mut covered = r;
    let mut prev = 0.0;
    let mut best: Option<(usize, usize, Ring)> = None;
    loop {
        let n_max = 8 + (4.0 * PI * (covered + r) / r).ceil() as usize;
        let mut grow: Option<(f64, Ring)> = None;
        let mut finish: Option<Ring> = None;
        for n in 3..=n_max {
            let Some(ring) = place_ring(n, r, covered, prev) else {
                continue;
            };
            if finish.is_none() && ring.outer >= extent {
                finish = Some(ring);
            }
            let gain = (ring.outer * ring.outer - covered * covered) / n as f64;
            if grow.as_ref().is_none_or(|(g, _)| gain > *g) {
                grow = Some((gain, ring));
            }
        }
        if let Some(f) = finish {
            let total = used + f.count;
            if best.as_ref().is_none_or(|(t, _, _)| total < *t) {
                best = Some((total, grown.len(), f));
            }
        }
        let (_, ring) = grow.expect("a ring with n_max dwells always extends coverage");
        if ring.outer >= extent
            || best
                .as_ref()
                .is_some_and(|(t, _, _)| used + ring.count >= *t)
        {
            break;
        }
        used += ring.count;
        covered = ring.outer;
        prev = ring.radius;
        grown.push(ring);
    }

    let (_, keep, last) = best.expect("the growing ring eventually reaches the extent");
    let mut dwells = vec![Angle2::ZERO];
    for (i, ring) in grown
        .iter()
        .take(keep)
        .chain(std::iter::once(&last))
        .enumerate()
    {
        let phase = i as f64 * RING_TWIST;
        for k in 0..ring.count {
            let theta = phase + 2.0 * PI * k as f64 / ring.count as f64;
            dwells.push(Angle2::polar(ring.radius, theta));
        }
    }

    Ok(ScanPattern {
        dwells,
        coverage_radius: r,
        extent,
    })
}
