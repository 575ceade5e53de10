use rayon::prelude::*;
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::pat::AlgorithmVariant;

use super::metrics::{mean, sample_std, ErrorHistogram, RunMetrics};
use super::mission::Mission;

/// What a comparison keeps from each mission.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub seed: u64,
    pub metrics: RunMetrics,
    pub max_ac_down_beacon_err_rad: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub variant: AlgorithmVariant,
    pub rho: f64,
    pub n_runs: usize,
    pub outages_mean: f64,
    pub outages_std: f64,
    /// Mean and spread of the per-run mean acquisition times; runs that never
    /// connected are left out.
    pub acq_time_mean_s: Option<f64>,
    pub acq_time_std_s: f64,
    pub err_p50_rad: Option<f64>,
    pub err_p95_rad: Option<f64>,
    pub connected_fraction_mean: f64,
    pub pointing_error: ErrorHistogram,
    pub per_run: PerRun,
    #[serde(skip)]
    pub runs: Vec<RunReport>,
}

/// Per-run values in seed order, so any two cells can be paired.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerRun {
    pub link_outages: Vec<u64>,
    pub acq_time_mean_s: Vec<Option<f64>>,
    pub err_p95_rad: Vec<Option<f64>>,
    pub connected_fraction: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonSummary {
    pub config: serde_json::Map<String, serde_json::Value>,
    pub seeds: Vec<u64>,
    pub cells: Vec<CellSummary>,
}

impl ComparisonSummary {
    pub fn cell(&self, variant: AlgorithmVariant, rho: f64) -> Option<&CellSummary> {
        self.cells
            .iter()
            .find(|c| c.variant == variant && c.rho == rho)
    }

    /// Summary of a single mission, in the same shape as a comparison.
    pub fn single(cfg: &ScenarioConfig, report: RunReport) -> Self {
        Self {
            config: config_echo(cfg),
            seeds: vec![report.seed],
            cells: vec![CellSummary::from_runs(cfg.variant, cfg.rho, vec![report])],
        }
    }
}

pub fn config_echo(cfg: &ScenarioConfig) -> serde_json::Map<String, serde_json::Value> {
    cfg.entries()
        .into_iter()
        .map(|(k, v)| (k.to_string(), serde_json::Value::String(v)))
        .collect()
}

impl CellSummary {
    pub fn from_runs(variant: AlgorithmVariant, rho: f64, runs: Vec<RunReport>) -> Self {
        let outages: Vec<f64> = runs
            .iter()
            .map(|r| r.metrics.link_outage_count as f64)
            .collect();
        let acq: Vec<Option<f64>> = runs
            .iter()
            .map(|r| r.metrics.mean_acquisition_time_s())
            .collect();
        let acq_present: Vec<f64> = acq.iter().flatten().copied().collect();
        let connected: Vec<f64> = runs.iter().map(|r| r.metrics.connected_fraction).collect();
        let mut pooled = ErrorHistogram::default();
        for r in &runs {
            pooled.merge(&r.metrics.pointing_error);
        }
        CellSummary {
            variant,
            rho,
            n_runs: runs.len(),
            outages_mean: mean(&outages).unwrap_or(0.0),
            outages_std: sample_std(&outages),
            acq_time_mean_s: mean(&acq_present),
            acq_time_std_s: sample_std(&acq_present),
            err_p50_rad: pooled.quantile(0.5),
            err_p95_rad: pooled.quantile(0.95),
            connected_fraction_mean: mean(&connected).unwrap_or(0.0),
            pointing_error: pooled,
            per_run: PerRun {
                link_outages: runs.iter().map(|r| r.metrics.link_outage_count).collect(),
                acq_time_mean_s: acq,
                err_p95_rad: runs.iter().map(|r| r.metrics.err_quantile(0.95)).collect(),
                connected_fraction: connected,
            },
            runs,
        }
    }
}

/// Runs every (variant, rho) cell with the same seeds `base.seed + i`.
/// Missions run in parallel on the current rayon pool; the result does not
/// depend on scheduling.
pub fn run_comparison(
    base: &ScenarioConfig,
    variants: &[AlgorithmVariant],
    rhos: &[f64],
    n_runs: usize,
) -> Result<ComparisonSummary> {
    if variants.is_empty() {
        return Err(Error::config(
            "variants",
            "at least one variant is required",
        ));
    }
    if rhos.is_empty() {
        return Err(Error::config("rho", "at least one value is required"));
    }
    if n_runs == 0 {
        return Err(Error::config("runs", "must be at least 1"));
    }
    base.validate()?;
    let mut missions = Vec::with_capacity(variants.len() * rhos.len());
    for &variant in variants {
        for &rho in rhos {
            let cfg = ScenarioConfig {
                variant,
                rho,
                ..base.clone()
            };
            missions.push((variant, rho, Mission::new(&cfg)?));
        }
    }
    let seeds: Vec<u64> = (0..n_runs as u64)
        .map(|i| base.seed.wrapping_add(i))
        .collect();

    let jobs: Vec<(usize, u64)> = (0..missions.len())
        .flat_map(|c| seeds.iter().map(move |&s| (c, s)))
        .collect();
    let mut reports: Vec<RunReport> = jobs
        .par_iter()
        .map(|&(c, seed)| {
            let out = missions[c].2.run(seed, false);
            RunReport {
                seed,
                metrics: out.metrics,
                max_ac_down_beacon_err_rad: out.max_ac_down_beacon_err_rad,
            }
        })
        .collect();

    let mut cells = Vec::with_capacity(missions.len());
    for (variant, rho, _) in missions.iter().rev() {
        let runs = reports.split_off(reports.len() - n_runs);
        cells.push(CellSummary::from_runs(*variant, *rho, runs));
    }
    cells.reverse();

    Ok(ComparisonSummary {
        config: config_echo(base),
        seeds,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::run_mission;

    fn short() -> ScenarioConfig {
        ScenarioConfig {
            mission_duration_s: 60.0,
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn empty_variant_list_is_config_error() {
        let e = run_comparison(&short(), &[], &[0.4], 1).unwrap_err();
        assert!(e.is_config());
    }

    #[test]
    fn single_run_matches_mission() {
        let base = ScenarioConfig {
            variant: AlgorithmVariant::Proposed,
            rho: 0.7,
            ..short()
        };
        let s = run_comparison(&base, &[AlgorithmVariant::Proposed], &[0.7], 1).unwrap();
        let (_, m) = run_mission(&base).unwrap();
        let c = &s.cells[0];
        assert_eq!(s.seeds, vec![base.seed]);
        assert_eq!(c.runs[0].metrics, m);
        assert_eq!(c.outages_mean, m.link_outage_count as f64);
        assert_eq!(c.outages_std, 0.0);
        assert_eq!(c.acq_time_mean_s, m.mean_acquisition_time_s());
        assert_eq!(c.err_p95_rad, m.err_quantile(0.95));
        assert_eq!(c.connected_fraction_mean, m.connected_fraction);
    }

    #[test]
    fn laser_variants_ignore_rho() {
        let vs = [AlgorithmVariant::Baseline, AlgorithmVariant::BaselineAoa];
        let s = run_comparison(&short(), &vs, &[0.4, 0.7], 3).unwrap();
        for v in vs {
            let a = s.cell(v, 0.4).unwrap();
            let b = s.cell(v, 0.7).unwrap();
            assert_eq!(a.runs, b.runs);
            assert_eq!(a.per_run, b.per_run);
        }
    }

    #[test]
    fn cells_are_ordered_and_paired() {
        let s = run_comparison(&short(), &AlgorithmVariant::ALL, &[0.4, 0.7], 2).unwrap();
        assert_eq!(s.cells.len(), 8);
        for (i, c) in s.cells.iter().enumerate() {
            assert_eq!(c.variant, AlgorithmVariant::ALL[i / 2]);
            assert_eq!(c.rho, [0.4, 0.7][i % 2]);
            let seeds: Vec<u64> = c.runs.iter().map(|r| r.seed).collect();
            assert_eq!(seeds, s.seeds);
        }
    }
}
