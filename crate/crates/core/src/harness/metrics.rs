//! Run metrics. They are computed twice: online by the engine while the
//! mission runs, and offline from a finished trace. Both must agree exactly.

use serde::Serialize;

use crate::pat::SessionPhase;
use crate::trace::{quantize, SlotRecord};

pub const HIST_BINS: usize = 100;
pub const HIST_MIN_RAD: f64 = 1e-6;
pub const HIST_MAX_RAD: f64 = 1e-1;
const HIST_DECADES: f64 = 5.0;

/// Log-spaced pointing-error histogram with explicit under/overflow bins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorHistogram {
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
}

impl Default for ErrorHistogram {
    fn default() -> Self {
        Self {
            counts: vec![0; HIST_BINS],
            underflow: 0,
            overflow: 0,
        }
    }
}

impl ErrorHistogram {
    pub fn edge(i: usize) -> f64 {
        HIST_MIN_RAD * 10f64.powf(HIST_DECADES * i as f64 / HIST_BINS as f64)
    }

    pub fn add(&mut self, x: f64) {
        if x < HIST_MIN_RAD {
            self.underflow += 1;
        } else if x >= HIST_MAX_RAD {
            self.overflow += 1;
        } else {
            let pos = (x / HIST_MIN_RAD).log10() / HIST_DECADES * HIST_BINS as f64;
            self.counts[(pos as usize).min(HIST_BINS - 1)] += 1;
        }
    }

    pub fn total(&self) -> u64 {
        self.underflow + self.overflow + self.counts.iter().sum::<u64>()
    }

    pub fn merge(&mut self, other: &ErrorHistogram) {
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// Quantile with log-linear interpolation inside the bin. Underflow
    /// samples are treated as zero and overflow samples as the upper edge.
    pub fn quantile(&self, q: f64) -> Option<f64> {
        let total = self.total();
        if total == 0 {
            return None;
        }
        let target = q.clamp(0.0, 1.0) * total as f64;
        let mut cum = self.underflow as f64;
        if target <= cum && self.underflow > 0 {
            return Some(0.0);
        }
        for (i, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if cum + c as f64 >= target {
                let frac = ((target - cum) / c as f64).clamp(0.0, 1.0);
                let lo = Self::edge(i);
                let hi = Self::edge(i + 1);
                return Some(lo * (hi / lo).powf(frac));
            }
            cum += c as f64;
        }
        Some(HIST_MAX_RAD)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetrics {
    pub slots: u64,
    pub link_outage_count: u64,
    pub fine_tracking_outage_count: u64,
    pub acquisition_times_s: Vec<f64>,
    pub pointing_error: ErrorHistogram,
    pub connected_fraction: f64,
    pub fine_tracking_outage_fraction: f64,
    pub link_outage_fraction: f64,
    pub acquisition_fraction: f64,
    /// Slots spent in each phase, indexed by [`SessionPhase::index`].
    pub phase_slots: [u64; 5],
    /// Observed phase transitions between consecutive slots, `[from][to]`.
    pub transitions: [[u64; 5]; 5],
}

impl RunMetrics {
    pub fn mean_acquisition_time_s(&self) -> Option<f64> {
        mean(&self.acquisition_times_s)
    }

    pub fn err_quantile(&self, q: f64) -> Option<f64> {
        self.pointing_error.quantile(q)
    }
}

pub fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

/// Sample standard deviation; zero for fewer than two values.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs).unwrap_or(0.0);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Incremental metrics fed one record at a time by the mission loop.
#[derive(Debug, Clone)]
pub struct MetricsAccumulator {
    prev: Option<SessionPhase>,
    acquiring_since: Option<f64>,
    slots: u64,
    link_outages: u64,
    ft_outages: u64,
    acquisition_times_s: Vec<f64>,
    hist: ErrorHistogram,
    phase_slots: [u64; 5],
    transitions: [[u64; 5]; 5],
}

impl Default for MetricsAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl MetricsAccumulator {
    pub fn new() -> Self {
        Self {
            prev: None,
            acquiring_since: None,
            slots: 0,
            link_outages: 0,
            ft_outages: 0,
            acquisition_times_s: Vec::new(),
            hist: ErrorHistogram::default(),
            phase_slots: [0; 5],
            transitions: [[0; 5]; 5],
        }
    }

    /// Floats are rounded to CSV precision here, so raw and serialised
    /// records give the same metrics.
    pub fn push(&mut self, r: &SlotRecord) {
        let phase = r.phase;
        let t_s = quantize(r.t_s);
        let entered = self.prev != Some(phase);
        match phase {
            // The mission's implicit initial state is a link outage.
            SessionPhase::LinkOutage if entered && self.prev.is_some() => self.link_outages += 1,
            SessionPhase::FineTrackingOutage if entered => self.ft_outages += 1,
            SessionPhase::Olcp if entered && self.acquiring_since.is_none() => {
                self.acquiring_since = Some(t_s)
            }
            SessionPhase::WellConnected if entered => {
                if let Some(t0) = self.acquiring_since.take() {
                    self.acquisition_times_s.push(t_s - t0);
                }
            }
            _ => {}
        }
        if phase != SessionPhase::LinkOutage {
            self.hist.add(quantize(r.err_down_comm_rad));
        }
        if let Some(p) = self.prev {
            self.transitions[p.index()][phase.index()] += 1;
        }
        self.phase_slots[phase.index()] += 1;
        self.slots += 1;
        self.prev = Some(phase);
    }

    pub fn finish(self) -> RunMetrics {
        let n = self.slots.max(1) as f64;
        let frac = |p: SessionPhase| self.phase_slots[p.index()] as f64 / n;
        RunMetrics {
            slots: self.slots,
            link_outage_count: self.link_outages,
            fine_tracking_outage_count: self.ft_outages,
            acquisition_times_s: self.acquisition_times_s,
            pointing_error: self.hist,
            connected_fraction: frac(SessionPhase::WellConnected),
            fine_tracking_outage_fraction: frac(SessionPhase::FineTrackingOutage),
            link_outage_fraction: frac(SessionPhase::LinkOutage),
            acquisition_fraction: (self.phase_slots[SessionPhase::LinkRequest.index()]
                + self.phase_slots[SessionPhase::Olcp.index()])
                as f64
                / n,
            phase_slots: self.phase_slots,
            transitions: self.transitions,
        }
    }
}

/// Metrics recomputed from a complete trace, written as a separate pass over
/// the records rather than through [`MetricsAccumulator`].
pub fn compute_metrics(trace: &[SlotRecord]) -> RunMetrics {
    let phases: Vec<SessionPhase> = trace.iter().map(|r| r.phase).collect();
    let entries = |p: SessionPhase| -> Vec<usize> {
        (0..phases.len())
            .filter(|&k| phases[k] == p && (k == 0 || phases[k - 1] != p))
            .collect()
    };

    let link_outage_count = entries(SessionPhase::LinkOutage)
        .into_iter()
        .filter(|&k| k > 0)
        .count() as u64;
    let fine_tracking_outage_count = entries(SessionPhase::FineTrackingOutage).len() as u64;

    let olcp_entries = entries(SessionPhase::Olcp);
    let wc_entries = entries(SessionPhase::WellConnected);
    let mut acquisition_times_s = Vec::new();
    let mut after = 0usize;
    for &w in &wc_entries {
        // The first Olcp entry since the previous connection starts the attempt.
        if let Some(&o) = olcp_entries.iter().find(|&&o| o >= after && o < w) {
            acquisition_times_s.push(quantize(trace[w].t_s) - quantize(trace[o].t_s));
        }
        after = w;
    }

    let mut pointing_error = ErrorHistogram::default();
    let mut phase_slots = [0u64; 5];
    let mut transitions = [[0u64; 5]; 5];
    for (k, r) in trace.iter().enumerate() {
        if r.phase != SessionPhase::LinkOutage {
            pointing_error.add(quantize(r.err_down_comm_rad));
        }
        phase_slots[r.phase.index()] += 1;
        if k > 0 {
            transitions[phases[k - 1].index()][r.phase.index()] += 1;
        }
    }
    let n = trace.len().max(1) as f64;
    let count = |p: SessionPhase| phase_slots[p.index()];
    RunMetrics {
        slots: trace.len() as u64,
        link_outage_count,
        fine_tracking_outage_count,
        acquisition_times_s,
        pointing_error,
        connected_fraction: count(SessionPhase::WellConnected) as f64 / n,
        fine_tracking_outage_fraction: count(SessionPhase::FineTrackingOutage) as f64 / n,
        link_outage_fraction: count(SessionPhase::LinkOutage) as f64 / n,
        acquisition_fraction: (count(SessionPhase::LinkRequest) + count(SessionPhase::Olcp)) as f64
            / n,
        phase_slots,
        transitions,
    }
}
