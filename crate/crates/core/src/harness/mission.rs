use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::pat::{Session, SessionContext, SlotOverrides};
use crate::streams::StreamSet;
use crate::trace::SlotRecord;

use super::metrics::{MetricsAccumulator, RunMetrics};

#[derive(Debug, Clone)]
pub struct MissionOutput {
    /// Empty when the trace was not requested.
    pub trace: Vec<SlotRecord>,
    pub metrics: RunMetrics,
    /// Largest aircraft contribution to the downlink beacon pointing error over the run.
    pub max_ac_down_beacon_err_rad: f64,
}

/// A validated scenario ready to be run for any number of seeds.
#[derive(Debug, Clone)]
pub struct Mission {
    ctx: SessionContext,
    slots: u64,
}

impl Mission {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        Ok(Self {
            ctx: SessionContext::new(cfg)?,
            slots: cfg.slot_count(),
        })
    }

    pub fn context(&self) -> &SessionContext {
        &self.ctx
    }

    pub fn slots(&self) -> u64 {
        self.slots
    }

    pub fn run(&self, seed: u64, keep_trace: bool) -> MissionOutput {
        let streams = StreamSet::new(seed);
        let mut session = Session::new();
        let mut acc = MetricsAccumulator::new();
        let mut trace = Vec::with_capacity(if keep_trace { self.slots as usize } else { 0 });
        let mut max_ac = 0.0f64;
        let no_overrides = SlotOverrides::default();
        for slot in 0..self.slots {
            let rec = session.advance(&self.ctx, &streams, slot, &no_overrides);
            max_ac = max_ac.max(rec.ac_down_beacon_err_rad);
            if keep_trace {
                let rec = rec.quantized();
                acc.push(&rec);
                trace.push(rec);
            } else {
                acc.push(&rec);
            }
        }
        MissionOutput {
            trace,
            metrics: acc.finish(),
            max_ac_down_beacon_err_rad: max_ac,
        }
    }
}

/// Simulate one mission with the config's own seed.
pub fn run_mission(cfg: &ScenarioConfig) -> Result<(Vec<SlotRecord>, RunMetrics)> {
    let out = Mission::new(cfg)?.run(cfg.seed, true);
    Ok((out.trace, out.metrics))
}
