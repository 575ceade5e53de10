//! Mission runner, metrics and paired multi-run comparisons.

pub mod comparison;
pub mod metrics;
pub mod mission;
pub mod stats;

pub use comparison::{config_echo, run_comparison, CellSummary, ComparisonSummary, RunReport};
pub use metrics::{compute_metrics, ErrorHistogram, RunMetrics};
pub use mission::{run_mission, Mission, MissionOutput};
pub use stats::{sign_test, SignTest};
