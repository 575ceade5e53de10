use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmVariant {
    Baseline,
    BaselineAoa,
    BaselineCcr,
    Proposed,
}

impl AlgorithmVariant {
    pub const ALL: [AlgorithmVariant; 4] = [
        AlgorithmVariant::Baseline,
        AlgorithmVariant::BaselineAoa,
        AlgorithmVariant::BaselineCcr,
        AlgorithmVariant::Proposed,
    ];

    /// Fuses the RF angle-of-arrival estimate with GNSS before scanning.
    pub fn uses_aoa(self) -> bool {
        matches!(
            self,
            AlgorithmVariant::BaselineAoa | AlgorithmVariant::Proposed
        )
    }

    /// Replaces the aircraft beacon laser with the retroreflector array.
    pub fn uses_ccr(self) -> bool {
        matches!(
            self,
            AlgorithmVariant::BaselineCcr | AlgorithmVariant::Proposed
        )
    }

    pub fn token(self) -> &'static str {
        match self {
            AlgorithmVariant::Baseline => "baseline",
            AlgorithmVariant::BaselineAoa => "baseline_aoa",
            AlgorithmVariant::BaselineCcr => "baseline_ccr",
            AlgorithmVariant::Proposed => "proposed",
        }
    }
}

impl fmt::Display for AlgorithmVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for AlgorithmVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgorithmVariant::ALL
            .into_iter()
            .find(|v| v.token() == s.trim())
            .ok_or_else(|| {
                format!("unknown variant `{s}` (expected baseline, baseline_aoa, baseline_ccr or proposed)")
            })
    }
}
