use serde::Serialize;

use crate::locality::RoundLedger;
use crate::palette::Color;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IterationRecord {
    pub uncolored_before: usize,
    pub uncolored_after: usize,
}

impl IterationRecord {
    pub fn colored(&self) -> usize {
        self.uncolored_before - self.uncolored_after
    }
}

/// JSON run summary. Field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub algorithm: String,
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub strategy: String,
    #[serde(rename = "T")]
    pub big_t: u64,
    /// `paper` or `explicit`.
    #[serde(rename = "T_mode")]
    pub t_mode: String,
    pub lambda: f64,
    /// `δ` from `1 + δ = λ log n / (log λ + log log n)`.
    pub delta_param: f64,
    pub seed: Option<u64>,
    pub colors_used: Color,
    #[serde(rename = "ell_G")]
    pub ell_g: u32,
    pub iterations: Vec<IterationRecord>,
    pub repair_executions: u64,
    /// `ln Φ` after every execution, starting with `q = 0`; greedy only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_trace: Option<Vec<f64>>,
    pub ledger: RoundLedger,
    pub failed: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
