//! Result type shared by the transfer protocols, and the window-convergence driver.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::pulses::{doubled, WindowPlan, MAX_WINDOW_DOUBLINGS, WINDOW_SETTLE_LOG10};

/// `1 − population` cannot be resolved below this in double precision;
/// `log10_p` is clamped here rather than returning `-inf` or NaN.
pub const P_FLOOR: f64 = 1e-16;

pub fn log10_failure(p: f64) -> f64 {
    p.max(P_FLOOR).log10()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferResult {
    pub system: String,
    pub p: f64,
    pub log10_p: f64,
    /// Final populations (or squared amplitudes) keyed by basis label.
    pub populations: BTreeMap<String, f64>,
    /// Final minus initial trace (density models) or squared norm (amplitude models).
    pub trace_drift: f64,
    /// Model-specific scalars such as peak excited-state population.
    #[serde(flatten)]
    pub diagnostics: BTreeMap<String, f64>,
    pub window: [f64; 2],
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<Sample>,
}

impl TransferResult {
    pub fn diagnostic(&self, key: &str) -> Option<f64> {
        self.diagnostics.get(key).copied()
    }
}

pub(crate) fn label_map(labels: &[&str], values: impl IntoIterator<Item = f64>) -> BTreeMap<String, f64> {
    labels.iter().map(|s| s.to_string()).zip(values).collect()
}

/// Runs `run` on the planned window. For doubling plans the half-width is
/// doubled until `log10_p` moves by less than the settle threshold; the last
/// change is reported as the `window_doubling_delta` diagnostic.
pub fn run_windowed<F>(plan: WindowPlan, mut run: F) -> Result<TransferResult>
where
    F: FnMut((f64, f64)) -> Result<TransferResult>,
{
    let (mut window, doubling) = match plan {
        WindowPlan::Fixed(a, b) => ((a, b), false),
        WindowPlan::Doubling(a, b) => ((a, b), true),
    };
    let mut prev = run(window)?;
    if !doubling {
        return Ok(prev);
    }
    for _ in 0..MAX_WINDOW_DOUBLINGS {
        window = doubled(window);
        let mut next = run(window)?;
        let delta = (next.log10_p - prev.log10_p).abs();
        next.diagnostics.insert("window_doubling_delta".into(), delta);
        if delta < WINDOW_SETTLE_LOG10 {
            return Ok(next);
        }
        prev = next;
    }
    prev.warnings.push(format!("log10_p still moving after {MAX_WINDOW_DOUBLINGS} window doublings"));
    Ok(prev)
}
