//! JSON report emitted by the `cluster` subcommand and the metric block
//! shared with `eval`.

use serde::{Deserialize, Serialize};

/// Full run report. Field order is the serialization order; two runs with
/// identical inputs produce byte-identical reports except for `timing_ms`.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub labels: Vec<usize>,
    pub metrics: MetricBlock,
    pub config: ConfigEcho,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceRow>,
    pub timing_ms: u64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
pub struct MetricBlock {
    pub acc: Option<f64>,
    pub purity: Option<f64>,
    #[serde(rename = "mod")]
    pub modularity: Option<f64>,
    pub ari: Option<f64>,
    pub chi: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub input: String,
    pub returns: bool,
    pub k: usize,
    pub nu: f64,
    pub nu_source: String,
    pub rho: f64,
    pub mu: Option<f64>,
    pub eta: Option<f64>,
    pub inner_iters: usize,
    pub max_iter: usize,
    pub tol_primal: f64,
    pub tol_change: f64,
    pub init: String,
    pub seed: u64,
    pub truth: Option<String>,
    pub dot: Option<String>,
    pub threshold: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub objective: f64,
    pub primal_residual: f64,
}

/// `eval` output: the five metrics plus a reason string for every null.
#[derive(Debug, Serialize, Deserialize)]
pub struct EvalReport {
    pub metrics: MetricBlock,
    pub reasons: std::collections::BTreeMap<String, String>,
}
