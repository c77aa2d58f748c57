use std::collections::BTreeMap;

use gsk::optimize::RestartTrace;
use gsk::KernelConfig;
use serde::{Deserialize, Serialize};

/// Everything needed to rerun a command and check its outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    /// resolved flags and optimizer settings
    pub config: serde_json::Value,
    pub seed: u64,
    pub metrics: BTreeMap<String, f64>,
    #[serde(default)]
    pub restarts: Vec<RestartTrace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelConfig>,
    pub wall_time_secs: f64,
    pub outputs: Vec<String>,
}

/// Fitted GP written by `gp-fit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u32,
    pub kernel: KernelConfig,
    /// training mean removed by `--center`, added back to predictions
    pub y_offset: f64,
    pub training: TrainingData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingData {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
}
