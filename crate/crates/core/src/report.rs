//! Run configuration and the JSON envelope shared by every report.

use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::TOLERANCE;
use crate::oracle::DEFAULT_SWEEP_BUDGET;
use crate::regions::{DEFAULT_I_MAX, DEFAULT_J_CAP};

pub const SCHEMA_VERSION: &str = "crossint/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub tolerance: f64,
    pub j_cap: usize,
    pub i_max: usize,
    pub sweep_budget: u64,
    pub output: OutputFormat,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerance: TOLERANCE,
            j_cap: DEFAULT_J_CAP,
            i_max: DEFAULT_I_MAX,
            sweep_budget: DEFAULT_SWEEP_BUDGET,
            output: OutputFormat::Json,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.j_cap == 0 || self.i_max < 2 || self.sweep_budget == 0 || self.tolerance <= 0.0 {
            return Err(crate::Error::InvalidArgument(
                "configuration caps must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Wraps a payload with the schema tag and the configuration that produced it.
pub fn envelope(command: &str, config: &RunConfig, payload: Value) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "report": payload,
    })
}
