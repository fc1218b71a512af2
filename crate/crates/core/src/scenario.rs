//! Scenario files: parameters, initial condition, solver settings, outputs and
//! an optional sweep block, stored as versioned TOML.

use serde::{Deserialize, Serialize};

use crate::analysis::SweepAxis;
use crate::error::{CoreError, Result};
use crate::solver::SolverConfig;
use crate::state::{HybridState, Logic, NetworkParams, Severity};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialCondition {
    pub x: [f64; 3],
    pub q: [u8; 4],
}

impl InitialCondition {
    pub fn to_state(&self) -> Result<HybridState> {
        if let Some(b) = self.q.iter().find(|b| **b > 1) {
            return Err(CoreError::InvalidState(format!("logic variables must be 0 or 1, got {b}")));
        }
        let [a, b, c, d] = self.q;
        HybridState::new(self.x, Logic::from_bits(a, b, c, d))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputOptions {
    /// Grid spacing of the dense time-series export.
    pub sample_spacing: f64,
    /// Output directory; the CLI falls back to `out/<name>`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    /// Emit SVG phase portrait and time-series plots.
    pub plot: bool,
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self {
            sample_spacing: 0.01,
            dir: None,
            plot: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default = "default_workers")]
    pub workers: usize,
    pub axes: Vec<SweepAxis>,
}

fn default_workers() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub params: NetworkParams,
    pub initial: InitialCondition,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

impl ScenarioConfig {
    /// Parses TOML and checks the schema version. Does not validate values.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| CoreError::Parse(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CoreError::Parse(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config serializes")
    }

    /// All nested validity rules. Parameter warnings are returned, not raised.
    pub fn validate(&self) -> Result<Vec<String>> {
        self.params.check()?;
        self.initial.to_state()?;
        self.solver.check()?;
        if !(self.output.sample_spacing > 0.0 && self.output.sample_spacing.is_finite()) {
            return Err(CoreError::InvalidConfig(format!(
                "output.sample_spacing must be positive, got {}",
                self.output.sample_spacing
            )));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.axes.is_empty() {
                return Err(CoreError::InvalidConfig("sweep.axes is empty".into()));
            }
            for axis in &sweep.axes {
                axis.check()?;
            }
        }
        Ok(self
            .params
            .validate()
            .into_iter()
            .filter(|i| i.severity == Severity::Warning)
            .map(|i| i.to_string())
            .collect())
    }

    pub fn initial_state(&self) -> Result<HybridState> {
        self.initial.to_state()
    }
}

/// Figure presets bundled with the crate, keyed by short id.
pub const PRESETS: [(&str, &str); 4] = [
    ("s1", include_str!("../../../presets/fig-s1.toml")),
    ("s3", include_str!("../../../presets/fig-s3.toml")),
    ("s5", include_str!("../../../presets/fig-s5.toml")),
    ("s7", include_str!("../../../presets/fig-s7.toml")),
];

/// Loads a bundled preset by id (`s1`, `s3`, `s5`, `s7`; `fig-` prefix optional).
pub fn preset(id: &str) -> Result<ScenarioConfig> {
    let key = id.strip_prefix("fig-").unwrap_or(id);
    let (_, text) = PRESETS
        .iter()
        .find(|(k, _)| *k == key)
        .ok_or_else(|| CoreError::UnknownPreset(id.to_string()))?;
    ScenarioConfig::from_toml(text)
}
