//! Browser bindings: run a preset with edited parameters, and sweep the
//! hysteresis half-width. Results cross the boundary as JSON strings.

use hyswitch_core::export::dense_samples;
use hyswitch_core::{describe, preset, simulate, sweep, ScenarioConfig, SweepAxis, PRESETS};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Samples drawn per run; the spacing is derived from the horizon.
const TARGET_POINTS: f64 = 4000.0;

#[derive(Serialize)]
struct RunOutput {
    summary: String,
    kind: String,
    period: Option<f64>,
    jumps: usize,
    /// `[t, x1, x2, x3]` rows, including both sides of every jump.
    samples: Vec<[f64; 4]>,
}

#[derive(Serialize)]
struct SweepRow {
    h: f64,
    kind: String,
    summary: String,
}

/// Scenario TOML of a bundled preset, for the page's editor.
pub fn preset_toml(id: &str) -> Result<String, String> {
    preset(id).map(|c| c.to_toml()).map_err(|e| e.to_string())
}

pub fn preset_ids() -> Vec<String> {
    PRESETS.iter().map(|(id, _)| id.to_string()).collect()
}

fn parse(config: &str) -> Result<ScenarioConfig, String> {
    let cfg = ScenarioConfig::from_toml(config).map_err(|e| e.to_string())?;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

/// Runs `config` with the uniform half-width `h` and the given `t_max`.
pub fn run_json(config: &str, h: f64, t_max: f64) -> Result<String, String> {
    let mut cfg = parse(config)?;
    cfg.params = cfg.params.with_uniform_half_width(h);
    cfg.solver.t_max = t_max;
    cfg.validate().map_err(|e| e.to_string())?;
    let sim = simulate(&cfg.initial_state().map_err(|e| e.to_string())?, &cfg.params, &cfg.solver)
        .map_err(|e| e.to_string())?;
    let rows = dense_samples(&sim.arc, t_max / TARGET_POINTS);
    let out = RunOutput {
        summary: describe(&sim.verdict, &cfg.params),
        kind: sim.verdict.kind().to_string(),
        period: sim.verdict.cycle().map(|c| c.period),
        jumps: sim.arc.jump_count(),
        samples: rows.iter().map(|r| [r.t, r.x1, r.x2, r.x3]).collect(),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Verdict per half-width value on `steps` points of `[start, stop]`.
pub fn sweep_h_json(config: &str, start: f64, stop: f64, steps: usize) -> Result<String, String> {
    let cfg = parse(config)?;
    let axes = [SweepAxis::new("h", start, stop, steps)];
    let z0 = cfg.initial_state().map_err(|e| e.to_string())?;
    let grid = sweep(&cfg.params, &axes, &z0, &cfg.solver, 1).map_err(|e| e.to_string())?;
    let rows: Vec<SweepRow> = grid
        .cells
        .iter()
        .map(|c| SweepRow {
            h: c.values[0],
            kind: c.kind.map_or("error".into(), |k| k.to_string()),
            summary: c.summary(),
        })
        .collect();
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = presetIds)]
pub fn js_preset_ids() -> Vec<String> {
    preset_ids()
}

#[wasm_bindgen(js_name = presetToml)]
pub fn js_preset_toml(id: &str) -> Result<String, JsError> {
    preset_toml(id).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = runScenario)]
pub fn js_run(config: &str, h: f64, t_max: f64) -> Result<String, JsError> {
    run_json(config, h, t_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sweepHalfWidth)]
pub fn js_sweep_h(config: &str, start: f64, stop: f64, steps: usize) -> Result<String, JsError> {
    sweep_h_json(config, start, stop, steps).map_err(|e| JsError::new(&e))
}
