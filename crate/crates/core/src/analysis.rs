//! Long-run behaviour: limit-cycle recurrence, equilibrium labels and parameter sweeps.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::solver::{simulate, HybridArc, SolverConfig, Termination, TrajectoryVerdict, Verdict, VerdictKind};
use crate::state::{HybridState, HybridTime, NetworkParams, PARAM_NAMES};

/// Largest accepted ratio of cycle residual to orbit extent.
pub const MAX_RELATIVE_DRIFT: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    /// Flow time of one revolution.
    pub period: f64,
    pub jumps_per_period: usize,
    /// Post-jump states over one period, starting at the first matched jump.
    pub waypoints: Vec<(HybridTime, HybridState)>,
    /// Largest sup-norm gap between matched post-jump states of consecutive periods.
    pub residual: f64,
}

/// Finds the earliest recurrence of post-jump states.
///
/// Post-jump states `a < b` match when their logic variables agree and their
/// concentrations are within `tol` (sup norm). The match only counts if the
/// whole period `a..=b` is replayed once more after `b` with the same logic
/// sequence and the same tolerance, and if flow time actually elapsed.
///
/// Orbits that shrink onto a point (as happens with zero-width hysteresis)
/// recur within any absolute tolerance once they are small enough, so the
/// period-to-period drift must also stay below [`MAX_RELATIVE_DRIFT`] of the
/// orbit's extent.
pub fn detect_cycle(arc: &HybridArc, tol: f64) -> Option<CycleReport> {
    if arc.termination == Termination::Equilibrium || !(tol > 0.0) {
        return None;
    }
    let posts: Vec<(HybridTime, HybridState)> = arc.jumps().map(|e| (e.time, e.post)).collect();
    let n = posts.len();
    if n < 4 {
        return None;
    }
    let gap = |a: &HybridState, b: &HybridState| {
        a.x()
            .iter()
            .zip(b.x())
            .map(|(u, v)| (u - v).abs())
            .fold(0.0_f64, f64::max)
    };

    for a in 0..n {
        for b in a + 2..n {
            let m = b - a;
            if b + m >= n {
                break;
            }
            if posts[b].0.t <= posts[a].0.t || posts[a].1.q() != posts[b].1.q() {
                continue;
            }
            let mut residual = 0.0_f64;
            let repeats = (0..=m).all(|k| {
                let (u, v) = (&posts[a + k].1, &posts[b + k].1);
                let d = gap(u, v);
                residual = residual.max(d);
                u.q() == v.q() && d <= tol
            });
            if repeats && residual <= MAX_RELATIVE_DRIFT * extent(&posts[a..=b]) {
                return Some(CycleReport {
                    period: posts[b].0.t - posts[a].0.t,
                    jumps_per_period: m,
                    waypoints: posts[a..b].to_vec(),
                    residual,
                });
            }
        }
    }
    None
}

/// Largest per-coordinate spread of the given states.
fn extent(states: &[(HybridTime, HybridState)]) -> f64 {
    (0..3)
        .map(|c| {
            let (lo, hi) = states.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, s)| {
                (lo.min(s.x()[c]), hi.max(s.x()[c]))
            });
            hi - lo
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquilibriumClass {
    /// `x* = (0, 0, 0)`.
    Extinction,
    /// `x* = (k1/g1, k2/g2, k3/g3)`.
    Saturation,
    Mixed,
}

impl fmt::Display for EquilibriumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn classify_equilibrium(verdict: &TrajectoryVerdict, p: &NetworkParams) -> Result<EquilibriumClass> {
    let limit = verdict.limit_point().ok_or(CoreError::NotAnEquilibrium)?;
    let saturated: [f64; 3] = std::array::from_fn(|c| p.growth(c) / p.decay(c));
    Ok(if limit == [0.0; 3] {
        EquilibriumClass::Extinction
    } else if limit == saturated {
        EquilibriumClass::Saturation
    } else {
        EquilibriumClass::Mixed
    })
}

/// One-line human summary, e.g. `Extinction equilibrium (0,0,0)`.
pub fn describe(verdict: &TrajectoryVerdict, p: &NetworkParams) -> String {
    match &verdict.outcome {
        Verdict::EquilibriumReached { limit, .. } => {
            let class = classify_equilibrium(verdict, p).expect("equilibrium verdict");
            format!("{class} equilibrium ({},{},{})", limit[0], limit[1], limit[2])
        }
        Verdict::LimitCycle(c) => format!(
            "LimitCycle period {:.6} ({} jumps per period, residual {:.1e})",
            c.period, c.jumps_per_period, c.residual
        ),
        Verdict::ZenoSuspected { at, state } => {
            let x = state.x();
            format!("ZenoSuspected at {at}, jumps accumulating near ({},{},{})", x[0], x[1], x[2])
        }
        Verdict::HorizonExhausted { at, state } => {
            let x = state.x();
            format!("HorizonExhausted at {at}, last state ({},{},{})", x[0], x[1], x[2])
        }
    }
}

/// A swept parameter: `steps` evenly spaced values from `start` to `stop`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    /// A [`NetworkParams`] field name, or `h` for all four half-widths.
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepAxis {
    pub fn new(name: &str, start: f64, stop: f64, steps: usize) -> Self {
        Self {
            name: name.to_string(),
            start,
            stop,
            steps,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.name != "h" && !PARAM_NAMES.contains(&self.name.as_str()) {
            return Err(CoreError::UnknownParameter(self.name.clone()));
        }
        if self.steps == 0 {
            return Err(CoreError::InvalidConfig(format!("axis `{}` has an empty range", self.name)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(CoreError::InvalidConfig(format!("axis `{}` bounds must be finite", self.name)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let span = self.stop - self.start;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| self.start + span * k as f64 / last)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    /// Axis values in axis order.
    pub values: Vec<f64>,
    pub kind: Option<VerdictKind>,
    pub equilibrium: Option<EquilibriumClass>,
    pub limit: Option<[f64; 3]>,
    pub period: Option<f64>,
    pub error: Option<String>,
}

impl SweepCell {
    /// `x*` for equilibria, `T` for cycles, the error text for failed cells.
    pub fn summary(&self) -> String {
        if let Some(e) = &self.error {
            return format!("error: {e}");
        }
        match (self.equilibrium, self.limit, self.period) {
            (Some(class), Some(x), _) => format!("{class} ({} {} {})", x[0], x[1], x[2]),
            (_, _, Some(t)) => format!("T={t:.6}"),
            _ => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub axes: Vec<SweepAxis>,
    /// Row-major: the first axis varies slowest.
    pub cells: Vec<SweepCell>,
}

fn run_cell(base: &NetworkParams, axes: &[SweepAxis], values: Vec<f64>, z0: &HybridState, cfg: &SolverConfig) -> SweepCell {
    let mut cell = SweepCell {
        values,
        kind: None,
        equilibrium: None,
        limit: None,
        period: None,
        error: None,
    };
    let mut p = *base;
    let outcome = axes
        .iter()
        .zip(&cell.values)
        .try_for_each(|(axis, v)| p.set(&axis.name, *v))
        .and_then(|_| simulate(z0, &p, cfg));
    match outcome {
        Ok(sim) => {
            cell.kind = Some(sim.verdict.kind());
            cell.limit = sim.verdict.limit_point();
            cell.equilibrium = classify_equilibrium(&sim.verdict, &p).ok();
            cell.period = sim.verdict.cycle().map(|c| c.period);
        }
        Err(e) => cell.error = Some(e.to_string()),
    }
    cell
}

/// Runs one simulation per grid cell, on `workers` threads.
///
/// The result does not depend on `workers`.
pub fn sweep(
    base: &NetworkParams,
    axes: &[SweepAxis],
    z0: &HybridState,
    cfg: &SolverConfig,
    workers: usize,
) -> Result<SweepGrid> {
    if axes.is_empty() {
        return Err(CoreError::InvalidConfig("sweep needs at least one axis".into()));
    }
    for axis in axes {
        axis.check()?;
    }
    cfg.check()?;

    let per_axis: Vec<Vec<f64>> = axes.iter().map(SweepAxis::values).collect();
    let total: usize = per_axis.iter().map(Vec::len).product();
    let coords = |mut idx: usize| -> Vec<f64> {
        let mut out = vec![0.0; per_axis.len()];
        for (a, vals) in per_axis.iter().enumerate().rev() {
            out[a] = vals[idx % vals.len()];
            idx /= vals.len();
        }
        out
    };

    let cells = if workers <= 1 {
        (0..total).map(|i| run_cell(base, axes, coords(i), z0, cfg)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CoreError::InvalidConfig(format!("worker pool: {e}")))?;
        pool.install(|| {
            (0..total)
                .into_par_iter()
                .map(|i| run_cell(base, axes, coords(i), z0, cfg))
                .collect()
        })
    };
    Ok(SweepGrid {
        axes: axes.to_vec(),
        cells,
    })
}
