//! Event-driven solver producing hybrid arcs, plus a forward-Euler reference.
//!
//! Within a mode every coordinate follows `x(t) = target + (x0 - target) e^{-rate t}`,
//! so the next switching instant is found in closed form and no step-size
//! control is needed. Jumps take priority over flow whenever the state is in `D`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{detect_cycle, CycleReport};
use crate::dynamics::{
    armed_edge, flow_map, in_jump_set, jump_map, jump_set_membership, mode_target, resolve_jump,
    watched, JumpPolicy, JumpSet, ModeDescriptor,
};
use crate::error::{CoreError, Result};
use crate::state::{HybridState, HybridTime, Logic, NetworkParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub t_max: f64,
    pub j_max: usize,
    /// Zeno window: this many jumps ...
    pub zeno_jumps: usize,
    /// ... within this much flow time.
    pub zeno_time: f64,
    pub policy: JumpPolicy,
    pub seed: u64,
    /// Recurrence tolerance used to upgrade horizon-exhausted runs to limit cycles.
    pub cycle_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            t_max: 100.0,
            j_max: 10_000,
            zeno_jumps: 50,
            zeno_time: 1e-9,
            policy: JumpPolicy::LowestIndex,
            seed: 0,
            cycle_tol: 1e-6,
        }
    }
}

impl SolverConfig {
    pub fn check(&self) -> Result<()> {
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(CoreError::InvalidConfig(format!("t_max must be positive, got {}", self.t_max)));
        }
        if self.j_max < 1 {
            return Err(CoreError::InvalidConfig("j_max must be at least 1".into()));
        }
        if self.zeno_jumps < 2 || !(self.zeno_time > 0.0) {
            return Err(CoreError::InvalidConfig(
                "zeno window needs at least 2 jumps and a positive time span".into(),
            ));
        }
        if !(self.cycle_tol > 0.0) {
            return Err(CoreError::InvalidConfig("cycle_tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub dt: f64,
    /// 0 = accept the post-step state, 1 = localize crossings by linear interpolation.
    pub interpolation: u8,
    /// Spacing of the recorded sample grid.
    pub sample_spacing: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            dt: 1e-4,
            interpolation: 1,
            sample_spacing: 0.01,
        }
    }
}

/// The jump that closed a segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpRecord {
    /// The flipped logic variable.
    pub index: usize,
    /// Every `D_i` active at the jump instant.
    pub active: JumpSet,
}

/// One interval of flow (possibly of zero length) in a fixed mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: HybridTime,
    pub end: HybridTime,
    pub start_state: HybridState,
    /// State at `end`, before the closing jump. Switching coordinates are
    /// snapped exactly onto their edge.
    pub end_state: HybridState,
    pub mode: ModeDescriptor,
    pub jump: Option<JumpRecord>,
}

impl Segment {
    pub fn duration(&self) -> f64 {
        self.end.t - self.start.t
    }

    /// State at absolute time `t` inside the segment.
    pub fn state_at(&self, t: f64) -> HybridState {
        if t >= self.end.t {
            return self.end_state;
        }
        let dt = (t - self.start.t).max(0.0);
        self.start_state.with_x(self.mode.advance(self.start_state.x(), dt))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// No further switching: the flow relaxes to the mode target forever.
    Equilibrium,
    /// Flow time reached `t_max`.
    Horizon,
    /// `j_max` jumps were spent.
    JumpBudget,
}

/// A jump as seen from outside: where it happened and what it flipped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    /// `(t, j)` after the jump.
    pub time: HybridTime,
    pub index: usize,
    pub active: JumpSet,
    pub pre: HybridState,
    pub post: HybridState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridArc {
    pub segments: Vec<Segment>,
    pub final_state: HybridState,
    pub termination: Termination,
}

impl HybridArc {
    pub fn initial_state(&self) -> HybridState {
        self.segments[0].start_state
    }

    pub fn end_time(&self) -> HybridTime {
        let last = self.segments.last().expect("arc has at least one segment");
        HybridTime::new(last.end.t, last.end.j + usize::from(last.jump.is_some()))
    }

    pub fn jump_count(&self) -> usize {
        self.segments.iter().filter(|s| s.jump.is_some()).count()
    }

    pub fn jumps(&self) -> impl Iterator<Item = JumpEvent> + '_ {
        self.segments.iter().enumerate().filter_map(move |(n, s)| {
            s.jump.map(|rec| JumpEvent {
                time: HybridTime::new(s.end.t, s.end.j + 1),
                index: rec.index,
                active: rec.active,
                pre: s.end_state,
                post: self
                    .segments
                    .get(n + 1)
                    .map_or(self.final_state, |next| next.start_state),
            })
        })
    }

    /// Jumps per `D_i`, indexed `0..4` for `i = 1..=4`.
    pub fn jump_counts(&self) -> [usize; 4] {
        let mut counts = [0; 4];
        for ev in self.jumps() {
            counts[ev.index - 1] += 1;
        }
        counts
    }

    /// State at flow time `t`; at a jump instant the post-jump state is returned.
    pub fn sample(&self, t: f64) -> Option<HybridState> {
        let first = self.segments.first()?;
        let end = self.segments.last()?.end.t;
        if t < first.start.t || t > end {
            return None;
        }
        let n = self.segments.partition_point(|s| s.start.t <= t);
        let seg = &self.segments[n.saturating_sub(1)];
        if seg.jump.is_some() && t >= seg.end.t {
            return Some(self.segments.get(n).map_or(self.final_state, |s| s.start_state));
        }
        Some(seg.state_at(t))
    }

    /// Checks the arc's structural invariants. Returns a description of the first violation.
    pub fn check_contiguity(&self) -> std::result::Result<(), String> {
        for (n, w) in self.segments.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            if a.end.t != b.start.t {
                return Err(format!("segment {n}: end t {} != next start t {}", a.end.t, b.start.t));
            }
            let expected_j = a.end.j + usize::from(a.jump.is_some());
            if b.start.j != expected_j {
                return Err(format!("segment {n}: next j {} != {expected_j}", b.start.j));
            }
            let pre = a.end_state;
            if pre.x().map(f64::to_bits) != b.start_state.x().map(f64::to_bits) {
                return Err(format!("segment {n}: x changed across boundary"));
            }
            let expected_q = match a.jump {
                Some(rec) => pre.q().flipped(rec.index),
                None => pre.q(),
            };
            if b.start_state.q() != expected_q {
                return Err(format!("segment {n}: q mismatch across jump"));
            }
        }
        for (n, s) in self.segments.iter().enumerate() {
            if s.end.t < s.start.t || s.end.j != s.start.j {
                return Err(format!("segment {n}: hybrid time not monotone"));
            }
        }
        Ok(())
    }
}

/// Earliest `t > 0` at which `target + (x0 - target) e^{-rate t}` equals `level`.
///
/// Absent when the flow moves away from `level`, stops short of it, or starts on it.
pub fn crossing_time(x0: f64, target: f64, rate: f64, level: f64) -> Result<Option<f64>> {
    if !(rate > 0.0) {
        return Err(CoreError::NonPositiveRate(rate));
    }
    Ok(forward_crossing(x0, target, rate, level))
}

fn forward_crossing(x0: f64, target: f64, rate: f64, level: f64) -> Option<f64> {
    let from = x0 - target;
    let to = level - target;
    if from * to > 0.0 && to.abs() < from.abs() {
        Some((from / to).ln() / rate)
    } else {
        None
    }
}

/// `D` as the solver sees it.
///
/// Identical to [`jump_set_membership`] except at a zero-width edge (`h_i = 0`,
/// watched variable exactly at `th_i`), where both branches of `D_i` hold and
/// membership alone would flip `q_i` back and forth forever. There `i` stays
/// active only if the current flow does not carry the state off the edge into
/// the side `q_i` already agrees with.
pub fn active_jumps(z: &HybridState, p: &NetworkParams) -> JumpSet {
    let raw = jump_set_membership(z, p);
    let mut out = raw;
    let mut velocity = None;
    for i in raw.iter() {
        let c = watched(i);
        if p.half_width(i) == 0.0 && z.x()[c] == p.threshold(i) {
            let v = velocity.get_or_insert_with(|| flow_map(z, p))[c];
            let leaving = if z.q().get(i) { v > 0.0 } else { v < 0.0 };
            if leaving {
                out = out.without(i);
            }
        }
    }
    out
}

/// Earliest armed-edge crossing under `mode`, with every index hit at that instant.
fn next_event(x: [f64; 3], q: Logic, mode: &ModeDescriptor, p: &NetworkParams) -> Option<(f64, Vec<usize>)> {
    let mut best: Option<(f64, Vec<usize>)> = None;
    for i in 1..=4 {
        let c = watched(i);
        let Some(dt) = forward_crossing(x[c], mode.target[c], mode.rate[c], armed_edge(i, q, p)) else {
            continue;
        };
        match &mut best {
            Some((b, hits)) if dt == *b => hits.push(i),
            Some((b, _)) if dt > *b => {}
            _ => best = Some((dt, vec![i])),
        }
    }
    best
}

/// Long-run classification of one solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    EquilibriumReached { limit: [f64; 3], q: Logic },
    LimitCycle(CycleReport),
    ZenoSuspected { at: HybridTime, state: HybridState },
    HorizonExhausted { at: HybridTime, state: HybridState },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictKind {
    EquilibriumReached,
    LimitCycle,
    ZenoSuspected,
    HorizonExhausted,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryVerdict {
    pub outcome: Verdict,
    /// Jumps per `D_i` over the whole arc.
    pub jump_counts: [usize; 4],
}

impl TrajectoryVerdict {
    pub fn kind(&self) -> VerdictKind {
        match self.outcome {
            Verdict::EquilibriumReached { .. } => VerdictKind::EquilibriumReached,
            Verdict::LimitCycle(_) => VerdictKind::LimitCycle,
            Verdict::ZenoSuspected { .. } => VerdictKind::ZenoSuspected,
            Verdict::HorizonExhausted { .. } => VerdictKind::HorizonExhausted,
        }
    }

    pub fn cycle(&self) -> Option<&CycleReport> {
        match &self.outcome {
            Verdict::LimitCycle(c) => Some(c),
            _ => None,
        }
    }

    pub fn limit_point(&self) -> Option<[f64; 3]> {
        match self.outcome {
            Verdict::EquilibriumReached { limit, .. } => Some(limit),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Simulation {
    pub arc: HybridArc,
    pub verdict: TrajectoryVerdict,
}

/// Flows in `C`, jumps in `D`, until equilibrium, horizon or jump budget.
pub fn simulate(z0: &HybridState, p: &NetworkParams, cfg: &SolverConfig) -> Result<Simulation> {
    HybridState::new(z0.x(), z0.q())?;
    p.check()?;
    cfg.check()?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut segments = Vec::new();
    let mut z = *z0;
    let (mut t, mut j) = (0.0_f64, 0_usize);

    let termination = loop {
        let start = HybridTime::new(t, j);
        let start_state = z;
        let mode = mode_target(z.q(), p);
        let segment = |end_t: f64, end_state: HybridState, jump| Segment {
            start,
            end: HybridTime::new(end_t, j),
            start_state,
            end_state,
            mode,
            jump,
        };

        let mut active = active_jumps(&z, p);
        if active.is_empty() {
            let closing = match next_event(z.x(), z.q(), &mode, p) {
                None => Some((cfg.t_max.max(t), Termination::Equilibrium)),
                Some((dt, _)) if t + dt > cfg.t_max => Some((cfg.t_max, Termination::Horizon)),
                Some((dt, hits)) => {
                    let mut x = mode.advance(z.x(), dt);
                    for i in hits {
                        x[watched(i)] = armed_edge(i, z.q(), p);
                    }
                    t += dt;
                    z = z.with_x(x);
                    active = active_jumps(&z, p);
                    None
                }
            };
            if let Some((end_t, reason)) = closing {
                z = z.with_x(mode.advance(z.x(), end_t - t));
                segments.push(segment(end_t, z, None));
                break reason;
            }
            if active.is_empty() {
                // Snapped onto the edge, so only reachable if rounding undid it.
                segments.push(segment(t, z, None));
                continue;
            }
        }

        if j >= cfg.j_max {
            segments.push(segment(t, z, None));
            break Termination::JumpBudget;
        }
        let successors = jump_map(&z, active)?;
        let (index, next) = resolve_jump(&successors, cfg.policy, &mut rng);
        segments.push(segment(t, z, Some(JumpRecord { index, active })));
        z = next;
        j += 1;
    };

    let arc = HybridArc {
        segments,
        final_state: z,
        termination,
    };
    let verdict = judge(&arc, p, cfg);
    Ok(Simulation { arc, verdict })
}

fn judge(arc: &HybridArc, p: &NetworkParams, cfg: &SolverConfig) -> TrajectoryVerdict {
    let jump_counts = arc.jump_counts();
    let at = arc.end_time();
    let outcome = match arc.termination {
        Termination::Equilibrium => {
            let q = arc.final_state.q();
            Verdict::EquilibriumReached {
                limit: mode_target(q, p).target,
                q,
            }
        }
        Termination::JumpBudget if zeno_window_fires(arc, cfg) => Verdict::ZenoSuspected {
            at,
            state: arc.final_state,
        },
        Termination::Horizon => match detect_cycle(arc, cfg.cycle_tol) {
            Some(report) => Verdict::LimitCycle(report),
            None => Verdict::HorizonExhausted {
                at,
                state: arc.final_state,
            },
        },
        // Budget spent before t_max: jumps are piling up faster than a cycle
        // of this horizon would need, so no recurrence claim is made.
        Termination::JumpBudget => Verdict::HorizonExhausted {
            at,
            state: arc.final_state,
        },
    };
    TrajectoryVerdict { outcome, jump_counts }
}

fn zeno_window_fires(arc: &HybridArc, cfg: &SolverConfig) -> bool {
    let times: Vec<f64> = arc.jumps().map(|e| e.time.t).collect();
    times.len() >= cfg.zeno_jumps
        && times[times.len() - 1] - times[times.len() - cfg.zeno_jumps] <= cfg.zeno_time
}

/// One recorded point of an Euler trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub time: HybridTime,
    pub state: HybridState,
}

/// Output of [`simulate_oracle`]: a sample grid plus the jumps taken.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleTrace {
    pub samples: Vec<TracePoint>,
    pub jumps: Vec<JumpEvent>,
    pub final_time: HybridTime,
    pub final_state: HybridState,
    pub termination: Termination,
}

/// Forward-Euler reference integration of the same hybrid system.
///
/// Only for cross-checking [`simulate`]. Samples are recorded at multiples of
/// `ocfg.sample_spacing`, interpolated inside the Euler step that covers them.
pub fn simulate_oracle(
    z0: &HybridState,
    p: &NetworkParams,
    cfg: &SolverConfig,
    ocfg: &OracleConfig,
) -> Result<OracleTrace> {
    HybridState::new(z0.x(), z0.q())?;
    p.check()?;
    cfg.check()?;
    if !(ocfg.dt > 0.0) || !(ocfg.sample_spacing > 0.0) || ocfg.interpolation > 1 {
        return Err(CoreError::InvalidConfig(
            "oracle needs dt > 0, sample_spacing > 0 and interpolation 0 or 1".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut samples = Vec::new();
    let mut jumps = Vec::new();
    let mut z = *z0;
    let (mut t, mut j) = (0.0_f64, 0_usize);
    let mut next_sample = 0_usize;
    let sample_time = |k: usize| k as f64 * ocfg.sample_spacing;

    let termination = 'run: loop {
        loop {
            let active = active_jumps(&z, p);
            if active.is_empty() {
                break;
            }
            if j >= cfg.j_max {
                break 'run Termination::JumpBudget;
            }
            let successors = jump_map(&z, active)?;
            let (index, next) = resolve_jump(&successors, cfg.policy, &mut rng);
            j += 1;
            jumps.push(JumpEvent {
                time: HybridTime::new(t, j),
                index,
                active,
                pre: z,
                post: next,
            });
            z = next;
        }

        if t >= cfg.t_max {
            break Termination::Horizon;
        }

        let h = ocfg.dt.min(cfg.t_max - t);
        let v = flow_map(&z, p);
        let x0 = z.x();
        let stepped: [f64; 3] = std::array::from_fn(|c| (x0[c] + h * v[c]).max(0.0));
        let mut frac = 1.0;
        let mut hits = Vec::new();
        if ocfg.interpolation == 1 {
            let probe = z.with_x(stepped);
            for i in 1..=4 {
                if in_jump_set(i, &probe, p) && !in_jump_set(i, &z, p) {
                    let c = watched(i);
                    let s = ((armed_edge(i, z.q(), p) - x0[c]) / (stepped[c] - x0[c])).clamp(0.0, 1.0);
                    if s < frac {
                        frac = s;
                        hits.clear();
                        hits.push(i);
                    } else if s == frac {
                        hits.push(i);
                    }
                }
            }
        }
        let step = h * frac;
        let mut x: [f64; 3] = if frac == 1.0 {
            stepped
        } else {
            std::array::from_fn(|c| (x0[c] + step * v[c]).max(0.0))
        };
        for &i in &hits {
            x[watched(i)] = armed_edge(i, z.q(), p);
        }
        let t_next = if frac == 1.0 && h < ocfg.dt { cfg.t_max } else { t + step };

        while sample_time(next_sample) <= t_next {
            let ts = sample_time(next_sample);
            let xs: [f64; 3] = std::array::from_fn(|c| (x0[c] + (ts - t) * v[c]).max(0.0));
            samples.push(TracePoint {
                time: HybridTime::new(ts, j),
                state: z.with_x(xs),
            });
            next_sample += 1;
        }
        t = t_next;
        z = z.with_x(x);
    };

    Ok(OracleTrace {
        samples,
        jumps,
        final_time: HybridTime::new(t, j),
        final_state: z,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(x: [f64; 3], q: [u8; 4]) -> HybridState {
        HybridState::new(x, Logic::from_bits(q[0], q[1], q[2], q[3])).unwrap()
    }

    fn bisect(x0: f64, target: f64, rate: f64, level: f64, mut lo: f64, mut hi: f64) -> f64 {
        let f = |t: f64| target + (x0 - target) * (-rate * t).exp() - level;
        let flo = f(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == (flo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn crossing_time_examples() {
        let t = crossing_time(0.15, 1.0, 1.0, 0.41).unwrap().unwrap();
        assert!((t - (0.85f64 / 0.59).ln()).abs() < 1e-12);
        assert!((t - 0.365).abs() < 1e-3);
        assert!((t - bisect(0.15, 1.0, 1.0, 0.41, 0.0, 10.0)).abs() < 1e-6);

        assert_eq!(crossing_time(0.8, 1.0, 1.0, 0.5).unwrap(), None);
        assert_eq!(crossing_time(0.8, 0.0, 1.0, 0.8).unwrap(), None);
        // Level equal to the target is approached but never reached.
        assert_eq!(crossing_time(0.8, 0.5, 1.0, 0.5).unwrap(), None);
        assert!(matches!(crossing_time(0.8, 0.0, 0.0, 0.5), Err(CoreError::NonPositiveRate(_))));
        assert!(crossing_time(0.8, 0.0, -1.0, 0.5).is_err());
    }

    #[test]
    fn single_mode_matches_closed_form() {
        // Only x1 is driven; x3 decays toward an edge that lies beyond the horizon.
        let p = NetworkParams {
            th1: 5.0,
            th2: 5.0,
            th3: 6.0,
            th4: 0.05,
            ..Default::default()
        };
        let z0 = state([0.2, 0.3, 0.4], [0, 0, 0, 1]);
        let cfg = SolverConfig {
            t_max: 1.0,
            ..Default::default()
        };
        let sim = simulate(&z0, &p, &cfg).unwrap();
        assert_eq!(sim.arc.termination, Termination::Horizon);
        assert_eq!(sim.arc.segments.len(), 1);
        let x = sim.arc.sample(1.0).unwrap().x();
        let e = (-1.0f64).exp();
        assert!((x[0] - (1.0 - 0.8 * e)).abs() < 1e-15);
        assert!((x[1] - 0.3 * e).abs() < 1e-15);
        assert!((x[2] - 0.4 * e).abs() < 1e-15);

        let trace = simulate_oracle(&z0, &p, &cfg, &OracleConfig::default()).unwrap();
        let last = trace.samples.last().unwrap();
        assert!((last.time.t - 1.0).abs() < 1e-12);
        for (c, exact) in x.iter().enumerate() {
            assert!((last.state.x()[c] - exact).abs() < 1e-3);
        }
    }

    #[test]
    fn equilibrium_shortcut_reports_mode_target() {
        // Inhibition threshold out of reach: everything saturates.
        let p = NetworkParams {
            th3: 5.0,
            ..Default::default()
        };
        let z0 = state([0.5, 0.6, 0.8], [1, 1, 0, 1]);
        let sim = simulate(&z0, &p, &SolverConfig::default()).unwrap();
        assert_eq!(sim.arc.termination, Termination::Equilibrium);
        assert_eq!(sim.verdict.limit_point(), Some([1.0, 1.0, 1.0]));
        assert_eq!(sim.arc.end_time().t, 100.0);
    }

    #[test]
    fn jump_budget_exhaustion_and_zeno() {
        // h = 0 with a state parked on the threshold at its own target: chatter.
        let p = NetworkParams {
            th4: 0.7,
            k1: 1.0,
            ..NetworkParams::default().with_uniform_half_width(0.0)
        };
        // x3 sits at th4 with zero velocity: q2=1,q3=0 gives target k3/g3=1, so use k3=0.7.
        let p = NetworkParams { k3: 0.7, ..p };
        let z0 = state([0.5, 0.55, 0.7], [1, 1, 0, 0]);
        let cfg = SolverConfig {
            j_max: 200,
            ..Default::default()
        };
        let sim = simulate(&z0, &p, &cfg).unwrap();
        assert_eq!(sim.arc.termination, Termination::JumpBudget);
        assert_eq!(sim.verdict.kind(), VerdictKind::ZenoSuspected);
        assert_eq!(sim.arc.jump_count(), 200);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let z0 = state([0.1, 0.1, 0.1], [0, 0, 0, 0]);
        let bad = NetworkParams {
            g1: -1.0,
            ..Default::default()
        };
        assert!(simulate(&z0, &bad, &SolverConfig::default()).is_err());
        let cfg = SolverConfig {
            t_max: 0.0,
            ..Default::default()
        };
        assert!(simulate(&z0, &NetworkParams::default(), &cfg).is_err());
        let ocfg = OracleConfig {
            dt: 0.0,
            ..Default::default()
        };
        assert!(simulate_oracle(&z0, &NetworkParams::default(), &SolverConfig::default(), &ocfg).is_err());
    }

    #[test]
    fn zero_width_edge_is_crossed_once() {
        let p = NetworkParams::default().with_uniform_half_width(0.0);
        // x1 rising through th1 = 0.4 with q1 = 0: one flip, then flow on.
        let z0 = state([p.th1, 0.0, 0.9], [0, 0, 0, 1]);
        let active = active_jumps(&z0, &p);
        assert_eq!(active, JumpSet::from_indices(&[1]));
        let flipped = z0.with_logic(z0.q().flipped(1));
        assert!(jump_set_membership(&flipped, &p).contains(1));
        assert!(active_jumps(&flipped, &p).is_empty());
    }
}
