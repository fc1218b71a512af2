//! Exact event-driven simulation of a hysteretic three-protein regulatory
//! network modelled as a hybrid system: affine flows between switching
//! events, logic-variable flips at hysteresis edges.

// `!(v > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod export;
pub mod scenario;
pub mod solver;
pub mod state;

pub use analysis::{classify_equilibrium, describe, detect_cycle, sweep, CycleReport, EquilibriumClass, SweepAxis, SweepCell, SweepGrid};
pub use dynamics::{flow_map, jump_map, jump_set_membership, mode_target, resolve_jump, JumpPolicy, JumpSet, ModeDescriptor};
pub use error::CoreError;
pub use scenario::{preset, ScenarioConfig, PRESETS};
pub use solver::{
    active_jumps, crossing_time, simulate, simulate_oracle, HybridArc, JumpEvent, OracleConfig, OracleTrace, Segment, Simulation,
    SolverConfig, Termination, TrajectoryVerdict, Verdict, VerdictKind,
};
pub use state::{validate_params, HybridState, HybridTime, Issue, Logic, NetworkParams, Severity};
