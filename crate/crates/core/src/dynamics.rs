//! Flow map, jump sets and jump map of the scleral network.
//!
//! Wiring (fixed): `x1' = k1 q4 - g1 x1`, `x2' = k2 q1 (1 - q3) - g2 x2`,
//! `x3' = k3 q2 (1 - q3) - g3 x3`. Logic variable `q_i` watches `x1` for
//! `i = 1, 3`, `x2` for `i = 2` and `x3` for `i = 4`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::state::{HybridState, Logic, NetworkParams};

/// Index (0-based) of the concentration watched by logic variable `q_i`.
pub const fn watched(i: usize) -> usize {
    match i {
        1 | 3 => 0,
        2 => 1,
        4 => 2,
        _ => panic!("logic index out of range"),
    }
}

/// The switching edge currently armed for `q_i`: `th_i - h_i` while `q_i = 1`
/// (waiting to fall), `th_i + h_i` while `q_i = 0` (waiting to rise).
pub fn armed_edge(i: usize, q: Logic, p: &NetworkParams) -> f64 {
    if q.get(i) {
        p.threshold(i) - p.half_width(i)
    } else {
        p.threshold(i) + p.half_width(i)
    }
}

/// Per-mode affine data: each `x_c` relaxes toward `target[c]` at `rate[c]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeDescriptor {
    pub q: Logic,
    /// Effective inputs `u = (q4, q1 (1 - q3), q2 (1 - q3))`.
    pub input: [bool; 3],
    pub target: [f64; 3],
    pub rate: [f64; 3],
}

impl ModeDescriptor {
    /// Closed-form position at elapsed time `dt` from `x0`.
    pub fn advance(&self, x0: [f64; 3], dt: f64) -> [f64; 3] {
        std::array::from_fn(|c| {
            let target = self.target[c];
            target + (x0[c] - target) * (-self.rate[c] * dt).exp()
        })
    }

    pub fn velocity(&self, x: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|c| self.rate[c] * (self.target[c] - x[c]))
    }

    /// True when every effective input is off, so the mode relaxes to the origin.
    pub fn all_inputs_off(&self) -> bool {
        self.input.iter().all(|u| !u)
    }
}

pub fn mode_target(q: Logic, p: &NetworkParams) -> ModeDescriptor {
    let [q1, q2, q3, q4] = q.0;
    let input = [q4, q1 && !q3, q2 && !q3];
    let target = std::array::from_fn(|c| {
        if input[c] {
            p.growth(c) / p.decay(c)
        } else {
            0.0
        }
    });
    ModeDescriptor {
        q,
        input,
        target,
        rate: [p.g1, p.g2, p.g3],
    }
}

/// Velocity `(x1', x2', x3')`; the logic variables do not flow.
pub fn flow_map(z: &HybridState, p: &NetworkParams) -> [f64; 3] {
    let [q1, q2, q3, q4] = z.q().0.map(f64::from);
    let [x1, x2, x3] = z.x();
    [
        p.k1 * q4 - p.g1 * x1,
        p.k2 * q1 * (1.0 - q3) - p.g2 * x2,
        p.k3 * q2 * (1.0 - q3) - p.g3 * x3,
    ]
}

/// A subset of `{1, 2, 3, 4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JumpSet(u8);

impl JumpSet {
    pub const EMPTY: JumpSet = JumpSet(0);

    pub fn from_indices(indices: &[usize]) -> Self {
        indices.iter().fold(Self::EMPTY, |s, &i| s.with(i))
    }

    pub fn with(self, i: usize) -> Self {
        assert!((1..=4).contains(&i), "jump index {i} out of range");
        JumpSet(self.0 | 1 << (i - 1))
    }

    pub fn without(self, i: usize) -> Self {
        JumpSet(self.0 & !(1 << (i - 1)))
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=4).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (1..=4).filter(move |&i| self.contains(i))
    }
}

impl fmt::Display for JumpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// Whether `z` lies in `D_i`, using the non-strict edge inequalities.
pub fn in_jump_set(i: usize, z: &HybridState, p: &NetworkParams) -> bool {
    let x = z.x()[watched(i)];
    let th = p.threshold(i);
    let h = p.half_width(i);
    if z.q().get(i) {
        x <= th - h
    } else {
        x >= th + h
    }
}

/// All `i` with `z` in `D_i`.
pub fn jump_set_membership(z: &HybridState, p: &NetworkParams) -> JumpSet {
    (1..=4)
        .filter(|&i| in_jump_set(i, z, p))
        .fold(JumpSet::EMPTY, JumpSet::with)
}

/// `g_i`: flips `q_i`, keeps everything else.
pub fn flip(z: &HybridState, i: usize) -> HybridState {
    z.with_logic(z.q().flipped(i))
}

/// `G(z) = { g_i(z) : i in active }`, ordered by index.
pub fn jump_map(z: &HybridState, active: JumpSet) -> Result<Vec<(usize, HybridState)>> {
    if active.is_empty() {
        return Err(CoreError::EmptyJumpSet);
    }
    Ok(active.iter().map(|i| (i, flip(z, i))).collect())
}

/// How a simulator picks one successor out of a set-valued jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JumpPolicy {
    #[default]
    LowestIndex,
    SeededRandom,
}

/// Picks one successor. `successors` must be nonempty and sorted by index.
pub fn resolve_jump<R: Rng + ?Sized>(
    successors: &[(usize, HybridState)],
    policy: JumpPolicy,
    rng: &mut R,
) -> (usize, HybridState) {
    assert!(!successors.is_empty(), "resolve_jump needs at least one successor");
    match policy {
        JumpPolicy::LowestIndex => successors[0],
        JumpPolicy::SeededRandom => {
            if successors.len() == 1 {
                successors[0]
            } else {
                successors[rng.gen_range(0..successors.len())]
            }
        }
    }
}
