//! Domain types shared by the solver, analysis and scenario layers.
//!
//! The hybrid state is `z = (x, q)`: three nonnegative protein concentrations
//! (`x1` TIMP-2, `x2` MT1-MMP, `x3` MMP-2) and four hysteresis logic variables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// The four logic variables `q1..q4`, stored as exact booleans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Logic(pub [bool; 4]);

impl Logic {
    pub const fn new(q1: bool, q2: bool, q3: bool, q4: bool) -> Self {
        Self([q1, q2, q3, q4])
    }

    /// Builds from 0/1 integers, anything nonzero counts as 1.
    pub const fn from_bits(q1: u8, q2: u8, q3: u8, q4: u8) -> Self {
        Self([q1 != 0, q2 != 0, q3 != 0, q4 != 0])
    }

    /// Value of `q_i` for `i` in `1..=4`.
    pub fn get(&self, i: usize) -> bool {
        self.0[i - 1]
    }

    /// Copy with `q_i` negated.
    pub fn flipped(mut self, i: usize) -> Self {
        self.0[i - 1] = !self.0[i - 1];
        self
    }

    pub fn bit(&self, i: usize) -> u8 {
        u8::from(self.get(i))
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0 {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

/// A point of the hybrid state space `R^3_{>=0} x {0,1}^4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawState", into = "RawState")]
pub struct HybridState {
    x: [f64; 3],
    q: Logic,
}

impl HybridState {
    /// Rejects negative or non-finite concentrations.
    pub fn new(x: [f64; 3], q: Logic) -> Result<Self, CoreError> {
        for (i, v) in x.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(CoreError::InvalidState(format!(
                    "x{} must be a finite nonnegative concentration, got {v}",
                    i + 1
                )));
            }
        }
        Ok(Self { x, q })
    }

    pub fn x(&self) -> [f64; 3] {
        self.x
    }

    pub fn q(&self) -> Logic {
        self.q
    }

    /// Same concentrations, different logic variables. Never touches `x`.
    pub fn with_logic(&self, q: Logic) -> Self {
        Self { x: self.x, q }
    }

    /// Same logic variables, new concentrations. Callers guarantee `x >= 0`.
    pub(crate) fn with_x(&self, x: [f64; 3]) -> Self {
        debug_assert!(x.iter().all(|v| *v >= 0.0), "negative concentration {x:?}");
        Self { x, q: self.q }
    }
}

#[derive(Serialize, Deserialize)]
struct RawState {
    x: [f64; 3],
    q: [u8; 4],
}

impl TryFrom<RawState> for HybridState {
    type Error = CoreError;

    fn try_from(raw: RawState) -> Result<Self, Self::Error> {
        if let Some(b) = raw.q.iter().find(|b| **b > 1) {
            return Err(CoreError::InvalidState(format!(
                "logic variables must be 0 or 1, got {b}"
            )));
        }
        let [a, b, c, d] = raw.q;
        HybridState::new(raw.x, Logic::from_bits(a, b, c, d))
    }
}

impl From<HybridState> for RawState {
    fn from(z: HybridState) -> Self {
        let q = z.q;
        RawState {
            x: z.x,
            q: [q.bit(1), q.bit(2), q.bit(3), q.bit(4)],
        }
    }
}

/// Rates, thresholds and hysteresis half-widths of the three-protein network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkParams {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub th1: f64,
    pub th2: f64,
    pub th3: f64,
    pub th4: f64,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub h4: f64,
}

impl Default for NetworkParams {
    /// Unit rates, thresholds `(0.4, 0.5, 0.6, 0.7)`, half-widths `0.01`.
    fn default() -> Self {
        Self {
            k1: 1.0,
            k2: 1.0,
            k3: 1.0,
            g1: 1.0,
            g2: 1.0,
            g3: 1.0,
            th1: 0.4,
            th2: 0.5,
            th3: 0.6,
            th4: 0.7,
            h1: 0.01,
            h2: 0.01,
            h3: 0.01,
            h4: 0.01,
        }
    }
}

/// Names accepted by [`NetworkParams::get`] / [`NetworkParams::set`].
pub const PARAM_NAMES: [&str; 14] = [
    "k1", "k2", "k3", "g1", "g2", "g3", "th1", "th2", "th3", "th4", "h1", "h2", "h3", "h4",
];

impl NetworkParams {
    /// Growth rate `k_c` for coordinate `c` in `0..3`.
    pub fn growth(&self, c: usize) -> f64 {
        [self.k1, self.k2, self.k3][c]
    }

    /// Decay rate `gamma_c` for coordinate `c` in `0..3`.
    pub fn decay(&self, c: usize) -> f64 {
        [self.g1, self.g2, self.g3][c]
    }

    /// Threshold `theta_i` for `i` in `1..=4`.
    pub fn threshold(&self, i: usize) -> f64 {
        [self.th1, self.th2, self.th3, self.th4][i - 1]
    }

    /// Hysteresis half-width `h_i` for `i` in `1..=4`.
    pub fn half_width(&self, i: usize) -> f64 {
        [self.h1, self.h2, self.h3, self.h4][i - 1]
    }

    /// Sets every `h_i` to `h`.
    pub fn with_uniform_half_width(mut self, h: f64) -> Self {
        self.h1 = h;
        self.h2 = h;
        self.h3 = h;
        self.h4 = h;
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "k1" => self.k1,
            "k2" => self.k2,
            "k3" => self.k3,
            "g1" => self.g1,
            "g2" => self.g2,
            "g3" => self.g3,
            "th1" => self.th1,
            "th2" => self.th2,
            "th3" => self.th3,
            "th4" => self.th4,
            "h1" => self.h1,
            "h2" => self.h2,
            "h3" => self.h3,
            "h4" => self.h4,
            _ => return None,
        })
    }

    /// Sets a named field. `"h"` sets all four half-widths at once.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), CoreError> {
        let slot = match name {
            "h" => {
                *self = self.with_uniform_half_width(value);
                return Ok(());
            }
            "k1" => &mut self.k1,
            "k2" => &mut self.k2,
            "k3" => &mut self.k3,
            "g1" => &mut self.g1,
            "g2" => &mut self.g2,
            "g3" => &mut self.g3,
            "th1" => &mut self.th1,
            "th2" => &mut self.th2,
            "th3" => &mut self.th3,
            "th4" => &mut self.th4,
            "h1" => &mut self.h1,
            "h2" => &mut self.h2,
            "h3" => &mut self.h3,
            "h4" => &mut self.h4,
            other => return Err(CoreError::UnknownParameter(other.to_string())),
        };
        *slot = value;
        Ok(())
    }

    /// Hard violations and soft warnings. Never fails.
    pub fn validate(&self) -> Vec<Issue> {
        validate_params(self)
    }

    /// `Ok` when there are no hard violations; warnings are dropped.
    pub fn check(&self) -> Result<(), CoreError> {
        let errors: Vec<String> = self
            .validate()
            .into_iter()
            .filter(|i| i.severity == Severity::Violation)
            .map(|i| i.to_string())
            .collect();
        if errors.is_empty() {
            Ok(())
        } else {
            Err(CoreError::InvalidParams(errors.join("; ")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Violation,
    Warning,
}

/// One finding of [`validate_params`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Issue {
    pub severity: Severity,
    /// Offending field(s), e.g. `"g2"` or `"th1,h1,th3,h3"`.
    pub field: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Violation => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag} [{}]: {}", self.field, self.message)
    }
}

/// Checks positivity of rates, the hysteresis edges and the threshold ordering
/// that lets MT1-MMP ever be expressed.
pub fn validate_params(p: &NetworkParams) -> Vec<Issue> {
    let mut out = Vec::new();
    let mut violation = |field: String, message: String| {
        out.push(Issue {
            severity: Severity::Violation,
            field,
            message,
        })
    };

    for c in 0..3 {
        let k = p.growth(c);
        if !(k.is_finite() && k > 0.0) {
            violation(format!("k{}", c + 1), format!("growth rate must be positive, got {k}"));
        }
        let g = p.decay(c);
        if !(g.is_finite() && g > 0.0) {
            violation(format!("g{}", c + 1), format!("decay rate must be positive, got {g}"));
        }
    }
    for i in 1..=4 {
        let th = p.threshold(i);
        let h = p.half_width(i);
        if !(th.is_finite() && th > 0.0) {
            violation(format!("th{i}"), format!("threshold must be positive, got {th}"));
        }
        if !(h.is_finite() && h >= 0.0) {
            violation(format!("h{i}"), format!("hysteresis half-width must be nonnegative, got {h}"));
        } else if th.is_finite() && th - h <= 0.0 {
            violation(
                format!("th{i},h{i}"),
                format!("lower hysteresis edge th{i} - h{i} = {} must be positive", th - h),
            );
        }
    }

    if out.is_empty() && p.th1 + p.h1 >= p.th3 - p.h3 {
        out.push(Issue {
            severity: Severity::Warning,
            field: "th1,h1,th3,h3".into(),
            message: format!(
                "x2 can never be expressed: th1 + h1 = {} is not below th3 - h3 = {}",
                p.th1 + p.h1,
                p.th3 - p.h3
            ),
        });
    }
    out
}

/// Hybrid time `(t, j)`: elapsed flow time and number of jumps so far.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
pub struct HybridTime {
    pub t: f64,
    pub j: usize,
}

impl HybridTime {
    pub const fn new(t: f64, j: usize) -> Self {
        Self { t, j }
    }
}

impl fmt::Display for HybridTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t, self.j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_params_are_clean() {
        assert!(validate_params(&NetworkParams::default()).is_empty());
    }

    #[test]
    fn zero_decay_is_a_violation() {
        let p = NetworkParams {
            g2: 0.0,
            ..Default::default()
        };
        let issues = validate_params(&p);
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].severity, Severity::Violation);
        assert_eq!(issues[0].field, "g2");
        assert!(issues[0].message.contains("decay rate must be positive"));
        assert!(p.check().is_err());
    }

    #[test]
    fn threshold_ordering_is_only_a_warning() {
        let p = NetworkParams {
            th1: 0.65,
            h1: 0.01,
            th3: 0.6,
            h3: 0.01,
            ..Default::default()
        };
        let issues = validate_params(&p);
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].severity, Severity::Warning);
        assert!(issues[0].message.contains("x2 can never be expressed"));
        assert!(p.check().is_ok());
    }

    #[test]
    fn lower_edge_must_stay_positive() {
        let p = NetworkParams {
            th2: 0.1,
            h2: 0.1,
            ..Default::default()
        };
        let issues = validate_params(&p);
        assert!(issues
            .iter()
            .any(|i| i.severity == Severity::Violation && i.field == "th2,h2"));
    }

    #[test]
    fn negative_concentration_rejected() {
        assert!(HybridState::new([0.1, -1e-12, 0.0], Logic::default()).is_err());
        assert!(HybridState::new([0.1, f64::NAN, 0.0], Logic::default()).is_err());
        assert!(HybridState::new([0.0, 0.0, 0.0], Logic::default()).is_ok());
    }

    #[test]
    fn logic_flip_and_display() {
        let q = Logic::from_bits(1, 1, 0, 1);
        assert_eq!(q.to_string(), "1101");
        assert_eq!(q.flipped(1), Logic::from_bits(0, 1, 0, 1));
        assert_eq!(q.flipped(3).flipped(3), q);
    }

    #[test]
    fn state_rejects_non_binary_logic_on_parse() {
        let bad: Result<HybridState, _> = toml::from_str("x = [0.1, 0.2, 0.3]\nq = [1, 2, 0, 0]\n");
        assert!(bad.is_err());
        let good: HybridState = toml::from_str("x = [0.1, 0.2, 0.3]\nq = [1, 0, 0, 1]\n").unwrap();
        assert_eq!(good.q(), Logic::from_bits(1, 0, 0, 1));
    }

    #[test]
    fn named_setter_covers_every_field() {
        let mut p = NetworkParams::default();
        for (n, name) in PARAM_NAMES.iter().enumerate() {
            p.set(name, n as f64 + 0.5).unwrap();
            assert_eq!(p.get(name), Some(n as f64 + 0.5));
        }
        assert!(matches!(p.set("theta9", 1.0), Err(CoreError::UnknownParameter(_))));
        p.set("h", 0.02).unwrap();
        assert!((1..=4).all(|i| p.half_width(i) == 0.02));
    }
}
