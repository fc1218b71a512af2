#![allow(dead_code)]

use hyswitch_core::dynamics::{armed_edge, watched};
use hyswitch_core::{
    jump_set_membership, HybridState, Logic, NetworkParams, OracleTrace, Simulation, SolverConfig,
};
use rand::Rng;

/// Preset parameters transcribed from the figure captions.
pub struct Caption {
    pub id: &'static str,
    pub k: [f64; 3],
    pub gamma: [f64; 3],
    pub theta: [f64; 4],
    pub h: f64,
    pub x0: [f64; 3],
    pub q0: [u8; 4],
}

pub const CAPTIONS: [Caption; 4] = [
    Caption {
        id: "s1",
        k: [1.0, 1.0, 1.0],
        gamma: [1.0, 1.0, 1.0],
        theta: [0.4, 0.5, 0.6, 0.7],
        h: 0.01,
        x0: [0.15, 0.45, 0.8],
        q0: [1, 1, 0, 1],
    },
    Caption {
        id: "s3",
        k: [0.55, 1.0, 0.9],
        gamma: [1.0, 1.0, 1.0],
        theta: [0.4, 0.5, 0.6, 0.7],
        h: 0.01,
        x0: [0.45, 0.6, 0.8],
        q0: [1, 1, 0, 1],
    },
    Caption {
        id: "s5",
        k: [1.0, 1.0, 1.0],
        gamma: [1.0, 1.0, 1.0],
        theta: [0.4, 0.5, 0.6, 0.7],
        h: 0.01,
        x0: [0.45, 0.45, 0.8],
        q0: [1, 1, 0, 1],
    },
    Caption {
        id: "s7",
        k: [1.0, 1.0, 1.0],
        gamma: [1.0, 1.0, 1.0],
        theta: [0.4, 0.5, 0.6, 0.7],
        h: 0.0,
        x0: [0.45, 0.45, 0.8],
        q0: [1, 1, 0, 1],
    },
];

/// Period of the fig-s5 orbit, frozen to three significant figures after
/// agreeing between the exact solver and the Euler oracle at dt = 1e-5.
pub const FIG_S5_PERIOD: f64 = 0.897;

/// Valid parameters (every `th_i - h_i > 0`) and an initial state in the box `[0, 1.5]^3`.
pub fn random_case<R: Rng>(rng: &mut R, min_h: f64) -> (NetworkParams, HybridState) {
    let mut p = NetworkParams {
        k1: rng.gen_range(0.2..2.0),
        k2: rng.gen_range(0.2..2.0),
        k3: rng.gen_range(0.2..2.0),
        g1: rng.gen_range(0.2..2.0),
        g2: rng.gen_range(0.2..2.0),
        g3: rng.gen_range(0.2..2.0),
        ..Default::default()
    };
    for i in 1..=4 {
        let th = rng.gen_range(0.1..1.2);
        let h = rng.gen_range(min_h..0.08_f64.max(min_h)).min(0.9 * th);
        p.set(&format!("th{i}"), th).unwrap();
        p.set(&format!("h{i}"), h).unwrap();
    }
    let x = [rng.gen_range(0.0..1.5), rng.gen_range(0.0..1.5), rng.gen_range(0.0..1.5)];
    let q = Logic([rng.gen(), rng.gen(), rng.gen(), rng.gen()]);
    (p, HybridState::new(x, q).unwrap())
}

pub fn short_cfg() -> SolverConfig {
    SolverConfig {
        t_max: 20.0,
        j_max: 2_000,
        ..Default::default()
    }
}

/// Structural and semantic invariants every solver arc must satisfy.
///
/// `interior_samples` points are checked strictly inside every segment of
/// positive length. Band traversal and exact-edge checks assume all `h_i > 0`.
pub fn check_arc(sim: &Simulation, p: &NetworkParams, interior_samples: usize) -> Result<(), String> {
    let arc = &sim.arc;
    arc.check_contiguity()?;

    let mut last_flip: [Option<bool>; 4] = [None; 4];
    let closing = arc.segments.iter().filter(|s| s.jump.is_some());
    for (n, (ev, seg)) in arc.jumps().zip(closing).enumerate() {
        if ev.pre.x().map(f64::to_bits) != ev.post.x().map(f64::to_bits) {
            return Err(format!("jump {n} changed x"));
        }
        if seg.end.t != ev.time.t || ev.time.j != seg.end.j + 1 || ev.time.j != n + 1 {
            return Err(format!("jump {n}: hybrid time did not advance by exactly one jump"));
        }
        let i = ev.index;
        let w = ev.pre.x()[watched(i)];
        let edge = armed_edge(i, ev.pre.q(), p);
        let was_on = ev.pre.q().get(i);
        let inside = if was_on { w <= edge } else { w >= edge };
        if !inside {
            return Err(format!("jump {n}: q{i} flipped with x={w} outside its edge {edge}"));
        }
        // A flip after some flow must happen exactly on the armed edge, and the
        // previous flip of the same variable was on the opposite edge.
        if ev.time.t > 0.0 && w != edge {
            return Err(format!("jump {n}: q{i} flipped at {w}, not on edge {edge}"));
        }
        if let Some(prev) = last_flip[i - 1] {
            if prev == was_on {
                return Err(format!("jump {n}: q{i} flipped twice in the same direction"));
            }
        }
        last_flip[i - 1] = Some(was_on);

        let post = jump_set_membership(&ev.post, p);
        if p.half_width(i) > 0.0 && post.contains(i) {
            return Err(format!("jump {n}: still in D{i} after flipping q{i}"));
        }
    }

    for (n, seg) in arc.segments.iter().enumerate() {
        if seg.start_state.x().iter().chain(seg.end_state.x().iter()).any(|v| *v < 0.0) {
            return Err(format!("segment {n}: negative concentration"));
        }
        if seg.duration() <= 0.0 {
            continue;
        }
        for k in 1..=interior_samples {
            let t = seg.start.t + seg.duration() * k as f64 / (interior_samples + 1) as f64;
            let z = seg.state_at(t);
            if z.x().iter().any(|v| *v < 0.0) {
                return Err(format!("segment {n}: negative concentration at t={t}"));
            }
            let d = jump_set_membership(&z, p);
            if !d.is_empty() {
                return Err(format!("segment {n}: interior point t={t} lies in D {d}"));
            }
        }
    }
    Ok(())
}

/// Largest sup-norm gap between the exact arc and the Euler trace over their
/// common time range, with the time at which it occurs.
pub fn sup_gap(sim: &Simulation, trace: &OracleTrace) -> (f64, f64) {
    let end = sim.arc.end_time().t.min(trace.final_time.t);
    let mut worst = (0.0_f64, 0.0);
    for s in trace.samples.iter().take_while(|s| s.time.t <= end) {
        let exact = sim.arc.sample(s.time.t).unwrap().x();
        for c in 0..3 {
            let d = (exact[c] - s.state.x()[c]).abs();
            if d > worst.0 {
                worst = (d, s.time.t);
            }
        }
    }
    worst
}

/// Root of `target + (x0 - target) e^{-rate t} = level` on `[lo, hi]` by bisection.
pub fn bisect_crossing(x0: f64, target: f64, rate: f64, level: f64, mut lo: f64, mut hi: f64) -> f64 {
    let f = |t: f64| target + (x0 - target) * (-rate * t).exp() - level;
    let sign_lo = f(lo) > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (f(mid) > 0.0) == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Mean spacing of the last `n` rising flips of `q4` in an Euler trace.
pub fn oracle_period(trace: &OracleTrace, n: usize) -> f64 {
    let ups: Vec<f64> = trace
        .jumps
        .iter()
        .filter(|e| e.index == 4 && e.post.q().get(4))
        .map(|e| e.time.t)
        .collect();
    let k = ups.len();
    (ups[k - 1] - ups[k - 1 - n]) / n as f64
}
