mod common;

use common::{bisect_crossing, oracle_period, sup_gap, FIG_S5_PERIOD};
use hyswitch_core::{crossing_time, preset, simulate, simulate_oracle, OracleConfig, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn euler(dt: f64) -> OracleConfig {
    OracleConfig {
        dt,
        ..Default::default()
    }
}

fn gaps(id: &str, solver: SolverConfig) -> (f64, f64) {
    let cfg = preset(id).unwrap();
    let z0 = cfg.initial_state().unwrap();
    let sim = simulate(&z0, &cfg.params, &solver).unwrap();
    let coarse = simulate_oracle(&z0, &cfg.params, &solver, &euler(1e-4)).unwrap();
    let fine = simulate_oracle(&z0, &cfg.params, &solver, &euler(5e-5)).unwrap();
    (sup_gap(&sim, &coarse).0, sup_gap(&sim, &fine).0)
}

#[test]
fn euler_tracks_the_exact_arc_on_equilibrium_presets() {
    for id in ["s1", "s3", "s7"] {
        let solver = preset(id).unwrap().solver;
        let (coarse, fine) = gaps(id, solver);
        assert!(coarse <= 1e-3, "{id}: gap {coarse}");
        let ratio = coarse / fine;
        assert!((1.5..=2.5).contains(&ratio), "{id}: ratio {ratio}");
    }
}

#[test]
fn euler_tracks_the_cycle_over_its_first_periods() {
    // Over a few periods the phase error of the Euler orbit is still small.
    let solver = SolverConfig {
        t_max: 10.0,
        ..preset("s5").unwrap().solver
    };
    let (coarse, fine) = gaps("s5", solver);
    assert!(coarse <= 1e-3, "gap {coarse}");
    let ratio = coarse / fine;
    assert!((1.5..=2.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn euler_period_agrees_with_the_golden_value() {
    let cfg = preset("s5").unwrap();
    let z0 = cfg.initial_state().unwrap();
    let ocfg = OracleConfig {
        dt: 1e-5,
        sample_spacing: 1.0,
        ..Default::default()
    };
    let trace = simulate_oracle(&z0, &cfg.params, &cfg.solver, &ocfg).unwrap();
    let period = oracle_period(&trace, 10);
    assert!((period - FIG_S5_PERIOD).abs() < 5e-4, "period {period}");
}

#[test]
fn oracle_rejects_bad_step() {
    let cfg = preset("s1").unwrap();
    let z0 = cfg.initial_state().unwrap();
    for dt in [0.0, -1e-3, f64::NAN] {
        assert!(simulate_oracle(&z0, &cfg.params, &cfg.solver, &euler(dt)).is_err());
    }
}

#[test]
fn crossing_time_matches_bisection() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let x0: f64 = rng.gen_range(0.0..2.0);
        let target: f64 = rng.gen_range(0.0..2.0);
        let rate: f64 = rng.gen_range(0.1..4.0);
        let level = target + rng.gen_range(0.02..0.98) * (x0 - target);
        let t = crossing_time(x0, target, rate, level).unwrap().unwrap();
        let reference = bisect_crossing(x0, target, rate, level, 0.0, 2.0 * t + 1.0);
        assert!((t - reference).abs() <= 1e-10, "t={t} bisection={reference} ({x0}, {target}, {rate}, {level})");
    }
}
