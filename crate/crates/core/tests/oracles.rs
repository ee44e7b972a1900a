//! Cross-module checks of the closed forms against the independent numerical
//! routes: the ODE reduction of the memory-kernel equations, the Wootters
//! engine and the mechanistic measurement simulation.

use qzc_core::volterra::max_step;
use qzc_core::{
    amplitudes, amplitudes_with, closed_form_concurrence, density_matrix, mechanistic_zeno_simulation, solve_volterra,
    survival_amplitude, wootters_concurrence, zeno_concurrence, DecayPrefactor, InitialState64, SurvivalAmplitude,
    SystemParams64, ZenoSchedule64,
};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

fn max_deviation(p: &SystemParams64, init: &InitialState64, eps: &SurvivalAmplitude<f64>) -> f64 {
    let sol = solve_volterra(p, init, 20.0, max_step(p)).unwrap();
    let mut worst = 0.0f64;
    for k in 0..sol.len() {
        let (u1, u2) = amplitudes_with(eps, p, init, sol.times[k]).unwrap();
        worst = worst.max((u1 - sol.u1[k]).norm()).max((u2 - sol.u2[k]).norm());
    }
    worst
}

#[test]
fn closed_form_matches_ode_oracle_across_regimes() {
    for &ratio in &[0.1, 0.5, 1.0, 10.0] {
        for &(s, phi, r1) in &[(1.0, 0.0, 0.87), (0.0, 0.0, FRAC_1_SQRT_2), (0.3, 1.0, 0.4)] {
            let p = SystemParams64::from_ratio(ratio, r1).unwrap();
            let init = InitialState64::new(s, phi, r1).unwrap();
            let dev = max_deviation(&p, &init, &SurvivalAmplitude::new(&p));
            assert!(dev < 1e-6, "R={ratio} s={s} phi={phi} r1={r1}: {dev:e}");
        }
    }
}

#[test]
fn printed_prefactor_is_rejected_by_ode_oracle() {
    let p = SystemParams64::from_ratio(10.0, FRAC_1_SQRT_2).unwrap();
    let init = InitialState64::new(0.0, 0.0, FRAC_1_SQRT_2).unwrap();
    let wrong = SurvivalAmplitude::with_prefactor(&p, DecayPrefactor::FullRate);
    assert!(max_deviation(&p, &init, &wrong) > 1e-2);
}

#[test]
fn wootters_agrees_with_closed_form_along_trajectories() {
    let p = SystemParams64::from_ratio(10.0, 0.87).unwrap();
    let init = InitialState64::new(0.2, 2.0, 0.87).unwrap();
    for k in 0..=200 {
        let t = 0.05 * k as f64;
        let (u1, u2) = amplitudes(&p, &init, t).unwrap();
        let rho = density_matrix(u1, u2).unwrap();
        let c = wootters_concurrence(&rho).unwrap().value;
        assert!((c - closed_form_concurrence(u1, u2)).abs() < 1e-9, "t={t}");
    }
}

#[test]
fn sub_radiant_state_is_frozen() {
    for &ratio in &[0.1, 1.0, 10.0] {
        let r1 = 0.6;
        let p = SystemParams64::from_ratio(ratio, r1).unwrap();
        let init = InitialState64::sub_radiant(r1).unwrap();
        let target = 2.0 * r1 * (1.0 - r1 * r1).sqrt();
        let sol = solve_volterra(&p, &init, 20.0, max_step(&p)).unwrap();
        for k in 0..sol.len() {
            let (u1, u2) = amplitudes(&p, &init, sol.times[k]).unwrap();
            assert!((closed_form_concurrence(u1, u2) - target).abs() < 1e-8);
            assert!((closed_form_concurrence(sol.u1[k], sol.u2[k]) - target).abs() < 1e-8);
        }
    }
}

#[test]
fn lossless_cavity_is_vacuum_rabi() {
    let p = SystemParams64::new(0.0, 2.0, 0.3).unwrap();
    for k in 0..=1000 {
        let t = 0.01 * k as f64;
        let e = survival_amplitude(&p, t).unwrap();
        assert!((e - (2.0 * t).cos()).abs() < 1e-12);
    }
}

#[test]
fn measured_concurrence_matches_mechanistic_run() {
    let r1 = FRAC_1_SQRT_2;
    let init = InitialState64::new(0.0, 0.0, r1).unwrap();
    let p = SystemParams64::from_ratio(10.0, r1).unwrap();
    let sched = ZenoSchedule64::new(0.01, 50).unwrap();
    let closed = zeno_concurrence(&init, &p, &sched).unwrap();
    let mech = mechanistic_zeno_simulation(&init, &p, &sched, 1e-4).unwrap();
    assert!((closed - mech).abs() < 1e-5, "{closed} vs {mech}");

    let phased = InitialState64::new(0.0, PI, r1).unwrap();
    let frozen = zeno_concurrence(&phased, &p, &sched).unwrap();
    assert!((frozen - 1.0).abs() < 1e-12);
}
