//! Named invariant checks across all modules, reported one JSON object per
//! line.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use qzc_core::volterra::{max_step, SpectralDensity};
use qzc_core::zeno::zeno_amplitudes;
use qzc_core::{
    amplitudes_with, closed_form_concurrence, correlation_function_numeric, density_matrix, max_stationary_concurrence,
    solve_volterra, solve_volterra_quadrature, stationary_concurrence, wootters_concurrence, zeno_concurrence,
    zeno_rate, Complex64, DecayPrefactor, DensityMatrix64, InitialState64, SurvivalAmplitude, SystemParams64,
    VolterraSolution64, ZenoSchedule64,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::json;

use crate::data::{linspace, Dataset};
use crate::presets::{self, PresetKind, BAD_CAVITY_INTERVALS, GOOD_CAVITY_INTERVALS, R1_SERIES};
use crate::render;

type Outcome = Result<Measure, crate::error::CliError>;

/// Initial states `(s, phi, r1)` drawn from the dynamics figures, used by the
/// oracle checks.
pub const ORACLE_STATES: [(f64, f64, f64); 4] =
    [(1.0, 0.0, 0.87), (0.0, 0.0, FRAC_1_SQRT_2), (0.0, PI, 0.87), (0.0, PI, 1.0)];
pub const ORACLE_RATIOS: [f64; 2] = [0.1, 10.0];
pub const ORACLE_TAU_MAX: f64 = 20.0;
/// Quadrature step as a fraction of the solver step bound.
pub const QUADRATURE_STEP_FRACTION: f64 = 0.125;
pub const KERNEL_CUTOFF: f64 = 2.0e4;
pub const KERNEL_POINTS: usize = 2_000_001;

#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    pub passed: bool,
    pub metric: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Measure {
    fn below(metric: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Measure { passed: metric < threshold, metric, threshold, detail: detail.into() }
    }

    fn at_most(metric: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Measure { passed: metric <= threshold, metric, threshold, detail: detail.into() }
    }

    fn flag(passed: bool, detail: impl Into<String>) -> Self {
        let metric = if passed { 0.0 } else { 1.0 };
        Measure { passed, metric, threshold: 0.0, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub module: &'static str,
    pub measure: Measure,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.measure.passed
    }

    pub fn to_json(&self) -> String {
        json!({
            "check": self.name,
            "module": self.module,
            "status": if self.passed() { "pass" } else { "fail" },
            "metric": finite_or_null(self.measure.metric),
            "threshold": self.measure.threshold,
            "detail": self.measure.detail,
        })
        .to_string()
    }
}

fn finite_or_null(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        serde_json::Value::Null
    }
}

struct Ctx {
    prefactor: DecayPrefactor,
}

impl Ctx {
    fn eps(&self, p: &SystemParams64) -> SurvivalAmplitude<f64> {
        SurvivalAmplitude::with_prefactor(p, self.prefactor)
    }

    fn amplitudes(
        &self,
        p: &SystemParams64,
        init: &InitialState64,
        t: f64,
    ) -> qzc_core::Result<(Complex64, Complex64)> {
        amplitudes_with(&self.eps(p), p, init, t)
    }
}

struct Check {
    name: &'static str,
    module: &'static str,
    run: fn(&Ctx) -> Outcome,
}

const CHECKS: &[Check] = &[
    Check { name: "overlap_unitarity", module: "core-model", run: overlap_unitarity },
    Check { name: "basis_orthonormality", module: "core-model", run: basis_orthonormality },
    Check { name: "initial_state_determinism", module: "core-model", run: initial_state_determinism },
    Check { name: "eps_initial_value", module: "analytic-dynamics", run: eps_initial_value },
    Check { name: "eps_bounded", module: "analytic-dynamics", run: eps_bounded },
    Check { name: "eps_critical_continuity", module: "analytic-dynamics", run: eps_critical_continuity },
    Check { name: "norm_bound", module: "analytic-dynamics", run: norm_bound },
    Check { name: "stationary_kappa_independence", module: "analytic-dynamics", run: stationary_kappa_independence },
    Check { name: "stationary_maxima", module: "analytic-dynamics", run: stationary_maxima },
    Check { name: "argmax_symmetry", module: "analytic-dynamics", run: argmax_symmetry },
    Check { name: "markov_limit", module: "analytic-dynamics", run: markov_limit },
    Check { name: "jaynes_cummings_limit", module: "analytic-dynamics", run: jaynes_cummings_limit },
    Check { name: "wootters_closed_form_equivalence", module: "concurrence", run: wootters_closed_form_equivalence },
    Check { name: "concurrence_phase_invariance", module: "concurrence", run: concurrence_phase_invariance },
    Check { name: "diagonal_states_unentangled", module: "concurrence", run: diagonal_states_unentangled },
    Check { name: "concurrence_range", module: "concurrence", run: concurrence_range },
    Check { name: "bell_and_product_states", module: "concurrence", run: bell_and_product_states },
    Check { name: "kernel_quadrature", module: "volterra-oracle", run: kernel_quadrature },
    Check { name: "oracle_equivalence_ode", module: "volterra-oracle", run: oracle_equivalence_ode },
    Check { name: "oracle_equivalence_quadrature", module: "volterra-oracle", run: oracle_equivalence_quadrature },
    Check { name: "convergence_order", module: "volterra-oracle", run: convergence_order },
    Check { name: "reservoir_population", module: "volterra-oracle", run: reservoir_population },
    Check {
        name: "decoherence_free_characterization",
        module: "volterra-oracle",
        run: decoherence_free_characterization,
    },
    Check { name: "sub_radiant_invariance", module: "volterra-oracle", run: sub_radiant_invariance },
    Check { name: "zeno_rate_identity", module: "zeno-protection", run: zeno_rate_identity },
    Check { name: "zeno_freezing_limit", module: "zeno-protection", run: zeno_freezing_limit },
    Check { name: "zeno_sudden_death_removal", module: "zeno-protection", run: zeno_sudden_death_removal },
    Check { name: "zeno_ordering", module: "zeno-protection", run: zeno_ordering },
    Check { name: "zeno_mechanistic_agreement", module: "zeno-protection", run: zeno_mechanistic_agreement },
    Check { name: "csv_determinism", module: "cli-explorer", run: csv_determinism },
    Check { name: "preset_fidelity", module: "cli-explorer", run: preset_fidelity },
    Check { name: "figure_overlap", module: "cli-explorer", run: figure_overlap },
    Check { name: "svg_structure", module: "cli-explorer", run: svg_structure },
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

/// Runs the named checks (all when `only` is empty), in declaration order.
/// A check whose computation fails is reported as failed with the error text.
pub fn run_checks(only: &[String], prefactor: DecayPrefactor) -> Vec<CheckOutcome> {
    let ctx = Ctx { prefactor };
    CHECKS
        .par_iter()
        .filter(|c| only.is_empty() || only.iter().any(|n| n == c.name))
        .map(|c| CheckOutcome {
            name: c.name,
            module: c.module,
            measure: (c.run)(&ctx).unwrap_or_else(|e| Measure {
                passed: false,
                metric: f64::NAN,
                threshold: 0.0,
                detail: format!("error: {e}"),
            }),
        })
        .collect()
}

pub fn report(outcomes: &[CheckOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&o.to_json());
        out.push('\n');
    }
    out
}

fn grid_r1() -> Vec<f64> {
    linspace(0.0, 1.0, 41)
}

fn overlap_unitarity(_: &Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for r1 in grid_r1() {
        for s in linspace(-1.0, 1.0, 41) {
            for phi in [0.0, 0.7, PI, -2.0] {
                let init = InitialState64::new(s, phi, r1)?;
                let total = init.beta_plus().norm_sqr() + init.beta_minus().norm_sqr();
                worst = worst.max((total - 1.0).abs());
            }
        }
    }
    Ok(Measure::below(worst, 1e-12, "max | |b+|^2 + |b-|^2 - 1 | over (s, phi, r1) grid"))
}

fn basis_orthonormality(_: &Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for r1 in grid_r1() {
        let b = SystemParams64::from_ratio(1.0, r1)?.basis();
        let (p, m) = (b.super_radiant(), b.sub_radiant());
        let dot = |a: &[Complex64; 2], c: &[Complex64; 2]| a[0].conj() * c[0] + a[1].conj() * c[1];
        worst = worst.max((dot(&p, &p).re - 1.0).abs()).max((dot(&m, &m).re - 1.0).abs()).max(dot(&p, &m).norm());
    }
    Ok(Measure::below(worst, 1e-12, "max Gram-matrix deviation from identity"))
}

fn initial_state_determinism(_: &Ctx) -> Outcome {
    let mut same = true;
    for (s, phi, r1) in [(0.3, 1.1, 0.2), (-1.0, PI, 0.87), (0.0, 0.0, FRAC_1_SQRT_2)] {
        same &= InitialState64::new(s, phi, r1)? == InitialState64::new(s, phi, r1)?;
    }
    Ok(Measure::flag(same, "repeated construction is bit-identical"))
}

const RATIOS: [f64; 7] = [0.01, 0.1, 0.5, 0.9, 1.0, 2.0, 10.0];

fn eps_initial_value(ctx: &Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for r in RATIOS {
        let p = SystemParams64::from_ratio(r, 0.5)?;
        worst = worst.max((ctx.eps(&p).at(0.0)? - 1.0).abs());
    }
    Ok(Measure::below(worst, 1e-15, "max |eps(0) - 1| over R"))
}

fn eps_bounded(ctx: &Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for r in RATIOS {
        let p = SystemParams64::from_ratio(r, 0.5)?;
        let eps = ctx.eps(&p);
        for t in linspace(0.0, 2000.0, 20001) {
            worst = worst.max(eps.at(t)?.abs());
        }
    }
    Ok(Measure::at_most(worst, 1.0, "max |eps(t)| over R and t in [0, 2000]"))
}

fn eps_critical_continuity(ctx: &Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for kappa in [0.5, 1.0, 4.0] {
        let g = kappa / 2.0;
        let lo = SystemParams64::new(kappa * (1.0 - 1e-9), g, 0.5)?;
        let hi = SystemParams64::new(kappa * (1.0 + 1e-9), g, 0.5)?;
        let at = SystemParams64::new(kappa, g, 0.5)?;
        for t in linspace(0.0, 40.0 / kappa, 401) {
            let c = ctx.eps(&at).at(t)?;
            worst = worst.max((ctx.eps(&lo).at(t)? - c).abs()).max((ctx.eps(&hi).at(t)? - c).abs());
        }
    }
    Ok(Measure::below(worst, 1e-7, "max |eps| jump at kappa = 2 g_T (1 +- 1e-9)"))
}

fn norm_bound(ctx: &Ctx) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for r in RATIOS {
        for (s, phi, r1) in ORACLE_STATES {
            let p = SystemParams64::from_ratio(r, r1)?;
            let init = InitialState64::new(s, phi, r1)?;
            for t in linspace(0.0, 50.0, 501) {
                let (u1, u2) = ctx.amplitudes(&p, &init, t)?;
                worst = worst.max(u1.norm_sqr() + u2.norm_sqr() - 1.0);
            }
        }
    }
    Ok(Measure::at_most(worst, 1e-14, "max |u1|^2 + |u2|^2 - 1"))
}

fn stationary_kappa_independence(ctx: &Ctx) -> Outcome {
    let mut spread = 0.0f64;
    let mut late = 0.0f64;
    for (s, phi, r1) in ORACLE_STATES {
        let init = InitialState64::new(s, phi, r1)?;
        let cs = stationary_concurrence(&init, r1);
        for kappa in [0.1, 1.0, 10.0] {
            let p = SystemParams64::new(kappa, 0.5 * kappa, r1)?;
            spread = spread.max((stationary_concurrence(&init, p.r1()) - cs).abs());
            let (u1, u2) = ctx.amplitudes(&p, &init, 400.0 / kappa)?;
            late = late.max((closed_form_concurrence(u1, u2) - cs).abs());
        }
    }
    let metric = spread.max(late * 1e-6);
    Ok(Measure {
        passed: spread <= 1e-15 && late < 1e-9,
        metric,
        threshold: 1e-15,
        detail: format!("formula spread {spread:e}; late-time closed form vs stationary {late:e}"),
    })
}

fn stationary_maxima(_: &Ctx) -> Outcome {
    let c_star = 3.0 * 3f64.sqrt() / 8.0;
    let (r_plus, c_plus) = max_stationary_concurrence::<f64>(1.0, 0.0)?;
    let (r_minus, c_minus) = max_stationary_concurrence::<f64>(-1.0, 0.0)?;
    let (r_sub, c_sub) = max_stationary_concurrence::<f64>(0.0, PI)?;
    let dev = (r_plus - 0.75f64.sqrt())
        .abs()
        .max((c_plus - c_star).abs())
        .max((r_minus - 0.5).abs())
        .max((c_minus - c_star).abs());
    let sub = (r_sub - FRAC_1_SQRT_2).abs().max((c_sub - 1.0).abs());
    Ok(Measure {
        passed: dev < 1e-6 && sub < 1e-9,
        metric: dev,
        threshold: 1e-6,
        detail: format!(
            "s=1: r1*={r_plus:.8} C*={c_plus:.8}; s=-1: r1*={r_minus:.8} C*={c_minus:.8}; s=0,phi=pi: r1*={r_sub:.10} C*={c_sub:.12}"
        ),
    })
}

fn argmax_symmetry(_: &Ctx) -> Outcome {
    let (rp, cp) = max_stationary_concurrence::<f64>(1.0, 0.0)?;
    let (rm, cm) = max_stationary_concurrence::<f64>(-1.0, 0.0)?;
    let dev = (rp * rp + rm * rm - 1.0).abs().max((cp - cm).abs());
    Ok(Measure::below(dev, 1e-6, format!("r1*(+1)^2 + r1*(-1)^2 = {}", rp * rp + rm * rm)))
}

fn markov_limit(ctx: &Ctx) -> Outcome {
    let p = SystemParams64::from_ratio(0.01, 0.5)?;
    let gamma = p.markov_rate().expect("kappa > 0");
    let eps = ctx.eps(&p);
    let mut worst = 0.0f64;
    for t in linspace(0.0, 5.0 / gamma, 20001) {
        let e = eps.at(t)?;
        worst = worst.max((e * e - (-gamma * t).exp()).abs());
    }
    Ok(Measure::at_most(worst, 0.02, "sup |eps^2 - exp(-gamma t)| at R = 0.01, t in [0, 5/gamma]"))
}

fn jaynes_cummings_limit(ctx: &Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for g in [0.3, 1.0, 7.0] {
        let p = SystemParams64::new(0.0, g, 0.4)?;
        let eps = ctx.eps(&p);
        for t in linspace(0.0, 50.0, 5001) {
            worst = worst.max((eps.at(t)? - (g * t).cos()).abs());
        }
    }
    Ok(Measure::below(worst, 1e-12, "max |eps(t) - cos(g_T t)| at kappa = 0"))
}

fn random_amplitudes(rng: &mut StdRng) -> (Complex64, Complex64) {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return (Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]));
        }
    }
}

fn wootters_closed_form_equivalence(_: &Ctx) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (u1, u2) = random_amplitudes(&mut rng);
        let c = wootters_concurrence(&density_matrix(u1, u2)?)?.value;
        worst = worst.max((c - closed_form_concurrence(u1, u2)).abs());
    }
    Ok(Measure::below(worst, 1e-9, "max |Wootters - 2|u1 u2|| over 1000 random one-excitation states"))
}

fn concurrence_phase_invariance(_: &Ctx) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (u1, u2) = random_amplitudes(&mut rng);
        let base_w = wootters_concurrence(&density_matrix(u1, u2)?)?.value;
        let base_c = closed_form_concurrence(u1, u2);
        let (a, b) = (
            Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI)),
            Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI)),
        );
        let w = wootters_concurrence(&density_matrix(u1 * a, u2 * b)?)?.value;
        let c = closed_form_concurrence(u1 * a, u2 * b);
        worst = worst.max((w - base_w).abs()).max((c - base_c).abs());
    }
    Ok(Measure::below(worst, 1e-12, "max change under local phases"))
}

fn diagonal_states_unentangled(_: &Ctx) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let w: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..1.0));
        let total: f64 = w.iter().sum();
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for k in 0..4 {
            m[k][k] = Complex64::new(w[k] / total, 0.0);
        }
        worst = worst.max(wootters_concurrence(&DensityMatrix64::new(m)?)?.value);
    }
    Ok(Measure::below(worst, 1e-12, "max concurrence of random diagonal states"))
}

fn random_mixed_state(rng: &mut StdRng) -> qzc_core::Result<DensityMatrix64> {
    let mut a = [[Complex64::new(0.0, 0.0); 4]; 4];
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    let mut tr = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (0..4).map(|k| a[i][k] * a[j][k].conj()).sum();
        }
        tr += m[i][i].re;
    }
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x /= tr;
        }
    }
    DensityMatrix64::new(m)
}

fn concurrence_range(_: &Ctx) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    let mut outside = 0usize;
    for _ in 0..500 {
        let c = wootters_concurrence(&random_mixed_state(&mut rng)?)?.value;
        if !(0.0..=1.0).contains(&c) {
            outside += 1;
        }
    }
    Ok(Measure::at_most(outside as f64, 0.0, "random mixed states with concurrence outside [0, 1]"))
}

fn bell_and_product_states(_: &Ctx) -> Outcome {
    let zero = Complex64::new(0.0, 0.0);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut worst = 0.0f64;
    for bell in [[h, zero, zero, h], [zero, h, -h, zero], [zero, h, h * Complex64::i(), zero]] {
        worst = worst.max((wootters_concurrence(&DensityMatrix64::pure(bell)?)?.value - 1.0).abs());
    }
    let (a, b) = (0.6f64, 0.8f64);
    let (c, d) = (Complex64::new(0.28, 0.96), Complex64::new(0.0, 0.0));
    let (x, y) = (Complex64::new(0.0, 1.0) * 0.6, Complex64::new(0.8, 0.0));
    let product = [x * c * a, x * d, y * c * b, y * d];
    let product2 = [
        Complex64::new(a * 0.6, 0.0),
        Complex64::new(a * 0.8, 0.0),
        Complex64::new(b * 0.6, 0.0),
        Complex64::new(b * 0.8, 0.0),
    ];
    for psi in [product, product2, [zero, zero, zero, Complex64::new(1.0, 0.0)]] {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi = psi.map(|z| z / norm);
        worst = worst.max(wootters_concurrence(&DensityMatrix64::pure(psi)?)?.value);
    }
    Ok(Measure::below(worst, 1e-12, "Bell states give 1, product states give 0"))
}

fn kernel_quadrature(_: &Ctx) -> Outcome {
    let sd = SpectralDensity::new(1.0, 0.0)?;
    let mut worst = 0.0f64;
    for tau in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let f = correlation_function_numeric(&sd, tau, KERNEL_CUTOFF, KERNEL_POINTS)?;
        worst = worst.max((f - Complex64::new((-tau).exp(), 0.0)).norm());
    }
    Ok(Measure::below(worst, 1e-4, "max |f(tau) - exp(-kappa tau)| at kappa tau in {0, 0.5, 1, 2, 5}"))
}

/// Largest amplitude deviation between the closed form and an oracle run.
pub fn oracle_deviation(
    eps: &SurvivalAmplitude<f64>,
    p: &SystemParams64,
    init: &InitialState64,
    sol: &VolterraSolution64,
) -> qzc_core::Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..sol.len() {
        let (u1, u2) = amplitudes_with(eps, p, init, sol.times[k])?;
        worst = worst.max((u1 - sol.u1[k]).norm()).max((u2 - sol.u2[k]).norm());
    }
    Ok(worst)
}

fn oracle_cases() -> Vec<(f64, (f64, f64, f64))> {
    ORACLE_RATIOS.iter().flat_map(|&r| ORACLE_STATES.iter().map(move |&st| (r, st))).collect()
}

fn oracle_equivalence_ode(ctx: &Ctx) -> Outcome {
    let devs = oracle_cases()
        .par_iter()
        .map(|&(r, (s, phi, r1))| {
            let p = SystemParams64::from_ratio(r, r1)?;
            let init = InitialState64::new(s, phi, r1)?;
            let sol = solve_volterra(&p, &init, ORACLE_TAU_MAX, max_step(&p))?;
            oracle_deviation(&ctx.eps(&p), &p, &init, &sol)
        })
        .collect::<qzc_core::Result<Vec<_>>>()?;
    let worst = devs.iter().copied().fold(0.0, f64::max);
    Ok(Measure::below(
        worst,
        1e-6,
        "max amplitude deviation, closed form vs ODE oracle, R in {0.1, 10}, tau in [0, 20]",
    ))
}

fn oracle_equivalence_quadrature(ctx: &Ctx) -> Outcome {
    let devs = oracle_cases()
        .par_iter()
        .map(|&(r, (s, phi, r1))| {
            let p = SystemParams64::from_ratio(r, r1)?;
            let init = InitialState64::new(s, phi, r1)?;
            let step = max_step(&p) * QUADRATURE_STEP_FRACTION;
            let sol = solve_volterra_quadrature(&p, &init, ORACLE_TAU_MAX, step)?;
            oracle_deviation(&ctx.eps(&p), &p, &init, &sol)
        })
        .collect::<qzc_core::Result<Vec<_>>>()?;
    let worst = devs.iter().copied().fold(0.0, f64::max);
    Ok(Measure::below(
        worst,
        5e-6,
        "max amplitude deviation, closed form vs history quadrature, R in {0.1, 10}, tau in [0, 20]",
    ))
}

fn convergence_order(ctx: &Ctx) -> Outcome {
    let p = SystemParams64::from_ratio(1.0, 0.87)?;
    let init = InitialState64::new(1.0, 0.0, 0.87)?;
    let eps = ctx.eps(&p);
    let h = max_step(&p);
    let dev = |sol: VolterraSolution64| oracle_deviation(&eps, &p, &init, &sol);
    let rk = dev(solve_volterra(&p, &init, 10.0, h)?)? / dev(solve_volterra(&p, &init, 10.0, h / 2.0)?)?;
    let quad = dev(solve_volterra_quadrature(&p, &init, 10.0, h)?)?
        / dev(solve_volterra_quadrature(&p, &init, 10.0, h / 2.0)?)?;
    Ok(Measure {
        passed: (12.0..20.0).contains(&rk) && (3.2..4.8).contains(&quad),
        metric: rk,
        threshold: 16.0,
        detail: format!("error ratio on step halving: RK4 {rk:.3} (~16), quadrature {quad:.3} (~4)"),
    })
}

fn reservoir_population(_: &Ctx) -> Outcome {
    let mut worst = f64::INFINITY;
    for (r, (s, phi, r1)) in oracle_cases() {
        let p = SystemParams64::from_ratio(r, r1)?;
        let init = InitialState64::new(s, phi, r1)?;
        let sol = solve_volterra(&p, &init, ORACLE_TAU_MAX, max_step(&p))?;
        worst = sol.reservoir_population().into_iter().fold(worst, f64::min);
    }
    Ok(Measure {
        passed: worst >= -1e-8,
        metric: worst,
        threshold: -1e-8,
        detail: "min 1 - |u1|^2 - |u2|^2 over oracle runs".into(),
    })
}

fn decoherence_free_characterization(_: &Ctx) -> Outcome {
    let mut wrong = Vec::new();
    for r1 in [0.3, 0.6, FRAC_1_SQRT_2, 0.87] {
        let p = SystemParams64::from_ratio(2.0, r1)?;
        let sub = InitialState64::sub_radiant(r1)?;
        let candidates = [
            (sub, true),
            (InitialState64::super_radiant(r1)?, false),
            (InitialState64::new(1.0, 0.0, r1)?, false),
            (InitialState64::new(0.2, 1.3, r1)?, false),
        ];
        for (init, expect_frozen) in candidates {
            let sol = solve_volterra(&p, &init, max_step(&p), max_step(&p))?;
            let frozen = sol.initial_rate() < 1e-9;
            if frozen != expect_frozen {
                wrong.push(format!("r1={r1} s={} phi={}", init.s(), init.phi()));
            }
        }
    }
    Ok(Measure::flag(wrong.is_empty(), format!("zero initial rate iff sub-radiant; mismatches: {wrong:?}")))
}

fn sub_radiant_invariance(ctx: &Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for r in [0.1, 1.0, 10.0] {
        for r1 in [0.3, FRAC_1_SQRT_2, 0.87] {
            let p = SystemParams64::from_ratio(r, r1)?;
            let init = InitialState64::sub_radiant(r1)?;
            let target = 2.0 * r1 * p.r2();
            let sol = solve_volterra(&p, &init, ORACLE_TAU_MAX, max_step(&p))?;
            for k in 0..sol.len() {
                let (u1, u2) = ctx.amplitudes(&p, &init, sol.times[k])?;
                worst = worst
                    .max((closed_form_concurrence(u1, u2) - target).abs())
                    .max((closed_form_concurrence(sol.u1[k], sol.u2[k]) - target).abs());
            }
        }
    }
    Ok(Measure::below(worst, 1e-8, "max |C(tau) - 2 r1 r2| from the sub-radiant state"))
}

fn zeno_rate_identity(_: &Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for r in [0.1, 1.0, 10.0] {
        let p = SystemParams64::from_ratio(r, 0.5)?;
        for kt in [0.001, 0.01, 0.1, 1.0] {
            let e = qzc_core::survival_amplitude(&p, kt)?;
            if e.abs() < 1e-6 {
                continue;
            }
            let rate = zeno_rate(&p, kt)?;
            for n in [1usize, 10, 100] {
                let lhs = (-rate * n as f64 * kt).exp();
                let rhs = e.powi(2 * n as i32);
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    Ok(Measure::below(worst, 1e-12, "max |exp(-lambda_z N T) - eps(T)^(2N)|"))
}

fn zeno_freezing_limit(_: &Ctx) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for r in [0.1, 10.0] {
        let p = SystemParams64::from_ratio(r, FRAC_1_SQRT_2)?;
        let init = InitialState64::new(0.0, 0.0, FRAC_1_SQRT_2)?;
        let (a, b) = (init.c01(), init.c02());
        let c0 = closed_form_concurrence(a, b);
        let mut prev = f64::INFINITY;
        for kt in [1e-2, 1e-3, 1e-4] {
            let (u1, u2) = zeno_amplitudes(&init, &p, kt, 1.0)?;
            let gap = (closed_form_concurrence(u1, u2) - c0).abs();
            ok &= gap < prev;
            prev = gap;
            detail.push(format!("R={r} kT={kt}: {gap:.3e}"));
        }
    }
    Ok(Measure::flag(ok, format!("|C_N(tau=1) - C(0)| decreasing: {}", detail.join(", "))))
}

fn zeno_sudden_death_removal(ctx: &Ctx) -> Outcome {
    let r1 = FRAC_1_SQRT_2;
    let p = SystemParams64::from_ratio(10.0, r1)?;
    let init = InitialState64::new(0.0, 0.0, r1)?;
    let taus = linspace(0.0, 1.0, 2001);
    let mut first_zero = None;
    for &t in &taus {
        let (u1, u2) = ctx.amplitudes(&p, &init, t)?;
        if closed_form_concurrence(u1, u2) < 1e-3 {
            first_zero = Some(t);
            break;
        }
    }
    let mut protected_min = f64::INFINITY;
    for &t in &taus {
        let (u1, u2) = zeno_amplitudes(&init, &p, 0.001, t)?;
        protected_min = protected_min.min(closed_form_concurrence(u1, u2));
    }
    Ok(Measure {
        passed: first_zero.is_some() && protected_min > 0.9,
        metric: protected_min,
        threshold: 0.9,
        detail: format!(
            "unmeasured C reaches 0 near tau={first_zero:?}; min C with kappa T = 0.001: {protected_min:.6}"
        ),
    })
}

fn zeno_ordering(_: &Ctx) -> Outcome {
    let mut violations = 0usize;
    for (r, intervals) in [(10.0, GOOD_CAVITY_INTERVALS), (0.1, BAD_CAVITY_INTERVALS)] {
        let p = SystemParams64::from_ratio(r, FRAC_1_SQRT_2)?;
        let init = InitialState64::new(0.0, 0.0, FRAC_1_SQRT_2)?;
        let tau_max = if r > 1.0 { 1.0 } else { 300.0 };
        for t in linspace(0.0, tau_max, 501).into_iter().skip(1) {
            let mut prev = -1.0;
            for kt in intervals {
                let (u1, u2) = zeno_amplitudes(&init, &p, kt, t)?;
                let c = closed_form_concurrence(u1, u2);
                if c <= prev {
                    violations += 1;
                }
                prev = c;
            }
        }
    }
    Ok(Measure::at_most(violations as f64, 0.0, "points where C does not increase as kappa T decreases"))
}

/// `(R, kappa T)` grid of the mechanistic check; every interval has `eps(T) > 0`.
pub const MECHANISTIC_GRID: [(f64, f64); 9] = [
    (0.1, 0.1),
    (0.1, 0.01),
    (0.1, 0.001),
    (1.0, 0.1),
    (1.0, 0.01),
    (1.0, 0.001),
    (10.0, 0.1),
    (10.0, 0.01),
    (10.0, 0.001),
];
pub const MECHANISTIC_TAU: f64 = 1.0;
pub const MECHANISTIC_STEP_FRACTION: f64 = 0.25;

/// Largest `|closed form - mechanistic|` concurrence gap over [`MECHANISTIC_GRID`].
pub fn mechanistic_gap() -> qzc_core::Result<f64> {
    let r1 = FRAC_1_SQRT_2;
    let init = InitialState64::new(0.0, 0.0, r1)?;
    let gaps = MECHANISTIC_GRID
        .par_iter()
        .map(|&(r, kt)| {
            let p = SystemParams64::from_ratio(r, r1)?;
            let n = (MECHANISTIC_TAU / kt).round() as usize;
            let sched = ZenoSchedule64::new(kt, n)?;
            let closed = zeno_concurrence(&init, &p, &sched)?;
            let step = (max_step(&p) * MECHANISTIC_STEP_FRACTION).min(kt);
            let mech = qzc_core::mechanistic_zeno_simulation(&init, &p, &sched, step)?;
            Ok((closed - mech).abs())
        })
        .collect::<qzc_core::Result<Vec<_>>>()?;
    Ok(gaps.into_iter().fold(0.0, f64::max))
}

fn zeno_mechanistic_agreement(_: &Ctx) -> Outcome {
    let gap = mechanistic_gap()?;
    Ok(Measure::below(
        gap,
        1e-5,
        "max |closed form - mechanistic| over R in {0.1, 1, 10} x kappa T in {0.1, 0.01, 0.001}",
    ))
}

fn csv_determinism(_: &Ctx) -> Outcome {
    let mut same = true;
    for id in ["fig1a", "fig3b", "fig4a"] {
        let p = presets::preset(id).expect("known preset");
        same &= render::csv(&p.build()?) == render::csv(&p.build()?);
    }
    Ok(Measure::flag(same, "repeated preset builds give byte-identical CSV"))
}

fn preset_fidelity(_: &Ctx) -> Outcome {
    let mut wrong = Vec::new();
    let layout = [(1.0, 0.0), (0.0, 0.0), (1.0, PI), (0.0, PI)];
    for (family, ratio) in [("fig2", 0.1), ("fig3", 10.0)] {
        for (panel, &(s, phi)) in ["a", "b", "c", "d"].iter().zip(&layout) {
            let id = format!("{family}{panel}");
            match presets::preset(&id).map(|p| p.kind) {
                Some(PresetKind::Dynamics { ratio: r, s: s0, phi: p0 }) if (r, s0, p0) == (ratio, s, phi) => {}
                _ => wrong.push(id),
            }
        }
    }
    if R1_SERIES != [0.87, FRAC_1_SQRT_2, 0.0, 1.0] {
        wrong.push("r1 series".into());
    }
    for (id, ratio, set) in [("fig4a", 10.0, [0.01, 0.005, 0.001]), ("fig4b", 0.1, [5.0, 1.0, 0.1])] {
        match presets::preset(id).map(|p| p.kind) {
            Some(PresetKind::Zeno { ratio: r, s, phi, r1, intervals })
                if r == ratio && s == 0.0 && phi == 0.0 && r1 == FRAC_1_SQRT_2 && intervals == set => {}
            _ => wrong.push(id.into()),
        }
    }
    for (id, phi) in [("fig1a", 0.0), ("fig1b", PI)] {
        match presets::preset(id).map(|p| p.kind) {
            Some(PresetKind::Stationary { phi: p, .. }) if p == phi => {}
            _ => wrong.push(id.into()),
        }
    }
    Ok(Measure::flag(wrong.is_empty(), format!("presets matching caption parameters; mismatches: {wrong:?}")))
}

fn series_gap(a: &crate::data::Series, b: &crate::data::Series) -> f64 {
    a.samples.iter().zip(&b.samples).map(|(x, y)| (x.concurrence - y.concurrence).abs()).fold(0.0, f64::max)
}

fn figure_overlap(_: &Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for id in ["fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d"] {
        if let Dataset::Series(s) = presets::preset(id).expect("known preset").build()? {
            worst = worst.max(series_gap(&s[2], &s[3]));
        }
    }
    for (a, b) in [("fig2a", "fig2c"), ("fig3a", "fig3c")] {
        let build = |id| presets::preset(id).expect("known preset").build();
        if let (Dataset::Series(x), Dataset::Series(y)) = (build(a)?, build(b)?) {
            for (sx, sy) in x.iter().zip(&y) {
                worst = worst.max(series_gap(sx, sy));
            }
        }
    }
    Ok(Measure::below(worst, 1e-12, "r1=0 vs r1=1 series, and s=1 panels phi=0 vs phi=pi"))
}

fn svg_structure(_: &Ctx) -> Outcome {
    let mut ok = true;
    for id in ["fig2b", "fig4a"] {
        if let Dataset::Series(s) = presets::preset(id).expect("known preset").build()? {
            let doc = render::series_svg(&s, id);
            ok &= doc.matches("<polyline").count() == s.len();
            ok &= doc.contains(">τ</text>") && doc.contains(">C</text>");
            ok &= doc.trim_end().ends_with("</svg>");
        }
    }
    Ok(Measure::flag(ok, "one polyline per series, axis labels tau and C"))
}
