//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qzc_core::volterra::{max_step, SpectralDensity};
use qzc_core::zeno::zeno_amplitudes;
use qzc_core::{
    amplitudes, closed_form_concurrence, correlation_function_numeric, density_matrix, max_stationary_concurrence,
    mechanistic_zeno_simulation, solve_volterra, solve_volterra_quadrature, survival_amplitude, wootters_concurrence,
    zeno_concurrence, Complex64, DensityMatrix64, InitialState64, SystemParams64, VolterraSolution64, ZenoSchedule64,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

fn stationary_maxima() -> Verdict {
    let start = Instant::now();
    let c_star = 3.0 * 3f64.sqrt() / 8.0;
    let (rp, cp) = max_stationary_concurrence::<f64>(1.0, 0.0).map_err(|e| e.to_string())?;
    let (rm, cm) = max_stationary_concurrence::<f64>(-1.0, 0.0).map_err(|e| e.to_string())?;
    let (rs, cs) = max_stationary_concurrence::<f64>(0.0, PI).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let ok = (rp - 0.75f64.sqrt()).abs() < 1e-6
        && (cp - c_star).abs() < 1e-6
        && (rm - 0.5).abs() < 1e-6
        && (cm - c_star).abs() < 1e-6
        && (rs - FRAC_1_SQRT_2).abs() < 1e-9
        && (cs - 1.0).abs() < 1e-9
        && elapsed < Duration::from_secs(1);
    ensure(
        ok,
        format!(
            "(s=1) r1*={rp:.6} C*={cp:.5}; (s=-1) r1*={rm:.6} C*={cm:.5}; (s=0, phi=pi) r1*={rs:.10} C*={cs:.10}; {elapsed:.2?}"
        ),
    )
}

fn oracle_deviation(p: &SystemParams64, init: &InitialState64, sol: &VolterraSolution64) -> f64 {
    let mut worst = 0.0f64;
    for k in 0..sol.len() {
        let (u1, u2) = amplitudes(p, init, sol.times[k]).unwrap();
        worst = worst.max((u1 - sol.u1[k]).norm()).max((u2 - sol.u2[k]).norm());
    }
    worst
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let states = [(1.0, 0.0, 0.87), (0.0, 0.0, FRAC_1_SQRT_2), (0.0, PI, 0.87), (0.0, PI, 1.0)];
    let (mut ode, mut quad) = (0.0f64, 0.0f64);
    for ratio in [0.1, 10.0] {
        for (s, phi, r1) in states {
            let p = SystemParams64::from_ratio(ratio, r1).unwrap();
            let init = InitialState64::new(s, phi, r1).unwrap();
            let h = max_step(&p);
            ode = ode.max(oracle_deviation(&p, &init, &solve_volterra(&p, &init, 20.0, h).map_err(|e| e.to_string())?));
            let q = solve_volterra_quadrature(&p, &init, 20.0, h / 8.0).map_err(|e| e.to_string())?;
            quad = quad.max(oracle_deviation(&p, &init, &q));
        }
    }
    let elapsed = start.elapsed();
    ensure(
        ode < 1e-6 && quad < 5e-6 && elapsed < Duration::from_secs(30),
        format!("max deviation ODE {ode:.2e} (< 1e-6), history quadrature {quad:.2e} (< 5e-6); {elapsed:.2?}"),
    )
}

fn limits() -> Verdict {
    let p = SystemParams64::from_ratio(0.01, 0.4).unwrap();
    let gamma = p.markov_rate().unwrap();
    let markov = linspace(0.0, 5.0 / gamma, 20001)
        .into_iter()
        .map(|t| {
            let e = survival_amplitude(&p, t).unwrap();
            (e * e - (-gamma * t).exp()).abs()
        })
        .fold(0.0, f64::max);

    let mut jc = 0.0f64;
    for g in [0.5, 1.0, 3.0] {
        let p = SystemParams64::new(0.0, g, 0.3).unwrap();
        for t in linspace(0.0, 30.0, 3001) {
            jc = jc.max((survival_amplitude(&p, t).unwrap() - (g * t).cos()).abs());
        }
    }

    let sd = SpectralDensity::new(1.0, 0.0).unwrap();
    let mut kernel = 0.0f64;
    for tau in [0.0f64, 0.5, 1.0, 2.0, 5.0] {
        let f = correlation_function_numeric(&sd, tau, 2.0e4, 2_000_001).map_err(|e| e.to_string())?;
        kernel = kernel.max((f - Complex64::new((-tau).exp(), 0.0)).norm());
    }
    ensure(
        markov <= 0.02 && jc < 1e-12 && kernel < 1e-4,
        format!("(a) Markov sup {markov:.2e} (<= 0.02); (b) Jaynes-Cummings {jc:.1e} (< 1e-12); (c) kernel {kernel:.2e} (< 1e-4)"),
    )
}

fn concurrence_engine() -> Verdict {
    let mut rng = StdRng::seed_from_u64(20260101);
    let mut worst = 0.0f64;
    let mut drawn = 0;
    while drawn < 1000 {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
        if v.iter().map(|x| x * x).sum::<f64>() > 1.0 {
            continue;
        }
        drawn += 1;
        let (u1, u2) = (Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]));
        let w = wootters_concurrence(&density_matrix(u1, u2).unwrap()).unwrap().value;
        worst = worst.max((w - closed_form_concurrence(u1, u2)).abs());
    }
    let z = Complex64::new(0.0, 0.0);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let bell = wootters_concurrence(&DensityMatrix64::pure([h, z, z, h]).unwrap()).unwrap().value;
    let one = Complex64::new(1.0, 0.0);
    let product_a = [z, one, z, z];
    let product_b = [h * 0.6, h * 0.8, h * 0.6, h * 0.8];
    let product = [product_a, product_b]
        .iter()
        .map(|&psi| wootters_concurrence(&DensityMatrix64::pure(psi).unwrap()).unwrap().value)
        .fold(0.0, f64::max);
    ensure(
        worst < 1e-9 && (bell - 1.0).abs() < 1e-12 && product < 1e-12,
        format!("1000 random states max |Wootters - closed form| {worst:.1e}; Bell {bell}; product {product:.1e}"),
    )
}

fn sub_radiant_invariance() -> Verdict {
    let mut worst = 0.0f64;
    for ratio in [0.01, 0.1, 1.0, 10.0, 100.0] {
        for r1 in [0.2, FRAC_1_SQRT_2, 0.87] {
            let p = SystemParams64::from_ratio(ratio, r1).unwrap();
            let init = InitialState64::sub_radiant(r1).unwrap();
            let target = 2.0 * r1 * p.r2();
            let sol = solve_volterra(&p, &init, 20.0, max_step(&p)).map_err(|e| e.to_string())?;
            for k in (0..sol.len()).step_by(7) {
                let (u1, u2) = amplitudes(&p, &init, sol.times[k]).unwrap();
                let analytic = wootters_concurrence(&density_matrix(u1, u2).unwrap()).unwrap().value;
                let numeric = closed_form_concurrence(sol.u1[k], sol.u2[k]);
                worst = worst.max((analytic - target).abs()).max((numeric - target).abs());
            }
        }
    }
    ensure(worst < 1e-8, format!("max |C(tau) - 2 r1 r2| = {worst:.1e} over R in [0.01, 100], tau in [0, 20]"))
}

fn measured(p: &SystemParams64, init: &InitialState64, kt: f64, t: f64) -> f64 {
    let (u1, u2) = zeno_amplitudes(init, p, kt, t).unwrap();
    closed_form_concurrence(u1, u2)
}

fn zeno_protection() -> Verdict {
    let start = Instant::now();
    let r1 = FRAC_1_SQRT_2;
    let init = InitialState64::new(0.0, 0.0, r1).unwrap();
    let good = SystemParams64::from_ratio(10.0, r1).unwrap();

    let taus = linspace(0.0, 1.0, 1001);
    let crossing = taus
        .windows(2)
        .find(|w| survival_amplitude(&good, w[0]).unwrap() > 0.0 && survival_amplitude(&good, w[1]).unwrap() <= 0.0);
    let root = match crossing {
        Some(w) => {
            let (mut lo, mut hi) = (w[0], w[1]);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if survival_amplitude(&good, mid).unwrap() > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        }
        None => return Err("unmeasured survival amplitude has no root on [0, 1]".into()),
    };
    let (u1, u2) = amplitudes(&good, &init, root).unwrap();
    let c_at_root = closed_form_concurrence(u1, u2);
    let protected = taus.iter().map(|&t| measured(&good, &init, 0.001, t)).fold(f64::INFINITY, f64::min);

    let mut ordering_violations = 0;
    let bad = SystemParams64::from_ratio(0.1, r1).unwrap();
    for (p, intervals, tau_max) in [(&good, [0.01, 0.005, 0.001], 1.0), (&bad, [5.0, 1.0, 0.1], 300.0)] {
        for t in linspace(0.0, tau_max, 601).into_iter().skip(1) {
            let c: Vec<f64> = intervals.iter().map(|&kt| measured(p, &init, kt, t)).collect();
            if !(c[0] < c[1] && c[1] < c[2]) {
                ordering_violations += 1;
            }
        }
    }

    let mut mech_gap = 0.0f64;
    let grid = [0.1, 1.0, 10.0].iter().flat_map(|&r| [0.1, 0.01, 0.001].map(move |kt| (r, kt)));
    let fig4a = [0.01, 0.005, 0.001].map(|kt| (10.0, kt));
    for (ratio, kt) in grid.chain(fig4a) {
        let p = SystemParams64::from_ratio(ratio, r1).unwrap();
        let sched = ZenoSchedule64::new(kt, (1.0 / kt).round() as usize).unwrap();
        let closed = zeno_concurrence(&init, &p, &sched).map_err(|e| e.to_string())?;
        let step = (max_step(&p) / 4.0).min(kt);
        let mech = mechanistic_zeno_simulation(&init, &p, &sched, step).map_err(|e| e.to_string())?;
        mech_gap = mech_gap.max((closed - mech).abs());
    }
    let elapsed = start.elapsed();
    ensure(
        c_at_root < 1e-12 && protected > 0.9 && ordering_violations == 0 && mech_gap < 1e-5 && elapsed < Duration::from_secs(60),
        format!(
            "unmeasured C hits 0 at tau={root:.6}; min C (kappa T=0.001) {protected:.4}; ordering violations {ordering_violations}; mechanistic gap {mech_gap:.1e}; {elapsed:.2?}"
        ),
    )
}

fn read_series(path: &Path) -> Vec<(String, Vec<f64>)> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut out: Vec<(String, Vec<f64>)> = Vec::new();
    for line in text.lines().skip(1) {
        let mut cols = line.split(',');
        let label = cols.next().unwrap().to_string();
        let c: f64 = cols.nth(1).unwrap().parse().unwrap();
        match out.last_mut() {
            Some((l, v)) if *l == label => v.push(c),
            _ => out.push((label, vec![c])),
        }
    }
    out
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn figure_reproduction() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let status = Command::new(env!("CARGO_BIN_EXE_qzc"))
        .args(["figures", "--output", "csv", "--out"])
        .arg(dir.path())
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("figures exited with {status}"));
    }
    let ids =
        ["fig1a", "fig1b", "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b"];
    let missing: Vec<_> = ids.iter().filter(|id| !dir.path().join(format!("{id}.csv")).is_file()).collect();
    if !missing.is_empty() {
        return Err(format!("missing CSV for {missing:?}"));
    }
    let mut overlap = 0.0f64;
    for id in &ids[2..10] {
        let series = read_series(&dir.path().join(format!("{id}.csv")));
        let get = |l: &str| &series.iter().find(|(x, _)| x == l).unwrap().1;
        overlap = overlap.max(max_gap(get("r1=0"), get("r1=1")));
    }
    let mut phase = 0.0f64;
    for (a, b) in [("fig2a", "fig2c"), ("fig3a", "fig3c")] {
        let (x, y) =
            (read_series(&dir.path().join(format!("{a}.csv"))), read_series(&dir.path().join(format!("{b}.csv"))));
        for ((_, cx), (_, cy)) in x.iter().zip(&y) {
            phase = phase.max(max_gap(cx, cy));
        }
    }
    ensure(
        overlap < 1e-12 && phase < 1e-12,
        format!("12 preset CSVs; r1=0 vs r1=1 max gap {overlap:.1e}; s=1 phi=0 vs phi=pi max gap {phase:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("stationary maxima", stationary_maxima),
        ("oracle equivalence", oracle_equivalence),
        ("limit checks", limits),
        ("concurrence engine", concurrence_engine),
        ("sub-radiant invariance", sub_radiant_invariance),
        ("Zeno protection", zeno_protection),
        ("figure reproduction", figure_reproduction),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let verdict = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match &verdict {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if verdict.is_err() {
            failed += 1;
        }
        println!("criterion {} [{tag}] {name}: {detail}", k + 1);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
