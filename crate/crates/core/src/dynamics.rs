//! Closed-form one-excitation dynamics: survival amplitude of the
//! super-radiant state, atomic amplitudes, stationary entanglement.

use num_complex::Complex;

use crate::concurrence::closed_form_concurrence;
use crate::density::DensityMatrix4;
use crate::error::{invalid, Error, Result};
use crate::model::{InitialState, SystemParams};
use crate::scalar::{lit, Real};

/// Which exponential envelope multiplies the oscillatory part of the
/// survival amplitude.
///
/// `HalfRate` (`exp(-kappa t / 2)`) is the solution of the memory-kernel
/// equations. `FullRate` (`exp(-kappa t)`) is kept only so that validation
/// can demonstrate that the numerical oracles reject it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecayPrefactor {
    #[default]
    HalfRate,
    FullRate,
}

/// `eps(t) = e^{-kappa t/2} [cosh(Omega t/2) + (kappa/Omega) sinh(Omega t/2)]`,
/// `Omega = sqrt(kappa^2 - 4 g_T^2)`.
///
/// Evaluated as `e^{-kappa t/2} [cosh x + (kappa t/2) sinh(x)/x]` with
/// `x = Omega t / 2`, which is regular at `Omega = 0` and switches to
/// `cos`/`sin` when `Omega` is imaginary. No intermediate overflows for any
/// `t`: the growing branch of `cosh` is always paired with the decay factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalAmplitude<T: Real = f64> {
    kappa: T,
    omega: Complex<T>,
    prefactor: DecayPrefactor,
}

impl<T: Real> SurvivalAmplitude<T> {
    pub fn new(p: &SystemParams<T>) -> Self {
        Self::with_prefactor(p, DecayPrefactor::HalfRate)
    }

    pub fn with_prefactor(p: &SystemParams<T>, prefactor: DecayPrefactor) -> Self {
        let kappa = p.kappa();
        let g = p.g_total();
        let disc = kappa * kappa - lit::<T>(4.0) * g * g;
        let omega = if disc >= T::zero() {
            Complex::new(disc.sqrt(), T::zero())
        } else {
            Complex::new(T::zero(), (-disc).sqrt())
        };
        Self { kappa, omega, prefactor }
    }

    /// `Omega`, real in the overdamped (bad cavity) regime, imaginary otherwise.
    pub fn omega(&self) -> Complex<T> {
        self.omega
    }

    pub fn at(&self, t: T) -> Result<T> {
        if !(t >= T::zero()) {
            return Err(Error::NegativeTime(t.to_f64().unwrap_or(f64::NAN)));
        }
        let half = lit::<T>(0.5);
        let hk = self.kappa * t * half;
        let decay = (-hk).exp();
        let critical = self.omega.norm() < lit::<T>(1e-9) * self.kappa;
        let value = if critical {
            decay * (T::one() + hk)
        } else if self.omega.im == T::zero() {
            let x = self.omega.re * t * half;
            if x < T::one() {
                decay * (x.cosh() + hk * sinhc(x))
            } else {
                let grow = (x - hk).exp();
                let fall = (-x - hk).exp();
                half * (grow + fall) + hk * (grow - fall) / (lit::<T>(2.0) * x)
            }
        } else {
            let y = self.omega.im * t * half;
            decay * (y.cos() + hk * sinc(y))
        };
        Ok(match self.prefactor {
            DecayPrefactor::HalfRate => value,
            DecayPrefactor::FullRate => value * decay,
        })
    }
}

fn sinhc<T: Real>(x: T) -> T {
    if x.abs() < lit(1e-6) {
        T::one() + x * x / lit(6.0)
    } else {
        x.sinh() / x
    }
}

fn sinc<T: Real>(y: T) -> T {
    if y.abs() < lit(1e-6) {
        T::one() - y * y / lit(6.0)
    } else {
        y.sin() / y
    }
}

pub fn survival_amplitude<T: Real>(p: &SystemParams<T>, t: T) -> Result<T> {
    SurvivalAmplitude::new(p).at(t)
}

/// Atomic amplitudes `(u1, u2)` at time `t`, from the sub-radiant part (frozen)
/// plus the super-radiant part scaled by `eps(t)`.
pub fn amplitudes<T: Real>(p: &SystemParams<T>, init: &InitialState<T>, t: T) -> Result<(Complex<T>, Complex<T>)> {
    amplitudes_with(&SurvivalAmplitude::new(p), p, init, t)
}

/// [`amplitudes`] with an explicit survival-amplitude evaluator.
pub fn amplitudes_with<T: Real>(
    eps: &SurvivalAmplitude<T>,
    p: &SystemParams<T>,
    init: &InitialState<T>,
    t: T,
) -> Result<(Complex<T>, Complex<T>)> {
    let e = eps.at(t)?;
    let basis = p.basis();
    let (bp, bm) = basis.project(init.c01(), init.c02());
    Ok(basis.compose(bp * e, bm))
}

/// Reduced two-atom state for amplitudes `(u1, u2)`.
pub fn density_matrix<T: Real>(u1: Complex<T>, u2: Complex<T>) -> Result<DensityMatrix4<T>> {
    DensityMatrix4::from_one_excitation(u1, u2)
}

/// Long-time concurrence `2 |r1 r2| |beta_minus|^2`, where `beta_minus` is the
/// overlap of `init` with the sub-radiant state for coupling split `r1`.
/// Independent of `kappa` and `g_total`.
pub fn stationary_concurrence<T: Real>(init: &InitialState<T>, r1: T) -> T {
    let r2 = (T::one() - r1 * r1).max(T::zero()).sqrt();
    let beta_minus = init.c01() * r2 - init.c02() * r1;
    lit::<T>(2.0) * (r1 * r2).abs() * beta_minus.norm_sqr()
}

/// `r2 * d C_s / d r1`, which has the sign of the slope on `(0, 1)`.
fn stationary_slope<T: Real>(init: &InitialState<T>, r1: T) -> T {
    let r2 = (T::one() - r1 * r1).max(T::zero()).sqrt();
    let (c01, c02) = (init.c01(), init.c02());
    let b = c01 * r2 - c02 * r1;
    let r2_times_db = -(c01 * r1 + c02 * r2);
    let two = lit::<T>(2.0);
    two * (r2 * r2 - r1 * r1) * b.norm_sqr() + two * two * r1 * r2 * (b.conj() * r2_times_db).re
}

/// Uniformly sampled closed-form evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T: Real = f64> {
    pub times: Vec<T>,
    pub u1: Vec<Complex<T>>,
    pub u2: Vec<Complex<T>>,
    pub eps: Vec<T>,
    pub concurrence: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Samples `n_samples` points on `[0, t_max]`, endpoints included.
pub fn trajectory<T: Real>(
    p: &SystemParams<T>,
    init: &InitialState<T>,
    t_max: T,
    n_samples: usize,
) -> Result<Trajectory<T>> {
    trajectory_with(&SurvivalAmplitude::new(p), p, init, t_max, n_samples)
}

pub fn trajectory_with<T: Real>(
    eps: &SurvivalAmplitude<T>,
    p: &SystemParams<T>,
    init: &InitialState<T>,
    t_max: T,
    n_samples: usize,
) -> Result<Trajectory<T>> {
    if !(t_max > T::zero()) || !t_max.is_finite() {
        return Err(invalid("t_max", format!("must be finite and > 0, got {t_max}")));
    }
    if n_samples < 2 {
        return Err(invalid("samples", format!("need at least 2, got {n_samples}")));
    }
    let last = T::from_usize(n_samples - 1).expect("sample count fits in float");
    let mut out = Trajectory {
        times: Vec::with_capacity(n_samples),
        u1: Vec::with_capacity(n_samples),
        u2: Vec::with_capacity(n_samples),
        eps: Vec::with_capacity(n_samples),
        concurrence: Vec::with_capacity(n_samples),
    };
    for k in 0..n_samples {
        let t = if k == n_samples - 1 { t_max } else { t_max * T::from_usize(k).expect("index fits in float") / last };
        let e = eps.at(t)?;
        let (u1, u2) = amplitudes_with(eps, p, init, t)?;
        out.times.push(t);
        out.u1.push(u1);
        out.u2.push(u2);
        out.eps.push(e);
        out.concurrence.push(closed_form_concurrence(u1, u2));
    }
    Ok(out)
}

/// Coupling split `r1*` in `[0, 1]` maximising the stationary concurrence of
/// the initial state `(s, phi)`, and the maximum itself.
///
/// A 1e-3 pre-scan picks the best bracket (the objective can be bimodal).
/// When the slope changes sign across the bracket, the maximum is located by
/// bisection on the analytic slope, to full precision in `r1`; otherwise
/// golden-section search refines it to 1e-10.
pub fn max_stationary_concurrence<T: Real>(s: T, phi: T) -> Result<(T, T)> {
    let init = InitialState::new(s, phi, T::zero())?;
    let f = |r1: T| stationary_concurrence(&init, r1);

    let n = 1000usize;
    let step = T::one() / T::from_usize(n).unwrap();
    let mut best = (0usize, f(T::zero()));
    for k in 1..=n {
        let v = f(T::from_usize(k).unwrap() * step);
        if v > best.1 {
            best = (k, v);
        }
    }
    let centre = T::from_usize(best.0).unwrap() * step;
    let mut a = (centre - step).max(T::zero());
    let mut b = (centre + step).min(T::one());

    if stationary_slope(&init, a) > T::zero() && stationary_slope(&init, b) < T::zero() {
        loop {
            let mid = (a + b) / lit(2.0);
            if mid <= a || mid >= b {
                break;
            }
            if stationary_slope(&init, mid) > T::zero() {
                a = mid;
            } else {
                b = mid;
            }
        }
        let r_star = if f(a) >= f(b) { a } else { b };
        return Ok((r_star, f(r_star)));
    }

    let inv_phi = (lit::<T>(5.0).sqrt() - T::one()) / lit(2.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let stop = crate::scalar::tol::<T>(1e-10);
    while b - a > stop {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    let mut r_star = (a + b) / lit(2.0);
    let mut c_star = f(r_star);
    // keep the scan point if refinement landed on a plateau edge
    let scanned = T::from_usize(best.0).unwrap() * step;
    if best.1 > c_star {
        r_star = scanned;
        c_star = best.1;
    }
    Ok((r_star, c_star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    /// Taylor series of the damped oscillator `e'' + kappa e' + g^2 e = 0`,
    /// `e(0) = 1`, `e'(0) = 0`, summed in steps of `h` for stability.
    fn ode_series(kappa: f64, g: f64, t: f64) -> f64 {
        let steps = (t / 0.05).ceil().max(1.0) as usize;
        let h = t / steps as f64;
        let (mut e, mut de) = (1.0f64, 0.0f64);
        for _ in 0..steps {
            let mut d = vec![e, de];
            for n in 0..40 {
                let next = -kappa * d[n + 1] - g * g * d[n];
                d.push(next);
            }
            let (mut ne, mut nde, mut fact) = (0.0, 0.0, 1.0);
            for n in 0..40 {
                if n > 0 {
                    fact *= n as f64;
                }
                ne += d[n] * h.powi(n as i32) / fact;
                nde += d[n + 1] * h.powi(n as i32) / fact;
            }
            e = ne;
            de = nde;
        }
        e
    }

    #[test]
    fn starts_at_one() {
        for &(k, g) in &[(1.0, 0.1), (1.0, 10.0), (2.0, 1.0), (0.0, 3.0)] {
            let p = SystemParams::<f64>::new(k, g, 0.5).unwrap();
            assert_eq!(survival_amplitude(&p, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn critical_damping() {
        let p = SystemParams::<f64>::new(2.0, 1.0, 0.5).unwrap();
        let e = survival_amplitude(&p, 1.0).unwrap();
        assert!((e - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!((e - 0.735759).abs() < 1e-6);
        assert!((e - ode_series(2.0, 1.0, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn lossless_limit_is_rabi_cosine() {
        let p = SystemParams::<f64>::new(0.0, 1.0, 0.5).unwrap();
        assert!(survival_amplitude(&p, PI / 2.0).unwrap().abs() < 1e-15);
        for k in 0..200 {
            let t = 0.1 * k as f64;
            assert!((survival_amplitude(&p, t).unwrap() - t.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_series_oracle_in_both_regimes() {
        for &(k, g) in &[(1.0, 0.1), (1.0, 0.45), (1.0, 0.55), (1.0, 10.0), (3.0, 0.2)] {
            let p = SystemParams::<f64>::new(k, g, 0.5).unwrap();
            for i in 0..=40 {
                let t = 0.25 * i as f64;
                let want = ode_series(k, g, t);
                let got = survival_amplitude(&p, t).unwrap();
                assert!((got - want).abs() < 1e-10, "k={k} g={g} t={t}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn markov_limit() {
        let p = SystemParams::<f64>::new(100.0, 1.0, 0.5).unwrap();
        let e = survival_amplitude(&p, 50.0).unwrap();
        assert!((e * e / (-1.0f64).exp() - 1.0).abs() < 0.02);
    }

    #[test]
    fn negative_time_is_rejected() {
        let p = SystemParams::<f64>::new(1.0, 1.0, 0.5).unwrap();
        assert!(matches!(survival_amplitude(&p, -1e-3), Err(Error::NegativeTime(_))));
        assert!(survival_amplitude(&p, f64::NAN).is_err());
    }

    #[test]
    fn huge_times_do_not_overflow() {
        for &g in &[0.01, 0.5, 1.0, 50.0] {
            let p = SystemParams::<f64>::new(1.0, g, 0.5).unwrap();
            for &t in &[700.0, 1500.0, 1e5] {
                let e = survival_amplitude(&p, t).unwrap();
                assert!(e.is_finite() && e.abs() <= 1.0, "g={g} t={t}: {e}");
            }
        }
    }

    #[test]
    fn continuous_across_critical_damping() {
        let g = 1.0;
        let lo = SystemParams::<f64>::new(2.0 * g * (1.0 - 1e-9), g, 0.5).unwrap();
        let hi = SystemParams::<f64>::new(2.0 * g * (1.0 + 1e-9), g, 0.5).unwrap();
        let mid = SystemParams::<f64>::new(2.0 * g, g, 0.5).unwrap();
        for i in 0..100 {
            let t = 0.1 * i as f64;
            let a = survival_amplitude(&lo, t).unwrap();
            let b = survival_amplitude(&hi, t).unwrap();
            let c = survival_amplitude(&mid, t).unwrap();
            assert!((a - b).abs() < 1e-7 && (a - c).abs() < 1e-7, "t={t}");
        }
    }

    #[test]
    fn omega_is_real_or_imaginary() {
        let bad = SurvivalAmplitude::new(&SystemParams::<f64>::new(1.0, 0.1, 0.5).unwrap());
        assert!(bad.omega().im == 0.0 && bad.omega().re > 0.0);
        let good = SurvivalAmplitude::new(&SystemParams::<f64>::new(1.0, 10.0, 0.5).unwrap());
        assert!(good.omega().re == 0.0 && good.omega().im > 0.0);
    }

    #[test]
    fn sub_radiant_amplitudes_are_frozen() {
        let init = InitialState::<f64>::new(0.0, PI, FRAC_1_SQRT_2).unwrap();
        let p = SystemParams::<f64>::from_ratio(10.0, FRAC_1_SQRT_2).unwrap();
        for i in 0..50 {
            let (u1, u2) = amplitudes(&p, &init, 0.4 * i as f64).unwrap();
            assert!((u1 - C::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
            assert!((u2 + C::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn amplitudes_at_zero_reconstruct_initial_state() {
        let p = SystemParams::<f64>::from_ratio(0.1, 0.87).unwrap();
        let init = InitialState::<f64>::new(0.3, 1.1, 0.87).unwrap();
        let (u1, u2) = amplitudes(&p, &init, 0.0).unwrap();
        assert!((u1 - init.c01()).norm() < 1e-15);
        assert!((u2 - init.c02()).norm() < 1e-15);
    }

    #[test]
    fn single_coupled_atom() {
        let p = SystemParams::<f64>::from_ratio(10.0, 1.0).unwrap();
        let init = InitialState::<f64>::new(0.2, 0.7, 1.0).unwrap();
        for i in 0..20 {
            let t = 0.37 * i as f64;
            let e = survival_amplitude(&p, t).unwrap();
            let (u1, u2) = amplitudes(&p, &init, t).unwrap();
            assert!((u1 - init.c01() * e).norm() < 1e-15);
            assert!((u2 - init.c02()).norm() < 1e-15);
        }
    }

    #[test]
    fn stationary_concurrence_examples() {
        let sub = InitialState::<f64>::new(0.0, PI, FRAC_1_SQRT_2).unwrap();
        assert!((stationary_concurrence(&sub, FRAC_1_SQRT_2) - 1.0).abs() < 1e-15);

        let r1 = 3.0f64.sqrt() / 2.0;
        let up = InitialState::<f64>::new(1.0, 0.0, r1).unwrap();
        let want = 3.0 * 3.0f64.sqrt() / 8.0;
        assert!((stationary_concurrence(&up, r1) - want).abs() < 1e-15);
        assert!((want - 0.6495).abs() < 1e-4);

        let any = InitialState::<f64>::new(0.4, 2.0, 0.0).unwrap();
        assert_eq!(stationary_concurrence(&any, 0.0), 0.0);
    }

    #[test]
    fn maximisation_examples() {
        let cmax = 3.0 * 3.0f64.sqrt() / 8.0;
        let (r, c) = max_stationary_concurrence(1.0f64, 0.0).unwrap();
        assert!((r - 3.0f64.sqrt() / 2.0).abs() < 1e-12 && (c - cmax).abs() < 1e-12);
        let (r, c) = max_stationary_concurrence(-1.0f64, 0.0).unwrap();
        assert!((r - 0.5).abs() < 1e-12 && (c - cmax).abs() < 1e-12);
        let (r, c) = max_stationary_concurrence(0.0, PI).unwrap();
        assert!((r - FRAC_1_SQRT_2).abs() < 1e-12 && (c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slope_matches_finite_difference() {
        for &(s, phi) in &[(1.0, 0.0), (-0.3, 1.2), (0.0, PI), (0.6, -2.5)] {
            let init = InitialState::<f64>::new(s, phi, 0.0).unwrap();
            for k in 1..20 {
                let r1 = k as f64 / 20.0;
                let r2 = (1.0 - r1 * r1).sqrt();
                let h = 1e-6;
                let fd = (stationary_concurrence(&init, r1 + h) - stationary_concurrence(&init, r1 - h)) / (2.0 * h);
                assert!((stationary_slope(&init, r1) - r2 * fd).abs() < 1e-7, "s={s} phi={phi} r1={r1}");
            }
        }
    }

    #[test]
    fn trajectory_grid_and_validation() {
        let p = SystemParams::<f64>::from_ratio(10.0, FRAC_1_SQRT_2).unwrap();
        let init = InitialState::<f64>::new(0.0, 0.0, FRAC_1_SQRT_2).unwrap();
        let tr = trajectory(&p, &init, 3.0, 601).unwrap();
        assert_eq!(tr.len(), 601);
        assert_eq!(tr.times[0], 0.0);
        assert_eq!(tr.times[600], 3.0);
        for i in 0..tr.len() {
            assert!((tr.concurrence[i] - tr.eps[i] * tr.eps[i]).abs() < 1e-14);
        }
        assert!(trajectory(&p, &init, 0.0, 10).is_err());
        assert!(trajectory(&p, &init, 1.0, 1).is_err());
    }

    #[test]
    fn sub_radiant_trajectory_is_flat() {
        let r1 = 0.87f64;
        let p = SystemParams::<f64>::from_ratio(0.1, r1).unwrap();
        let init = InitialState::<f64>::sub_radiant(r1).unwrap();
        let tr = trajectory(&p, &init, 20.0, 200).unwrap();
        let want = 2.0 * r1 * p.r2();
        assert!(tr.concurrence.iter().all(|c| (c - want).abs() < 1e-12));
    }

    #[test]
    fn long_time_reaches_stationary_value() {
        for &(ratio, s, phi, r1) in &[(0.1, 1.0, 0.0, 0.87), (10.0, 0.0, PI, 0.87), (10.0, 0.3, 1.0, 0.4)] {
            let p = SystemParams::<f64>::from_ratio(ratio, r1).unwrap();
            let init = InitialState::<f64>::new(s, phi, r1).unwrap();
            let tr = trajectory(&p, &init, 2000.0, 2001).unwrap();
            let last = tr.len() - 1;
            assert!(tr.eps[last].abs() < 1e-4);
            assert!((tr.concurrence[last] - stationary_concurrence(&init, r1)).abs() < 1e-6);
        }
    }

    #[test]
    fn full_rate_prefactor_differs() {
        let p = SystemParams::<f64>::from_ratio(1.0, 0.5).unwrap();
        let half = SurvivalAmplitude::new(&p).at(2.0).unwrap();
        let full = SurvivalAmplitude::with_prefactor(&p, DecayPrefactor::FullRate).at(2.0).unwrap();
        assert!((full - half * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn generic_over_f32() {
        let p = SystemParams::<f32>::new(0.0, 1.0, 0.5).unwrap();
        let e = survival_amplitude(&p, 1.0f32).unwrap();
        assert!((e - 1.0f32.cos()).abs() < 1e-6);
        let (r, c) = max_stationary_concurrence(1.0f32, 0.0).unwrap();
        assert!((r - 0.8660254).abs() < 1e-3 && (c - 0.649519).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn bounded_and_norm_decreasing(
            kappa in 0.0f64..5.0, g in 0.01f64..20.0, t in 0.0f64..100.0,
            s in -1.0f64..=1.0, phi in 0.0..(2.0 * PI), r1 in 0.0f64..=1.0,
        ) {
            let p = SystemParams::<f64>::new(kappa, g, r1).unwrap();
            let e = survival_amplitude(&p, t).unwrap();
            prop_assert!(e.is_finite() && e.abs() <= 1.0 + 1e-12);
            let init = InitialState::<f64>::new(s, phi, r1).unwrap();
            let (u1, u2) = amplitudes(&p, &init, t).unwrap();
            prop_assert!(u1.norm_sqr() + u2.norm_sqr() <= 1.0 + 1e-10);
        }

        #[test]
        fn stationary_value_ignores_kappa(s in -1.0f64..=1.0, phi in 0.0..(2.0 * PI), r1 in 0.0f64..=1.0) {
            let init = InitialState::<f64>::new(s, phi, r1).unwrap();
            let base = stationary_concurrence(&init, r1);
            for &kappa in &[0.1, 1.0, 10.0] {
                let p = SystemParams::<f64>::new(kappa, 1.0, r1).unwrap();
                prop_assert_eq!(stationary_concurrence(&init, p.r1()), base);
            }
        }
    }
}
