//! Numerical ground truth for the memory-kernel equations
//!
//! ```text
//! u_j'(t) = -g_j \int_0^t f(t - t') (g_1 u_1(t') + g_2 u_2(t')) dt'
//! ```
//!
//! solved two independent ways: by the auxiliary-variable ODE that is exact
//! for an exponential kernel, and by direct quadrature over the full history,
//! which works for any kernel. The Lorentzian spectral density and its Fourier
//! transform (the kernel) are checked by quadrature as well.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::model::{InitialState, SystemParams};
use crate::scalar::{lit, tol, Real};

/// Cavity line shape `|alpha(w)|^2 = (kappa/pi) / ((w - w_c)^2 + kappa^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity<T: Real = f64> {
    kappa: T,
    omega_c: T,
}

impl<T: Real> SpectralDensity<T> {
    pub fn new(kappa: T, omega_c: T) -> Result<Self> {
        if !(kappa > T::zero()) || !kappa.is_finite() {
            return Err(invalid("kappa", format!("must be finite and > 0, got {kappa}")));
        }
        if !omega_c.is_finite() {
            return Err(invalid("omega_c", "must be finite"));
        }
        Ok(Self { kappa, omega_c })
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn omega_c(&self) -> T {
        self.omega_c
    }

    pub fn density(&self, omega: T) -> T {
        let d = omega - self.omega_c;
        self.kappa / T::PI() / (d * d + self.kappa * self.kappa)
    }

    /// Integral of the density over the whole real line, by Simpson's rule
    /// after the substitution `w - w_c = kappa tan(theta)`.
    pub fn total_mass(&self, n_points: usize) -> T {
        let half_pi = T::FRAC_PI_2();
        simpson(-half_pi, half_pi, n_points, |theta| {
            let c = theta.cos();
            if c == T::zero() {
                Complex::zero()
            } else {
                let omega = self.omega_c + self.kappa * theta.tan();
                Complex::new(self.density(omega) * self.kappa / (c * c), T::zero())
            }
        })
        .re
    }
}

fn simpson<T: Real>(a: T, b: T, n_points: usize, f: impl Fn(T) -> Complex<T>) -> Complex<T> {
    let intervals = if n_points % 2 == 1 { n_points - 1 } else { n_points };
    let h = (b - a) / T::from_usize(intervals).unwrap();
    let (two, four) = (lit::<T>(2.0), lit::<T>(4.0));
    let mut acc = f(a) + f(b);
    for k in 1..intervals {
        let x = a + h * T::from_usize(k).unwrap();
        let w = if k % 2 == 1 { four } else { two };
        acc = acc + f(x) * w;
    }
    acc * h / lit::<T>(3.0)
}

/// `f(tau) = \int |alpha(w)|^2 e^{i (w_c - w) tau} dw` by composite Simpson
/// over `[w_c - cutoff, w_c + cutoff]`.
///
/// The rule is evaluated with `n_points` and again with twice the intervals;
/// a change of `1e-6` or more is reported as [`Error::Tolerance`]. The
/// truncated tails carry a mass of `(2/pi) atan(kappa / cutoff)`, so a cutoff
/// of a few thousand `kappa` is needed for `1e-4` accuracy at `tau = 0`.
pub fn correlation_function_numeric<T: Real>(
    sd: &SpectralDensity<T>,
    tau: T,
    cutoff: T,
    n_points: usize,
) -> Result<Complex<T>> {
    if !(tau >= T::zero()) || !tau.is_finite() {
        return Err(invalid("tau", format!("must be finite and >= 0, got {tau}")));
    }
    if !(cutoff >= lit::<T>(50.0) * sd.kappa) || !cutoff.is_finite() {
        return Err(invalid("cutoff", format!("must be at least 50 kappa, got {cutoff}")));
    }
    if n_points < 10_000 {
        return Err(invalid("n_points", format!("need at least 10^4, got {n_points}")));
    }
    let integrand = |omega: T| {
        let phase = (sd.omega_c - omega) * tau;
        Complex::from_polar(sd.density(omega), phase)
    };
    let (a, b) = (sd.omega_c - cutoff, sd.omega_c + cutoff);
    let coarse = simpson(a, b, n_points, integrand);
    let intervals = if n_points % 2 == 1 { n_points - 1 } else { n_points };
    let fine = simpson(a, b, 2 * intervals + 1, integrand);
    let change = (fine - coarse).norm();
    if change >= tol::<T>(1e-6) {
        return Err(Error::Tolerance { change: change.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(fine)
}

/// A memory kernel `f(lag)` for the history-quadrature solver.
pub trait MemoryKernel<T: Real> {
    fn at(&self, lag: T) -> T;
}

/// `exp(-kappa * lag)`, the Fourier transform of the Lorentzian line shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianKernel<T: Real = f64> {
    pub kappa: T,
}

impl<T: Real> MemoryKernel<T> for LorentzianKernel<T> {
    fn at(&self, lag: T) -> T {
        (-self.kappa * lag).exp()
    }
}

impl<T: Real, F: Fn(T) -> T> MemoryKernel<T> for F {
    fn at(&self, lag: T) -> T {
        self(lag)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolterraSolution<T: Real = f64> {
    pub times: Vec<T>,
    pub u1: Vec<Complex<T>>,
    pub u2: Vec<Complex<T>>,
    pub step: T,
}

impl<T: Real> VolterraSolution<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Forward-difference estimate of `max_j |u_j'(0)|` over the first step.
    ///
    /// The exact derivative vanishes at `t = 0` for every state, so this
    /// measures `|u_j''(0)| h / 2 = g_j g_T |beta_plus| h / 2`: zero exactly
    /// for the sub-radiant state and of order `g_T^2 h` otherwise.
    pub fn initial_rate(&self) -> T {
        if self.len() < 2 {
            return T::zero();
        }
        let d1 = (self.u1[1] - self.u1[0]).norm();
        let d2 = (self.u2[1] - self.u2[0]).norm();
        d1.max(d2) / self.step
    }

    /// `1 - |u1|^2 - |u2|^2` per sample: population that has left the atoms.
    pub fn reservoir_population(&self) -> Vec<T> {
        self.u1.iter().zip(&self.u2).map(|(a, b)| T::one() - a.norm_sqr() - b.norm_sqr()).collect()
    }
}

/// Largest step accepted by the solvers: `min(1/kappa, 1/g_T) / 50`.
pub fn max_step<T: Real>(p: &SystemParams<T>) -> T {
    (T::one() / p.kappa()).min(T::one() / p.g_total()) / lit(50.0)
}

fn check_step<T: Real>(p: &SystemParams<T>, step: T) -> Result<()> {
    if p.is_lossless() {
        return Err(invalid("kappa", "the memory-kernel solvers need kappa > 0"));
    }
    let bound = max_step(p);
    if !(step > T::zero()) || step > bound * (T::one() + lit(1e-9)) {
        return Err(invalid("step", format!("must lie in (0, {bound}], got {step}")));
    }
    Ok(())
}

fn grid<T: Real>(t_max: T, step: T) -> Result<(usize, T)> {
    if !(t_max > T::zero()) || !t_max.is_finite() {
        return Err(invalid("t_max", format!("must be finite and > 0, got {t_max}")));
    }
    let n = (t_max / step - lit(1e-9)).ceil().max(T::one());
    let n = n.to_usize().ok_or_else(|| invalid("step", "grid too large"))?;
    Ok((n, t_max / T::from_usize(n).unwrap()))
}

/// Atomic amplitudes plus the memory variable
/// `v(t) = \int_0^t e^{-kappa (t - t')} (g_1 u_1 + g_2 u_2)(t') dt'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryState<T: Real = f64> {
    pub u1: Complex<T>,
    pub u2: Complex<T>,
    pub v: Complex<T>,
}

impl<T: Real> MemoryState<T> {
    pub fn new(u1: Complex<T>, u2: Complex<T>) -> Self {
        Self { u1, u2, v: Complex::zero() }
    }

    pub fn atomic_norm(&self) -> T {
        self.u1.norm_sqr() + self.u2.norm_sqr()
    }
}

/// Fixed-step RK4 integrator for `u_j' = -g_j v`, `v' = -kappa v + g_1 u_1 + g_2 u_2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialMemory<T: Real = f64> {
    kappa: T,
    g1: T,
    g2: T,
    step: T,
}

impl<T: Real> ExponentialMemory<T> {
    pub fn new(p: &SystemParams<T>, step: T) -> Result<Self> {
        check_step(p, step)?;
        let (g1, g2) = p.couplings();
        Ok(Self { kappa: p.kappa(), g1, g2, step })
    }

    fn rhs(&self, s: &MemoryState<T>) -> MemoryState<T> {
        MemoryState { u1: -s.v * self.g1, u2: -s.v * self.g2, v: -s.v * self.kappa + s.u1 * self.g1 + s.u2 * self.g2 }
    }

    pub fn rk4(&self, s: &MemoryState<T>, h: T) -> MemoryState<T> {
        let half = h * lit(0.5);
        let add = |a: &MemoryState<T>, k: &MemoryState<T>, c: T| MemoryState {
            u1: a.u1 + k.u1 * c,
            u2: a.u2 + k.u2 * c,
            v: a.v + k.v * c,
        };
        let k1 = self.rhs(s);
        let k2 = self.rhs(&add(s, &k1, half));
        let k3 = self.rhs(&add(s, &k2, half));
        let k4 = self.rhs(&add(s, &k3, h));
        let sixth = h / lit(6.0);
        let two = lit::<T>(2.0);
        MemoryState {
            u1: s.u1 + (k1.u1 + k2.u1 * two + k3.u1 * two + k4.u1) * sixth,
            u2: s.u2 + (k1.u2 + k2.u2 * two + k3.u2 * two + k4.u2) * sixth,
            v: s.v + (k1.v + k2.v * two + k3.v * two + k4.v) * sixth,
        }
    }

    /// Evolves `state` for `duration`, using the largest uniform sub-step not
    /// exceeding the configured step.
    pub fn advance(&self, state: MemoryState<T>, duration: T) -> Result<MemoryState<T>> {
        if duration == T::zero() {
            return Ok(state);
        }
        let (n, h) = grid(duration, self.step)?;
        let mut s = state;
        for _ in 0..n {
            s = self.rk4(&s, h);
        }
        if s.atomic_norm() > T::one() + tol(1e-6) {
            return Err(Error::Instability {
                time: duration.to_f64().unwrap_or(f64::NAN),
                norm: s.atomic_norm().to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(s)
    }
}

fn instability<T: Real>(t: T, norm: T) -> Error {
    Error::Instability { time: t.to_f64().unwrap_or(f64::NAN), norm: norm.to_f64().unwrap_or(f64::NAN) }
}

/// Solves the memory-kernel equations with the exponential kernel through
/// the auxiliary memory variable, by classical RK4 on a uniform grid of
/// `ceil(t_max / step)` intervals ending exactly at `t_max`.
pub fn solve_volterra<T: Real>(
    p: &SystemParams<T>,
    init: &InitialState<T>,
    t_max: T,
    step: T,
) -> Result<VolterraSolution<T>> {
    let ode = ExponentialMemory::new(p, step)?;
    let (n, h) = grid(t_max, step)?;
    let mut sol = VolterraSolution {
        times: Vec::with_capacity(n + 1),
        u1: Vec::with_capacity(n + 1),
        u2: Vec::with_capacity(n + 1),
        step: h,
    };
    let mut s = MemoryState::new(init.c01(), init.c02());
    sol.times.push(T::zero());
    sol.u1.push(s.u1);
    sol.u2.push(s.u2);
    let limit = T::one() + tol(1e-6);
    for k in 1..=n {
        s = ode.rk4(&s, h);
        let t = if k == n { t_max } else { h * T::from_usize(k).unwrap() };
        if s.atomic_norm() > limit {
            return Err(instability(t, s.atomic_norm()));
        }
        sol.times.push(t);
        sol.u1.push(s.u1);
        sol.u2.push(s.u2);
    }
    Ok(sol)
}

/// Same equations as [`solve_volterra`], but discretising the memory
/// integral itself: trapezoidal rule over the whole stored history at every
/// step (O(n^2) work) and a trapezoidal predictor-corrector in time. Makes no
/// use of the kernel being exponential.
pub fn solve_volterra_quadrature<T: Real>(
    p: &SystemParams<T>,
    init: &InitialState<T>,
    t_max: T,
    step: T,
) -> Result<VolterraSolution<T>> {
    check_step(p, step)?;
    solve_volterra_quadrature_with_kernel(p, init, t_max, step, &LorentzianKernel { kappa: p.kappa() })
}

/// [`solve_volterra_quadrature`] for an arbitrary memory kernel. Only the
/// step positivity is checked here; the step rule of the Lorentzian solvers
/// does not apply to a general kernel.
pub fn solve_volterra_quadrature_with_kernel<T: Real, K: MemoryKernel<T>>(
    p: &SystemParams<T>,
    init: &InitialState<T>,
    t_max: T,
    step: T,
    kernel: &K,
) -> Result<VolterraSolution<T>> {
    if !(step > T::zero()) {
        return Err(invalid("step", format!("must be > 0, got {step}")));
    }
    let (n, h) = grid(t_max, step)?;
    let (g1, g2) = p.couplings();
    let half = lit::<T>(0.5);
    // reversed[i] = f((n - i) h), so the lags of the history nodes 1..=k at
    // t_{k+1} form the contiguous slice reversed[n - k..n]
    let reversed: Vec<T> = (0..=n).rev().map(|m| kernel.at(h * T::from_usize(m).unwrap())).collect();
    let f0 = reversed[n];

    let mut u1 = Vec::with_capacity(n + 1);
    let mut u2 = Vec::with_capacity(n + 1);
    // g . u at every node, split into real and imaginary parts
    let mut src_re: Vec<T> = Vec::with_capacity(n + 1);
    let mut src_im: Vec<T> = Vec::with_capacity(n + 1);
    let first = init.c01() * g1 + init.c02() * g2;
    u1.push(init.c01());
    u2.push(init.c02());
    src_re.push(first.re);
    src_im.push(first.im);

    // memory integral at the current node, and at the one before (for AB2)
    let mut memory = Complex::zero();
    let mut prev_memory: Option<Complex<T>> = None;
    let limit = T::one() + tol(1e-6);
    let mut times = Vec::with_capacity(n + 1);
    times.push(T::zero());

    for k in 0..n {
        let next = k + 1;
        // trapezoid at t_{k+1} over every node except the new one
        let lags = &reversed[n - k..n];
        let tail = Complex::new(dot(&src_re[1..=k], lags), dot(&src_im[1..=k], lags));
        let history = (first * reversed[n - next] * half + tail) * h;

        let slope = match prev_memory {
            Some(prev) => memory * lit::<T>(1.5) - prev * half,
            None => memory,
        };
        let mut p1 = u1[k] - slope * (g1 * h);
        let mut p2 = u2[k] - slope * (g2 * h);
        for _ in 0..2 {
            let s_new = p1 * g1 + p2 * g2;
            let new_memory = history + s_new * (f0 * half * h);
            let avg = (memory + new_memory) * half;
            p1 = u1[k] - avg * (g1 * h);
            p2 = u2[k] - avg * (g2 * h);
        }
        let s_new = p1 * g1 + p2 * g2;
        let new_memory = history + s_new * (f0 * half * h);

        let t = if next == n { t_max } else { h * T::from_usize(next).unwrap() };
        let norm = p1.norm_sqr() + p2.norm_sqr();
        if norm > limit {
            return Err(instability(t, norm));
        }
        prev_memory = Some(memory);
        memory = new_memory;
        u1.push(p1);
        u2.push(p2);
        src_re.push(s_new.re);
        src_im.push(s_new.im);
        times.push(t);
    }
    Ok(VolterraSolution { times, u1, u2, step: h })
}

/// Dot product with four independent accumulators so the loop vectorises.
fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    let mut acc = [T::zero(); 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for i in 0..4 {
            acc[i] = acc[i] + x[i] * y[i];
        }
    }
    let mut sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        sum = sum + *x * *y;
    }
    sum
}
