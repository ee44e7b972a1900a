//! Entanglement protection by repeated non-selective measurements.
//!
//! Measuring at intervals `T` restarts the super-radiant decay each time, so
//! after `N` rounds its amplitude is `|eps(T)|^N = exp(-lambda_z(T) N T / 2)`
//! with `lambda_z(T) = -ln(eps(T)^2) / T`, which vanishes as `T -> 0`.

use num_complex::Complex;

use crate::concurrence::closed_form_concurrence;
use crate::dynamics::SurvivalAmplitude;
use crate::error::{invalid, Error, Result};
use crate::model::{InitialState, SystemParams};
use crate::scalar::{lit, tol, Real};
use crate::volterra::{ExponentialMemory, MemoryState};

/// `count` measurements spaced `interval` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoSchedule<T: Real = f64> {
    interval: T,
    count: usize,
}

impl<T: Real> ZenoSchedule<T> {
    pub fn new(interval: T, count: usize) -> Result<Self> {
        if !(interval > T::zero()) || !interval.is_finite() {
            return Err(invalid("interval", format!("must be finite and > 0, got {interval}")));
        }
        if count == 0 {
            return Err(invalid("count", "need at least one measurement"));
        }
        let total = interval * T::from_usize(count).unwrap();
        if !total.is_finite() {
            return Err(invalid("count", "total time overflows"));
        }
        Ok(Self { interval, count })
    }

    pub fn interval(&self) -> T {
        self.interval
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn total_time(&self) -> T {
        self.interval * T::from_usize(self.count).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoResult<T: Real = f64> {
    pub lambda_z: T,
    pub survival: T,
    pub concurrence: T,
}

/// Effective decay rate `-ln(eps(T)^2) / T`.
///
/// Fails with [`Error::SingularRate`] when `|eps(T)| < 1e-12`, i.e. when the
/// interval sits on a node of the survival amplitude. Negative `eps(T)` is
/// fine. The rate may exceed the unmeasured one (anti-Zeno regime).
pub fn zeno_rate<T: Real>(p: &SystemParams<T>, interval: T) -> Result<T> {
    if !(interval > T::zero()) || !interval.is_finite() {
        return Err(invalid("interval", format!("must be finite and > 0, got {interval}")));
    }
    let e = SurvivalAmplitude::new(p).at(interval)?;
    if e.abs() < tol::<T>(1e-12) {
        return Err(Error::SingularRate { interval: interval.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(-(e * e).ln() / interval)
}

/// Probability `|beta_plus|^2 exp(-lambda_z N T)` that the super-radiant
/// component survives all `N` measurements.
pub fn zeno_survival<T: Real>(init: &InitialState<T>, p: &SystemParams<T>, sched: &ZenoSchedule<T>) -> Result<T> {
    let rate = zeno_rate(p, sched.interval())?;
    let (bp, _) = p.basis().project(init.c01(), init.c02());
    Ok(bp.norm_sqr() * (-rate * sched.total_time()).exp())
}

/// Atomic amplitudes at time `t` under measurements every `interval`, with
/// the super-radiant amplitude replaced by `exp(-lambda_z t / 2)`. `t` need
/// not be a multiple of `interval`; this interpolates the measured curve.
pub fn zeno_amplitudes<T: Real>(
    init: &InitialState<T>,
    p: &SystemParams<T>,
    interval: T,
    t: T,
) -> Result<(Complex<T>, Complex<T>)> {
    if !(t >= T::zero()) {
        return Err(Error::NegativeTime(t.to_f64().unwrap_or(f64::NAN)));
    }
    let rate = zeno_rate(p, interval)?;
    let envelope = (-rate * t * lit(0.5)).exp();
    let basis = p.basis();
    let (bp, bm) = basis.project(init.c01(), init.c02());
    Ok(basis.compose(bp * envelope, bm))
}

/// Concurrence `2 |(b+ r1 e + b- r2)(b+ r2 e - b- r1)|` after the schedule,
/// `e = exp(-lambda_z N T / 2)`.
pub fn zeno_concurrence<T: Real>(init: &InitialState<T>, p: &SystemParams<T>, sched: &ZenoSchedule<T>) -> Result<T> {
    let (u1, u2) = zeno_amplitudes(init, p, sched.interval(), sched.total_time())?;
    Ok(closed_form_concurrence(u1, u2))
}

/// Rate, survival and concurrence for one schedule.
pub fn zeno_protect<T: Real>(
    init: &InitialState<T>,
    p: &SystemParams<T>,
    sched: &ZenoSchedule<T>,
) -> Result<ZenoResult<T>> {
    Ok(ZenoResult {
        lambda_z: zeno_rate(p, sched.interval())?,
        survival: zeno_survival(init, p, sched)?,
        concurrence: zeno_concurrence(init, p, sched)?,
    })
}

/// Non-selective measurement of the atoms in the collective basis: outcome
/// probabilities `|beta'_+|^2`, `|beta'_-|^2` are not recorded, the atomic
/// amplitudes are kept and the cavity memory is emptied.
fn measure<T: Real>(state: &MemoryState<T>, p: &SystemParams<T>) -> MemoryState<T> {
    let basis = p.basis();
    let (bp, bm) = basis.project(state.u1, state.u2);
    let (u1, u2) = basis.compose(bp, bm);
    MemoryState::new(u1, u2)
}

/// Atomic state after running the schedule explicitly: `N` rounds of RK4
/// evolution of the amplitudes plus cavity memory for one interval, each
/// followed by a non-selective measurement.
pub fn mechanistic_zeno_state<T: Real>(
    init: &InitialState<T>,
    p: &SystemParams<T>,
    sched: &ZenoSchedule<T>,
    step: T,
) -> Result<MemoryState<T>> {
    let ode = ExponentialMemory::new(p, step)?;
    let mut state = MemoryState::new(init.c01(), init.c02());
    for _ in 0..sched.count() {
        state = ode.advance(state, sched.interval())?;
        state = measure(&state, p);
    }
    Ok(state)
}

/// Concurrence `2 |u1 conj(u2)|` after [`mechanistic_zeno_state`]. An
/// independent check of [`zeno_concurrence`]; the two agree whenever
/// `eps(T) > 0` (the closed form keeps only `|eps(T)|^N`).
pub fn mechanistic_zeno_simulation<T: Real>(
    init: &InitialState<T>,
    p: &SystemParams<T>,
    sched: &ZenoSchedule<T>,
    step: T,
) -> Result<T> {
    let s = mechanistic_zeno_state(init, p, sched, step)?;
    Ok(closed_form_concurrence(s.u1, s.u2))
}

/// `1 / g_T`: short-time survival of the super-radiant state is
/// `1 - (t / tau_z)^2`.
pub fn zeno_time<T: Real>(p: &SystemParams<T>) -> T {
    T::one() / p.g_total()
}
