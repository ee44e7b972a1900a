//! Physical parameters, the initial-state family and the collective
//! (sub-/super-radiant) basis of the one-excitation atomic sector.

use num_complex::Complex;

use crate::error::{invalid, Result};
use crate::scalar::{lit, real, Real};

/// Cavity and coupling parameters at exact atom-cavity resonance.
///
/// Rates are in any consistent inverse-time unit. With `kappa = 1` the time
/// axis is the dimensionless `tau = kappa * t` and `g_total` is the ratio `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T: Real = f64> {
    kappa: T,
    g_total: T,
    r1: T,
    r2: T,
}

impl<T: Real> SystemParams<T> {
    /// Validates and builds a parameter set.
    ///
    /// `kappa = 0` is accepted and describes the lossless (Jaynes-Cummings)
    /// limit; see [`SystemParams::is_lossless`].
    pub fn new(kappa: T, g_total: T, r1: T) -> Result<Self> {
        if !(kappa >= T::zero()) || !kappa.is_finite() {
            return Err(invalid("kappa", format!("must be finite and >= 0, got {kappa}")));
        }
        if !(g_total > T::zero()) || !g_total.is_finite() {
            return Err(invalid("g_total", format!("must be finite and > 0, got {g_total}")));
        }
        if !(r1 >= T::zero() && r1 <= T::one()) {
            return Err(invalid("r1", format!("must lie in [0, 1], got {r1}")));
        }
        let r2 = (T::one() - r1 * r1).max(T::zero()).sqrt();
        Ok(Self { kappa, g_total, r1, r2 })
    }

    /// Dimensionless parameters: `kappa = 1`, `g_total = ratio`.
    pub fn from_ratio(ratio: T, r1: T) -> Result<Self> {
        if !(ratio > T::zero()) || !ratio.is_finite() {
            return Err(invalid("R", format!("must be finite and > 0, got {ratio}")));
        }
        Self::new(T::one(), ratio, r1)
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn g_total(&self) -> T {
        self.g_total
    }

    pub fn r1(&self) -> T {
        self.r1
    }

    pub fn r2(&self) -> T {
        self.r2
    }

    /// Individual couplings `(g1, g2) = g_total * (r1, r2)`.
    pub fn couplings(&self) -> (T, T) {
        (self.g_total * self.r1, self.g_total * self.r2)
    }

    /// `R = g_total / kappa`; `None` in the lossless limit.
    pub fn ratio(&self) -> Option<T> {
        if self.is_lossless() {
            None
        } else {
            Some(self.g_total / self.kappa)
        }
    }

    /// True for `kappa = 0`, where only closed-form evaluation is meaningful.
    pub fn is_lossless(&self) -> bool {
        self.kappa == T::zero()
    }

    /// Markovian decay rate `2 g_total^2 / kappa`; `None` when lossless.
    pub fn markov_rate(&self) -> Option<T> {
        self.ratio().map(|_| lit::<T>(2.0) * self.g_total * self.g_total / self.kappa)
    }

    pub fn basis(&self) -> CollectiveBasis<T> {
        CollectiveBasis { r1: self.r1, r2: self.r2 }
    }
}

/// Sub- and super-radiant superpositions of `|e,g>` and `|g,e>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveBasis<T: Real = f64> {
    r1: T,
    r2: T,
}

impl<T: Real> CollectiveBasis<T> {
    pub fn new(r1: T) -> Result<Self> {
        if !(r1 >= T::zero() && r1 <= T::one()) {
            return Err(invalid("r1", format!("must lie in [0, 1], got {r1}")));
        }
        Ok(Self { r1, r2: (T::one() - r1 * r1).max(T::zero()).sqrt() })
    }

    /// Decoherence-free state `r2 |e,g> - r1 |g,e>`.
    pub fn sub_radiant(&self) -> [Complex<T>; 2] {
        [real(self.r2), real(-self.r1)]
    }

    /// Decaying state `r1 |e,g> + r2 |g,e>`.
    pub fn super_radiant(&self) -> [Complex<T>; 2] {
        [real(self.r1), real(self.r2)]
    }

    /// Overlaps `(beta_plus, beta_minus)` of an arbitrary one-excitation
    /// amplitude pair with the super- and sub-radiant states.
    pub fn project(&self, c1: Complex<T>, c2: Complex<T>) -> (Complex<T>, Complex<T>) {
        (c1 * self.r1 + c2 * self.r2, c1 * self.r2 - c2 * self.r1)
    }

    /// Inverse of [`CollectiveBasis::project`].
    pub fn compose(&self, beta_plus: Complex<T>, beta_minus: Complex<T>) -> (Complex<T>, Complex<T>) {
        (beta_plus * self.r1 + beta_minus * self.r2, beta_plus * self.r2 - beta_minus * self.r1)
    }
}

/// Initial one-excitation state `c01 |e,g> + c02 |g,e>`.
///
/// `s = -1` is `|e,g>`, `s = +1` is `|g,e>` and `s = 0` is maximally entangled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState<T: Real = f64> {
    s: T,
    phi: T,
    c01: Complex<T>,
    c02: Complex<T>,
    beta_plus: Complex<T>,
    beta_minus: Complex<T>,
}

impl<T: Real> InitialState<T> {
    /// Builds the state for separability `s`, relative phase `phi` (reduced
    /// into `[0, 2pi)`) and the overlaps with the collective basis for `r1`.
    pub fn new(s: T, phi: T, r1: T) -> Result<Self> {
        if !(s >= -T::one() && s <= T::one()) {
            return Err(invalid("s", format!("must lie in [-1, 1], got {s}")));
        }
        if !phi.is_finite() {
            return Err(invalid("phi", format!("must be finite, got {phi}")));
        }
        let basis = CollectiveBasis::new(r1)?;
        let two = lit::<T>(2.0);
        let phi = reduce_phase(phi);
        let c01 = real(((T::one() - s) / two).max(T::zero()).sqrt());
        let c02 = Complex::from_polar(((T::one() + s) / two).max(T::zero()).sqrt(), phi);
        let (beta_plus, beta_minus) = basis.project(c01, c02);
        Ok(Self { s, phi, c01, c02, beta_plus, beta_minus })
    }

    /// The sub-radiant state for coupling split `r1`, i.e. `s = 2 r1^2 - 1`,
    /// `phi = pi`.
    pub fn sub_radiant(r1: T) -> Result<Self> {
        Self::new(lit::<T>(2.0) * r1 * r1 - T::one(), T::PI(), r1)
    }

    /// The super-radiant state for coupling split `r1`, i.e. `s = 1 - 2 r1^2`,
    /// `phi = 0`.
    pub fn super_radiant(r1: T) -> Result<Self> {
        Self::new(T::one() - lit::<T>(2.0) * r1 * r1, T::zero(), r1)
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    pub fn c01(&self) -> Complex<T> {
        self.c01
    }

    pub fn c02(&self) -> Complex<T> {
        self.c02
    }

    pub fn beta_plus(&self) -> Complex<T> {
        self.beta_plus
    }

    pub fn beta_minus(&self) -> Complex<T> {
        self.beta_minus
    }
}

fn reduce_phase<T: Real>(phi: T) -> T {
    let period = T::PI() * lit(2.0);
    let mut r = phi % period;
    if r < T::zero() {
        r = r + period;
    }
    if r >= period {
        r = T::zero();
    }
    r
}
