//! Sampled datasets and the (parallel, order-preserving) sweeps producing them.

use qzc_core::zeno::zeno_amplitudes;
use qzc_core::{
    amplitudes, closed_form_concurrence, stationary_concurrence, survival_amplitude, zeno_rate, Complex64,
    InitialState64, SystemParams64,
};
use rayon::prelude::*;

use crate::config::GridSize;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub tau: f64,
    pub concurrence: f64,
    pub u1: Complex64,
    pub u2: Complex64,
    /// Super-radiant survival amplitude (the measured envelope for Zeno series).
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub samples: Vec<Sample>,
}

/// Stationary concurrence on a rectangular grid, `r1` major.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryGrid {
    pub phi: f64,
    pub r1: Vec<f64>,
    pub s: Vec<f64>,
    pub values: Vec<f64>,
}

impl StationaryGrid {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.s.len() + j]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Series(Vec<Series>),
    Grid(StationaryGrid),
}

/// `n` points on `[lo, hi]`, both ends exact.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n).map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / last }).collect()
}

fn time_of(p: &SystemParams64, tau: f64) -> f64 {
    if p.is_lossless() {
        tau
    } else {
        tau / p.kappa()
    }
}

/// Closed-form evolution at each `tau`.
pub fn trajectory_series(
    label: impl Into<String>,
    p: &SystemParams64,
    init: &InitialState64,
    taus: &[f64],
) -> Result<Series, CliError> {
    let samples = taus
        .par_iter()
        .map(|&tau| {
            let t = time_of(p, tau);
            let (u1, u2) = amplitudes(p, init, t)?;
            Ok(Sample { tau, concurrence: closed_form_concurrence(u1, u2), u1, u2, eps: survival_amplitude(p, t)? })
        })
        .collect::<qzc_core::Result<Vec<_>>>()?;
    Ok(Series { label: label.into(), samples })
}

/// Evolution under measurements every `kappa_t / kappa`, at each `tau`.
pub fn zeno_series(
    label: impl Into<String>,
    p: &SystemParams64,
    init: &InitialState64,
    kappa_t: f64,
    taus: &[f64],
) -> Result<Series, CliError> {
    let interval = time_of(p, kappa_t);
    let rate = zeno_rate(p, interval)?;
    let samples = taus
        .par_iter()
        .map(|&tau| {
            let t = time_of(p, tau);
            let (u1, u2) = zeno_amplitudes(init, p, interval, t)?;
            let eps = (-0.5 * rate * t).exp();
            Ok(Sample { tau, concurrence: closed_form_concurrence(u1, u2), u1, u2, eps })
        })
        .collect::<qzc_core::Result<Vec<_>>>()?;
    Ok(Series { label: label.into(), samples })
}

/// Measurement times `k kappa_t`, `k = 0..=n`.
pub fn measurement_taus(kappa_t: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| kappa_t * k as f64).collect()
}

/// `r1` on `[0, 1]`, `s` on `[-1, 1]`.
pub fn stationary_grid(phi: f64, size: GridSize) -> Result<StationaryGrid, CliError> {
    let r1 = linspace(0.0, 1.0, size.r1_points);
    let s = linspace(-1.0, 1.0, size.s_points);
    let states = s.iter().map(|&s| InitialState64::new(s, phi, 0.0)).collect::<qzc_core::Result<Vec<_>>>()?;
    let values =
        r1.par_iter().flat_map_iter(|&r| states.iter().map(move |init| stationary_concurrence(init, r))).collect();
    Ok(StationaryGrid { phi, r1, s, values })
}
