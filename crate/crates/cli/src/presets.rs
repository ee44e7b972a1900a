//! Parameter bundles of the published figures.
//!
//! The captions fix `R`, `s`, `phi`, the `r1` series and the measurement
//! intervals. They do not state the plotted time range, which is chosen here
//! to show the approach to the stationary value.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use qzc_core::{InitialState64, SystemParams64};

use crate::config::GridSize;
use crate::data::{linspace, stationary_grid, trajectory_series, zeno_series, Dataset};
use crate::error::CliError;

/// `r1` series of the dynamics figures: maximal stationary value, symmetric
/// coupling, and the two single-atom cases.
pub const R1_SERIES: [f64; 4] = [0.87, FRAC_1_SQRT_2, 0.0, 1.0];
pub const GOOD_CAVITY_INTERVALS: [f64; 3] = [0.01, 0.005, 0.001];
pub const BAD_CAVITY_INTERVALS: [f64; 3] = [5.0, 1.0, 0.1];

const BAD_CAVITY: f64 = 0.1;
const GOOD_CAVITY: f64 = 10.0;
const STATIONARY_GRID: GridSize = GridSize { r1_points: 101, s_points: 101 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PresetKind {
    /// Stationary concurrence over `(r1, s)`.
    Stationary { phi: f64, grid: GridSize },
    /// One series per `r1` in [`R1_SERIES`].
    Dynamics { ratio: f64, s: f64, phi: f64 },
    /// Unmeasured evolution plus one series per measurement interval `kappa T`.
    Zeno { ratio: f64, s: f64, phi: f64, r1: f64, intervals: [f64; 3] },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigurePreset {
    pub id: &'static str,
    pub caption: &'static str,
    pub kind: PresetKind,
    pub tau_max: f64,
    pub samples: usize,
}

const fn dynamics(id: &'static str, caption: &'static str, ratio: f64, s: f64, phi: f64, tau_max: f64) -> FigurePreset {
    FigurePreset { id, caption, kind: PresetKind::Dynamics { ratio, s, phi }, tau_max, samples: 2001 }
}

pub const PRESETS: [FigurePreset; 12] = [
    FigurePreset {
        id: "fig1a",
        caption: "stationary concurrence over r1 and s, phi = 0",
        kind: PresetKind::Stationary { phi: 0.0, grid: STATIONARY_GRID },
        tau_max: 0.0,
        samples: 0,
    },
    FigurePreset {
        id: "fig1b",
        caption: "stationary concurrence over r1 and s, phi = pi",
        kind: PresetKind::Stationary { phi: PI, grid: STATIONARY_GRID },
        tau_max: 0.0,
        samples: 0,
    },
    dynamics("fig2a", "bad cavity R = 0.1, phi = 0, s = 1", BAD_CAVITY, 1.0, 0.0, 300.0),
    dynamics("fig2b", "bad cavity R = 0.1, phi = 0, s = 0", BAD_CAVITY, 0.0, 0.0, 300.0),
    dynamics("fig2c", "bad cavity R = 0.1, phi = pi, s = 1", BAD_CAVITY, 1.0, PI, 300.0),
    dynamics("fig2d", "bad cavity R = 0.1, phi = pi, s = 0", BAD_CAVITY, 0.0, PI, 300.0),
    dynamics("fig3a", "good cavity R = 10, phi = 0, s = 1", GOOD_CAVITY, 1.0, 0.0, 20.0),
    dynamics("fig3b", "good cavity R = 10, phi = 0, s = 0", GOOD_CAVITY, 0.0, 0.0, 20.0),
    dynamics("fig3c", "good cavity R = 10, phi = pi, s = 1", GOOD_CAVITY, 1.0, PI, 20.0),
    dynamics("fig3d", "good cavity R = 10, phi = pi, s = 0", GOOD_CAVITY, 0.0, PI, 20.0),
    FigurePreset {
        id: "fig4a",
        caption: "s = 0, r1 = 1/sqrt 2, R = 10, no measurement and kappa T = 0.01, 0.005, 0.001",
        kind: PresetKind::Zeno {
            ratio: GOOD_CAVITY,
            s: 0.0,
            phi: 0.0,
            r1: FRAC_1_SQRT_2,
            intervals: GOOD_CAVITY_INTERVALS,
        },
        tau_max: 1.0,
        samples: 1001,
    },
    FigurePreset {
        id: "fig4b",
        caption: "s = 0, r1 = 1/sqrt 2, R = 0.1, no measurement and kappa T = 5, 1, 0.1",
        kind: PresetKind::Zeno {
            ratio: BAD_CAVITY,
            s: 0.0,
            phi: 0.0,
            r1: FRAC_1_SQRT_2,
            intervals: BAD_CAVITY_INTERVALS,
        },
        tau_max: 300.0,
        samples: 1501,
    },
];

pub fn ids() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|p| p.id)
}

pub fn preset(id: &str) -> Option<&'static FigurePreset> {
    PRESETS.iter().find(|p| p.id == id)
}

/// Series label for a value, e.g. `r1=0.87`.
pub fn label(name: &str, value: f64) -> String {
    format!("{name}={value}")
}

impl FigurePreset {
    pub fn taus(&self) -> Vec<f64> {
        linspace(0.0, self.tau_max, self.samples)
    }

    pub fn build(&self) -> Result<Dataset, CliError> {
        match self.kind {
            PresetKind::Stationary { phi, grid } => Ok(Dataset::Grid(stationary_grid(phi, grid)?)),
            PresetKind::Dynamics { ratio, s, phi } => {
                let taus = self.taus();
                let series = R1_SERIES
                    .iter()
                    .map(|&r1| {
                        let p = SystemParams64::from_ratio(ratio, r1)?;
                        let init = InitialState64::new(s, phi, r1)?;
                        trajectory_series(label("r1", r1), &p, &init, &taus)
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(Dataset::Series(series))
            }
            PresetKind::Zeno { ratio, s, phi, r1, intervals } => {
                let taus = self.taus();
                let p = SystemParams64::from_ratio(ratio, r1)?;
                let init = InitialState64::new(s, phi, r1)?;
                let mut series = vec![trajectory_series("unmeasured", &p, &init, &taus)?];
                for kt in intervals {
                    series.push(zeno_series(label("kappa_T", kt), &p, &init, kt, &taus)?);
                }
                Ok(Dataset::Series(series))
            }
        }
    }
}
