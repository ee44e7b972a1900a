//! Exact one-excitation dynamics of two two-level atoms sharing a lossy
//! (Lorentzian) cavity: survival amplitude, entanglement (concurrence),
//! stationary entanglement from the sub-radiant state, numerical Volterra
//! oracles for the memory-kernel equations, and entanglement protection by
//! repeated non-selective measurements (quantum Zeno effect).
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod concurrence;
pub mod density;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod scalar;
pub mod volterra;
pub mod zeno;

pub use concurrence::{closed_form_concurrence, spin_flip, wootters_concurrence, ConcurrenceResult};
pub use density::DensityMatrix4;
pub use dynamics::{
    amplitudes, amplitudes_with, density_matrix, max_stationary_concurrence, stationary_concurrence,
    survival_amplitude, trajectory, trajectory_with, DecayPrefactor, SurvivalAmplitude, Trajectory,
};
pub use error::{Error, Result};
pub use model::{CollectiveBasis, InitialState, SystemParams};
pub use scalar::Real;
pub use volterra::{
    correlation_function_numeric, solve_volterra, solve_volterra_quadrature, SpectralDensity, VolterraSolution,
};
pub use zeno::{
    mechanistic_zeno_simulation, zeno_concurrence, zeno_rate, zeno_survival, zeno_time, ZenoResult, ZenoSchedule,
};

pub type Complex64 = num_complex::Complex<f64>;

pub type SystemParams64 = SystemParams<f64>;
pub type InitialState64 = InitialState<f64>;
pub type CollectiveBasis64 = CollectiveBasis<f64>;
pub type DensityMatrix64 = DensityMatrix4<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type VolterraSolution64 = VolterraSolution<f64>;
pub type ZenoSchedule64 = ZenoSchedule<f64>;
pub type ZenoResult64 = ZenoResult<f64>;

pub type SystemParams32 = SystemParams<f32>;
pub type InitialState32 = InitialState<f32>;
pub type DensityMatrix32 = DensityMatrix4<f32>;
pub type Trajectory32 = Trajectory<f32>;
