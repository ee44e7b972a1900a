//! Command-line explorer for the two-atom cavity model: trajectories,
//! stationary-entanglement maps, measurement-protected dynamics, figure
//! presets and the invariant-check runner.

pub mod config;
pub mod data;
pub mod error;
pub mod presets;
pub mod render;
pub mod validate;

use std::fs;
use std::io::Write;
use std::path::Path;

use config::{Format, Mode, RunConfig};
use data::{linspace, measurement_taus, stationary_grid, trajectory_series, zeno_series, Dataset};
pub use error::CliError;

/// Where a run's text goes: stdout or files.
pub trait Sink: Send {
    fn emit(&mut self, path: Option<&Path>, text: &str) -> Result<(), CliError>;
}

/// Writes to the given file, or to stdout when there is none.
pub struct StdSink;

impl Sink for StdSink {
    fn emit(&mut self, path: Option<&Path>, text: &str) -> Result<(), CliError> {
        match path {
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
                }
                fs::write(path, text).map_err(|e| CliError::io(path, e))
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
                out.flush().map_err(|e| CliError::io("<stdout>", e))
            }
        }
    }
}

fn render(data: &Dataset, format: Format, title: &str) -> String {
    match format {
        Format::Csv => render::csv(data),
        Format::Svg => render::svg(data, title),
    }
}

/// Executes `config` inside a pool of the requested size.
pub fn run(config: &RunConfig, sink: &mut dyn Sink) -> Result<(), CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.workers {
        builder = builder.num_threads(n);
    }
    let pool =
        builder.build().map_err(|e| CliError::Config(format!("cannot start {:?} workers: {e}", config.workers)))?;
    pool.install(|| execute(config, sink))
}

fn execute(config: &RunConfig, sink: &mut dyn Sink) -> Result<(), CliError> {
    let out = config.out.as_deref();
    match &config.mode {
        Mode::Trajectory { params, init, tau_max, samples } => {
            let series = trajectory_series("trajectory", params, init, &linspace(0.0, *tau_max, *samples))?;
            sink.emit(out, &render(&Dataset::Series(vec![series]), config.format, "trajectory"))
        }
        Mode::Stationary { phi, grid } => {
            let data = Dataset::Grid(stationary_grid(*phi, *grid)?);
            sink.emit(out, &render(&data, config.format, "stationary concurrence"))
        }
        Mode::Zeno { params, init, kappa_t, n_measurements } => {
            let taus = measurement_taus(*kappa_t, *n_measurements);
            let series = zeno_series(presets::label("kappa_T", *kappa_t), params, init, *kappa_t, &taus)?;
            sink.emit(out, &render(&Dataset::Series(vec![series]), config.format, "measured evolution"))
        }
        Mode::Figures { id: Some(id) } => {
            let preset = presets::preset(id).expect("preset validated in config");
            sink.emit(out, &render(&preset.build()?, config.format, preset.caption))
        }
        Mode::Figures { id: None } => {
            let dir = out.ok_or_else(|| {
                CliError::Config("figures without --id needs --out DIR for the per-preset files".into())
            })?;
            for preset in presets::PRESETS.iter() {
                let path = dir.join(format!("{}.{}", preset.id, config.format.extension()));
                sink.emit(Some(&path), &render(&preset.build()?, config.format, preset.caption))?;
            }
            Ok(())
        }
        Mode::Validate { checks, prefactor } => {
            let outcomes = validate::run_checks(checks, *prefactor);
            sink.emit(out, &validate::report(&outcomes))?;
            let failed = outcomes.iter().filter(|o| !o.passed()).count();
            if failed > 0 {
                return Err(CliError::ChecksFailed { failed, total: outcomes.len() });
            }
            Ok(())
        }
    }
}
