//! Command-line surface and its translation into a validated [`RunConfig`].

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qzc_core::{DecayPrefactor, InitialState64, SystemParams64};

use crate::error::{from_setup, CliError};
use crate::presets;

const MAX_SAMPLES: usize = 10_000_000;
const MAX_MEASUREMENTS: usize = 100_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "qzc",
    version,
    about = "Entanglement dynamics of two atoms in a common lossy cavity",
    long_about = "Entanglement dynamics of two atoms in a common lossy cavity.\n\n\
        Times are dimensionless, tau = kappa t. Couplings are given either as \
        --R (g_T / kappa, kappa = 1 unless --kappa is set) or in absolute units \
        with --g-total and --kappa. With --kappa 0 the tau column holds plain t."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true, env = "QZC_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form concurrence and amplitudes on a uniform tau grid
    Trajectory(TrajectoryArgs),
    /// Stationary concurrence over an (r1, s) grid
    Stationary(StationaryArgs),
    /// Concurrence under measurements every kappa T, sampled at each measurement
    Zeno(ZenoArgs),
    /// Data for the figure presets
    Figures(FiguresArgs),
    /// Run every invariant check and print one JSON line per check
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct CouplingArgs {
    /// Coupling ratio g_T / kappa
    #[arg(long = "R", value_name = "RATIO", conflicts_with = "g_total")]
    pub ratio: Option<f64>,
    /// Cavity decay rate (absolute units)
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Total coupling g_T (absolute units)
    #[arg(long)]
    pub g_total: Option<f64>,
    /// Relative coupling of the first atom, in [0, 1]
    #[arg(long)]
    pub r1: f64,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Separability parameter, in [-1, 1]
    #[arg(long, allow_hyphen_values = true)]
    pub s: f64,
    /// Relative phase of the initial state
    #[arg(long, allow_hyphen_values = true)]
    pub phi: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub output: Format,
    /// Output file (figures without --id: output directory); stdout if absent
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub coupling: CouplingArgs,
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value_t = 20.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 601)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StationaryArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub phi: f64,
    /// Grid size as <r1 points>x<s points>
    #[arg(long, default_value = "101x101")]
    pub grid: GridSize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ZenoArgs {
    #[command(flatten)]
    pub coupling: CouplingArgs,
    #[command(flatten)]
    pub state: StateArgs,
    /// Measurement interval in units of 1/kappa
    #[arg(long = "kappa-T", value_name = "KAPPA_T")]
    pub kappa_t: f64,
    #[arg(long)]
    pub n_measurements: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// Preset to emit; all presets when absent
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(presets::ids()))]
    pub id: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Run only the named checks (repeatable)
    #[arg(long = "check", value_name = "NAME")]
    pub checks: Vec<String>,
    /// Survival-amplitude prefactor used by the closed forms under test
    #[arg(long, value_enum, default_value_t = Prefactor::HalfRate)]
    pub prefactor: Prefactor,
    /// Report file; stdout if absent
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Prefactor {
    /// exp(-kappa t / 2)
    HalfRate,
    /// exp(-kappa t)
    FullRate,
}

impl From<Prefactor> for DecayPrefactor {
    fn from(p: Prefactor) -> Self {
        match p {
            Prefactor::HalfRate => DecayPrefactor::HalfRate,
            Prefactor::FullRate => DecayPrefactor::FullRate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSize {
    pub r1_points: usize,
    pub s_points: usize,
}

impl FromStr for GridSize {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (a, b) = text.split_once(['x', 'X']).ok_or_else(|| format!("expected <A>x<B>, got {text:?}"))?;
        let parse = |part: &str| part.trim().parse::<usize>().map_err(|e| format!("bad grid dimension {part:?}: {e}"));
        let size = GridSize { r1_points: parse(a)?, s_points: parse(b)? };
        if size.r1_points < 2 || size.s_points < 2 {
            return Err(format!("each grid dimension must be at least 2, got {text}"));
        }
        Ok(size)
    }
}

/// What to compute, with every parameter already validated.
#[derive(Debug, Clone)]
pub enum Mode {
    Trajectory { params: SystemParams64, init: InitialState64, tau_max: f64, samples: usize },
    Stationary { phi: f64, grid: GridSize },
    Zeno { params: SystemParams64, init: InitialState64, kappa_t: f64, n_measurements: usize },
    Figures { id: Option<&'static str> },
    Validate { checks: Vec<String>, prefactor: DecayPrefactor },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        if cli.workers == Some(0) {
            return Err(CliError::config("workers", "must be at least 1"));
        }
        let (mode, output) = match cli.command {
            Command::Trajectory(a) => {
                let params = system_params(&a.coupling)?;
                let init = initial_state(&a.state, a.coupling.r1)?;
                positive("tau-max", a.tau_max)?;
                if !(2..=MAX_SAMPLES).contains(&a.samples) {
                    return Err(CliError::config(
                        "samples",
                        format!("must be in [2, {MAX_SAMPLES}], got {}", a.samples),
                    ));
                }
                let mode = Mode::Trajectory { params, init, tau_max: a.tau_max, samples: a.samples };
                (mode, a.output)
            }
            Command::Stationary(a) => {
                finite("phi", a.phi)?;
                (Mode::Stationary { phi: a.phi, grid: a.grid }, a.output)
            }
            Command::Zeno(a) => {
                let params = system_params(&a.coupling)?;
                let init = initial_state(&a.state, a.coupling.r1)?;
                if params.is_lossless() {
                    return Err(CliError::config("kappa", "measurement intervals need kappa > 0"));
                }
                positive("kappa-T", a.kappa_t)?;
                if !(1..=MAX_MEASUREMENTS).contains(&a.n_measurements) {
                    return Err(CliError::config(
                        "n-measurements",
                        format!("must be in [1, {MAX_MEASUREMENTS}], got {}", a.n_measurements),
                    ));
                }
                let mode = Mode::Zeno { params, init, kappa_t: a.kappa_t, n_measurements: a.n_measurements };
                (mode, a.output)
            }
            Command::Figures(a) => {
                let id = match a.id {
                    Some(id) => Some(
                        presets::preset(&id)
                            .ok_or_else(|| CliError::config("id", format!("unknown preset {id:?}")))?
                            .id,
                    ),
                    None => None,
                };
                (Mode::Figures { id }, a.output)
            }
            Command::Validate(a) => {
                let known = crate::validate::check_names();
                if let Some(bad) = a.checks.iter().find(|c| !known.contains(&c.as_str())) {
                    return Err(CliError::config(
                        "check",
                        format!("unknown check {bad:?}; known: {}", known.join(", ")),
                    ));
                }
                let mode = Mode::Validate { checks: a.checks, prefactor: a.prefactor.into() };
                (mode, OutputArgs { output: Format::Csv, out: a.out })
            }
        };
        Ok(RunConfig { mode, format: output.output, out: output.out, workers: cli.workers })
    }
}

fn finite(field: &str, value: f64) -> Result<(), CliError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be finite, got {value}")))
    }
}

fn positive(field: &str, value: f64) -> Result<(), CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be finite and > 0, got {value}")))
    }
}

fn system_params(a: &CouplingArgs) -> Result<SystemParams64, CliError> {
    let kappa = a.kappa.unwrap_or(1.0);
    let g_total = match (a.ratio, a.g_total) {
        (Some(ratio), None) => {
            if !(ratio.is_finite() && ratio >= 0.0) {
                return Err(CliError::config("R", format!("must be finite and >= 0, got {ratio}")));
            }
            ratio * kappa
        }
        (None, Some(g)) => g,
        _ => return Err(CliError::Config("one of --R or --g-total is required".into())),
    };
    SystemParams64::new(kappa, g_total, a.r1).map_err(from_setup)
}

fn initial_state(a: &StateArgs, r1: f64) -> Result<InitialState64, CliError> {
    InitialState64::new(a.s, a.phi, r1).map_err(from_setup)
}
