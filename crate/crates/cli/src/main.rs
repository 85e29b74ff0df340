//! `ergoflow`: sweeps over ergotropy bounds, thermal polytopes and open-cycle
//! engines, written as CSV or JSON.

mod commands;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use grid::Grid;
use output::Format;

#[derive(Parser, Debug)]
#[command(name = "ergoflow", version, about)]
struct Cli {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ergotropy, passive state, beta* and the three work bounds of one state.
    Bound(BoundArgs),
    /// Extremal states of the thermal polytope of one state.
    Extremal(ExtremalArgs),
    /// Optimal work and efficiency of the open-cycle engine over a grid.
    EngineSweep(SweepArgs),
    /// Optimal qutrit protocol labels over a (beta_hot, beta_cold) grid.
    RegionMap(SweepArgs),
    /// Ground-state oscillator driven by the highest-energy thermal process.
    Oscillator(OscillatorArgs),
}

#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    /// Energy levels, ascending, starting at 0.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub energies: Vec<f64>,
    /// Populations of the state.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "beta_cold"
    )]
    pub probs: Option<Vec<f64>>,
    /// Use the Gibbs state at this inverse temperature instead of --probs (`inf` allowed).
    #[arg(long)]
    pub beta_cold: Option<f64>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Bath inverse temperature.
    #[arg(long, alias = "beta-hot")]
    pub beta: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExtremalArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Bath inverse temperature.
    #[arg(long, alias = "beta")]
    pub beta_hot: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest dimension accepted by the d! enumeration.
    #[arg(long, env = "ERGOFLOW_MAX_DIM", default_value_t = ergoflow::thermomaj::DEFAULT_MAX_DIM)]
    pub max_dim: usize,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Fixed spectrum; grid variables omega_k replace level k.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub energies: Option<Vec<f64>>,
    /// Level spacing of a ladder spectrum (region-map: spectrum (0, 1, omega)).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Ladder dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub beta_hot: Option<f64>,
    /// `inf` allowed.
    #[arg(long)]
    pub beta_cold: Option<f64>,
    /// VAR:MIN:MAX:STEPS[:log]; VAR in beta_hot, beta_cold, omega, omega_K, dim.
    #[arg(long)]
    pub grid: Vec<Grid>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest dimension accepted by the d! enumeration.
    #[arg(long, env = "ERGOFLOW_MAX_DIM", default_value_t = ergoflow::thermomaj::DEFAULT_MAX_DIM)]
    pub max_dim: usize,
}

#[derive(Args, Debug)]
pub struct OscillatorArgs {
    /// Bath inverse temperature.
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Add the zero-detuning spacing with log Z / (beta omega) = N, for each N.
    #[arg(long, value_delimiter = ',')]
    pub tuned: Vec<u32>,
    /// VAR:MIN:MAX:STEPS[:log]; VAR in omega, dim.
    #[arg(long)]
    pub grid: Vec<Grid>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Io(m) => m,
        }
    }
}

impl From<ergoflow::Error> for CliError {
    fn from(e: ergoflow::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--workers: {e}")))?;
    }
    match cli.command {
        Command::Bound(a) => commands::bound(&a),
        Command::Extremal(a) => commands::extremal(&a),
        Command::EngineSweep(a) => commands::engine_sweep(&a),
        Command::RegionMap(a) => commands::region_map(&a),
        Command::Oscillator(a) => commands::oscillator(&a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
