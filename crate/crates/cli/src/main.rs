//! `decoupler-lab`: projection queries, correctability checks, universality
//! audits, simulations and sweeps on top of `decoupler-core`.
//!
//! Exit codes: 0 success, 1 negative verdict or runtime failure
//! (synchronization, bounds, numerics, I/O), 2 invalid input.

mod commands;
mod inputs;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use decoupler_core::Error;

#[derive(Debug, Parser)]
#[command(name = "decoupler-lab", version, about = "Dynamical decoupling and control on top of a decoupler")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Seed for random Hamiltonians, baths and initial states.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance for membership and correctability verdicts.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Directory that relative output paths are resolved against.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print Π_G(H) and whether H already commutes with the group.
    Project(ProjectArgs),
    /// Decide whether a group averages every error generator to zero.
    Check(CheckArgs),
    /// Lie closure of the Hamiltonians a program can reach.
    Universality(UniversalityArgs),
    /// Stroboscopic trajectory of a program coupled to a bath.
    Simulate(SimulateArgs),
    /// Convergence sweep over cycle times or pulse widths.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    /// Group constructor, e.g. `collective_pauli(2)`.
    #[arg(long, required_unless_present = "group_json", conflicts_with = "group_json")]
    pub group: Option<String>,
    /// Group document: `{"builtin": ".."}` or `{"elements": [..]}`.
    #[arg(long)]
    pub group_json: Option<PathBuf>,
    /// Hamiltonian constructor, e.g. `heisenberg(1,2)`.
    #[arg(long = "h", required_unless_present = "h_json", conflicts_with = "h_json")]
    pub h: Option<String>,
    /// Hamiltonian as an operator document `{"dim", "re", "im"}`.
    #[arg(long)]
    pub h_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, required_unless_present = "group_json", conflicts_with = "group_json")]
    pub group: Option<String>,
    #[arg(long)]
    pub group_json: Option<PathBuf>,
    /// Error-space constructor; repeat to combine, e.g. `--errors independent(2)`.
    #[arg(long, required_unless_present = "errors_json", conflicts_with = "errors_json")]
    pub errors: Vec<String>,
    /// Error-space document: `{"builtin": [..]}` or `{"generators": [..]}`.
    #[arg(long)]
    pub errors_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct UniversalityArgs {
    /// Pulse program (`.json` for the JSON form, anything else is text).
    pub program: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialState {
    /// |+⟩ on every system qubit.
    Plus,
    /// |0…0⟩.
    Zero,
    /// Seeded random system state.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PulseModeArg {
    /// Free Hamiltonian stays on while a pulse is applied.
    On,
    /// Only the pulse drive acts during a pulse.
    Off,
}

#[derive(Debug, Clone, Args)]
pub struct PhysicsArgs {
    /// Bath: `none`, `static_dephasing(g)`, `spin_bath(n,g)` or `spin_bath_full(n,g)`.
    #[arg(long, default_value = "none")]
    pub bath: String,
    /// System Hamiltonian: a constructor, or `random` for a seeded draw with ‖H‖ = 1.
    #[arg(long = "h", conflicts_with = "h_json")]
    pub h: Option<String>,
    #[arg(long)]
    pub h_json: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InitialState::Plus)]
    pub state: InitialState,
    /// Finite pulse width; ideal pulses when absent.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, value_enum, default_value_t = PulseModeArg::On)]
    pub pulse_mode: PulseModeArg,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub program: PathBuf,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    /// Number of decoupling cycles to run.
    #[arg(long, required_unless_present = "duration", conflicts_with = "duration")]
    pub cycles: Option<usize>,
    /// Total time instead of a cycle count; must be a whole number of cycles.
    #[arg(long)]
    pub duration: Option<f64>,
    /// System observable for the metric column (default `pauli(1,x)`).
    #[arg(long)]
    pub observable: Option<String>,
    /// Run the same cycle grid without pulses or controls.
    #[arg(long)]
    pub no_decoupling: bool,
    /// CSV destination; a manifest is written next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    /// Average-Hamiltonian residual per cycle.
    Residual,
    /// Per-cycle propagator defect.
    Defect,
    /// Final system infidelity after `--total-time`.
    Infidelity,
    /// Final infidelity against pulse width at fixed `--tc`.
    TauInfidelity,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub program: PathBuf,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    /// Comma-separated cycle times.
    #[arg(long, value_delimiter = ',')]
    pub tc_list: Vec<f64>,
    /// Comma-separated pulse widths for `tau-infidelity`.
    #[arg(long, value_delimiter = ',')]
    pub tau_list: Vec<f64>,
    /// Fixed cycle time for `tau-infidelity`.
    #[arg(long)]
    pub tc: Option<f64>,
    /// Evolution time for the infidelity metrics.
    #[arg(long, default_value_t = 1.0)]
    pub total_time: f64,
    #[arg(long)]
    pub out: PathBuf,
}

/// A failed command together with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn invalid(error: impl Into<anyhow::Error>) -> Self {
        Self { code: 2, error: error.into() }
    }

    pub fn runtime(error: impl Into<anyhow::Error>) -> Self {
        Self { code: 1, error: error.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Synchronization(_)
            | Error::Bounds(_)
            | Error::BranchCut { .. }
            | Error::NumericalIntegrity(_)
            | Error::Resource { .. } => Failure::runtime(e),
            _ => Failure::invalid(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::runtime(e)
    }
}

pub type Outcome = Result<ExitCode, Failure>;

fn configure_threads() {
    if let Some(n) = std::env::var("DECOUPLER_LAB_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            // Fails only if a pool already exists, which cannot happen this early.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match &cli.command {
        Command::Project(a) => commands::project(&cli.global, a),
        Command::Check(a) => commands::check(&cli.global, a),
        Command::Universality(a) => commands::universality(&cli.global, a),
        Command::Simulate(a) => commands::simulate(&cli.global, a),
        Command::Sweep(a) => commands::sweep(&cli.global, a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
