//! `tqsd` command line: run bound/simulation sweeps and validate input files.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tqsd::sweep::{
    build_time_grid, rows_to_csv, run_sweep, validate_input, Experiment, InstanceSource, SweepSpec,
};
use tqsd::Error;

/// Exit categories: 1 = I/O or usage, 2 = input validation, 3 = numerical.
fn exit_category(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 1,
        Error::Numerical(_) | Error::Unreachable(_) => 3,
        _ => 2,
    }
}

#[derive(Parser)]
#[command(
    name = "tqsd",
    about = "Time-limited quantum state discrimination: simulations, bounds, sweeps",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment over a time grid and emit a CSV table.
    Sweep(SweepArgs),
    /// Check an input file against every structural invariant.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    TwoStateBounds,
    NStateBounds,
    AttainmentCurve,
    ChshBounds,
    MlTime,
    Truncation,
}

impl From<ExperimentArg> for Experiment {
    fn from(value: ExperimentArg) -> Self {
        match value {
            ExperimentArg::TwoStateBounds => Experiment::TwoStateBounds,
            ExperimentArg::NStateBounds => Experiment::NStateBounds,
            ExperimentArg::AttainmentCurve => Experiment::AttainmentCurve,
            ExperimentArg::ChshBounds => Experiment::ChshBounds,
            ExperimentArg::MlTime => Experiment::MlTime,
            ExperimentArg::Truncation => Experiment::Truncation,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Linear,
    Log,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment to run.
    #[arg(long, value_enum)]
    experiment: ExperimentArg,
    /// Input document; omit to generate instances from the seed.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Number of generated instances (ignored with --input).
    #[arg(long, default_value_t = 8)]
    instances: usize,
    /// Encoding dimension for generated instances.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Number of symbols for generated ensembles.
    #[arg(long, default_value_t = 2)]
    symbols: usize,
    /// Start of the time grid.
    #[arg(long, default_value_t = 0.0)]
    t_min: f64,
    /// End of the time grid.
    #[arg(long, default_value_t = std::f64::consts::PI)]
    t_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 9)]
    t_count: usize,
    /// Grid spacing.
    #[arg(long, value_enum, default_value_t = ScaleArg::Linear)]
    t_scale: ScaleArg,
    /// Planck constant over 2 pi in the working units.
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Seed for all generated randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Spectral-norm budget for generated Hamiltonians.
    #[arg(long, default_value_t = 1.0)]
    e_max: f64,
    /// Truncation error parameters (truncation experiment only).
    #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.05, 0.1])]
    epsilons: Vec<f64>,
    /// Clip reported bounds at 1 instead of printing them raw.
    #[arg(long)]
    capped: bool,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Input document to check.
    #[arg(long)]
    input: PathBuf,
}

fn run_sweep_command(args: &SweepArgs) -> Result<(), Error> {
    let time_grid = build_time_grid(
        args.t_min,
        args.t_max,
        args.t_count,
        matches!(args.t_scale, ScaleArg::Log),
    )?;
    let source = match &args.input {
        Some(path) => InstanceSource::File(path.clone()),
        None => InstanceSource::Generated {
            count: args.instances,
            dim: args.dim,
            symbols: args.symbols,
        },
    };
    let spec = SweepSpec {
        experiment: args.experiment.into(),
        time_grid,
        hbar: args.hbar,
        seed: args.seed,
        source,
        capped: args.capped,
        epsilons: args.epsilons.clone(),
        e_max: args.e_max,
    };
    let csv = rows_to_csv(&run_sweep(&spec)?);
    match &args.output {
        Some(path) => std::fs::write(path, csv)?,
        None => std::io::stdout().write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn run_validate_command(args: &ValidateArgs) -> Result<bool, Error> {
    let report = validate_input(&args.input)?;
    if report.is_clean() {
        println!("{}: ok", args.input.display());
        Ok(true)
    } else {
        for issue in &report.issues {
            println!("{issue}");
        }
        println!("{} issue(s) found", report.issues.len());
        Ok(false)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sweep(args) => run_sweep_command(args).map(|()| true),
        Command::Validate(args) => run_validate_command(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_category(&err))
        }
    }
}
