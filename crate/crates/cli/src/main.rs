//! `netalloc`: experiment runner over the allocation toolkit.
//!
//! Exit codes: 0 success, 2 usage error, 3 infeasible or refused
//! computation, 4 data-format error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use netalloc::dataset::DataError;
use netalloc::dnn::DnnError;
use netalloc::netmodel::ScenarioError;
use netalloc::solvers::SolverError;

#[derive(Parser)]
#[command(name = "netalloc", version, about = "Sub-band and power allocation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Ga,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Layers,
    Samples,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a solver-labeled dataset CSV from a scenario config.
    Generate {
        /// Scenario config file (flat key = value).
        config: PathBuf,
        /// Number of samples to generate.
        #[arg(long)]
        samples: usize,
        /// Base seed; defaults to the scenario's rng_seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Label solver.
        #[arg(long, value_enum, default_value = "ga")]
        method: MethodArg,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve identical realizations with both solvers and report the gap.
    OracleCompare {
        /// Scenario config file (flat key = value).
        config: PathBuf,
        /// Number of paired solves.
        #[arg(long)]
        samples: usize,
        /// Base seed; defaults to the scenario's rng_seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Report CSV path; a JSON summary is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Pretrain a stacked autoencoder, add a softmax head, fine-tune, and
    /// evaluate.
    Train {
        /// Training dataset CSV.
        #[arg(long)]
        data: PathBuf,
        /// Test dataset CSV (must share the training scenario).
        #[arg(long)]
        test_data: PathBuf,
        /// Comma-separated hidden layer widths, e.g. `90,80,72,64`.
        #[arg(long)]
        hidden: String,
        /// Training hyperparameter file (flat key = value); defaults apply
        /// when omitted.
        #[arg(long)]
        train_config: Option<PathBuf>,
        /// Checkpoint output path; metrics files are written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Train one model per swept value and emit an accuracy curve.
    Sweep {
        /// Sweep axis.
        #[arg(long, value_enum)]
        axis: AxisArg,
        /// Comma-separated axis values (layer counts or sample counts).
        #[arg(long)]
        values: String,
        /// Training dataset CSV.
        #[arg(long)]
        data: PathBuf,
        /// Test dataset CSV.
        #[arg(long)]
        test_data: PathBuf,
        /// Hidden widths for the samples axis (ignored for layers, which
        /// derives widths per layer count).
        #[arg(long)]
        hidden: Option<String>,
        /// Training hyperparameter file.
        #[arg(long)]
        train_config: Option<PathBuf>,
        /// Curve CSV path; a JSON summary is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
}

/// CLI failure with its process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Refused(String),
    DataFormat(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Refused(_) => 3,
            CliError::DataFormat(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Refused(m) | CliError::DataFormat(m) => m,
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        CliError::DataFormat(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::SearchSpaceExceeded { .. } => CliError::Refused(e.to_string()),
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::DataFormat(e.to_string())
    }
}

impl From<DnnError> for CliError {
    fn from(e: DnnError) -> Self {
        CliError::DataFormat(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::DataFormat(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate {
            config,
            samples,
            seed,
            method,
            out,
        } => commands::generate::run(&config, samples, seed, method, &out),
        Command::OracleCompare {
            config,
            samples,
            seed,
            out,
        } => commands::oracle_compare::run(&config, samples, seed, &out),
        Command::Train {
            data,
            test_data,
            hidden,
            train_config,
            out,
        } => commands::train::run(&data, &test_data, &hidden, train_config.as_deref(), &out),
        Command::Sweep {
            axis,
            values,
            data,
            test_data,
            hidden,
            train_config,
            out,
        } => commands::sweep::run(
            axis,
            &values,
            &data,
            &test_data,
            hidden.as_deref(),
            train_config.as_deref(),
            &out,
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
