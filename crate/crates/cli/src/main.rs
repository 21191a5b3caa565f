//! `iwl`: fit, compare and simulate the inverse weighted Lindley distribution.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 numerical failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "iwl",
    version,
    about = "Inverse weighted Lindley lifetime toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random IWL sample as a one-column CSV.
    Sample {
        #[arg(long)]
        phi: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the IWL distribution to a dataset.
    Fit {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = FitMethod::Mle)]
        method: FitMethod,
        #[arg(long, default_value_t = iwl::fit::DEFAULT_BOOT_REPS)]
        boot_reps: usize,
        #[arg(long, default_value_t = iwl::fit::DEFAULT_CI_LEVEL)]
        ci_level: f64,
        /// Seed for bootstrap resampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Fit competing families and rank them by information criteria.
    Compare {
        #[command(flatten)]
        input: Input,
        /// Comma-separated model ids (default: all).
        #[arg(long, value_delimiter = ',')]
        models: Option<Vec<String>>,
        #[arg(long)]
        json: bool,
    },
    /// Kaplan–Meier survival curve as CSV.
    Km {
        #[command(flatten)]
        input: Input,
    },
    /// Scaled total-time-on-test curve as CSV.
    Ttt {
        #[command(flatten)]
        input: Input,
    },
    /// IWL hazard on a grid of times as CSV.
    Hazard {
        #[arg(long)]
        phi: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        tmin: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Space the grid logarithmically.
        #[arg(long)]
        log_spaced: bool,
    },
    /// Run a Monte Carlo experiment described by a key=value config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    /// CSV with a `time` column and optional 0/1 `status` column.
    path: Option<PathBuf>,
    /// Use a built-in dataset instead of a file.
    #[arg(long, value_enum, conflicts_with = "path")]
    demo: Option<Demo>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Aircraft,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FitMethod {
    Mle,
    Cmle,
    Boot,
}

fn configure_threads() -> Result<(), commands::Failure> {
    let Ok(v) = std::env::var("IWL_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        commands::Failure::usage(format!("IWL_THREADS must be a positive integer, got '{v}'"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| commands::Failure::usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Sample {
            phi,
            lambda,
            n,
            seed,
            out,
        } => commands::sample(phi, lambda, n, seed, out),
        Command::Fit {
            input,
            method,
            boot_reps,
            ci_level,
            seed,
            json,
        } => {
            let method = match method {
                FitMethod::Mle => commands::FitChoice::Mle,
                FitMethod::Cmle => commands::FitChoice::Cmle,
                FitMethod::Boot => commands::FitChoice::Boot {
                    reps: boot_reps,
                    seed,
                },
            };
            commands::fit(&load(&input)?, method, ci_level, json)
        }
        Command::Compare {
            input,
            models,
            json,
        } => commands::compare(&load(&input)?, models, json),
        Command::Km { input } => commands::km(&load(&input)?),
        Command::Ttt { input } => commands::ttt(&load(&input)?),
        Command::Hazard {
            phi,
            lambda,
            tmin,
            tmax,
            points,
            log_spaced,
        } => commands::hazard(phi, lambda, tmin, tmax, points, log_spaced),
        Command::Simulate { config, out } => commands::simulate(&config, out),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(input: &Input) -> Result<iwl::LifetimeData, commands::Failure> {
    match (&input.path, input.demo) {
        (_, Some(Demo::Aircraft)) => Ok(iwl::fixture::aircraft()),
        (Some(p), None) => iwl::LifetimeData::from_csv_path(p).map_err(commands::Failure::from),
        (None, None) => Err(commands::Failure::usage(
            "give a dataset path or --demo aircraft".into(),
        )),
    }
}
