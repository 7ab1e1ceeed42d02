use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sgcov_cli::{run, CliError, Mode, Status, SweepSpec};
use sgcov_core::config::EnvConfig;

/// Coverage, ASE and density-threshold sweeps for Poisson small-cell networks.
#[derive(Parser, Debug)]
#[command(name = "sgcov", version)]
struct Args {
    #[arg(long, value_enum)]
    mode: Mode,
    /// First grid density (BSs/km²); lower bracket end in lambda0 mode.
    #[arg(long, default_value_t = 1.0)]
    lambda_start: f64,
    /// Last grid density (BSs/km²); upper bracket end in lambda0 mode.
    #[arg(long, default_value_t = 1e4)]
    lambda_stop: f64,
    #[arg(long, default_value_t = 10)]
    points_per_decade: usize,
    /// SINR thresholds (linear), comma separated or repeated.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0])]
    gamma: Vec<f64>,
    /// ASE threshold (linear).
    #[arg(long, default_value_t = 1.0)]
    gamma0: f64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value environment file; the 3GPP preset when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores). Never changes the output.
    #[arg(long)]
    threads: Option<usize>,
    /// Log-log ASE slope that counts as near-linear growth in lambda1 mode.
    #[arg(long, default_value_t = 0.9)]
    slope_threshold: f64,
}

fn load_config(path: Option<&PathBuf>) -> Result<EnvConfig, CliError> {
    match path {
        None => Ok(EnvConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
            Ok(EnvConfig::parse(&text)?)
        }
    }
}

fn execute(args: Args) -> Result<Status, CliError> {
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    }
    let cfg = load_config(args.config.as_ref())?;
    let spec = SweepSpec {
        mode: args.mode,
        lambda_start: args.lambda_start,
        lambda_stop: args.lambda_stop,
        points_per_decade: args.points_per_decade,
        gammas: args.gamma,
        gamma0: args.gamma0,
        trials: args.trials,
        seed: args.seed,
        slope_threshold: args.slope_threshold,
    };
    let outcome = run(&spec, &cfg)?;
    match &args.out {
        Some(path) => std::fs::write(path, &outcome.csv)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{}", outcome.csv),
    }
    Ok(outcome.status)
}

fn main() -> ExitCode {
    match execute(Args::parse()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::ValidationFailed(n)) => {
            eprintln!("{n} validation row(s) outside the agreement bound");
            ExitCode::from(1)
        }
        Ok(Status::NotFound(msg)) => {
            eprintln!("not found: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("sgcov: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
