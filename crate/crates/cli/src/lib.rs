//! Sweeps, validation runs and threshold searches over `sgcov-core`, written
//! as CSV with `#`-prefixed metadata.
//!
//! Rows are computed in parallel and sorted by `(lambda, gamma)` before
//! writing, and simulation seeds depend only on the grid index, so a spec
//! always produces the same bytes whatever the thread count.

use std::fmt::Write as _;

use rayon::prelude::*;
use sgcov_core::analytic::{ase, coverage, coverage_case1, coverage_general, Case1Params, CoverageQuery};
use sgcov_core::config::EnvConfig;
use sgcov_core::model::NetworkEnvironment;
use sgcov_core::simulator::{estimate_coverage, SimulationConfig};
use sgcov_core::thresholds::{
    ase_slope_profile, find_lambda0, lambda1_from_profile, Lambda0Options, Lambda1Options,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] sgcov_core::Error),
}

impl CliError {
    /// 2 for usage and configuration problems, 3 for model or numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(sgcov_core::Error::Config { .. }) => 2,
            CliError::Core(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Coverage,
    Ase,
    Validate,
    Lambda0,
    Lambda1,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Coverage => "coverage",
            Mode::Ase => "ase",
            Mode::Validate => "validate",
            Mode::Lambda0 => "lambda0",
            Mode::Lambda1 => "lambda1",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub mode: Mode,
    pub lambda_start: f64,
    pub lambda_stop: f64,
    pub points_per_decade: usize,
    pub gammas: Vec<f64>,
    pub gamma0: f64,
    pub trials: usize,
    pub seed: u64,
    pub slope_threshold: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let usage = |m: String| Err(CliError::Usage(m));
        if !(self.lambda_start > 0.0 && self.lambda_stop.is_finite()) {
            return usage(format!("density range must be positive and finite, got [{}, {}]", self.lambda_start, self.lambda_stop));
        }
        if !(self.lambda_start < self.lambda_stop) {
            return usage(format!(
                "empty density grid: start {} must be below stop {}",
                self.lambda_start, self.lambda_stop
            ));
        }
        if self.points_per_decade < 1 {
            return usage("points per decade must be at least 1".into());
        }
        if matches!(self.mode, Mode::Coverage | Mode::Validate | Mode::Lambda0) && self.gammas.is_empty() {
            return usage("at least one --gamma is required".into());
        }
        if let Some(g) = self.gammas.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
            return usage(format!("SINR thresholds must be positive, got {g}"));
        }
        if !(self.gamma0 > 0.0 && self.gamma0.is_finite()) {
            return usage(format!("gamma0 must be positive, got {}", self.gamma0));
        }
        if self.mode == Mode::Validate && self.trials == 0 {
            return usage("validate needs at least one trial".into());
        }
        Ok(())
    }

    /// Log-spaced grid from start to stop inclusive, at least
    /// `points_per_decade` points per decade.
    pub fn grid(&self) -> Vec<f64> {
        let (a, b) = (self.lambda_start.log10(), self.lambda_stop.log10());
        let n = ((b - a) * self.points_per_decade as f64 - 1e-9).ceil().max(1.0) as usize;
        (0..=n)
            .map(|k| match k {
                0 => self.lambda_start,
                _ if k == n => self.lambda_stop,
                _ => 10f64.powf(a + (b - a) * k as f64 / n as f64),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    /// Number of validation rows outside the agreement bound.
    ValidationFailed(usize),
    /// The lambda1 criterion was never met; the CSV still holds the profile.
    NotFound(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub csv: String,
    pub status: Status,
}

fn num(x: f64) -> String {
    format!("{x:.8e}")
}

fn header(spec: &SweepSpec, cfg: &EnvConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# sgcov {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "# mode={}", spec.mode.name());
    let _ = writeln!(
        s,
        "# lambda_start={} lambda_stop={} points_per_decade={}",
        spec.lambda_start, spec.lambda_stop, spec.points_per_decade
    );
    let gammas: Vec<String> = spec.gammas.iter().map(|g| g.to_string()).collect();
    let _ = writeln!(s, "# gamma={} gamma0={}", gammas.join(","), spec.gamma0);
    match spec.mode {
        Mode::Validate => {
            let _ = writeln!(s, "# trials={} seed={}", spec.trials, spec.seed);
        }
        Mode::Lambda1 => {
            let _ = writeln!(s, "# slope_threshold={}", spec.slope_threshold);
        }
        _ => {}
    }
    for line in cfg.to_string().lines() {
        let _ = writeln!(s, "# {line}");
    }
    s
}

/// Runs `spec` against the environment described by `cfg`.
pub fn run(spec: &SweepSpec, cfg: &EnvConfig) -> Result<Outcome> {
    spec.validate()?;
    let env = cfg.build()?;
    let mut csv = header(spec, cfg);
    let status = match spec.mode {
        Mode::Coverage => coverage_rows(spec, &env, &mut csv)?,
        Mode::Ase => ase_rows(spec, &env, &mut csv)?,
        Mode::Validate => validate_rows(spec, &env, &mut csv)?,
        Mode::Lambda0 => lambda0_rows(spec, &env, &mut csv)?,
        Mode::Lambda1 => lambda1_rows(spec, &env, &mut csv)?,
    };
    Ok(Outcome { csv, status })
}

fn pairs(spec: &SweepSpec) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = spec
        .grid()
        .into_iter()
        .flat_map(|l| spec.gammas.iter().map(move |&g| (l, g)))
        .collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    v
}

fn coverage_rows(spec: &SweepSpec, env: &NetworkEnvironment, csv: &mut String) -> Result<Status> {
    let closed_form = Case1Params::from_env(env).is_ok();
    let rows: Vec<String> = pairs(spec)
        .into_par_iter()
        .map(|(l, g)| {
            let q = CoverageQuery::new(l, g)?;
            let general = coverage_general(env, q)?.value;
            let closed = if closed_form {
                num(coverage_case1(env, q)?.value)
            } else {
                String::new()
            };
            Ok(format!("{},{},{},{}", num(l), num(g), num(general), closed))
        })
        .collect::<sgcov_core::Result<_>>()?;
    csv.push_str("lambda,gamma,p_cov_analytic,p_cov_closed_form\n");
    for r in rows {
        csv.push_str(&r);
        csv.push('\n');
    }
    Ok(Status::Ok)
}

fn ase_rows(spec: &SweepSpec, env: &NetworkEnvironment, csv: &mut String) -> Result<Status> {
    let rows: Vec<String> = spec
        .grid()
        .into_par_iter()
        .map(|l| Ok(format!("{},{},{}", num(l), num(spec.gamma0), num(ase(env, l, spec.gamma0)?.value))))
        .collect::<sgcov_core::Result<_>>()?;
    csv.push_str("lambda,gamma0,ase_analytic\n");
    for r in rows {
        csv.push_str(&r);
        csv.push('\n');
    }
    Ok(Status::Ok)
}

/// Agreement bound between a Monte Carlo estimate and the analysis.
pub fn agreement_bound(std_err: f64) -> f64 {
    (3.0 * std_err).max(0.01)
}

fn validate_rows(spec: &SweepSpec, env: &NetworkEnvironment, csv: &mut String) -> Result<Status> {
    let grid = spec.grid();
    let mut gammas = spec.gammas.clone();
    gammas.sort_by(f64::total_cmp);
    gammas.dedup();
    // densities one after another; the trials inside each run in parallel
    let mut rows = Vec::new();
    let mut failed = 0;
    for (i, &l) in grid.iter().enumerate() {
        let sim = SimulationConfig::new(l, spec.trials, spec.seed.wrapping_add(i as u64), gammas.clone(), spec.gamma0)?;
        let emp = estimate_coverage(&sim, env)?;
        for c in &emp.coverage {
            let analytic = coverage(env, CoverageQuery::new(l, c.gamma)?)?.value;
            let diff = (c.estimate - analytic).abs();
            let pass = diff <= agreement_bound(c.std_error);
            failed += usize::from(!pass);
            rows.push(format!(
                "{},{},{},{},{},{},{}",
                num(l),
                num(c.gamma),
                num(analytic),
                num(c.estimate),
                num(c.std_error),
                num(diff),
                pass
            ));
        }
    }
    csv.push_str("lambda,gamma,analytic,empirical,std_err,abs_diff,pass\n");
    for r in rows {
        csv.push_str(&r);
        csv.push('\n');
    }
    Ok(if failed == 0 { Status::Ok } else { Status::ValidationFailed(failed) })
}

fn lambda0_rows(spec: &SweepSpec, env: &NetworkEnvironment, csv: &mut String) -> Result<Status> {
    let mut gammas = spec.gammas.clone();
    gammas.sort_by(f64::total_cmp);
    gammas.dedup();
    let bracket = (spec.lambda_start, spec.lambda_stop);
    let reports = gammas
        .into_par_iter()
        .map(|g| find_lambda0(env, g, bracket, Lambda0Options::default()))
        .collect::<sgcov_core::Result<Vec<_>>>()?;
    csv.push_str("gamma,lambda0,bracket_lo,bracket_hi,iterations,derivative_residual\n");
    for r in reports {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            num(r.gamma),
            num(r.lambda0),
            num(r.bracket.0),
            num(r.bracket.1),
            r.iterations,
            num(r.derivative_residual)
        );
    }
    Ok(Status::Ok)
}

fn lambda1_rows(spec: &SweepSpec, env: &NetworkEnvironment, csv: &mut String) -> Result<Status> {
    let profile = ase_slope_profile(env, spec.gamma0, &spec.grid())?;
    let opts = Lambda1Options {
        slope_threshold: spec.slope_threshold,
        lambda0: None,
    };
    let status = match lambda1_from_profile(&profile, opts) {
        Some(l1) => {
            let _ = writeln!(csv, "# lambda1={}", num(l1));
            Status::Ok
        }
        None => {
            csv.push_str("# lambda1=none\n");
            Status::NotFound(format!(
                "ASE log-log slope never settles at or above {} on the grid",
                spec.slope_threshold
            ))
        }
    };
    csv.push_str("lambda,gamma0,ase_analytic,loglog_slope\n");
    for p in profile {
        let _ = writeln!(csv, "{},{},{},{}", num(p.lambda), num(spec.gamma0), num(p.ase), num(p.slope));
    }
    Ok(status)
}
