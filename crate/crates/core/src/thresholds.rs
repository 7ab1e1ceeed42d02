//! Density thresholds separating the sparse, dense and very dense regimes.
//!
//! `lambda0` is the density at which coverage peaks, found by bisection on a
//! central finite-difference derivative in log-density. `lambda1` is the
//! smallest grid density from which the log-log slope of the ASE stays at or
//! above a threshold (0.9 by default), i.e. where near-linear growth resumes.

use rayon::prelude::*;

use crate::analytic::{ase, coverage, CoverageQuery};
use crate::error::{domain, Error, Result};
use crate::model::NetworkEnvironment;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda0Options {
    /// Relative finite-difference step in log-density.
    pub rel_step: f64,
    /// Bisection stops once `(hi - lo) / mid` drops to this.
    pub rel_width: f64,
    pub max_iterations: usize,
}

impl Default for Lambda0Options {
    fn default() -> Self {
        Lambda0Options {
            rel_step: 1e-2,
            rel_width: 5e-3,
            max_iterations: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport {
    pub lambda0: f64,
    pub gamma: f64,
    /// Final bisection bracket.
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// `|dp/d ln λ|` at `lambda0`.
    pub derivative_residual: f64,
}

struct Slope {
    value: f64,
    noise: f64,
}

fn log_slope(env: &NetworkEnvironment, gamma: f64, lambda: f64, h: f64) -> Result<Slope> {
    let up = coverage(env, CoverageQuery::new(lambda * h.exp(), gamma)?)?;
    let down = coverage(env, CoverageQuery::new(lambda * (-h).exp(), gamma)?)?;
    Ok(Slope {
        value: (up.value - down.value) / (2.0 * h),
        noise: (up.abs_error_estimate + down.abs_error_estimate) / (2.0 * h),
    })
}

/// Bisection for the coverage peak inside `bracket`.
pub fn find_lambda0(
    env: &NetworkEnvironment,
    gamma: f64,
    bracket: (f64, f64),
    opts: Lambda0Options,
) -> Result<ThresholdReport> {
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(domain(format!("invalid bracket ({lo}, {hi})")));
    }
    let h = opts.rel_step;
    let g_lo = log_slope(env, gamma, lo, h)?;
    let g_hi = log_slope(env, gamma, hi, h)?;
    if g_lo.value.abs() <= g_lo.noise && g_hi.value.abs() <= g_hi.noise {
        return Err(Error::Tolerance(format!(
            "coverage slope at both bracket ends ({:e}, {:e}) is below the quadrature noise floor",
            g_lo.value, g_hi.value
        )));
    }
    if !(g_lo.value > 0.0 && g_hi.value < 0.0) {
        return Err(Error::Bracketing(format!(
            "coverage slope does not change from rising to falling on ({lo}, {hi}): {:e} .. {:e}",
            g_lo.value, g_hi.value
        )));
    }
    let mut iterations = 0;
    while (hi - lo) / (0.5 * (hi + lo)) > opts.rel_width {
        if iterations >= opts.max_iterations {
            return Err(Error::Numerical {
                message: "lambda0 bisection exceeded its iteration cap".into(),
                estimate: (lo * hi).sqrt(),
            });
        }
        let mid = (lo * hi).sqrt();
        let g = log_slope(env, gamma, mid, h)?;
        if g.value > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let lambda0 = (lo * hi).sqrt();
    let residual = log_slope(env, gamma, lambda0, h)?.value.abs();
    Ok(ThresholdReport {
        lambda0,
        gamma,
        bracket: (lo, hi),
        iterations,
        derivative_residual: residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda1Options {
    pub slope_threshold: f64,
    /// Grid points at or below this density are ignored.
    pub lambda0: Option<f64>,
}

impl Default for Lambda1Options {
    fn default() -> Self {
        Lambda1Options {
            slope_threshold: 0.9,
            lambda0: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopePoint {
    pub lambda: f64,
    pub ase: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lambda1Report {
    pub lambda1: f64,
    pub gamma0: f64,
    pub profile: Vec<SlopePoint>,
}

/// Analytic ASE with its local log-log slope at every grid point: central
/// differences inside, one-sided at the ends.
pub fn ase_slope_profile(env: &NetworkEnvironment, gamma0: f64, grid: &[f64]) -> Result<Vec<SlopePoint>> {
    if grid.len() < 3 {
        return Err(domain("slope profile needs at least three grid points"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || !(grid[0] > 0.0) {
        return Err(domain("grid must be positive and strictly increasing"));
    }
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&l| ase(env, l, gamma0).map(|a| a.value))
        .collect::<Result<_>>()?;
    if let Some(v) = values.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::Numerical {
            message: "ASE must be positive to take logarithms".into(),
            estimate: *v,
        });
    }
    let n = grid.len();
    let slope = |i: usize, j: usize| (values[j].ln() - values[i].ln()) / (grid[j].ln() - grid[i].ln());
    Ok((0..n)
        .map(|i| {
            let s = match i {
                0 => slope(0, 1),
                _ if i == n - 1 => slope(n - 2, n - 1),
                _ => slope(i - 1, i + 1),
            };
            SlopePoint {
                lambda: grid[i],
                ase: values[i],
                slope: s,
            }
        })
        .collect())
}

/// Smallest grid density above `lambda0` from which the ASE log-log slope
/// stays at or above the threshold.
pub fn find_lambda1(
    env: &NetworkEnvironment,
    gamma0: f64,
    grid: &[f64],
    opts: Lambda1Options,
) -> Result<Lambda1Report> {
    let profile = ase_slope_profile(env, gamma0, grid)?;
    let lambda1 = lambda1_from_profile(&profile, opts);
    match lambda1 {
        Some(lambda1) => Ok(Lambda1Report {
            lambda1,
            gamma0,
            profile,
        }),
        None => Err(Error::NotFound {
            message: format!(
                "ASE slope never settles at or above {} on the grid",
                opts.slope_threshold
            ),
            profile: profile.iter().map(|p| (p.lambda, p.slope)).collect(),
        }),
    }
}

pub fn lambda1_from_profile(profile: &[SlopePoint], opts: Lambda1Options) -> Option<f64> {
    let floor = opts.lambda0.unwrap_or(0.0);
    let candidates: Vec<&SlopePoint> = profile.iter().filter(|p| p.lambda > floor).collect();
    let last_bad = candidates
        .iter()
        .rposition(|p| p.slope < opts.slope_threshold);
    match last_bad {
        None => candidates.first().map(|p| p.lambda),
        Some(i) => candidates.get(i + 1).map(|p| p.lambda),
    }
}
