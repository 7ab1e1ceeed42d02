//! Monte Carlo estimates of coverage and ASE for a typical UE at the origin.
//!
//! Each trial draws a Poisson number of BSs uniformly on a disc, gives every
//! BS-UE link an independent LoS draw and unit-mean exponential fading, and
//! associates the UE with the nearest BS. Trial `i` uses ChaCha8 stream `i`
//! under the root seed, and results are reduced in trial order, so estimates
//! are bit-identical for any number of worker threads.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::model::NetworkEnvironment;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub lambda: f64,
    pub region_radius: f64,
    pub trials: usize,
    pub seed: u64,
    pub gammas: Vec<f64>,
    pub gamma0: f64,
}

impl SimulationConfig {
    /// Uses the default region radius `max(2 km, 6/sqrt(πλ))`, which keeps at
    /// least 36 BSs in expectation.
    pub fn new(lambda: f64, trials: usize, seed: u64, gammas: Vec<f64>, gamma0: f64) -> Result<Self> {
        let cfg = SimulationConfig {
            lambda,
            region_radius: default_region_radius(lambda),
            trials,
            seed,
            gammas,
            gamma0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_region_radius(mut self, radius: f64) -> Result<Self> {
        self.region_radius = radius;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(domain(format!("density must be non-negative, got {}", self.lambda)));
        }
        if !(self.region_radius > 0.0 && self.region_radius.is_finite()) {
            return Err(domain("region radius must be positive"));
        }
        if self.trials == 0 {
            return Err(domain("at least one trial is required"));
        }
        if let Some(g) = self.gammas.iter().find(|g| !(**g > 0.0)) {
            return Err(domain(format!("SINR thresholds must be positive, got {g}")));
        }
        if !(self.gamma0 > 0.0) {
            return Err(domain(format!("gamma0 must be positive, got {}", self.gamma0)));
        }
        Ok(())
    }
}

pub fn default_region_radius(lambda: f64) -> f64 {
    if lambda > 0.0 {
        (6.0 / (PI * lambda).sqrt()).max(2.0)
    } else {
        2.0
    }
}

/// One Poisson draw around the typical UE.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RealizedNetwork {
    pub bs_positions: Vec<(f64, f64)>,
    pub los_flags: Vec<bool>,
    pub fading_gains: Vec<f64>,
}

impl RealizedNetwork {
    pub fn len(&self) -> usize {
        self.bs_positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bs_positions.is_empty()
    }
}

pub fn generate_network<R: Rng + ?Sized>(
    config: &SimulationConfig,
    env: &NetworkEnvironment,
    rng: &mut R,
) -> RealizedNetwork {
    let mean = config.lambda * PI * config.region_radius * config.region_radius;
    let count = if mean > 0.0 {
        Poisson::new(mean).map(|d| d.sample(rng) as usize).unwrap_or(0)
    } else {
        0
    };
    let mut net = RealizedNetwork {
        bs_positions: Vec::with_capacity(count),
        los_flags: Vec::with_capacity(count),
        fading_gains: Vec::with_capacity(count),
    };
    for _ in 0..count {
        let radius = config.region_radius * rng.random::<f64>().sqrt();
        let theta = 2.0 * PI * rng.random::<f64>();
        // a zero radius has probability zero; nudge it into the model's domain
        let r = radius.max(f64::MIN_POSITIVE);
        let p_los = env.los_probability(r).unwrap_or(0.0);
        let los = rng.random::<f64>() < p_los;
        let fading: f64 = Exp1.sample(rng);
        net.bs_positions.push((radius * theta.cos(), radius * theta.sin()));
        net.los_flags.push(los);
        net.fading_gains.push(fading);
    }
    net
}

/// SINR of the UE at the origin served by its nearest BS, or `None` when the
/// realization has no BS.
pub fn sinr_of_typical_ue(network: &RealizedNetwork, env: &NetworkEnvironment) -> Option<f64> {
    let distances: Vec<f64> = network
        .bs_positions
        .iter()
        .map(|&(x, y)| x.hypot(y).max(f64::MIN_POSITIVE))
        .collect();
    let serving = distances
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))?
        .0;
    let mut signal = 0.0;
    let mut interference = 0.0;
    for (i, &r) in distances.iter().enumerate() {
        let gain = env.path_gain(r, network.los_flags[i]).unwrap_or(0.0);
        let rx = env.tx_power * gain * network.fading_gains[i];
        if i == serving {
            signal = rx;
        } else {
            interference += rx;
        }
    }
    Some(signal / (interference + env.noise_power))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageEstimate {
    pub gamma: f64,
    pub estimate: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalResult {
    /// In the order of `SimulationConfig::gammas`.
    pub coverage: Vec<CoverageEstimate>,
    pub ase: Estimate,
    pub outage_by_empty_network: usize,
    pub trials: usize,
}

impl EmpiricalResult {
    pub fn coverage_at(&self, gamma: f64) -> Option<&CoverageEstimate> {
        self.coverage.iter().find(|c| c.gamma == gamma)
    }
}

/// Same draws as `sinr_of_typical_ue(&generate_network(..))`, without
/// materializing the network.
fn trial_sinr<R: Rng + ?Sized>(config: &SimulationConfig, env: &NetworkEnvironment, rng: &mut R) -> Option<f64> {
    let mean = config.lambda * PI * config.region_radius * config.region_radius;
    let count = if mean > 0.0 {
        Poisson::new(mean).map(|d| d.sample(rng) as usize).unwrap_or(0)
    } else {
        0
    };
    let mut nearest = f64::INFINITY;
    let mut signal = 0.0;
    let mut interference = 0.0;
    for _ in 0..count {
        let radius = config.region_radius * rng.random::<f64>().sqrt();
        let _theta: f64 = rng.random();
        let r = radius.max(f64::MIN_POSITIVE);
        let p_los = env.los_probability(r).unwrap_or(0.0);
        let los = rng.random::<f64>() < p_los;
        let fading: f64 = Exp1.sample(rng);
        let rx = env.tx_power * env.path_gain(r, los).unwrap_or(0.0) * fading;
        if r < nearest {
            interference += signal;
            signal = rx;
            nearest = r;
        } else {
            interference += rx;
        }
    }
    (count > 0).then(|| signal / (interference + env.noise_power))
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// SINR draws of all trials, in trial order.
pub fn sample_sinr(config: &SimulationConfig, env: &NetworkEnvironment) -> Result<Vec<Option<f64>>> {
    config.validate()?;
    Ok((0..config.trials)
        .into_par_iter()
        .map(|i| trial_sinr(config, env, &mut trial_rng(config.seed, i)))
        .collect())
}

fn mean_and_se(n: usize, sum: f64, sum_sq: f64) -> Estimate {
    let nf = n as f64;
    let mean = sum / nf;
    let std_error = if n > 1 {
        let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
        (var / nf).sqrt()
    } else {
        0.0
    };
    Estimate { mean, std_error }
}

fn summarize(config: &SimulationConfig, draws: &[Option<f64>]) -> EmpiricalResult {
    let n = draws.len();
    let empty = draws.iter().filter(|d| d.is_none()).count();
    let coverage = config
        .gammas
        .iter()
        .map(|&gamma| {
            let hits = draws.iter().filter(|d| matches!(d, Some(s) if *s > gamma)).count();
            let h = hits as f64;
            let e = mean_and_se(n, h, h);
            CoverageEstimate {
                gamma,
                estimate: e.mean,
                std_error: e.std_error,
            }
        })
        .collect();
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for d in draws {
        if let Some(s) = *d {
            if s > config.gamma0 {
                let rate = config.lambda * s.ln_1p() / std::f64::consts::LN_2;
                sum += rate;
                sum_sq += rate * rate;
            }
        }
    }
    EmpiricalResult {
        coverage,
        ase: mean_and_se(n, sum, sum_sq),
        outage_by_empty_network: empty,
        trials: n,
    }
}

/// Runs all trials and summarizes coverage at every threshold and ASE.
pub fn simulate(config: &SimulationConfig, env: &NetworkEnvironment) -> Result<EmpiricalResult> {
    let draws = sample_sinr(config, env)?;
    Ok(summarize(config, &draws))
}

/// Fraction of trials with SINR above each threshold; empty networks count
/// as not covered.
pub fn estimate_coverage(config: &SimulationConfig, env: &NetworkEnvironment) -> Result<EmpiricalResult> {
    simulate(config, env)
}

/// `λ` times the sample mean of `log2(1+SINR) 1{SINR > γ0}`.
pub fn estimate_ase(config: &SimulationConfig, env: &NetworkEnvironment) -> Result<EmpiricalResult> {
    simulate(config, env)
}
