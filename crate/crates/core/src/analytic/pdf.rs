use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::model::NetworkEnvironment;

fn nearest_density(lambda: f64, r: f64) -> f64 {
    (-PI * r * r * lambda).exp() * 2.0 * PI * r * lambda
}

fn los_weight(env: &NetworkEnvironment, lambda: f64, n: usize, r: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(domain(format!("density must be positive, got {lambda}")));
    }
    let seg = env
        .model
        .segments()
        .get(n)
        .ok_or_else(|| domain(format!("segment index {n} out of range")))?;
    if !seg.contains(r) {
        return Err(domain(format!(
            "r = {r} outside segment {n} ({}, {}]",
            seg.lower, seg.upper
        )));
    }
    Ok(seg.los_probability.eval(r))
}

/// Density of "nearest BS at distance `r` in segment `n` (0-based) with a LoS
/// link".
pub fn nearest_pdf_los(env: &NetworkEnvironment, lambda: f64, n: usize, r: f64) -> Result<f64> {
    let p = los_weight(env, lambda, n, r)?;
    Ok(p * nearest_density(lambda, r))
}

/// Density of "nearest BS at distance `r` in segment `n` (0-based) with an
/// NLoS link".
pub fn nearest_pdf_nlos(env: &NetworkEnvironment, lambda: f64, n: usize, r: f64) -> Result<f64> {
    let p = los_weight(env, lambda, n, r)?;
    Ok((1.0 - p) * nearest_density(lambda, r))
}
