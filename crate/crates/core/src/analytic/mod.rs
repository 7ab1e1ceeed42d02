//! Semi-analytical coverage probability and area spectral efficiency.
//!
//! Coverage is a sum over segments and link states of
//! `∫ exp(-γN0/(Pζ(r))) L_I(γ/(Pζ(r))) f(r) dr`, where `f` is the joint
//! density of the nearest-BS distance and its link state and `L_I` is the
//! Laplace transform of the aggregate interference beyond `r`.
//! [`coverage_general`] evaluates the transform by quadrature for any
//! piecewise model; [`coverage_case1`] uses the hypergeometric closed forms
//! for the two-segment linear-LoS model.

mod ase;
mod coverage;
mod laplace;
mod pdf;

pub use ase::{ase, ase_with};
pub use coverage::{coverage, coverage_case1, coverage_general};
pub use laplace::{laplace_general, Case1Params};
pub use pdf::{nearest_pdf_los, nearest_pdf_nlos};

use crate::error::{domain, Result};

/// Density (BSs/km²) and linear SINR threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageQuery {
    pub lambda: f64,
    pub gamma: f64,
}

impl CoverageQuery {
    pub fn new(lambda: f64, gamma: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(domain(format!("density must be positive, got {lambda}")));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(domain(format!("SINR threshold must be positive, got {gamma}")));
        }
        Ok(CoverageQuery { lambda, gamma })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkState {
    Los,
    Nlos,
}

impl LinkState {
    pub fn is_los(self) -> bool {
        self == LinkState::Los
    }
}

/// Contribution of the serving BS lying in `segment` with link `state`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermContribution {
    pub segment: usize,
    pub state: LinkState,
    pub value: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    /// Ordered by segment, LoS before NLoS.
    pub term_breakdown: Vec<TermContribution>,
}

impl CoverageResult {
    pub fn term(&self, segment: usize, state: LinkState) -> Option<&TermContribution> {
        self.term_breakdown
            .iter()
            .find(|t| t.segment == segment && t.state == state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AseResult {
    /// bps/Hz/km²
    pub value: f64,
    pub abs_error_estimate: f64,
}

/// Characteristic nearest-neighbour distance `1/sqrt(pi lambda)`.
pub(crate) fn nearest_scale(lambda: f64) -> f64 {
    1.0 / (std::f64::consts::PI * lambda).sqrt()
}
