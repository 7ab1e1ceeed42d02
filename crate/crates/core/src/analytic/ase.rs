use std::cell::RefCell;
use std::f64::consts::LN_2;

use super::coverage::coverage_with_tol;
use super::{AseResult, CoverageQuery, CoverageResult};
use crate::error::{domain, Error, Result};
use crate::model::NetworkEnvironment;
use crate::quadrature::{integrate, Tolerance};

const ASE_REL_TOL: f64 = 1e-5;
const INNER_COVERAGE_TOL: f64 = 1e-9;

/// Area spectral efficiency `λ E[log2(1+SINR); SINR > γ0]` in bps/Hz/km².
///
/// Integrating by parts against the SINR CCDF gives
/// `λ [log2(1+γ0) p(γ0) + (1/ln 2) ∫_γ0^∞ p(x)/(1+x) dx]`; the tail integral
/// runs over `y = ln((1+x)/(1+γ0))`, mapped to `[0, 1)` by `y = v/(1-v)`.
pub fn ase(env: &NetworkEnvironment, lambda: f64, gamma0: f64) -> Result<AseResult> {
    ase_with(env, lambda, gamma0, |q| {
        coverage_with_tol(env, q, INNER_COVERAGE_TOL)
    })
}

/// [`ase`] driven by a caller-supplied coverage evaluator.
pub fn ase_with<C>(env: &NetworkEnvironment, lambda: f64, gamma0: f64, cov: C) -> Result<AseResult>
where
    C: Fn(CoverageQuery) -> Result<CoverageResult>,
{
    if !(gamma0 > 0.0 && gamma0.is_finite()) {
        return Err(domain(format!("gamma0 must be positive, got {gamma0}")));
    }
    let q0 = CoverageQuery::new(lambda, gamma0)?;
    env.model.check_interference_convergence()?;
    let at_threshold = cov(q0)?;

    let first_err: RefCell<Option<Error>> = RefCell::new(None);
    let cov_err = RefCell::new(0.0f64);
    let shift = 1.0 + gamma0;
    let tail = integrate(
        |v| {
            if v >= 1.0 {
                return 0.0;
            }
            let y = v / (1.0 - v);
            let x = shift * y.exp() - 1.0;
            if !x.is_finite() {
                return 0.0;
            }
            match CoverageQuery::new(lambda, x).and_then(&cov) {
                Ok(res) => {
                    let jac = 1.0 / ((1.0 - v) * (1.0 - v));
                    let mut e = cov_err.borrow_mut();
                    *e = e.max(res.abs_error_estimate);
                    res.value * jac
                }
                Err(err) => {
                    first_err.borrow_mut().get_or_insert(err);
                    f64::NAN
                }
            }
        },
        &[0.0, 0.25, 0.5, 0.75, 0.9, 1.0],
        Tolerance::new(1e-12, ASE_REL_TOL),
    );
    if let Some(e) = first_err.into_inner() {
        return Err(e);
    }
    let tail = tail?;
    let spectral = (1.0 + gamma0).log2() * at_threshold.value + tail.value / LN_2;
    // coverage errors enter the tail over an effective y-range taken as 10
    let err = (1.0 + gamma0).log2() * at_threshold.abs_error_estimate
        + (tail.abs_error + *cov_err.borrow() * 10.0) / LN_2;
    Ok(AseResult {
        value: lambda * spectral,
        abs_error_estimate: lambda * err,
    })
}
