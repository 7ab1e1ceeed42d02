use std::cell::RefCell;
use std::f64::consts::PI;

use super::laplace::{exponent_tolerance, interference_integral, Case1Params};
use super::{nearest_scale, CoverageQuery, CoverageResult, LinkState, TermContribution};
use crate::error::{Error, Result};
use crate::model::{NetworkEnvironment, PowerLaw};
use crate::quadrature::{integrate, Integral, Tolerance};

/// Absolute tolerance for each outer distance integral.
const TERM_ABS_TOL: f64 = 1e-8;

/// Carries the first error raised inside a quadrature callback.
struct ErrorSlot(RefCell<Option<Error>>);

impl ErrorSlot {
    fn new() -> Self {
        ErrorSlot(RefCell::new(None))
    }

    fn value(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn check<T>(self, out: Result<T>) -> Result<T> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => out,
        }
    }
}

/// Integrates `g(r)` over a distance range `[lo, hi]`. Unbounded ranges use
/// `r = lo + L v/(1-v)` with `L` the nearest-neighbour scale, so the bulk of
/// `exp(-πλr²)` sits mid-interval at every density.
fn integrate_distance<G: FnMut(f64) -> f64>(
    mut g: G,
    lo: f64,
    hi: f64,
    extra: &[f64],
    lambda: f64,
    tol: Tolerance,
) -> Result<Integral> {
    let scale = nearest_scale(lambda);
    let marks: Vec<f64> = [0.25, 0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|k| k * scale)
        .chain(extra.iter().copied())
        .collect();
    if hi.is_finite() {
        let mut pts = vec![lo];
        pts.extend(marks.into_iter().filter(|&x| x > lo && x < hi));
        pts.push(hi);
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup();
        integrate(g, &pts, tol)
    } else {
        let to_v = |r: f64| {
            let x = (r - lo) / scale;
            x / (1.0 + x)
        };
        let mut pts = vec![0.0];
        pts.extend(marks.into_iter().filter(|&x| x > lo).map(to_v));
        pts.push(1.0);
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup();
        integrate(
            |v| {
                if v >= 1.0 {
                    return 0.0;
                }
                let r = lo + scale * v / (1.0 - v);
                let val = g(r);
                if val == 0.0 {
                    0.0
                } else {
                    val * scale / ((1.0 - v) * (1.0 - v))
                }
            },
            &pts,
            tol,
        )
    }
}

/// `exp(-γN0/(Pζ)) · L(γ/(Pζ)) · weight(r) · exp(-πλr²) 2πrλ`, skipping the
/// transform when the other factors already vanish.
fn term_integrand<L: FnOnce(f64) -> Result<f64>>(
    lambda: f64,
    gamma: f64,
    env_tx: f64,
    noise: f64,
    law: &PowerLaw,
    weight: f64,
    r: f64,
    laplace: L,
) -> Result<f64> {
    if weight == 0.0 || r <= 0.0 {
        return Ok(0.0);
    }
    let density = (-PI * r * r * lambda).exp() * 2.0 * PI * r * lambda;
    let s = gamma / (env_tx * law.at(r));
    let noise_factor = (-s * noise).exp();
    let prefix = weight * density * noise_factor;
    if prefix == 0.0 {
        return Ok(0.0);
    }
    Ok(prefix * laplace(s)?)
}

fn finish(terms: Vec<TermContribution>, inner_rel: f64) -> CoverageResult {
    let raw: f64 = terms.iter().map(|t| t.value).sum();
    let err: f64 = terms.iter().map(|t| t.abs_error).sum::<f64>() + inner_rel * raw;
    CoverageResult {
        value: raw.clamp(0.0, 1.0),
        abs_error_estimate: err,
        term_breakdown: terms,
    }
}

/// Coverage probability for any piecewise model, with every Laplace
/// transform evaluated by quadrature.
pub fn coverage_general(env: &NetworkEnvironment, q: CoverageQuery) -> Result<CoverageResult> {
    coverage_general_tol(env, q, TERM_ABS_TOL)
}

pub(crate) fn coverage_general_tol(
    env: &NetworkEnvironment,
    q: CoverageQuery,
    abs_tol: f64,
) -> Result<CoverageResult> {
    let q = CoverageQuery::new(q.lambda, q.gamma)?;
    env.model.check_interference_convergence()?;
    let inner_tol = exponent_tolerance(q.lambda);
    let mut terms = Vec::with_capacity(2 * env.model.len());
    for (n, seg) in env.model.segments().iter().enumerate() {
        for state in [LinkState::Los, LinkState::Nlos] {
            let identically_zero = match state {
                LinkState::Los => seg.los_probability.vanishes_on(seg.lower, seg.upper),
                LinkState::Nlos => seg.los_probability.is_one_on(seg.lower, seg.upper),
            };
            if identically_zero {
                terms.push(TermContribution {
                    segment: n,
                    state,
                    value: 0.0,
                    abs_error: 0.0,
                });
                continue;
            }
            let law = seg.law(state.is_los());
            let slot = ErrorSlot::new();
            let out = integrate_distance(
                |r| {
                    let p = seg.los_probability.eval(r);
                    let weight = if state.is_los() { p } else { 1.0 - p };
                    slot.value(term_integrand(
                        q.lambda,
                        q.gamma,
                        env.tx_power,
                        env.noise_power,
                        law,
                        weight,
                        r,
                        |s| {
                            let i = interference_integral(env, r, s, inner_tol)?;
                            Ok((-2.0 * PI * q.lambda * i.value).exp())
                        },
                    ))
                },
                seg.lower,
                seg.upper,
                &seg.los_probability.kink().into_iter().collect::<Vec<_>>(),
                q.lambda,
                Tolerance::new(abs_tol, 0.0),
            );
            let integral = slot.check(out).map_err(|e| tag(e, n, state))?;
            terms.push(TermContribution {
                segment: n,
                state,
                value: integral.value,
                abs_error: integral.abs_error,
            });
        }
    }
    Ok(finish(terms, 1e-9))
}

fn tag(e: Error, n: usize, state: LinkState) -> Error {
    match e {
        Error::Numerical { message, estimate } => Error::Numerical {
            message: format!("term (segment {n}, {state:?}): {message}"),
            estimate,
        },
        other => other,
    }
}

/// Coverage probability of the two-segment linear-LoS model using the
/// closed-form transforms; only the outer distance integrals are numerical.
pub fn coverage_case1(env: &NetworkEnvironment, q: CoverageQuery) -> Result<CoverageResult> {
    coverage_case1_tol(env, q, TERM_ABS_TOL)
}

pub(crate) fn coverage_case1_tol(
    env: &NetworkEnvironment,
    q: CoverageQuery,
    abs_tol: f64,
) -> Result<CoverageResult> {
    let q = CoverageQuery::new(q.lambda, q.gamma)?;
    let c1 = Case1Params::from_env(env)?;
    let tol = Tolerance::new(abs_tol, 0.0);
    let d1 = c1.d1;
    let (lambda, gamma) = (q.lambda, q.gamma);

    let run = |state: LinkState,
               lo: f64,
               hi: f64,
               weight: &dyn Fn(f64) -> f64,
               lap: &dyn Fn(f64) -> Result<f64>|
     -> Result<Integral> {
        let law = if state.is_los() { &c1.los } else { &c1.nlos };
        let slot = ErrorSlot::new();
        let out = integrate_distance(
            |r| {
                slot.value(term_integrand(
                    lambda,
                    gamma,
                    c1.tx_power,
                    c1.noise_power,
                    law,
                    weight(r),
                    r,
                    |_| lap(r),
                ))
            },
            lo,
            hi,
            &[],
            lambda,
            tol,
        );
        slot.check(out)
    };

    let t1l = run(
        LinkState::Los,
        0.0,
        d1,
        &|r| 1.0 - r / d1,
        &|r| c1.laplace_los(lambda, gamma, r),
    )
    .map_err(|e| tag(e, 0, LinkState::Los))?;
    let t1n = run(
        LinkState::Nlos,
        0.0,
        d1,
        &|r| r / d1,
        &|r| c1.laplace_nlos_near(lambda, gamma, r),
    )
    .map_err(|e| tag(e, 0, LinkState::Nlos))?;
    let t2n = run(
        LinkState::Nlos,
        d1,
        f64::INFINITY,
        &|_| 1.0,
        &|r| c1.laplace_nlos_far(lambda, gamma, r),
    )
    .map_err(|e| tag(e, 1, LinkState::Nlos))?;

    let term = |segment, state, i: Integral| TermContribution {
        segment,
        state,
        value: i.value,
        abs_error: i.abs_error,
    };
    let terms = vec![
        term(0, LinkState::Los, t1l),
        term(0, LinkState::Nlos, t1n),
        // a LoS serving link beyond d1 has zero probability
        TermContribution {
            segment: 1,
            state: LinkState::Los,
            value: 0.0,
            abs_error: 0.0,
        },
        term(1, LinkState::Nlos, t2n),
    ];
    Ok(finish(terms, 1e-12))
}

/// Uses the closed-form path when the environment has the two-segment
/// linear-LoS shape and the general engine otherwise.
pub fn coverage(env: &NetworkEnvironment, q: CoverageQuery) -> Result<CoverageResult> {
    match Case1Params::from_env(env) {
        Ok(_) => coverage_case1(env, q),
        Err(Error::Usage(_)) => coverage_general(env, q),
        Err(e) => Err(e),
    }
}

pub(crate) fn coverage_with_tol(
    env: &NetworkEnvironment,
    q: CoverageQuery,
    abs_tol: f64,
) -> Result<CoverageResult> {
    match Case1Params::from_env(env) {
        Ok(_) => coverage_case1_tol(env, q, abs_tol),
        Err(Error::Usage(_)) => coverage_general_tol(env, q, abs_tol),
        Err(e) => Err(e),
    }
}
