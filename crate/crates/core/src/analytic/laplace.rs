//! Laplace transform of the interference seen by a UE whose serving BS is at
//! distance `r`: interferers form a Poisson field outside the disc of radius
//! `r`, each with an independent LoS draw and unit-mean exponential fading.

use std::f64::consts::PI;

use crate::error::{domain, parameter, Error, Result};
use crate::model::{LosProbability, NetworkEnvironment, PathLossSegment, PowerLaw};
use crate::quadrature::{integrate, Integral, Tolerance};
use crate::special::{rho1, rho2};

/// Absolute accuracy of the interference exponent `2πλ∫...`.
const EXPONENT_ABS_TOL: f64 = 1e-9;

/// `x / (1 + x)` for `x = s P ζ(u)`, stable for large `x`.
#[inline]
fn interference_fraction(x: f64) -> f64 {
    if x > 1.0 {
        1.0 / (1.0 + 1.0 / x)
    } else {
        x / (1.0 + x)
    }
}

/// `(E[1 - exp(-sPζg)]) * u` at a point `u` of `seg`.
#[inline]
fn kernel(seg: &PathLossSegment, sp: f64, u: f64) -> f64 {
    if !u.is_finite() {
        return 0.0;
    }
    let p = seg.los_probability.eval(u);
    let mut v = 0.0;
    if p > 0.0 {
        v += p * interference_fraction(sp * seg.los.at(u));
    }
    if p < 1.0 {
        v += (1.0 - p) * interference_fraction(sp * seg.nlos.at(u));
    }
    v * u
}

/// Radius where `sPζ(u) = 1`, the bend of the kernel.
fn knee(law: &PowerLaw, sp: f64) -> f64 {
    (sp * law.gain).powf(1.0 / law.exponent)
}

fn push_inside(points: &mut Vec<f64>, x: f64, lo: f64, hi: f64) {
    if x.is_finite() && x > lo && x < hi {
        points.push(x);
    }
}

/// `∫_r^∞ E[1 - exp(-sPζ(u)g)] u du`, with its quadrature error.
pub(crate) fn interference_integral(
    env: &NetworkEnvironment,
    r: f64,
    s: f64,
    tol: Tolerance,
) -> Result<Integral> {
    let sp = s * env.tx_power;
    let mut total = Integral {
        value: 0.0,
        abs_error: 0.0,
        evaluations: 0,
    };
    if sp == 0.0 {
        return Ok(total);
    }
    let segments = env.model.segments();
    let last = segments.len() - 1;
    for (k, seg) in segments.iter().enumerate() {
        if seg.upper <= r {
            continue;
        }
        let lo = r.max(seg.lower);
        let knees = [knee(&seg.los, sp), knee(&seg.nlos, sp)];
        let kink = seg.los_probability.kink();

        let finite_hi = if k == last {
            // beyond this point the kernel is a pure power law tail
            let mut m = lo;
            for x in knees.iter().copied().chain(kink) {
                if x.is_finite() {
                    m = m.max(4.0 * x);
                }
            }
            m
        } else {
            seg.upper
        };

        if finite_hi > lo {
            let mut pts = vec![lo];
            for x in knees.iter().copied().chain(kink) {
                push_inside(&mut pts, x, lo, finite_hi);
            }
            pts.push(finite_hi);
            pts.sort_by(|a, b| a.total_cmp(b));
            let part = integrate(|u| kernel(seg, sp, u), &pts, tol)?;
            accumulate(&mut total, part);
        }

        if k == last {
            let alpha_min = env
                .model
                .tail_exponents()
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            if !(alpha_min > 2.0) {
                return Err(parameter(format!(
                    "tail exponent {alpha_min} <= 2: interference integral diverges"
                )));
            }
            // u = m y^-p turns the slowest u^(1-alpha) tail into a constant
            let m = finite_hi;
            let p = 1.0 / (alpha_min - 2.0);
            let tail = integrate(
                |y| {
                    if y <= 0.0 {
                        return 0.0;
                    }
                    let u = m * y.powf(-p);
                    let kv = kernel(seg, sp, u);
                    if kv == 0.0 {
                        0.0
                    } else {
                        kv * p * u / y
                    }
                },
                &[0.0, 1e-6, 1e-3, 0.1, 1.0],
                tol,
            )?;
            accumulate(&mut total, tail);
        }
    }
    Ok(total)
}

fn accumulate(total: &mut Integral, part: Integral) {
    total.value += part.value;
    total.abs_error += part.abs_error;
    total.evaluations += part.evaluations;
}

pub(crate) fn exponent_tolerance(lambda: f64) -> Tolerance {
    Tolerance::new(EXPONENT_ABS_TOL / (2.0 * PI * lambda), 1e-12)
}

/// `L_I(s)` for a serving distance `r`, by direct quadrature of the
/// probability generating functional over `(r, ∞)`.
pub fn laplace_general(env: &NetworkEnvironment, lambda: f64, r: f64, s: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(domain(format!("density must be positive, got {lambda}")));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain(format!("serving distance must be positive, got {r}")));
    }
    if !(s >= 0.0) {
        return Err(domain(format!("Laplace argument must be non-negative, got {s}")));
    }
    env.model.check_interference_convergence()?;
    let integral = interference_integral(env, r, s, exponent_tolerance(lambda))?;
    Ok((-2.0 * PI * lambda * integral.value).exp())
}

/// Parameters of the two-segment model with linear LoS probability
/// `1 - r/d1` below `d1`, pure NLoS beyond, and one LoS and one NLoS law
/// shared by both segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case1Params {
    pub d1: f64,
    pub los: PowerLaw,
    pub nlos: PowerLaw,
    pub tx_power: f64,
    pub noise_power: f64,
}

impl Case1Params {
    pub fn from_env(env: &NetworkEnvironment) -> Result<Self> {
        let segs = env.model.segments();
        let shape_err = |why: &str| Error::Usage(format!("not a two-segment linear-LoS model: {why}"));
        if segs.len() != 2 {
            return Err(shape_err("needs exactly two segments"));
        }
        let d1 = match segs[0].los_probability {
            LosProbability::Linear3gpp { d1 } if d1 == segs[0].upper => d1,
            _ => return Err(shape_err("first segment must carry 1 - r/d1 up to d1")),
        };
        if segs[1].los_probability != LosProbability::Constant(0.0) {
            return Err(shape_err("second segment must be pure NLoS"));
        }
        if segs[0].los != segs[1].los || segs[0].nlos != segs[1].nlos {
            return Err(shape_err("both segments must share their gain laws"));
        }
        if !(segs[1].nlos.exponent > 2.0) {
            return Err(parameter("NLoS exponent must exceed 2"));
        }
        Ok(Case1Params {
            d1,
            los: segs[0].los,
            nlos: segs[0].nlos,
            tx_power: env.tx_power,
            noise_power: env.noise_power,
        })
    }

    fn check_near(&self, lambda: f64, gamma: f64, r: f64) -> Result<()> {
        if !(lambda > 0.0 && gamma > 0.0) {
            return Err(domain("density and threshold must be positive"));
        }
        if !(r > 0.0 && r <= self.d1) {
            return Err(domain(format!("r = {r} outside (0, {}]", self.d1)));
        }
        Ok(())
    }

    /// Shared structure of the two near-range transforms. `t_los` and
    /// `t_nlos` are the `t` arguments of the LoS and NLoS integrals.
    fn near_exponent(&self, lambda: f64, r: f64, t_los: f64, t_nlos: f64) -> Result<f64> {
        let (al, an, d1) = (self.los.exponent, self.nlos.exponent, self.d1);
        let c = 2.0 * PI * lambda;
        let los_all = rho1(al, 1.0, t_los, d1)? - rho1(al, 1.0, t_los, r)?;
        let los_ramp = rho1(al, 2.0, t_los, d1)? - rho1(al, 2.0, t_los, r)?;
        let nlos_ramp = rho1(an, 2.0, t_nlos, d1)? - rho1(an, 2.0, t_nlos, r)?;
        let nlos_far = rho2(an, 1.0, t_nlos, d1)?;
        Ok(-c * los_all + c / d1 * los_ramp - c / d1 * nlos_ramp - c * nlos_far)
    }

    /// `L_I(γ r^αL / (P A_L))` for a LoS serving link at `0 < r <= d1`.
    pub fn laplace_los(&self, lambda: f64, gamma: f64, r: f64) -> Result<f64> {
        self.check_near(lambda, gamma, r)?;
        let base = gamma * r.powf(self.los.exponent);
        let t_los = 1.0 / base;
        let t_nlos = 1.0 / (base * self.nlos.gain / self.los.gain);
        Ok(self.near_exponent(lambda, r, t_los, t_nlos)?.exp())
    }

    /// `L_I(γ r^αNL / (P A_NL))` for an NLoS serving link at `0 < r <= d1`.
    pub fn laplace_nlos_near(&self, lambda: f64, gamma: f64, r: f64) -> Result<f64> {
        self.check_near(lambda, gamma, r)?;
        let base = gamma * r.powf(self.nlos.exponent);
        let t_los = 1.0 / (base * self.los.gain / self.nlos.gain);
        let t_nlos = 1.0 / base;
        Ok(self.near_exponent(lambda, r, t_los, t_nlos)?.exp())
    }

    /// `L_I(γ r^αNL / (P A_NL))` for an NLoS serving link at `r > d1`.
    pub fn laplace_nlos_far(&self, lambda: f64, gamma: f64, r: f64) -> Result<f64> {
        if !(lambda > 0.0 && gamma > 0.0) {
            return Err(domain("density and threshold must be positive"));
        }
        if !(r > self.d1) {
            return Err(domain(format!("r = {r} must exceed d1 = {}", self.d1)));
        }
        let t = 1.0 / (gamma * r.powf(self.nlos.exponent));
        Ok((-2.0 * PI * lambda * rho2(self.nlos.exponent, 1.0, t, r)?).exp())
    }
}
