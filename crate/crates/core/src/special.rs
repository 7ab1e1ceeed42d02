//! Gauss hypergeometric function on the non-positive real axis, and the two
//! truncated interference integrals built on it:
//!
//! ```text
//! rho1(alpha, beta, t, d) = ∫_0^d u^beta / (1 + t u^alpha) du
//! rho2(alpha, beta, t, d) = ∫_d^∞ u^beta / (1 + t u^alpha) du
//! ```

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate, Tolerance};

const SERIES_TOL: f64 = 1e-14;
const SERIES_MAX_TERMS: usize = 10_000;
/// Above this transformed argument the series is replaced by quadrature.
const SERIES_MAX_W: f64 = 0.95;
const RHO2_SINGULAR_MARGIN: f64 = 1e-6;
/// Closest `e` may sit to an integer before the large-argument expansion of
/// `2F1(1, e; 1+e; z)` loses too many digits to cancellation.
const EXPANSION_MIN_GAP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2f1Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl Hyp2f1Params {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Hyp2f1Params { a, b, c, z }
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `2F1(a, b; c; z)` for `z <= 0`.
///
/// For `z < 0` the Pfaff transformation
/// `2F1(a,b;c;z) = (1-z)^-a 2F1(a, c-b; c; w)` with `w = z/(z-1) ∈ (0,1)` is
/// summed as a power series. When `w > 0.95` the series converges too slowly
/// and the Euler integral is used instead; that requires `c > b > 0` or
/// `c > a > 0`.
pub fn hyp2f1_nonpos(p: Hyp2f1Params) -> Result<f64> {
    let Hyp2f1Params { a, b, c, z } = p;
    if [a, b, c, z].iter().any(|v| v.is_nan()) {
        return Err(domain("2F1 parameters must not be NaN"));
    }
    if is_nonpositive_integer(c) {
        return Err(domain(format!("2F1 undefined for non-positive integer c = {c}")));
    }
    if z > 0.0 {
        return Err(domain(format!("2F1 evaluator restricted to z <= 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z == f64::NEG_INFINITY {
        return Err(domain("2F1 argument must be finite"));
    }
    let w = z / (z - 1.0);
    if w <= SERIES_MAX_W {
        let prefactor = (1.0 - z).powf(-a);
        match series(a, c - b, c, w) {
            Ok(s) => Ok(prefactor * s),
            Err(Error::Numerical { message, estimate }) => Err(Error::Numerical {
                message,
                estimate: prefactor * estimate,
            }),
            Err(e) => Err(e),
        }
    } else if c > b && b > 0.0 {
        euler_integral(a, b, c, z)
    } else if c > a && a > 0.0 {
        euler_integral(b, a, c, z)
    } else {
        Err(domain(format!(
            "2F1({a}, {b}; {c}; {z}): large |z| needs c > b > 0 or c > a > 0"
        )))
    }
}

fn series(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * w;
        sum += term;
        if term == 0.0 || term.abs() <= SERIES_TOL * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Numerical {
        message: format!("2F1 series did not converge in {SERIES_MAX_TERMS} terms at w = {w}"),
        estimate: sum,
    })
}

/// `Γ(c)/(Γ(b)Γ(c-b)) ∫_0^1 s^(b-1) (1-s)^(c-b-1) (1-zs)^-a ds`, with the
/// two endpoint factors absorbed by `s = y^(1/b)` near 0 and
/// `1-s = x^(1/(c-b))` near 1.
fn euler_integral(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let cb = c - b;
    let kernel = |s: f64| (1.0 - z * s).powf(-a);
    let tol = Tolerance::new(0.0, 1e-13);

    // lower half: s in [0, 1/2]
    let y_max = 0.5f64.powf(b);
    let lower_fn = |y: f64| {
        let s = y.powf(1.0 / b);
        (1.0 - s).powf(cb - 1.0) * kernel(s) / b
    };
    let mut lower_pts = vec![0.0];
    // the kernel turns over at s = 1/|z|
    let knee = (1.0 / -z).powf(b);
    for k in [knee * 1e-3, knee * 1e-1, knee, knee * 10.0] {
        if k > 0.0 && k < y_max {
            lower_pts.push(k);
        }
    }
    lower_pts.push(y_max);
    let lower = integrate(lower_fn, &lower_pts, tol)?;

    // upper half: s in [1/2, 1]
    let x_max = 0.5f64.powf(cb);
    let upper_fn = |x: f64| {
        let s = 1.0 - x.powf(1.0 / cb);
        s.powf(b - 1.0) * kernel(s) / cb
    };
    let upper = integrate(upper_fn, &[0.0, x_max], tol)?;

    let norm = if cb == 1.0 {
        b
    } else {
        (libm::lgamma(c) - libm::lgamma(b) - libm::lgamma(cb)).exp()
    };
    Ok(norm * (lower.value + upper.value))
}

/// `2F1(1, e; 1+e; z)`, the family behind both truncated integrals. For
/// `z < -19` it uses
/// `e π/sin(πe) x^-e + e Σ_k (-1)^k x^(-k-1) / (e-1-k)` with `x = -z`,
/// unless `e` is too close to an integer.
fn unit_family(e: f64, z: f64) -> Result<f64> {
    let x = -z;
    let gap = (e - e.round()).abs();
    if z / (z - 1.0) <= SERIES_MAX_W || gap < EXPANSION_MIN_GAP {
        return hyp2f1_nonpos(Hyp2f1Params::new(1.0, e, 1.0 + e, z));
    }
    let lead = e * std::f64::consts::PI / (std::f64::consts::PI * e).sin() * x.powf(-e);
    let mut sum = 0.0;
    let mut power = 1.0 / x;
    for k in 0..SERIES_MAX_TERMS {
        let term = power / (e - 1.0 - k as f64);
        sum += term;
        if term.abs() <= SERIES_TOL * (lead + e * sum).abs() {
            return Ok(lead + e * sum);
        }
        power *= -1.0 / x;
    }
    Err(Error::Numerical {
        message: format!("2F1 large-argument expansion did not converge at z = {z}"),
        estimate: lead + e * sum,
    })
}

fn check_finite_nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && !v.is_nan() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be non-negative, got {v}")))
    }
}

/// `∫_0^d u^beta / (1 + t u^alpha) du` in closed form.
pub fn rho1(alpha: f64, beta: f64, t: f64, d: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(domain(format!("rho1 needs alpha > 0, got {alpha}")));
    }
    check_finite_nonneg("beta", beta)?;
    check_finite_nonneg("t", t)?;
    check_finite_nonneg("d", d)?;
    if d == 0.0 {
        return Ok(0.0);
    }
    let prefactor = d.powf(beta + 1.0) / (beta + 1.0);
    let z = -t * d.powf(alpha);
    if z == f64::NEG_INFINITY {
        // the integrand vanishes pointwise as t -> inf
        return Ok(0.0);
    }
    let e = (beta + 1.0) / alpha;
    Ok(prefactor * unit_family(e, z)?)
}

/// `∫_d^∞ u^beta / (1 + t u^alpha) du` in closed form; needs
/// `alpha - beta - 1 > 0`.
pub fn rho2(alpha: f64, beta: f64, t: f64, d: f64) -> Result<f64> {
    check_finite_nonneg("beta", beta)?;
    let margin = alpha - beta - 1.0;
    if !(margin > 0.0) {
        return Err(domain(format!(
            "rho2 diverges: alpha - beta - 1 = {margin} must be positive"
        )));
    }
    if margin < RHO2_SINGULAR_MARGIN {
        return Err(domain(format!(
            "rho2 near-singular: alpha - beta - 1 = {margin:e}; check the path loss exponent"
        )));
    }
    if !(t > 0.0) || t.is_infinite() {
        return Err(domain(format!("rho2 needs finite t > 0, got {t}")));
    }
    if !(d > 0.0) {
        return Err(domain(format!("rho2 needs d > 0, got {d}")));
    }
    if d.is_infinite() {
        return Ok(0.0);
    }
    let td = t * d.powf(alpha);
    let prefactor = d.powf(-margin) / (t * margin);
    if prefactor == 0.0 {
        return Ok(0.0);
    }
    let e = 1.0 - (beta + 1.0) / alpha;
    let z = -1.0 / td;
    Ok(prefactor * unit_family(e, z)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument_is_exactly_one() {
        assert_eq!(hyp2f1_nonpos(Hyp2f1Params::new(1.0, 0.5, 1.5, 0.0)).unwrap(), 1.0);
        assert_eq!(hyp2f1_nonpos(Hyp2f1Params::new(-2.3, 7.0, 0.5, 0.0)).unwrap(), 1.0);
    }

    #[test]
    fn log_identity() {
        let v = hyp2f1_nonpos(Hyp2f1Params::new(1.0, 1.0, 2.0, -1.0)).unwrap();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-14, "{v}");
        // 2F1(1,1;2;z) = -ln(1-z)/z across the series/quadrature switch
        for z in [-0.3, -5.0, -18.0, -20.0, -1e3, -1e8] {
            let v = hyp2f1_nonpos(Hyp2f1Params::new(1.0, 1.0, 2.0, z)).unwrap();
            let exact = -(-z).ln_1p() / z;
            assert!(((v - exact) / exact).abs() < 1e-12, "z={z}: {v} vs {exact}");
        }
    }

    #[test]
    fn atan_identity_general_c() {
        // 2F1(1/2, 1; 3/2; -x^2) = atan(x)/x, and c - b != 1 in the (b=1/2) swap
        for x in [0.5f64, 3.0, 10.0, 300.0] {
            let v = hyp2f1_nonpos(Hyp2f1Params::new(1.0, 0.5, 1.5, -x * x)).unwrap();
            let exact = x.atan() / x;
            assert!(((v - exact) / exact).abs() < 1e-12, "x={x}: {v} vs {exact}");
            let v = hyp2f1_nonpos(Hyp2f1Params::new(0.5, 1.0, 1.5, -x * x)).unwrap();
            assert!(((v - exact) / exact).abs() < 1e-12, "x={x}: {v} vs {exact}");
        }
    }

    #[test]
    fn large_argument_expansion_matches_quadrature() {
        for e in [0.1, 0.533, 0.957, 1.002, 1.435, 2.7] {
            for z in [-19.5, -50.0, -1e4, -1e12] {
                let fast = unit_family(e, z).unwrap();
                let slow = euler_integral(1.0, e, 1.0 + e, z).unwrap();
                assert!(((fast - slow) / slow).abs() < 1e-11, "e={e} z={z}: {fast} vs {slow}");
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(hyp2f1_nonpos(Hyp2f1Params::new(1.0, 1.0, 0.0, -1.0)), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1_nonpos(Hyp2f1Params::new(1.0, 1.0, -3.0, -1.0)), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1_nonpos(Hyp2f1Params::new(1.0, 1.0, 2.0, 0.5)), Err(Error::Domain(_))));
    }

    #[test]
    fn rho1_trivial_cases() {
        for (alpha, beta, d) in [(2.5, 1.0, 0.3), (3.75, 2.0, 7.0), (4.0, 0.0, 1e-3)] {
            let v = rho1(alpha, beta, 0.0, d).unwrap();
            assert_eq!(v, d.powf(beta + 1.0) / (beta + 1.0));
            assert_eq!(rho1(alpha, beta, 2.0, 0.0).unwrap(), 0.0);
        }
        assert!(rho1(-1.0, 1.0, 1.0, 1.0).is_err());
        assert!(rho1(3.0, -1.0, 1.0, 1.0).is_err());
        assert!(rho1(3.0, 1.0, -1.0, 1.0).is_err());
        assert!(rho1(3.0, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn rho2_guards() {
        assert!(matches!(rho2(2.0, 1.0, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(rho2(2.0 + 1e-8, 1.0, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(rho2(3.0, 1.0, 0.0, 1.0).is_err());
        assert_eq!(rho2(3.75, 1.0, 1.0, f64::INFINITY).unwrap(), 0.0);
        let far = rho2(3.75, 1.0, 1.7, 1e6).unwrap();
        let leading = 1e6f64.powf(-1.75) / (1.7 * 1.75);
        assert!((far / leading - 1.0).abs() < 1e-12, "{far}");
    }

    #[test]
    fn rho_with_integer_exponent_ratio() {
        // alpha = 3, beta = 2: rho1 = ln(1 + t d^3) / (3t)
        let (t, d) = (2.5f64, 1.7f64);
        let exact = (t * d.powi(3)).ln_1p() / (3.0 * t);
        let v = rho1(3.0, 2.0, t, d).unwrap();
        assert!(((v - exact) / exact).abs() < 1e-12);
        // alpha = 4, beta = 1: rho2 = (pi/2 - atan(sqrt(t) d^2)) / (2 sqrt t)
        let exact = (std::f64::consts::FRAC_PI_2 - (t.sqrt() * d * d).atan()) / (2.0 * t.sqrt());
        let v = rho2(4.0, 1.0, t, d).unwrap();
        assert!(((v - exact) / exact).abs() < 1e-12);
    }

    #[test]
    fn monotone_in_distance() {
        let mut prev1 = 0.0;
        let mut prev2 = f64::INFINITY;
        for i in 1..60 {
            let d = 0.01 * 1.2f64.powi(i);
            let v1 = rho1(3.75, 1.0, 2.5, d).unwrap();
            let v2 = rho2(3.75, 1.0, 2.5, d).unwrap();
            assert!(v1 > prev1);
            assert!(v2 < prev2);
            prev1 = v1;
            prev2 = v2;
        }
    }
}
