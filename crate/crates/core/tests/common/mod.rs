//! Double-exponential quadrature used as an oracle, deliberately unrelated to
//! the library's Gauss-Kronrod engine.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

const LEVELS: usize = 12;

/// Tanh-sinh rule on `[a, b]`, refined by halving the step until two
/// successive levels agree to `rel` (or `1e-300` absolute).
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let half = 0.5 * (b - a);
    let eval = |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        // distance from the nearer endpoint, computed without cancellation
        let dist = half / (u.abs().exp() * ch);
        let w = half * FRAC_PI_2 * t.cosh() / (ch * ch);
        let x = if u >= 0.0 { b - dist } else { a + dist };
        if w == 0.0 || dist == 0.0 {
            0.0
        } else {
            f(x) * w
        }
    };
    let t_max = 4.0;
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..LEVELS {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= t_max {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let cur = sum * h;
        if (cur - prev).abs() <= rel * cur.abs() || (cur - prev).abs() < 1e-300 {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// `∫_a^∞ f` via `x = a + s·v/(1-v)` on `[0, 1]`; `s` sets where the bulk of
/// the mass lands.
pub fn tanh_sinh_tail<F: Fn(f64) -> f64>(f: F, a: f64, s: f64, rel: f64) -> f64 {
    tanh_sinh(
        |v| {
            if v >= 1.0 {
                return 0.0;
            }
            let x = a + s * v / (1.0 - v);
            let y = f(x);
            if y == 0.0 {
                0.0
            } else {
                y * s / ((1.0 - v) * (1.0 - v))
            }
        },
        0.0,
        1.0,
        rel,
    )
}

/// Sum of [`tanh_sinh`] over consecutive pieces of `points`.
pub fn piecewise<F: Fn(f64) -> f64>(f: F, points: &[f64], rel: f64) -> f64 {
    points.windows(2).map(|w| tanh_sinh(&f, w[0], w[1], rel)).sum()
}

pub fn integrand(alpha: f64, beta: f64, t: f64) -> impl Fn(f64) -> f64 {
    move |u: f64| u.powf(beta) / (1.0 + t * u.powf(alpha))
}

/// `∫_0^d` split where `t u^α = 1`.
pub fn rho1_oracle(alpha: f64, beta: f64, t: f64, d: f64) -> f64 {
    let knee = t.powf(-1.0 / alpha);
    let mut pts = vec![0.0];
    for k in [0.1 * knee, knee, 10.0 * knee] {
        if k < d {
            pts.push(k);
        }
    }
    pts.push(d);
    piecewise(integrand(alpha, beta, t), &pts, 1e-13)
}

/// `∫_d^∞` through `u = d w^(-1/m)`, `m = α-β-1`, which turns the algebraic
/// tail into the bounded integrand `(d^-m/m) / (t + d^-α w^(α/m))` on `[0, 1]`.
pub fn rho2_oracle(alpha: f64, beta: f64, t: f64, d: f64) -> f64 {
    let m = alpha - beta - 1.0;
    let g = |w: f64| d.powf(-m) / m / (t + d.powf(-alpha) * w.powf(alpha / m));
    let knee = (d * t.powf(1.0 / alpha)).powf(m);
    let mut pts = vec![0.0];
    for k in [0.1 * knee, knee, 10.0 * knee] {
        if k > 0.0 && k < 1.0 {
            pts.push(k);
        }
    }
    pts.push(1.0);
    piecewise(g, &pts, 1e-13)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn oracle_self_check() {
    let v = tanh_sinh(|x| x.sqrt(), 0.0, 1.0, 1e-14);
    assert!(rel_err(v, 2.0 / 3.0) < 1e-13, "{v}");
    let v = tanh_sinh_tail(|x| (-x).exp(), 0.0, 1.0, 1e-14);
    assert!(rel_err(v, 1.0) < 1e-12, "{v}");
    let v = tanh_sinh_tail(|x| 1.0 / (1.0 + x * x), 0.0, 1.0, 1e-14);
    assert!(rel_err(v, FRAC_PI_2) < 1e-12, "{v}");
}
