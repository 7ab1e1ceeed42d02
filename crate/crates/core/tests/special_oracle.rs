mod common;

use std::f64::consts::PI;

use common::{rel_err, rho1_oracle, rho2_oracle, tanh_sinh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgcov_core::special::{hyp2f1_nonpos, rho1, rho2, Hyp2f1Params};

fn random_tuple(rng: &mut ChaCha8Rng) -> (f64, f64, f64, f64) {
    let alpha = rng.random_range(2.05..4.0);
    let beta = if rng.random::<bool>() { 1.0 } else { 2.0 };
    let t = 10f64.powf(rng.random_range(-3.0..3.0));
    let d = 10f64.powf(rng.random_range(-3.0..1.0));
    (alpha, beta, t, d)
}

#[test]
fn rho1_matches_quadrature_on_random_tuples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (alpha, beta, t, d) = random_tuple(&mut rng);
        let got = rho1(alpha, beta, t, d).unwrap();
        let want = rho1_oracle(alpha, beta, t, d);
        let e = rel_err(got, want);
        assert!(e <= 1e-8, "rho1({alpha}, {beta}, {t}, {d}) = {got}, oracle {want}");
        worst = worst.max(e);
    }
    println!("rho1 worst relative error {worst:e}");
}

#[test]
fn rho2_matches_quadrature_on_random_tuples() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut tested = 0;
    let mut worst = 0.0f64;
    while tested < 1000 {
        let (alpha, beta, t, d) = random_tuple(&mut rng);
        if alpha - beta - 1.0 <= 0.0 {
            continue;
        }
        let got = rho2(alpha, beta, t, d).unwrap();
        let want = rho2_oracle(alpha, beta, t, d);
        let e = rel_err(got, want);
        assert!(e <= 1e-8, "rho2({alpha}, {beta}, {t}, {d}) = {got}, oracle {want}");
        worst = worst.max(e);
        tested += 1;
    }
    println!("rho2 worst relative error {worst:e}");
}

#[test]
fn hyp2f1_unit_family_against_euler_integral() {
    // c = b + 1: 2F1(1, b; b+1; z) = b ∫_0^1 s^(b-1) / (1 - z s) ds
    let euler = |b: f64, z: f64| {
        // s = y^(1/b) removes the endpoint singularity
        tanh_sinh(|y: f64| 1.0 / (1.0 - z * y.powf(1.0 / b)), 0.0, 1.0, 1e-14)
    };
    let got = hyp2f1_nonpos(Hyp2f1Params::new(1.0, 0.8, 1.8, -50.0)).unwrap();
    let want = euler(0.8, -50.0);
    assert!(rel_err(got, want) <= 1e-9, "{got} vs {want}");

    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let b = rng.random_range(0.05..3.0);
        let z = -(10f64.powf(rng.random_range(-3.0..4.0)));
        let got = hyp2f1_nonpos(Hyp2f1Params::new(1.0, b, b + 1.0, z)).unwrap();
        let want = euler(b, z);
        assert!(rel_err(got, want) <= 1e-10, "b={b} z={z}: {got} vs {want}");
    }
}

#[test]
fn hyp2f1_general_parameters_against_euler_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let a = rng.random_range(-1.5..2.5);
        let b = rng.random_range(0.2..2.0);
        let c = b + rng.random_range(0.3..2.0);
        let z = -(10f64.powf(rng.random_range(-2.0..2.5)));
        let got = hyp2f1_nonpos(Hyp2f1Params::new(a, b, c, z)).unwrap();
        let norm = (libm_lgamma(c) - libm_lgamma(b) - libm_lgamma(c - b)).exp();
        let kernel = |s: f64| (1.0 - z * s).powf(-a);
        // split at 1/2 and substitute at each endpoint
        let lo = tanh_sinh(
            |y: f64| {
                let s = y.powf(1.0 / b);
                (1.0 - s).powf(c - b - 1.0) * kernel(s) / b
            },
            0.0,
            0.5f64.powf(b),
            1e-14,
        );
        let hi = tanh_sinh(
            |x: f64| {
                let s = 1.0 - x.powf(1.0 / (c - b));
                s.powf(b - 1.0) * kernel(s) / (c - b)
            },
            0.0,
            0.5f64.powf(c - b),
            1e-14,
        );
        let want = norm * (lo + hi);
        assert!(rel_err(got, want) <= 1e-10, "2F1({a},{b};{c};{z}) = {got} vs {want}");
    }
}

/// Lanczos log-gamma, independent of the library's choice.
fn libm_lgamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - libm_lgamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = C[0];
    for (i, c) in C.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

#[test]
fn documented_points() {
    let v = rho1(3.75, 1.0, 2.5, 0.3).unwrap();
    assert!(rel_err(v, rho1_oracle(3.75, 1.0, 2.5, 0.3)) < 1e-10);
    let v = rho2(3.75, 1.0, 1.7, 0.3).unwrap();
    assert!(rel_err(v, rho2_oracle(3.75, 1.0, 1.7, 0.3)) < 1e-10);
    assert!(rho2(2.0, 1.0, 1.0, 1.0).is_err());
    for (alpha, beta, d) in [(2.09, 1.0, 0.3), (3.75, 2.0, 4.0), (1.0, 0.0, 1e-3)] {
        assert_eq!(rho1(alpha, beta, 0.0, d).unwrap(), d.powf(beta + 1.0) / (beta + 1.0));
    }
}

#[test]
fn halves_add_up_to_the_whole_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let (alpha, beta, t, split) = random_tuple(&mut rng);
        if alpha <= beta + 1.0 {
            continue;
        }
        let total = rho1(alpha, beta, t, split).unwrap() + rho2(alpha, beta, t, split).unwrap();
        let e = (beta + 1.0) / alpha;
        let want = PI / (alpha * (PI * e).sin()) * t.powf(-e);
        assert!(rel_err(total, want) < 1e-8, "{alpha} {beta} {t} {split}: {total} vs {want}");
    }
}

#[test]
fn monotone_in_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..200 {
        let (alpha, beta, t, d) = random_tuple(&mut rng);
        let d2 = d * 1.01;
        assert!(rho1(alpha, beta, t, d2).unwrap() > rho1(alpha, beta, t, d).unwrap());
        if alpha > beta + 1.0 {
            assert!(rho2(alpha, beta, t, d2).unwrap() < rho2(alpha, beta, t, d).unwrap());
        }
    }
}
