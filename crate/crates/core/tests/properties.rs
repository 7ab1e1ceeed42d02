use proptest::prelude::*;
use sgcov_core::analytic::{coverage, laplace_general, Case1Params, CoverageQuery};
use sgcov_core::model::{case1_model, preset_3gpp_case1, NetworkEnvironment, PowerLaw};
use sgcov_core::special::{rho1, rho2};

fn arb_env() -> impl Strategy<Value = NetworkEnvironment> {
    (0.05f64..1.0, 2.0f64..3.0, 2.5f64..4.5, -6.0f64..-3.0, -5.0f64..-2.0).prop_map(|(d1, al, an, gl, gn)| {
        let model = case1_model(d1, PowerLaw::new(10f64.powf(gl), al), PowerLaw::new(10f64.powf(gn), an)).unwrap();
        NetworkEnvironment::new(1.0, 1e-10, model).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coverage_is_a_ccdf(
        env in arb_env(),
        log_lambda in 0.0f64..4.0,
        log_gamma in -1.0f64..2.0,
        ratio in 1.01f64..10.0,
    ) {
        let lambda = 10f64.powf(log_lambda);
        let gamma = 10f64.powf(log_gamma);
        let a = coverage(&env, CoverageQuery::new(lambda, gamma).unwrap()).unwrap();
        let b = coverage(&env, CoverageQuery::new(lambda, gamma * ratio).unwrap()).unwrap();
        prop_assert!((0.0..=1.0).contains(&a.value));
        prop_assert!((0.0..=1.0).contains(&b.value));
        prop_assert!(b.value <= a.value + a.abs_error_estimate + b.abs_error_estimate);
        prop_assert!(a.term_breakdown.iter().all(|t| t.value >= 0.0));
    }

    #[test]
    fn laplace_stays_in_unit_interval_and_decreases(
        log_lambda in 0.0f64..4.0,
        r in 0.001f64..2.0,
        log_s in 0.0f64..12.0,
    ) {
        let env = preset_3gpp_case1();
        let lambda = 10f64.powf(log_lambda);
        let s = 10f64.powf(log_s);
        let v = laplace_general(&env, lambda, r, s).unwrap();
        // far beyond the typical nearest distance the transform underflows to 0
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!(laplace_general(&env, lambda, r, 2.0 * s).unwrap() <= v);
        prop_assert!(laplace_general(&env, 2.0 * lambda, r, s).unwrap() <= v);
    }

    #[test]
    fn near_closed_forms_stay_in_unit_interval(
        log_lambda in 0.0f64..4.0,
        log_gamma in -1.0f64..2.0,
        frac in 0.001f64..1.0,
    ) {
        let c = Case1Params::from_env(&preset_3gpp_case1()).unwrap();
        let (lambda, gamma, r) = (10f64.powf(log_lambda), 10f64.powf(log_gamma), frac * c.d1);
        for v in [c.laplace_los(lambda, gamma, r).unwrap(), c.laplace_nlos_near(lambda, gamma, r).unwrap()] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        let far = c.laplace_nlos_far(lambda, gamma, c.d1 / frac.max(0.01)).unwrap();
        prop_assert!((0.0..=1.0).contains(&far));
    }

    #[test]
    fn rho_monotone_in_distance(
        alpha in 2.05f64..4.0,
        beta in prop::sample::select(vec![1.0, 2.0]),
        log_t in -3.0f64..3.0,
        log_d in -3.0f64..1.0,
    ) {
        let (t, d) = (10f64.powf(log_t), 10f64.powf(log_d));
        prop_assert!(rho1(alpha, beta, t, d * 1.001).unwrap() > rho1(alpha, beta, t, d).unwrap());
        if alpha > beta + 1.0 {
            prop_assert!(rho2(alpha, beta, t, d * 1.001).unwrap() < rho2(alpha, beta, t, d).unwrap());
        }
    }
}
