use iwl::specfun::*;
use iwl_testkit::{central_diff, ln_factorial_shift, ln_gamma_half_integer, rel_diff, tanh_sinh};
use proptest::prelude::*;

fn lower_by_quadrature(a: f64, x: f64) -> f64 {
    tanh_sinh(|w| w.powf(a - 1.0) * (-w).exp(), 0.0, x, 1e-14)
}

#[test]
fn log_gamma_at_half_integer_matches_recurrence() {
    for m in [0u32, 1, 4, 10, 40] {
        let x = m as f64 + 0.5;
        assert!(
            rel_diff(log_gamma(x).unwrap(), ln_gamma_half_integer(m), 1.0) < 1e-13,
            "{x}"
        );
    }
    assert!((log_gamma(10.5).unwrap() - ln_gamma_half_integer(10)).abs() < 1e-12);
    assert!((log_gamma(0.5).unwrap() - 0.572_364_942_924_700_1).abs() < 1e-14);
}

#[test]
fn log_gamma_at_integers_matches_log_factorial() {
    for m in [1u32, 2, 3, 7, 30, 171, 1000] {
        let want = ln_factorial_shift(m);
        assert!(
            rel_diff(log_gamma(m as f64).unwrap(), want, 1.0) < 1e-13,
            "{m}"
        );
    }
}

#[test]
fn polygamma_known_values() {
    assert!((digamma(1.0).unwrap() + 0.577_215_664_901_532_9).abs() < 1e-14);
    assert!((trigamma(1.0).unwrap() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-13);
    assert!((tetragamma(1.0).unwrap() + 2.404_113_806_319_188_5).abs() < 1e-12);
}

#[test]
fn digamma_recurrence_on_grid() {
    for i in 1..=1000 {
        let x = 0.1 * i as f64;
        let lhs = digamma(x + 1.0).unwrap();
        let rhs = digamma(x).unwrap() + 1.0 / x;
        assert!((lhs - rhs).abs() < 1e-13 * rhs.abs().max(1.0), "{x}");
    }
}

#[test]
fn polygammas_are_derivatives() {
    for x in [0.3, 1.7, 6.0, 25.0] {
        let h = 1e-5 * x;
        let d1 = central_diff(|v| log_gamma(v).unwrap(), x, h);
        let d2 = central_diff(|v| digamma(v).unwrap(), x, h);
        let d3 = central_diff(|v| trigamma(v).unwrap(), x, h);
        assert!(rel_diff(digamma(x).unwrap(), d1, 1.0) < 1e-8);
        assert!(rel_diff(trigamma(x).unwrap(), d2, 1.0) < 1e-8);
        assert!(rel_diff(tetragamma(x).unwrap(), d3, 1.0) < 1e-7);
    }
}

#[test]
fn lower_incomplete_gamma_against_quadrature() {
    let want = lower_by_quadrature(2.5, 1.3);
    assert!((lower_inc_gamma(2.5, 1.3).unwrap() - want).abs() < 1e-12);
    for &(a, x) in &[(0.3, 0.2), (1.0, 5.0), (4.5, 2.0), (12.0, 15.0)] {
        let got = lower_inc_gamma(a, x).unwrap();
        let want = lower_by_quadrature(a, x);
        assert!(
            rel_diff(got, want, 1e-300) < 1e-11,
            "({a},{x}): {got} vs {want}"
        );
    }
}

#[test]
fn closed_forms_and_edges() {
    for x in [0.0, 0.01, 1.0, 7.5, 40.0] {
        assert!((lower_inc_gamma(1.0, x).unwrap() - (-(-x).exp_m1())).abs() < 1e-15);
    }
    for a in [0.2, 1.0, 3.5] {
        assert_eq!(lower_inc_gamma(a, 0.0).unwrap(), 0.0);
        let g = log_gamma(a).unwrap().exp();
        assert!(rel_diff(upper_inc_gamma(a, 0.0).unwrap(), g, 1.0) < 1e-14);
    }
}

#[test]
fn invalid_arguments_are_domain_errors() {
    assert!(log_gamma(0.0).is_err());
    assert!(log_gamma(-1.5).is_err());
    assert!(log_gamma(f64::NAN).is_err());
    assert!(digamma(0.0).is_err());
    assert!(lower_inc_gamma(0.0, 1.0).is_err());
    assert!(lower_inc_gamma(1.0, -1.0).is_err());
    assert!(dgamma_dshape(-1.0, 1.0).is_err());
}

#[test]
fn shape_derivative_against_quadrature_oracle() {
    assert_eq!(dgamma_dshape(2.0, 0.0).unwrap(), 0.0);
    for &(a, x) in &[(1.0, 2.0), (3.0, 1.0), (0.7, 4.0), (6.0, 9.0)] {
        let h = 2e-5 * a;
        let fd = (lower_by_quadrature(a + h, x) - lower_by_quadrature(a - h, x)) / (2.0 * h);
        let got = dgamma_dshape(a, x).unwrap();
        assert!(
            (got - fd).abs() < 1e-7 * fd.abs().max(1.0),
            "({a},{x}): {got} vs {fd}"
        );
    }
}

#[test]
fn shape_derivative_matches_difference_quotient_on_grid() {
    let shapes: [f64; 7] = [0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];
    let xs = [0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 25.0, 50.0];
    for &a in &shapes {
        for &x in &xs {
            let h = 1e-6 * a.max(1.0);
            let fd = central_diff(|b| lower_inc_gamma(b, x).unwrap(), a, h);
            let got = dgamma_dshape(a, x).unwrap();
            assert!(rel_diff(got, fd, 1e-12) < 1e-6, "({a},{x}): {got} vs {fd}");
        }
    }
}

proptest! {
    #[test]
    fn lower_plus_upper_is_complete_gamma(a in 0.05f64..60.0, x in 0.0f64..150.0) {
        let g = log_gamma(a).unwrap().exp();
        let sum = lower_inc_gamma(a, x).unwrap() + upper_inc_gamma(a, x).unwrap();
        prop_assert!((sum - g).abs() <= 1e-13 * g);
    }

    #[test]
    fn lower_is_nondecreasing(a in 0.05f64..40.0, x in 0.0f64..80.0, dx in 0.0f64..5.0) {
        prop_assert!(lower_inc_gamma(a, x + dx).unwrap() >= lower_inc_gamma(a, x).unwrap());
    }

    #[test]
    fn regularized_pair_sums_to_one(a in 0.05f64..200.0, x in 0.0f64..400.0) {
        let s = reg_lower_inc_gamma(a, x).unwrap() + reg_upper_inc_gamma(a, x).unwrap();
        prop_assert!((s - 1.0).abs() < 1e-13);
    }
}

#[test]
fn lower_tends_to_complete_gamma() {
    for a in [0.5, 3.0, 11.0] {
        let g = log_gamma(a).unwrap().exp();
        assert!(rel_diff(lower_inc_gamma(a, 500.0).unwrap(), g, 1.0) < 1e-15);
    }
}
