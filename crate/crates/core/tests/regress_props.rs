mod common;

use dagdml::regress::{
    lambda_max, lasso_cd, lasso_cd_with, ols, plugin_penalty, plugin_select, post_lasso,
    with_intercept, LassoOptions,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

use common::{kkt_violation, rng, standardize};

fn problem(n: usize, p: usize, seed: u64) -> (DMatrix<f64>, DVector<f64>) {
    let mut r = rng(seed);
    let x = DMatrix::from_fn(n, p, |_, _| r.sample::<f64, _>(StandardNormal));
    let y = DVector::from_fn(n, |i, _| {
        1.5 * x[(i, 0)] - 0.7 * x[(i, p - 1)] + r.sample::<f64, _>(StandardNormal)
    });
    (x, y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn lasso_satisfies_kkt(n in 15usize..80, p in 2usize..50, frac in 0.02f64..0.98, seed in any::<u64>()) {
        let (x, y) = problem(n, p, seed);
        let z = standardize(&x);
        let lam = lambda_max(&z, &y).unwrap() * frac;
        let fit = lasso_cd(&z, &y, lam).unwrap();
        prop_assert!(fit.converged);
        prop_assert!(kkt_violation(&z, &y, &fit) < 1e-6);
        for j in 0..p {
            prop_assert_eq!(fit.coefficients[j] != 0.0, fit.active_set.contains(&j));
        }
    }

    #[test]
    fn lasso_is_scale_consistent(k in 0.1f64..20.0, frac in 0.05f64..0.9, seed in any::<u64>()) {
        let (x, y) = problem(50, 10, seed);
        let lam = lambda_max(&x, &y).unwrap() * frac;
        let base = lasso_cd(&x, &y, lam).unwrap();
        let scaled = lasso_cd(&x, &(&y * k), lam * k).unwrap();
        for j in 0..10 {
            prop_assert!((scaled.coefficients[j] - k * base.coefficients[j]).abs() < 1e-6 * k.max(1.0));
        }
    }

    #[test]
    fn ols_residuals_orthogonal_to_design(n in 12usize..60, p in 1usize..8, seed in any::<u64>()) {
        let (x, y) = problem(n, p.min(n - 3), seed);
        let xi = with_intercept(&x);
        let fit = ols(&xi, &y).unwrap();
        let scale = y.norm() * xi.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
        prop_assert!((xi.transpose() * &fit.residuals).amax() <= 1e-8 * scale);
        prop_assert!(fit.standard_errors.iter().all(|&s| s > 0.0));
    }

    #[test]
    fn objective_never_increases(seed in any::<u64>()) {
        let (x, y) = problem(40, 30, seed);
        let lam = lambda_max(&x, &y).unwrap() * 0.1;
        let opts = LassoOptions { trace_objective: true, ..LassoOptions::default() };
        let fit = lasso_cd_with(&x, &y, lam, &opts).unwrap();
        prop_assert!(fit.objective_trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}

#[test]
fn zero_penalty_matches_ols() {
    let (x, y) = problem(60, 6, 3);
    let fit = lasso_cd(&x, &y, 0.0).unwrap();
    let full = ols(&with_intercept(&x), &y).unwrap();
    for j in 0..6 {
        assert!((fit.coefficients[j] - full.coefficients[j + 1]).abs() < 1e-6);
    }
    assert!((fit.intercept - full.coefficients[0]).abs() < 1e-6);
}

#[test]
fn plugin_penalty_pinned_value() {
    // 1.1 * Phi^-1(1 - (0.1 / ln 100) / 200) / 10 from an independent
    // normal-quantile routine
    assert!((plugin_penalty(100, 100, 1.0) - 0.406_800_268_541_488_1).abs() < 1e-9);
}

#[test]
fn plugin_penalty_monotonicity() {
    for n in [20, 50, 100, 1_000] {
        assert!(plugin_penalty(n + 10, 1, 1.0) < plugin_penalty(n, 1, 1.0));
        assert!(plugin_penalty(n, 40, 1.0) > plugin_penalty(n, 20, 1.0));
        assert!((plugin_penalty(n, 20, 2.0) - 2.0 * plugin_penalty(n, 20, 1.0)).abs() < 1e-12);
    }
}

#[test]
fn plugin_lasso_screens_strong_signals() {
    let (n, p, reps) = (500, 50, 200);
    let mut hits = 0;
    for s in 0..reps {
        let mut r = rng(90_000 + s);
        let x = DMatrix::from_fn(n, p, |_, _| r.sample::<f64, _>(StandardNormal));
        let y = DVector::from_fn(n, |i, _| x[(i, 0)] + x[(i, 1)] + r.sample::<f64, _>(StandardNormal));
        let sel = plugin_select(&x, &y, &[]).unwrap();
        let refit = post_lasso(&x, &y, &sel.fit.active_set).unwrap();
        assert_eq!(refit.coefficients.len(), sel.fit.active_set.len() + 1);
        if sel.fit.active_set.contains(&0) && sel.fit.active_set.contains(&1) {
            hits += 1;
        }
    }
    assert!(hits as f64 / reps as f64 > 0.95, "{hits}/{reps}");
}

#[test]
fn empty_support_refit_is_mean() {
    let (x, y) = problem(30, 4, 8);
    let fit = post_lasso(&x, &y, &[]).unwrap();
    assert!((fit.coefficients[0] - y.mean()).abs() < 1e-12);
}
