use logitkit::{
    deviance, fit_irls, lrt_nested, power_curve, press_q, Coefficients, Dataset, Error, FitConfig,
    NestedModel,
};
use logitkit_testkit::{rng, simulate};
use proptest::prelude::*;
use rand::Rng;

fn dataset(features: &[Vec<f64>], labels: &[f64]) -> Dataset<f64> {
    Dataset::from_features(features, labels.to_vec()).unwrap()
}

#[test]
fn deviance_examples() {
    let rows = vec![[0.0f64; 0]; 4];
    let d = Dataset::from_features(&rows, vec![1.0, 1.0, 1.0, 0.0]).unwrap();
    assert!((deviance(&d, &Coefficients::zeros(1)).unwrap() - 8.0 * 2f64.ln()).abs() < 1e-13);
    let fit = fit_irls(&d, &FitConfig::default()).unwrap();
    assert!((deviance(&d, &fit.coef).unwrap() - 4.498_681_156_950_466).abs() < 1e-9);

    let mut r = rng(1);
    let sim = simulate(20, &[0.0, 1.0], &mut r);
    let d = dataset(&sim.features, &sim.labels);
    for _ in 0..20 {
        let b = Coefficients::new(vec![r.random_range(-4.0..4.0), r.random_range(-4.0..4.0)]).unwrap();
        assert!(deviance(&d, &b).unwrap() >= 0.0);
    }
}

#[test]
fn noise_column_test() {
    let mut r = rng(2);
    let sim = simulate(150, &[0.2, 1.0, 0.0], &mut r);
    let d = dataset(&sim.features, &sim.labels);
    let t = lrt_nested(&d, &[0, 1], &FitConfig::default()).unwrap();
    assert_eq!(t.df, 1);
    assert!(t.statistic >= 0.0);
    assert_eq!(t.statistic, t.deviance_reduced - t.deviance_full);
    assert!((0.0..=1.0).contains(&t.p_value));
}

#[test]
fn zero_column_adds_nothing() {
    let mut r = rng(3);
    let sim = simulate(100, &[0.2, -0.8], &mut r);
    let rows: Vec<Vec<f64>> = sim.features.iter().map(|x| vec![x[0], 0.0]).collect();
    let d = dataset(&rows, &sim.labels);
    let t = lrt_nested(&d, &[0, 1], &FitConfig::default()).unwrap();
    assert!(t.statistic.abs() <= 1e-6);
    assert!(t.p_value > 0.99);
}

#[test]
fn nesting_monotonicity() {
    let mut r = rng(4);
    for _ in 0..20 {
        let sim = simulate(120, &[0.1, 0.6, -0.4, 0.3], &mut r);
        let d = dataset(&sim.features, &sim.labels);
        let cfg = FitConfig::default();
        let dev = |cols: &[usize]| fit_irls(&d.select_columns(cols).unwrap(), &cfg).unwrap().deviance;
        let a = dev(&[0]);
        let b = dev(&[0, 2]);
        let c = dev(&[0, 1, 2]);
        let full = dev(&[0, 1, 2, 3]);
        assert!(a >= b - 1e-6 && b >= c - 1e-6 && c >= full - 1e-6);
    }
}

#[test]
fn lrt_reports_which_fit_failed() {
    // x1 separates the labels: the full model cannot converge
    let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![if i < 10 { -1.0 } else { 1.0 }]).collect();
    let labels: Vec<f64> = (0..20).map(|i| if i < 10 { 0.0 } else { 1.0 }).collect();
    let d = dataset(&rows, &labels);
    match lrt_nested(&d, &[0], &FitConfig::default()) {
        Err(Error::NonConvergence { model, .. }) => assert_eq!(model, NestedModel::Full),
        other => panic!("expected non-convergence, got {other:?}"),
    }
}

#[test]
fn lrt_rejects_bad_subsets() {
    let mut r = rng(5);
    let sim = simulate(30, &[0.0, 1.0, 1.0], &mut r);
    let d = dataset(&sim.features, &sim.labels);
    let cfg = FitConfig::default();
    assert!(matches!(lrt_nested(&d, &[1, 2], &cfg), Err(Error::InvalidSelection(_))));
    assert!(matches!(lrt_nested(&d, &[0, 1, 2], &cfg), Err(Error::InvalidSelection(_))));
    assert!(matches!(lrt_nested(&d, &[0, 7], &cfg), Err(Error::InvalidSelection(_))));
}

#[test]
fn curves_shrink_with_n() {
    let small = power_curve::<f64>(28, 1000).unwrap();
    let large = power_curve::<f64>(1000, 1000).unwrap();
    for (a, b) in small.points.iter().zip(&large.points) {
        if a.power > 0.5 {
            assert!(b.p_value <= a.p_value);
        }
    }
}

proptest! {
    #[test]
    fn press_q_symmetric(n in 1usize..5000, rate in 0.0f64..=1.0) {
        let a = press_q(n, rate).unwrap();
        let b = press_q(n, 1.0 - rate).unwrap();
        // 1 - rate is not always exact in floating point; compare the centered term
        let exact = press_q(n, 0.5 + (rate - 0.5)).unwrap();
        prop_assert!((a.q_statistic - b.q_statistic).abs() <= 1e-12 * (1.0 + a.q_statistic));
        prop_assert_eq!(a.q_statistic, exact.q_statistic);
    }

    #[test]
    fn curve_is_unimodal(n in 1usize..2000, grid in 2usize..400) {
        let c = power_curve::<f64>(n, grid).unwrap();
        for w in c.points.windows(2) {
            if w[0].power >= 0.5 {
                prop_assert!(w[1].p_value <= w[0].p_value);
            }
            if w[1].power <= 0.5 {
                prop_assert!(w[1].p_value >= w[0].p_value);
            }
        }
    }
}
