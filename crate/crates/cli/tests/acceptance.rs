//! Acceptance gate. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.
//!
//!     cargo test -p logitkit-cli --test acceptance

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use logitkit::{
    chi2_sf, classify, fit_irls, gradient, log_likelihood, logistic, logit, loocv, lrt_nested,
    neg_hessian, press_q, Coefficients, Dataset64, FitConfig64, FitStatus,
};
use logitkit_cli::Payload;
use logitkit_testkit::{
    central_diff_grad, central_diff_jacobian, erfc, grid_max_log_likelihood_k1, norm, rng,
    simulate, simulate_noise, Sim,
};
use rand::Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dataset(sim: &Sim) -> Dataset64 {
    Dataset64::from_features(&sim.features, sim.labels.clone()).unwrap()
}

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&d) / norm(b)
}

fn cli_payload(args: &[&str]) -> Result<Payload, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_logitkit"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(o.status.code() == Some(0), || format!("{args:?} exited {:?}", o.status.code()))?;
    serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())
}

fn ac1_power_curve() -> Check {
    let Payload::PressQ(q) = cli_payload(&["pressq", "--n", "28", "--rate", "0.85"])? else {
        return Err("pressq returned the wrong payload".into());
    };
    ensure((1.9e-4..=2.3e-4).contains(&q.p_value), || format!("p = {}", q.p_value))?;
    for n in ["28", "100", "1000"] {
        let Payload::Curve(c) = cli_payload(&["curve", "--n", n])? else {
            return Err("curve returned the wrong payload".into());
        };
        let upper: Vec<_> = c.points.iter().filter(|p| p.power >= 0.5).collect();
        ensure(upper[0].power == 0.5 && upper[0].p_value == 1.0, || format!("n={n}: p(0.5) = {}", upper[0].p_value))?;
        ensure(upper.windows(2).all(|w| w[1].p_value <= w[0].p_value), || format!("n={n}: not monotone"))?;
    }
    Ok(format!("p(n=28, 0.85) = {:.3e}", q.p_value))
}

fn ac2_special_functions() -> Check {
    let mut worst1 = 0.0f64;
    let mut worst2 = 0.0f64;
    for i in 0..500 {
        let x = 50.0 * i as f64 / 499.0;
        worst1 = worst1.max((chi2_sf(x, 1).unwrap() - erfc((x / 2.0).sqrt())).abs());
        worst2 = worst2.max((chi2_sf(x, 2).unwrap() - (-x / 2.0).exp()).abs());
    }
    ensure(worst1 <= 1e-10, || format!("df=1 max error {worst1:e}"))?;
    ensure(worst2 <= 1e-12, || format!("df=2 max error {worst2:e}"))?;
    Ok(format!("df=1 max err {worst1:.1e}, df=2 max err {worst2:.1e}"))
}

fn ac3_derivatives() -> Check {
    let mut r = rng(3003);
    let (mut worst_g, mut worst_h) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let n = r.random_range(2..=50);
        let k = r.random_range(1..=5);
        let d = dataset(&simulate_noise(n, k, &mut r));
        let beta: Vec<f64> = (0..=k).map(|_| r.random_range(-1.5..1.5)).collect();
        let ll = |b: &[f64]| log_likelihood(&d, &Coefficients::new(b.to_vec()).unwrap()).unwrap();
        let g = gradient(&d, &Coefficients::new(beta.clone()).unwrap()).unwrap();
        worst_g = worst_g.max(rel_err(&g, &central_diff_grad(ll, &beta, 1e-5)));

        let grad = |b: &[f64]| gradient(&d, &Coefficients::new(b.to_vec()).unwrap()).unwrap().to_vec();
        let fd: Vec<f64> = central_diff_jacobian(grad, &beta, 1e-5).into_iter().flatten().map(|v| -v).collect();
        let h = neg_hessian(&d, &Coefficients::new(beta).unwrap()).unwrap();
        worst_h = worst_h.max(rel_err(h.as_slice(), &fd));
    }
    ensure(worst_g <= 1e-6, || format!("gradient rel err {worst_g:e}"))?;
    ensure(worst_h <= 1e-5, || format!("hessian rel err {worst_h:e}"))?;
    Ok(format!("gradient rel err {worst_g:.1e}, hessian rel err {worst_h:.1e}"))
}

fn ac4_brute_force() -> Check {
    let mut r = rng(4004);
    let mut min_margin = f64::INFINITY;
    for _ in 0..10 {
        let n = r.random_range(4..=8);
        let beta = [r.random_range(-1.0..1.0), r.random_range(-2.0..2.0)];
        let sim = loop {
            let s = simulate(n, &beta, &mut r);
            let pos = s.labels.iter().filter(|&&y| y == 1.0).count();
            if pos > 0 && pos < n {
                break s;
            }
        };
        let x: Vec<f64> = sim.features.iter().map(|f| f[0]).collect();
        let fit = fit_irls(&dataset(&sim), &FitConfig64::default()).unwrap();
        let grid = grid_max_log_likelihood_k1(&x, &sim.labels, -10.0, 10.0, 0.01);
        let margin = fit.log_lik - grid;
        ensure(margin >= -1e-6, || format!("IRLS {} below grid max {grid}", fit.log_lik))?;
        min_margin = min_margin.min(margin);
    }
    Ok(format!("min(IRLS - grid) = {min_margin:.2e}"))
}

fn ac5_closed_form() -> Check {
    let mut worst = 0.0f64;
    let mut iters = 0;
    for labels in [vec![1.0, 0.0, 0.0, 0.0], vec![1.0, 0.0, 1.0, 0.0], vec![1.0, 1.0, 1.0, 0.0]] {
        let ybar = labels.iter().sum::<f64>() / labels.len() as f64;
        let rows = vec![[0.0f64; 0]; labels.len()];
        let d = Dataset64::from_features(&rows, labels).unwrap();
        let fit = fit_irls(&d, &FitConfig64::default()).unwrap();
        ensure(fit.status == FitStatus::Converged, || format!("ybar={ybar}: {:?}", fit.status))?;
        ensure(fit.iterations <= 10, || format!("ybar={ybar}: {} iterations", fit.iterations))?;
        worst = worst.max((fit.coef.beta()[0] - logit(ybar).unwrap()).abs());
        iters = iters.max(fit.iterations);
    }
    ensure(worst <= 1e-6, || format!("max |b0 - logit(ybar)| = {worst:e}"))?;
    Ok(format!("max error {worst:.1e}, max iterations {iters}"))
}

fn ac6_lrt_calibration() -> Check {
    let mut r = rng(6006);
    let cfg = FitConfig64::default();
    let (mut sum, mut rejections) = (0.0, 0);
    let reps = 500;
    for _ in 0..reps {
        let d = dataset(&simulate(200, &[0.3, 0.8, 0.0, 0.0], &mut r));
        let t = lrt_nested(&d, &[0, 1], &cfg).map_err(|e| e.to_string())?;
        ensure(t.df == 2, || format!("df = {}", t.df))?;
        sum += t.statistic;
        rejections += usize::from(t.p_value < 0.05);
    }
    let mean = sum / reps as f64;
    let rate = rejections as f64 / reps as f64;
    ensure((1.6..=2.4).contains(&mean), || format!("mean statistic {mean}"))?;
    ensure((0.02..=0.09).contains(&rate), || format!("rejection rate {rate}"))?;
    Ok(format!("mean statistic {mean:.3}, rejection rate {rate:.3}"))
}

fn ac7_recovery() -> Check {
    let truth = [0.5, -1.0, 2.0];
    let d = dataset(&simulate(5000, &truth, &mut rng(7007)));
    let fit = fit_irls(&d, &FitConfig64::default()).unwrap();
    let err = fit.coef.beta().iter().zip(&truth).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(fit.status == FitStatus::Converged, || format!("{:?}", fit.status))?;
    ensure(fit.iterations <= 15, || format!("{} iterations", fit.iterations))?;
    ensure(err <= 0.15, || format!("max abs error {err}"))?;
    Ok(format!("max abs error {err:.3}, {} iterations", fit.iterations))
}

fn ac8_loocv() -> Check {
    let cfg = FitConfig64::default();
    let sep = Dataset64::from_features(&[[-2.0], [-2.0], [2.0], [2.0]], vec![0.0, 0.0, 1.0, 1.0]).unwrap();
    // by hand: every fold trains on a separable 3-subject set whose boundary
    // lies between -2 and 2, so each held-out subject is classified correctly
    let rep = loocv(&sep, &cfg, 0.5).unwrap();
    ensure(rep.per_subject_errors == vec![0, 0, 0, 0], || format!("{:?}", rep.per_subject_errors))?;
    ensure(rep.error_rate == 0.0 && rep.discriminant_power == 1.0, || format!("rate {}", rep.error_rate))?;

    let two = Dataset64::from_features(&[[0.3], [1.7]], vec![0.0, 1.0]).unwrap();
    let rep2 = loocv(&two, &cfg, 0.5).unwrap();
    ensure(rep2.error_rate == 1.0, || format!("n=2 rate {}", rep2.error_rate))?;

    let perm = sep.select_rows(&[2, 0, 3, 1]).unwrap();
    ensure(loocv(&perm, &cfg, 0.5).unwrap().error_rate == 0.0, || "permuted separated fixture".into())?;
    let mut r = rng(8008);
    let d = dataset(&simulate(30, &[0.0, 1.0, -1.0], &mut r));
    let mut order: Vec<usize> = (0..30).collect();
    for i in (1..30).rev() {
        order.swap(i, r.random_range(0..=i));
    }
    let a = loocv(&d, &cfg, 0.5).unwrap();
    let b = loocv(&d.select_rows(&order).unwrap(), &cfg, 0.5).unwrap();
    ensure(a.error_rate == b.error_rate, || format!("{} vs {}", a.error_rate, b.error_rate))?;
    Ok(format!("separated 0, degenerate 1, permuted random {:.3} = {:.3}", a.error_rate, b.error_rate))
}

fn ac9_invariants() -> Check {
    let cfg = FitConfig64::default();
    for seed in 0..50u64 {
        let mut r = rng(9000 + seed);
        let sim = simulate(60, &[0.4, -0.8, 1.1], &mut r);
        let d = dataset(&sim);

        // concavity midpoint
        let b1: Vec<f64> = (0..3).map(|_| r.random_range(-5.0..5.0)).collect();
        let b2: Vec<f64> = (0..3).map(|_| r.random_range(-5.0..5.0)).collect();
        let mid: Vec<f64> = b1.iter().zip(&b2).map(|(a, b)| 0.5 * (a + b)).collect();
        let l = |b: &[f64]| log_likelihood(&d, &Coefficients::new(b.to_vec()).unwrap()).unwrap();
        ensure(l(&mid) >= 0.5 * (l(&b1) + l(&b2)) - 1e-9, || format!("seed {seed}: concavity"))?;

        // logistic / logit roundtrip
        let t: f64 = r.random_range(-8.0..8.0);
        ensure((logit(logistic(t).unwrap()).unwrap() - t).abs() <= 1e-12, || format!("seed {seed}: roundtrip at {t}"))?;

        // label flip antisymmetry
        let flipped: Vec<f64> = sim.labels.iter().map(|y| 1.0 - y).collect();
        let df = Dataset64::from_features(&sim.features, flipped).unwrap();
        let a = fit_irls(&d, &cfg).unwrap();
        let b = fit_irls(&df, &cfg).unwrap();
        ensure(a.converged() && b.converged(), || format!("seed {seed}: fit did not converge"))?;
        let worst = a.coef.beta().iter().zip(b.coef.beta()).map(|(x, y)| (x + y).abs()).fold(0.0, f64::max);
        ensure(worst <= 1e-6, || format!("seed {seed}: flip error {worst:e}"))?;

        // classifier scale invariance
        let c = r.random_range(0.01..100.0);
        let base = classify(&d, &a.coef, 0.5).unwrap();
        ensure(classify(&d, &a.coef.scaled(c).unwrap(), 0.5).unwrap() == base, || format!("seed {seed}: scale {c}"))?;

        // Press's Q symmetry
        let n = r.random_range(1..1000);
        let g: f64 = r.random_range(0.0..=1.0);
        let q1 = press_q(n, g).unwrap().q_statistic;
        let q2 = press_q(n, 1.0 - g).unwrap().q_statistic;
        ensure((q1 - q2).abs() <= 1e-12 * (1.0 + q1), || format!("seed {seed}: Q {q1} vs {q2}"))?;
    }
    Ok("50 seeds".into())
}

struct Criterion {
    id: &'static str,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion { id: "AC1", name: "Press's Q curve (n=28 p at 0.85, monotone curves)", budget: Some(Duration::from_secs(1)), run: ac1_power_curve },
        Criterion { id: "AC2", name: "chi-square survival vs erfc / exp", budget: Some(Duration::from_secs(1)), run: ac2_special_functions },
        Criterion { id: "AC3", name: "gradient and Hessian vs finite differences", budget: Some(Duration::from_secs(5)), run: ac3_derivatives },
        Criterion { id: "AC4", name: "IRLS vs brute-force grid", budget: Some(Duration::from_secs(30)), run: ac4_brute_force },
        Criterion { id: "AC5", name: "intercept-only closed form", budget: None, run: ac5_closed_form },
        Criterion { id: "AC6", name: "LRT null calibration", budget: Some(Duration::from_secs(60)), run: ac6_lrt_calibration },
        Criterion { id: "AC7", name: "parameter recovery n=5000", budget: Some(Duration::from_secs(5)), run: ac7_recovery },
        Criterion { id: "AC8", name: "LOOCV exactness", budget: None, run: ac8_loocv },
        Criterion { id: "AC9", name: "invariant suite", budget: Some(Duration::from_secs(10)), run: ac9_invariants },
    ];
    let mut failed = 0;
    let mut err = std::io::stderr().lock();
    for c in &criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, budget {b:?}")),
            (o, _) => o,
        };
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        writeln!(err, "[{tag}] {} {}: {detail} ({elapsed:.2?})", c.id, c.name).unwrap();
    }
    writeln!(err, "acceptance: {} passed, {failed} failed", criteria.len() - failed).unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}
