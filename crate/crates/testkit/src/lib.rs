//! Test support: reproducible simulators and oracles that share no code
//! with the library under test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub use libm::erfc;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Features (without intercept) and labels for one simulated study.
#[derive(Debug, Clone)]
pub struct Sim {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
}

impl Sim {
    /// Rows with a leading 1, as a flat design.
    pub fn design_rows(&self) -> Vec<Vec<f64>> {
        self.features
            .iter()
            .map(|r| std::iter::once(1.0).chain(r.iter().copied()).collect())
            .collect()
    }
}

fn plain_logistic(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

/// Standard-normal features; labels drawn from the logistic model with
/// coefficients `beta` (intercept first).
pub fn simulate(n: usize, beta: &[f64], rng: &mut impl Rng) -> Sim {
    let k = beta.len() - 1;
    let mut features = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        let eta = beta[0] + x.iter().zip(&beta[1..]).map(|(a, b)| a * b).sum::<f64>();
        let y = if rng.random::<f64>() < plain_logistic(eta) { 1.0 } else { 0.0 };
        features.push(x);
        labels.push(y);
    }
    Sim { features, labels }
}

/// Labels are fair coin flips, independent of the features.
pub fn simulate_noise(n: usize, k: usize, rng: &mut impl Rng) -> Sim {
    let features = (0..n)
        .map(|_| (0..k).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    let labels = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { 0.0 }).collect();
    Sim { features, labels }
}

/// Log-likelihood straight from the Bernoulli product form,
/// `sum y log(pi) + (1 - y) log(1 - pi)`.
pub fn direct_log_likelihood(design_rows: &[Vec<f64>], labels: &[f64], beta: &[f64]) -> f64 {
    design_rows
        .iter()
        .zip(labels)
        .map(|(x, &y)| {
            let eta: f64 = x.iter().zip(beta).map(|(a, b)| a * b).sum();
            let pi = plain_logistic(eta);
            y * pi.ln() + (1.0 - y) * (1.0 - pi).ln()
        })
        .sum()
}

/// Central-difference gradient of a scalar function.
pub fn central_diff_grad(f: impl Fn(&[f64]) -> f64, at: &[f64], h: f64) -> Vec<f64> {
    let mut x = at.to_vec();
    (0..at.len())
        .map(|j| {
            x[j] = at[j] + h;
            let up = f(&x);
            x[j] = at[j] - h;
            let down = f(&x);
            x[j] = at[j];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Central-difference Jacobian of a vector function, `J[i][j] = d f_i / d x_j`.
pub fn central_diff_jacobian(f: impl Fn(&[f64]) -> Vec<f64>, at: &[f64], h: f64) -> Vec<Vec<f64>> {
    let mut x = at.to_vec();
    let cols: Vec<Vec<f64>> = (0..at.len())
        .map(|j| {
            x[j] = at[j] + h;
            let up = f(&x);
            x[j] = at[j] - h;
            let down = f(&x);
            x[j] = at[j];
            up.iter().zip(&down).map(|(u, d)| (u - d) / (2.0 * h)).collect()
        })
        .collect();
    let m = cols[0].len();
    (0..m).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// Inverse of a 2x2 matrix by the adjugate formula.
pub fn inverse_2x2(a: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]]
}

/// Best log-likelihood over the grid `beta in [lo, hi]^2` with spacing
/// `step`, for a one-feature model; evaluated with [`direct_log_likelihood`]'s
/// product form, grouped by distinct feature values.
pub fn grid_max_log_likelihood_k1(x: &[f64], y: &[f64], lo: f64, hi: f64, step: f64) -> f64 {
    let steps = ((hi - lo) / step).round() as usize;
    let mut best = f64::NEG_INFINITY;
    for a in 0..=steps {
        let b0 = lo + a as f64 * step;
        for b in 0..=steps {
            let b1 = lo + b as f64 * step;
            let mut ll = 0.0;
            for (&xi, &yi) in x.iter().zip(y) {
                let pi = plain_logistic(b0 + b1 * xi);
                ll += if yi == 1.0 { pi.ln() } else { (1.0 - pi).ln() };
            }
            if ll > best {
                best = ll;
            }
        }
    }
    best
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
