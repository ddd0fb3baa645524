//! Score, observed information and the Newton/IRLS maximum-likelihood loop.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{log_likelihood, scores, sigmoid, Coefficients, Dataset};
use crate::num::Real;
use crate::numerics::{norm2, pinv_symmetric, solve_psd, Matrix, Vector};

/// Stopping rules for [`fit_irls`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real", serialize = "T: Real"))]
pub struct FitConfig<T> {
    /// Stop once the Euclidean norm of the score falls to this level.
    pub grad_tol: T,
    pub max_iter: usize,
    /// A coefficient norm above this is reported as divergence.
    pub divergence_norm: T,
}

impl<T: Real> Default for FitConfig<T> {
    fn default() -> Self {
        Self {
            grad_tol: T::lit(1e-3),
            max_iter: 100,
            divergence_norm: T::lit(1e8),
        }
    }
}

impl<T: Real> FitConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.grad_tol.is_finite() && self.grad_tol > T::zero()) {
            return Err(Error::Domain(format!("grad_tol must be positive, got {}", self.grad_tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Domain("max_iter must be >= 1".into()));
        }
        if self.divergence_norm.is_nan() || self.divergence_norm <= T::zero() {
            return Err(Error::Domain(format!(
                "divergence_norm must be positive, got {}",
                self.divergence_norm
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FitStatus {
    Converged,
    MaxIterations,
    /// Coefficients ran off to infinity (or became non-finite); on binary
    /// data this is the signature of complete separation.
    Diverged,
}

impl std::fmt::Display for FitStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real", serialize = "T: Real"))]
pub struct FitResult<T> {
    pub coef: Coefficients<T>,
    pub log_lik: T,
    pub deviance: T,
    pub grad_norm: T,
    /// Newton steps taken.
    pub iterations: usize,
    pub status: FitStatus,
    /// Inverse observed information at `coef`.
    pub covariance: Matrix<T>,
    pub std_errors: Vector<T>,
    /// The information matrix was rank deficient; `covariance` is a pseudoinverse.
    pub degenerate: bool,
    /// Reference degrees of freedom `n - p - 1` for the deviance.
    pub residual_df: usize,
}

impl<T: Real> FitResult<T> {
    pub fn converged(&self) -> bool {
        self.status == FitStatus::Converged
    }
}

fn check_dims<T: Real>(data: &Dataset<T>, beta: &[T]) -> Result<()> {
    if beta.len() != data.n_coef() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for {} design columns",
            beta.len(),
            data.n_coef()
        )));
    }
    Ok(())
}

fn score_vec<T: Real>(data: &Dataset<T>, beta: &[T]) -> Vec<T> {
    let x = data.design();
    let resid: Vec<T> = (0..data.n())
        .map(|i| data.labels()[i] - sigmoid(crate::numerics::dot(x.row(i), beta)))
        .collect();
    x.t_matvec(&resid).expect("dimensions checked")
}

fn information<T: Real>(data: &Dataset<T>, beta: &[T]) -> Matrix<T> {
    let x = data.design();
    let p = x.cols();
    let mut out = vec![T::zero(); p * p];
    for i in 0..x.rows() {
        let row = x.row(i);
        let pi = sigmoid(crate::numerics::dot(row, beta));
        let w = pi * (T::one() - pi);
        if w == T::zero() {
            continue;
        }
        for a in 0..p {
            let wa = w * row[a];
            for b in a..p {
                out[a * p + b] += wa * row[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            out[a * p + b] = out[b * p + a];
        }
    }
    Matrix::new(p, p, out).expect("finite weights give a finite matrix")
}

/// Score `X^T (y - pi)`.
pub fn gradient<T: Real>(data: &Dataset<T>, coef: &Coefficients<T>) -> Result<Vector<T>> {
    check_dims(data, coef.beta())?;
    Vector::new(score_vec(data, coef.beta()))
}

/// Observed information `X^T S X` with `S = diag(pi_i (1 - pi_i))`; the
/// Hessian of the log-likelihood is its negative.
pub fn neg_hessian<T: Real>(data: &Dataset<T>, coef: &Coefficients<T>) -> Result<Matrix<T>> {
    check_dims(data, coef.beta())?;
    Ok(information(data, coef.beta()))
}

/// Inverse observed information `(X^T S X)^{-1}`, and whether a
/// pseudoinverse had to stand in for a singular matrix.
pub fn covariance_with_rank<T: Real>(
    data: &Dataset<T>,
    coef: &Coefficients<T>,
) -> Result<(Matrix<T>, bool)> {
    let info = neg_hessian(data, coef)?;
    let (inv, rank) = pinv_symmetric(&info)?;
    Ok((inv, rank < info.rows()))
}

/// Asymptotic covariance of the estimates, `(X^T S X)^{-1}`.
pub fn covariance<T: Real>(data: &Dataset<T>, coef: &Coefficients<T>) -> Result<Matrix<T>> {
    covariance_with_rank(data, coef).map(|(m, _)| m)
}

/// Every subject strictly on its own side of the boundary: the data are
/// completely separated and no finite maximizer exists.
fn separates<T: Real>(data: &Dataset<T>, beta: &[T]) -> bool {
    let x = data.design();
    (0..data.n()).all(|i| {
        let s = crate::numerics::dot(x.row(i), beta);
        if data.labels()[i] == T::one() {
            s > T::zero()
        } else {
            s < T::zero()
        }
    })
}

fn all_finite<T: Real>(v: &[T]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Newton step `pinv(X^T S X) g`.
fn newton_step<T: Real>(data: &Dataset<T>, beta: &[T], g: &[T]) -> Option<Vec<T>> {
    let step = solve_psd(&information(data, beta), g).ok()?;
    let next: Vec<T> = beta.iter().zip(step.iter()).map(|(&b, &d)| b + d).collect();
    all_finite(&next).then_some(next)
}

/// Maximum-likelihood fit by full Newton steps from `beta = 0`.
///
/// Each iteration evaluates the score `g` at the current coefficients and
/// moves by `pinv(X^T S X) g`. Once `|g| <= grad_tol` one last step is
/// taken (and kept only if it does not increase `|g|`), mirroring the
/// classic loop that updates after its final gradient check. Non-finite
/// intermediate values end the loop with [`FitStatus::Diverged`] and the
/// last finite coefficients.
pub fn fit_irls<T: Real>(data: &Dataset<T>, config: &FitConfig<T>) -> Result<FitResult<T>> {
    config.validate()?;
    let p = data.n_coef();
    let mut beta = vec![T::zero(); p];
    let mut iterations = 0;

    let status = loop {
        let g = score_vec(data, &beta);
        if !all_finite(&g) {
            break FitStatus::Diverged;
        }
        let gnorm = norm2(&g);
        if gnorm <= config.grad_tol {
            if separates(data, &beta) {
                break FitStatus::Diverged;
            }
            if iterations < config.max_iter {
                if let Some(next) = newton_step(data, &beta, &g) {
                    let g_next = score_vec(data, &next);
                    if all_finite(&g_next) && norm2(&g_next) <= gnorm {
                        beta = next;
                        iterations += 1;
                    }
                }
            }
            break FitStatus::Converged;
        }
        if iterations >= config.max_iter {
            break FitStatus::MaxIterations;
        }
        let Some(next) = newton_step(data, &beta, &g) else {
            break FitStatus::Diverged;
        };
        iterations += 1;
        beta = next;
        if norm2(&beta) > config.divergence_norm {
            break FitStatus::Diverged;
        }
    };

    let coef = Coefficients::new(beta)?;
    let log_lik = log_likelihood(data, &coef)?;
    let grad_norm = norm2(&score_vec(data, coef.beta()));
    let (covariance, degenerate) = covariance_with_rank(data, &coef)?;
    let std_errors = Vector::new(
        (0..p)
            .map(|j| covariance.get(j, j).max(T::zero()).sqrt())
            .collect(),
    )?;
    Ok(FitResult {
        coef,
        log_lik,
        deviance: -(log_lik + log_lik),
        grad_norm,
        iterations,
        status,
        covariance,
        std_errors,
        degenerate,
        residual_df: data.n().saturating_sub(p),
    })
}

/// Scores of a fitted model on its training rows.
pub fn fitted_scores<T: Real>(data: &Dataset<T>, fit: &FitResult<T>) -> Result<Vec<T>> {
    scores(data, &fit.coef)
}
