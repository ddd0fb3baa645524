//! Logistic discrimination and leave-one-out error estimation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_irls, FitConfig, FitStatus};
use crate::inference::{press_q, PressQResult};
use crate::model::{logit, scores_for, Coefficients, Dataset};
use crate::num::Real;
use crate::numerics::{dot, Matrix};

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Assigns class 1 when `pi_i > threshold`, class 0 otherwise (ties go to 0).
///
/// The comparison is carried out on the score scale, `x_i^T beta > logit(threshold)`,
/// so at the default threshold it is exactly the sign of the score.
pub fn classify_design<T: Real>(
    design: &Matrix<T>,
    coef: &Coefficients<T>,
    threshold: T,
) -> Result<Vec<u8>> {
    let cut = logit(threshold)
        .map_err(|_| Error::Domain(format!("threshold must lie in (0, 1), got {threshold}")))?;
    Ok(scores_for(design, coef)?
        .into_iter()
        .map(|s| u8::from(s > cut))
        .collect())
}

pub fn classify<T: Real>(data: &Dataset<T>, coef: &Coefficients<T>, threshold: T) -> Result<Vec<u8>> {
    classify_design(data.design(), coef, threshold)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real", serialize = "T: Real"))]
pub struct CvReport<T> {
    /// 1 where the held-out subject was misclassified, in subject order.
    pub per_subject_errors: Vec<u8>,
    pub error_rate: T,
    pub discriminant_power: T,
    pub n: usize,
    /// Folds whose fit did not converge or whose training set held one class.
    pub non_converged_folds: usize,
}

impl<T: Real> CvReport<T> {
    pub fn from_errors(per_subject_errors: Vec<u8>, non_converged_folds: usize) -> Result<Self> {
        let n = per_subject_errors.len();
        if n == 0 {
            return Err(Error::Empty("cross-validation errors"));
        }
        if per_subject_errors.iter().any(|&e| e > 1) {
            return Err(Error::Domain("per-subject errors must be 0 or 1".into()));
        }
        let wrong = per_subject_errors.iter().filter(|&&e| e == 1).count();
        let error_rate = T::from_count(wrong) / T::from_count(n);
        Ok(Self {
            per_subject_errors,
            error_rate,
            discriminant_power: T::one() - error_rate,
            n,
            non_converged_folds,
        })
    }

    pub fn misclassified(&self) -> usize {
        self.per_subject_errors.iter().filter(|&&e| e == 1).count()
    }
}

struct Fold {
    error: u8,
    converged: bool,
}

fn run_fold<T: Real>(data: &Dataset<T>, held_out: usize, config: &FitConfig<T>, cut: T) -> Result<Fold> {
    let train = data.without_row(held_out)?;
    let truth = u8::from(data.labels()[held_out] == T::one());
    if !train.has_both_classes() {
        // one class only: predict it
        let majority = u8::from(train.count_positive() > 0);
        return Ok(Fold {
            error: u8::from(majority != truth),
            converged: false,
        });
    }
    let fit = fit_irls(&train, config)?;
    let score = dot(data.design().row(held_out), fit.coef.beta());
    let predicted = u8::from(score > cut);
    Ok(Fold {
        error: u8::from(predicted != truth),
        converged: fit.status == FitStatus::Converged,
    })
}

/// Leave-one-out cross-validated error rate of the logistic discriminant.
///
/// Folds run in parallel; the report is assembled in subject order. A fold
/// whose fit stops without converging still classifies with its final
/// coefficients.
pub fn loocv<T: Real>(data: &Dataset<T>, config: &FitConfig<T>, threshold: T) -> Result<CvReport<T>> {
    config.validate()?;
    if data.n() < 2 {
        return Err(Error::Domain(format!(
            "leave-one-out needs at least 2 subjects, got {}",
            data.n()
        )));
    }
    if !data.has_both_classes() {
        return Err(Error::Domain("leave-one-out needs both classes present".into()));
    }
    let cut = logit(threshold)
        .map_err(|_| Error::Domain(format!("threshold must lie in (0, 1), got {threshold}")))?;
    let folds = (0..data.n())
        .into_par_iter()
        .map(|i| run_fold(data, i, config, cut))
        .collect::<Result<Vec<_>>>()?;
    let non_converged = folds.iter().filter(|f| !f.converged).count();
    CvReport::from_errors(folds.into_iter().map(|f| f.error).collect(), non_converged)
}

/// Press's Q significance of a cross-validated error rate.
pub fn evaluate_with_press_q<T: Real>(report: &CvReport<T>) -> Result<PressQResult<T>> {
    press_q(report.n, report.error_rate)
}
