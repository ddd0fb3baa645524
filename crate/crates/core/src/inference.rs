//! Deviance, nested-model likelihood-ratio tests and Press's Q.

use serde::{Deserialize, Serialize};

use crate::error::{Error, NestedModel, Result};
use crate::fit::{fit_irls, FitConfig, FitResult};
use crate::model::{log_likelihood, Coefficients, Dataset};
use crate::num::Real;
use crate::numerics::chi2_sf;

pub const DEFAULT_GRID_POINTS: usize = 1000;

/// `-2 log L`.
pub fn deviance<T: Real>(data: &Dataset<T>, coef: &Coefficients<T>) -> Result<T> {
    let ll = log_likelihood(data, coef)?;
    Ok(-(ll + ll))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real", serialize = "T: Real"))]
pub struct NestedTestResult<T> {
    pub deviance_reduced: T,
    pub deviance_full: T,
    /// `deviance_reduced - deviance_full`, unclamped.
    pub statistic: T,
    pub df: u32,
    /// Chi-square tail of the statistic clamped at zero.
    pub p_value: T,
}

impl<T: Real> NestedTestResult<T> {
    pub fn from_deviances(deviance_reduced: T, deviance_full: T, df: u32) -> Result<Self> {
        let statistic = deviance_reduced - deviance_full;
        let p_value = chi2_sf(statistic.max(T::zero()), df)?;
        Ok(Self {
            deviance_reduced,
            deviance_full,
            statistic,
            df,
            p_value,
        })
    }
}

/// Normalizes a reduced-model column set: sorted, intercept present, strict subset.
pub fn reduced_columns(n_coef: usize, reduced_cols: &[usize]) -> Result<Vec<usize>> {
    let mut cols = reduced_cols.to_vec();
    cols.sort_unstable();
    if cols.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidSelection("reduced columns contain duplicates".into()));
    }
    if cols.first() != Some(&0) {
        return Err(Error::InvalidSelection(
            "reduced model must include the intercept".into(),
        ));
    }
    if let Some(&bad) = cols.iter().find(|&&c| c >= n_coef) {
        return Err(Error::InvalidSelection(format!(
            "column {bad} out of range for {n_coef} columns"
        )));
    }
    if cols.len() == n_coef {
        return Err(Error::InvalidSelection(
            "reduced model must drop at least one column".into(),
        ));
    }
    Ok(cols)
}

fn require_converged<T: Real>(fit: FitResult<T>, model: NestedModel) -> Result<FitResult<T>> {
    if fit.converged() {
        Ok(fit)
    } else {
        Err(Error::NonConvergence {
            model,
            status: fit.status,
        })
    }
}

/// Likelihood-ratio test of the model restricted to `reduced_cols` against
/// the full design. Both models are fitted independently (in parallel).
pub fn lrt_nested<T: Real>(
    data: &Dataset<T>,
    reduced_cols: &[usize],
    config: &FitConfig<T>,
) -> Result<NestedTestResult<T>> {
    config.validate()?;
    let cols = reduced_columns(data.n_coef(), reduced_cols)?;
    let reduced = data.select_columns(&cols)?;
    let (full_fit, reduced_fit) = rayon::join(|| fit_irls(data, config), || fit_irls(&reduced, config));
    let full_fit = require_converged(full_fit?, NestedModel::Full)?;
    let reduced_fit = require_converged(reduced_fit?, NestedModel::Reduced)?;
    let df = (data.n_coef() - cols.len()) as u32;
    NestedTestResult::from_deviances(reduced_fit.deviance, full_fit.deviance, df)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real", serialize = "T: Real"))]
pub struct PressQResult<T> {
    pub n: usize,
    pub error_rate: T,
    pub q_statistic: T,
    pub p_value: T,
}

/// Press's Q `n (2 rate - 1)^2` against chi-square(1). The statistic is
/// symmetric under `rate -> 1 - rate`, so an error rate and a discriminant
/// power give the same answer.
pub fn press_q<T: Real>(n: usize, rate: T) -> Result<PressQResult<T>> {
    if n == 0 {
        return Err(Error::Domain("Press's Q needs n >= 1".into()));
    }
    if !(rate >= T::zero() && rate <= T::one()) {
        return Err(Error::Domain(format!("rate must lie in [0, 1], got {rate}")));
    }
    let centered = rate + rate - T::one();
    let q = T::from_count(n) * centered * centered;
    Ok(PressQResult {
        n,
        error_rate: rate,
        q_statistic: q,
        p_value: chi2_sf(q, 1)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real", serialize = "T: Real"))]
pub struct PowerPoint<T> {
    pub power: T,
    pub p_value: T,
}

/// Press's Q p-value tabulated against discriminant power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real", serialize = "T: Real"))]
pub struct PowerCurve<T> {
    pub n: usize,
    pub points: Vec<PowerPoint<T>>,
}

impl<T: Real> PowerCurve<T> {
    /// Point whose power is closest to `power`.
    pub fn nearest(&self, power: T) -> Option<&PowerPoint<T>> {
        self.points.iter().min_by(|a, b| {
            (a.power - power)
                .abs()
                .partial_cmp(&(b.power - power).abs())
                .expect("finite powers")
        })
    }
}

/// Powers `i / grid_points` for `i = 1..=grid_points` with their Press's Q p-values.
pub fn power_curve<T: Real>(n: usize, grid_points: usize) -> Result<PowerCurve<T>> {
    if grid_points < 2 {
        return Err(Error::Domain(format!("grid_points must be >= 2, got {grid_points}")));
    }
    let denom = T::from_count(grid_points);
    let points = (1..=grid_points)
        .map(|i| {
            let power = T::from_count(i) / denom;
            press_q(n, power).map(|r| PowerPoint {
                power,
                p_value: r.p_value,
            })
        })
        .collect::<Result<_>>()?;
    Ok(PowerCurve { n, points })
}
