//! Logistic link, the design/label container and the Bernoulli log-likelihood.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;
use crate::numerics::{dot, Matrix, Vector};

pub const INTERCEPT: &str = "intercept";

/// Overflow-free `1 / (1 + exp(-t))` for finite or infinite `t`.
#[inline]
pub(crate) fn sigmoid<T: Real>(t: T) -> T {
    if t >= T::zero() {
        T::one() / (T::one() + (-t).exp())
    } else {
        let e = t.exp();
        e / (T::one() + e)
    }
}

/// The logistic function `1 / (1 + exp(-t))`.
pub fn logistic<T: Real>(t: T) -> Result<T> {
    if !t.is_finite() {
        return Err(Error::NonFinite("logistic argument"));
    }
    Ok(sigmoid(t))
}

/// Log-odds `log(p / (1 - p))`, the inverse of [`logistic`] on `(0, 1)`.
pub fn logit<T: Real>(p: T) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::Domain(format!("logit requires 0 < p < 1, got {p}")));
    }
    Ok((p / (T::one() - p)).ln())
}

/// `log(1 + exp(t))` without overflow.
#[inline]
pub fn softplus<T: Real>(t: T) -> T {
    if t > T::zero() {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Design matrix (intercept column first) paired with binary labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real", serialize = "T: Real"))]
pub struct Dataset<T> {
    design: Matrix<T>,
    labels: Vector<T>,
    feature_names: Vec<String>,
}

fn default_names(n_coef: usize) -> Vec<String> {
    std::iter::once(INTERCEPT.to_string())
        .chain((1..n_coef).map(|j| format!("x{j}")))
        .collect()
}

impl<T: Real> Dataset<T> {
    /// Wraps a design whose first column is already the intercept.
    pub fn new(design: Matrix<T>, labels: Vec<T>) -> Result<Self> {
        if labels.len() != design.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} design rows",
                labels.len(),
                design.rows()
            )));
        }
        for i in 0..design.rows() {
            let v = design.get(i, 0);
            if v != T::one() {
                return Err(Error::MissingIntercept {
                    row: i,
                    value: v.as_f64(),
                });
            }
        }
        for (i, &y) in labels.iter().enumerate() {
            if y != T::zero() && y != T::one() {
                return Err(Error::InvalidLabel {
                    row: i,
                    value: y.as_f64(),
                });
            }
        }
        let feature_names = default_names(design.cols());
        Ok(Self {
            design,
            labels: Vector::new(labels)?,
            feature_names,
        })
    }

    /// Builds the design by prepending a column of ones to `features`
    /// (one slice per subject, possibly empty for an intercept-only model).
    pub fn from_features<R: AsRef<[T]>>(features: &[R], labels: Vec<T>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::Empty("dataset"));
        }
        let rows: Vec<Vec<T>> = features
            .iter()
            .map(|r| std::iter::once(T::one()).chain(r.as_ref().iter().copied()).collect())
            .collect();
        Self::new(Matrix::from_rows(&rows)?, labels)
    }

    /// Replaces the column names; `names` must cover every column, intercept included.
    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.design.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{} names for {} columns",
                names.len(),
                self.design.cols()
            )));
        }
        self.feature_names = names;
        Ok(self)
    }

    pub fn design(&self) -> &Matrix<T> {
        &self.design
    }

    pub fn labels(&self) -> &[T] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Number of subjects.
    pub fn n(&self) -> usize {
        self.design.rows()
    }

    /// Number of coefficients, intercept included.
    pub fn n_coef(&self) -> usize {
        self.design.cols()
    }

    pub fn count_positive(&self) -> usize {
        self.labels.iter().filter(|&&y| y == T::one()).count()
    }

    pub fn has_both_classes(&self) -> bool {
        let pos = self.count_positive();
        pos > 0 && pos < self.n()
    }

    /// Restricts the design to `cols`, which must start with the intercept (column 0).
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if cols.first() != Some(&0) {
            return Err(Error::InvalidSelection(
                "column selection must start with the intercept".into(),
            ));
        }
        let mut seen = vec![false; self.n_coef()];
        for &c in cols {
            if c >= self.n_coef() {
                return Err(Error::InvalidSelection(format!(
                    "column {c} out of range for {} columns",
                    self.n_coef()
                )));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidSelection(format!("column {c} listed twice")));
            }
        }
        Ok(Self {
            design: self.design.select_columns(cols)?,
            labels: self.labels.clone(),
            feature_names: cols.iter().map(|&c| self.feature_names[c].clone()).collect(),
        })
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        Ok(Self {
            design: self.design.select_rows(rows)?,
            labels: Vector::new(rows.iter().map(|&r| self.labels[r]).collect())?,
            feature_names: self.feature_names.clone(),
        })
    }

    /// Every subject except `row`.
    pub fn without_row(&self, row: usize) -> Result<Self> {
        let keep: Vec<usize> = (0..self.n()).filter(|&i| i != row).collect();
        self.select_rows(&keep)
    }
}

/// Regression coefficients, intercept first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent, bound(deserialize = "T: Real", serialize = "T: Real"))]
pub struct Coefficients<T> {
    beta: Vector<T>,
}

impl<T: Real> Coefficients<T> {
    pub fn new(beta: Vec<T>) -> Result<Self> {
        Ok(Self {
            beta: Vector::new(beta)?,
        })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            beta: Vector::zeros(len),
        }
    }

    pub fn beta(&self) -> &[T] {
        &self.beta
    }

    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn norm(&self) -> T {
        self.beta.norm()
    }

    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(self.beta.iter().map(|&b| b * c).collect())
    }

    pub fn into_vec(self) -> Vec<T> {
        self.beta.into_vec()
    }
}

fn check_dims<T: Real>(design: &Matrix<T>, coef: &Coefficients<T>) -> Result<()> {
    if design.cols() != coef.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for {} design columns",
            coef.len(),
            design.cols()
        )));
    }
    Ok(())
}

/// Linear predictor `x_i^T beta` for every row of `design`.
pub fn scores_for<T: Real>(design: &Matrix<T>, coef: &Coefficients<T>) -> Result<Vec<T>> {
    check_dims(design, coef)?;
    Ok((0..design.rows())
        .map(|i| dot(design.row(i), coef.beta()))
        .collect())
}

pub fn scores<T: Real>(data: &Dataset<T>, coef: &Coefficients<T>) -> Result<Vec<T>> {
    scores_for(data.design(), coef)
}

pub fn predict_proba_for<T: Real>(design: &Matrix<T>, coef: &Coefficients<T>) -> Result<Vector<T>> {
    Vector::new(scores_for(design, coef)?.into_iter().map(sigmoid).collect())
}

/// Fitted probabilities `pi_i = logistic(x_i^T beta)`.
pub fn predict_proba<T: Real>(data: &Dataset<T>, coef: &Coefficients<T>) -> Result<Vector<T>> {
    predict_proba_for(data.design(), coef)
}

/// Bernoulli log-likelihood (negative cross entropy), evaluated as
/// `sum y_i s_i - softplus(s_i)` with `s_i = x_i^T beta`.
pub fn log_likelihood<T: Real>(data: &Dataset<T>, coef: &Coefficients<T>) -> Result<T> {
    Ok(scores(data, coef)?
        .into_iter()
        .zip(data.labels())
        .map(|(s, &y)| y * s - softplus(s))
        .sum())
}
