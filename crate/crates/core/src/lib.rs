//! Binary logistic regression.
//!
//! Maximum-likelihood fitting by Newton/IRLS, deviance-based nested model
//! tests, logistic discrimination scored by leave-one-out cross-validation,
//! and Press's Q significance of a classification rate.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`.

pub mod classify;
pub mod error;
pub mod fit;
pub mod inference;
pub mod model;
pub mod num;
pub mod numerics;

pub use classify::{classify, classify_design, evaluate_with_press_q, loocv, CvReport};
pub use error::{Error, NestedModel, Result};
pub use fit::{covariance, fit_irls, gradient, neg_hessian, FitConfig, FitResult, FitStatus};
pub use inference::{
    deviance, lrt_nested, power_curve, press_q, NestedTestResult, PowerCurve, PowerPoint,
    PressQResult,
};
pub use model::{log_likelihood, logistic, logit, predict_proba, softplus, Coefficients, Dataset};
pub use num::Real;
pub use numerics::{chi2_sf, solve_psd, Matrix, Vector};

pub type Matrix64 = Matrix<f64>;
pub type Vector64 = Vector<f64>;
pub type Dataset64 = Dataset<f64>;
pub type Coefficients64 = Coefficients<f64>;
pub type FitConfig64 = FitConfig<f64>;
pub type FitResult64 = FitResult<f64>;
pub type NestedTestResult64 = NestedTestResult<f64>;
pub type PressQResult64 = PressQResult<f64>;
pub type CvReport64 = CvReport<f64>;
pub type PowerCurve64 = PowerCurve<f64>;

pub type Dataset32 = Dataset<f32>;
pub type FitConfig32 = FitConfig<f32>;
pub type FitResult32 = FitResult<f32>;
