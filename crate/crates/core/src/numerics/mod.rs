//! Dense linear algebra for small symmetric systems and chi-square tail probabilities.

mod chi2;
mod linalg;

pub use chi2::{chi2_cdf, chi2_sf, gamma_pq, ln_gamma};
pub use linalg::{
    dot, norm2, pinv_symmetric, solve_psd, symmetric_eigen, Matrix, SymmetricEigen, Vector,
};
