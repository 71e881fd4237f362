//! Dense complex linear algebra: the decompositions every upper layer needs.
//!
//! All routines are pure functions on immutable inputs.

mod eig;
mod matrix;
mod solve;
mod svd;

pub use eig::{herm_eig, herm_eig_with_sweeps, psd_inv_sqrt, psd_sqrt, HermitianEigen, HERMITIAN_TOL, PSD_TOL};
pub use matrix::{adjoint, mat_mul, ComplexMatrix};
pub use solve::{
    cholesky_solve, default_rel_tol, min_norm_lss, null_space_basis, penrose_residuals, pinv_detailed,
    pinv_from_factors, pinv_svd, rank_from_singulars, Pinv,
};
pub use svd::{svd, SvdFactors};

/// Sweep budget used when callers do not pass one.
pub const DEFAULT_MAX_SWEEPS: usize = 100;
