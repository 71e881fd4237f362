//! The regularized route `T† = lim_{ω→0⁺} T*(ω·1 + TT*)⁻¹`.
//!
//! Each iterate is computed by a Cholesky solve of `(ω·1 + TT*) X = T` per
//! summand, so this route shares no factorization with the SVD route.

use num_complex::Complex64;

use super::AMatrix;
use crate::densela::{self, ComplexMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TikhonovOptions {
    pub omega0: f64,
    pub ratio: f64,
    pub stop_tol: f64,
    pub max_steps: usize,
}

impl Default for TikhonovOptions {
    fn default() -> Self {
        TikhonovOptions {
            omega0: 1.0,
            ratio: 0.1,
            stop_tol: 1e-10,
            max_steps: 20,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TikhonovLimit {
    /// The last iterate.
    pub inverse: AMatrix,
    /// `‖S_final − T†‖` against the SVD route.
    pub gap: f64,
    /// `ωₙ` for every computed iterate, starting at `ω₀`.
    pub omegas: Vec<f64>,
    /// `‖Sₙ − Sₙ₋₁‖` for `n ≥ 1`.
    pub increments: Vec<f64>,
}

/// `T*(ω·1 + TT*)⁻¹` for a single `ω > 0`.
pub fn tikhonov_iterate(t: &AMatrix, omega: f64) -> Result<AMatrix> {
    if !(omega > 0.0) {
        return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    let shift = |g: ComplexMatrix| g.add(&ComplexMatrix::identity(g.rows()).scale(Complex64::new(omega, 0.0)));
    t.map_summands(|_, m| {
        // T*(ω + TT*)⁻¹ = (ω + T*T)⁻¹T*; solving on the smaller side keeps
        // the shifted Gram matrix well conditioned when T has full rank
        if m.rows() <= m.cols() {
            let shifted = shift(m.mat_mul(&m.adjoint())?)?;
            // (ω + TT*) is Hermitian, so T*(ω + TT*)⁻¹ = ((ω + TT*)⁻¹ T)*
            Ok(densela::cholesky_solve(&shifted, m)?.adjoint())
        } else {
            let ms = m.adjoint();
            densela::cholesky_solve(&shift(ms.mat_mul(m)?)?, &ms)
        }
    })
}

/// Iterates `ωₙ = ω₀·ratioⁿ` until successive iterates differ by less than
/// `stop_tol`.
pub fn mp_inverse_tikhonov(t: &AMatrix, opts: &TikhonovOptions, rel_tol: f64) -> Result<TikhonovLimit> {
    if !(opts.omega0 > 0.0) || !(opts.ratio > 0.0 && opts.ratio < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need omega0 > 0 and 0 < ratio < 1, got {} and {}",
            opts.omega0, opts.ratio
        )));
    }
    let mut omega = opts.omega0;
    let mut current = tikhonov_iterate(t, omega)?;
    let mut omegas = vec![omega];
    let mut increments = Vec::new();
    for _ in 0..opts.max_steps {
        omega *= opts.ratio;
        let next = match tikhonov_iterate(t, omega) {
            Ok(s) => s,
            // the shifted Gram operator stopped being numerically definite
            Err(Error::NotPositive { .. }) => {
                return Err(Error::NoConvergence {
                    steps: increments.len(),
                    increment: increments.last().copied().unwrap_or(f64::INFINITY),
                })
            }
            Err(e) => return Err(e),
        };
        let inc = next.sub(&current)?.norm();
        omegas.push(omega);
        increments.push(inc);
        current = next;
        if inc < opts.stop_tol {
            let gap = current.sub(&t.pinv(rel_tol)?)?.norm();
            return Ok(TikhonovLimit {
                inverse: current,
                gap,
                omegas,
                increments,
            });
        }
    }
    Err(Error::NoConvergence {
        steps: opts.max_steps,
        increment: increments.last().copied().unwrap_or(f64::INFINITY),
    })
}
