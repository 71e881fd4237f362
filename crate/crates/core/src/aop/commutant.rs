//! Joint commutant `{S : ST = TS, ST* = T*S}` of a square operator.
//!
//! Per summand the conditions are linear in `S̃`. With column-major
//! vectorization, `vec(AXB) = (Bᵀ ⊗ A) vec(X)`, so
//!
//! ```text
//! vec(S̃T̃ − T̃S̃)   = (T̃ᵀ ⊗ 1 − 1 ⊗ T̃)   vec(S̃)
//! vec(S̃T̃* − T̃*S̃) = (T̃̄ ⊗ 1 − 1 ⊗ T̃*) vec(S̃)
//! ```
//!
//! and the commutant is the null space of the two stacked systems. Every
//! flattened solution is the flattening of an operator, so no solution is
//! discarded on reassembly.

use num_complex::Complex64;

use super::AMatrix;
use crate::cstar::AlgebraShape;
use crate::densela::{self, ComplexMatrix};
use crate::error::{Error, Result};

/// Largest flattened dimension `k·nᵢ` the solver accepts. The stacked
/// system for dimension `N` has `2N² × N²` entries.
pub const COMMUTANT_DIM_LIMIT: usize = 64;

#[derive(Debug, Clone)]
pub struct CommutantBasis {
    pub shape: AlgebraShape,
    pub dim: usize,
    /// Linearly independent commuting operators; the first is the identity.
    pub elements: Vec<AMatrix>,
}

fn commutator_system(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = t.rows();
    let id = ComplexMatrix::identity(n);
    let ts = t.adjoint();
    let first = t.transpose().kron(&id).sub(&id.kron(t))?;
    let second = t.conj().kron(&id).sub(&id.kron(&ts))?;
    first.vstack(&second)
}

/// Orthonormal basis of the per-summand commutant with the normalized
/// identity removed.
fn summand_commutant_without_identity(t: &ComplexMatrix, rel_tol: f64) -> Result<Vec<ComplexMatrix>> {
    let n = t.rows();
    let basis = densela::null_space_basis(&commutator_system(t)?, rel_tol)?;
    let d = basis.cols();
    // e = vec(1)/√n; remove it from every basis vector
    let e = ComplexMatrix::identity(n).vec();
    let scale = 1.0 / (n as f64);
    let mut projected = basis.clone();
    for c in 0..d {
        let coef: Complex64 = e.iter().enumerate().map(|(r, x)| x.conj() * basis[(r, c)]).sum::<Complex64>() * scale;
        for (r, x) in e.iter().enumerate() {
            projected[(r, c)] -= coef * x;
        }
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let f = densela::svd(&projected, densela::DEFAULT_MAX_SWEEPS)?;
    Ok(f.singulars
        .iter()
        .enumerate()
        .take_while(|(_, &s)| s > 0.5)
        .map(|(c, _)| ComplexMatrix::unvec(n, n, &f.u.col(c)))
        .collect())
}

fn embed(t: &AMatrix, summand: usize, block: ComplexMatrix) -> Result<AMatrix> {
    let parts: Vec<ComplexMatrix> = (0..t.shape().num_blocks())
        .map(|i| {
            let n = t.in_len() * t.shape().block_size(i);
            if i == summand {
                block.clone()
            } else {
                ComplexMatrix::zeros(n, n)
            }
        })
        .collect();
    AMatrix::from_summands(t.shape(), &parts)
}

pub fn joint_commutant_basis(t: &AMatrix, rel_tol: f64) -> Result<CommutantBasis> {
    if !t.is_square() {
        return Err(Error::NotSquare {
            op: "joint_commutant_basis",
            rows: t.out_len(),
            cols: t.in_len(),
        });
    }
    let shape = t.shape();
    for &n in shape.blocks() {
        let dim = t.in_len() * n;
        if dim > COMMUTANT_DIM_LIMIT {
            return Err(Error::DimensionLimit {
                dim,
                limit: COMMUTANT_DIM_LIMIT,
            });
        }
    }
    let s = shape.num_blocks();
    let mut elements = vec![AMatrix::identity(shape, t.in_len())];
    for (i, m) in t.summands().into_iter().enumerate() {
        for block in summand_commutant_without_identity(&m, rel_tol)? {
            elements.push(embed(t, i, block)?);
        }
        // the summand units span, together with the global identity, all
        // of the per-summand identities
        if i + 1 < s {
            elements.push(embed(t, i, ComplexMatrix::identity(m.rows()))?);
        }
    }
    Ok(CommutantBasis {
        shape: shape.clone(),
        dim: elements.len(),
        elements,
    })
}

/// `‖S·T† − T†·S‖` for `S` in the joint commutant of `T`.
///
/// Fails with [`Error::NotInCommutant`] when `‖ST − TS‖` or `‖ST* − T*S‖`
/// exceeds `rel_tol · ‖S‖ · ‖T‖`.
pub fn commutation_check(t: &AMatrix, s: &AMatrix, rel_tol: f64) -> Result<f64> {
    if !t.is_square() {
        return Err(Error::NotSquare {
            op: "commutation_check",
            rows: t.out_len(),
            cols: t.in_len(),
        });
    }
    let ts = t.adjoint();
    let r1 = s.compose(t)?.sub(&t.compose(s)?)?.norm();
    let r2 = s.compose(&ts)?.sub(&ts.compose(s)?)?.norm();
    let residual = r1.max(r2);
    if residual > rel_tol * s.norm() * t.norm() {
        return Err(Error::NotInCommutant { residual });
    }
    let dag = t.pinv(rel_tol)?;
    Ok(s.compose(&dag)?.sub(&dag.compose(s)?)?.norm())
}
