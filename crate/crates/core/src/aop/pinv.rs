//! Moore–Penrose inverses of operators and the identities relating them.

use std::collections::BTreeMap;
use std::time::Instant;

use super::AMatrix;
use crate::densela::{self, ComplexMatrix};
use crate::error::{Error, Result};

/// Largest tolerated difference between the flattened pseudoinverse and the
/// reassembled operator, relative to `1 + ‖T†‖`.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Diagnostics gathered while inverting one operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PinvReport {
    pub tol_used: f64,
    pub per_summand_ranks: Vec<usize>,
    /// Whether every summand keeps its rank when `tol_used` is scaled by 10
    /// in either direction (the numerical reading of "closed range").
    pub rank_stable: bool,
    /// `‖tst − t‖, ‖sts − s‖, ‖(ts)* − ts‖, ‖(st)* − st‖`.
    pub penrose_residuals: [f64; 4],
    /// Further identity checks, keyed by name. Filled by callers.
    pub identity_residuals: BTreeMap<String, f64>,
    pub runtime_ms: f64,
}

impl AMatrix {
    /// The Moore–Penrose inverse, computed per summand from the SVD and
    /// reassembled into an operator.
    pub fn mp_inverse(&self, rel_tol: f64) -> Result<(AMatrix, PinvReport)> {
        let start = Instant::now();
        let mut ranks = Vec::with_capacity(self.shape.num_blocks());
        let mut stable = true;
        let mut flat_inverses = Vec::with_capacity(self.shape.num_blocks());
        for m in self.summands() {
            let p = densela::pinv_detailed(&m, rel_tol)?;
            let s = &p.factors.singulars;
            stable &= densela::rank_from_singulars(s, rel_tol * 10.0) == p.rank
                && densela::rank_from_singulars(s, rel_tol / 10.0) == p.rank;
            ranks.push(p.rank);
            flat_inverses.push(p.inverse);
        }
        let inverse = AMatrix::from_summands(&self.shape, &flat_inverses)?;
        // reflattening must give back exactly what the kernel produced
        for (i, flat) in flat_inverses.iter().enumerate() {
            let residual = inverse.flatten_summand(i)?.sub(flat)?.max_abs();
            if residual > STRUCTURE_TOL * (1.0 + flat.max_abs()) {
                return Err(Error::StructureLoss { residual });
            }
        }
        let penrose_residuals = penrose_residuals(self, &inverse)?;
        Ok((
            inverse,
            PinvReport {
                tol_used: rel_tol,
                per_summand_ranks: ranks,
                rank_stable: stable,
                penrose_residuals,
                identity_residuals: BTreeMap::new(),
                runtime_ms: start.elapsed().as_secs_f64() * 1e3,
            },
        ))
    }

    /// Shorthand for the inverse alone.
    pub fn pinv(&self, rel_tol: f64) -> Result<AMatrix> {
        self.mp_inverse(rel_tol).map(|(s, _)| s)
    }
}

/// Penrose residuals evaluated in operator arithmetic.
fn penrose_residuals(t: &AMatrix, s: &AMatrix) -> Result<[f64; 4]> {
    let ts = t.compose(s)?;
    let st = s.compose(t)?;
    Ok([
        ts.compose(t)?.sub(t)?.norm(),
        st.compose(s)?.sub(s)?.norm(),
        ts.adjoint().sub(&ts)?.norm(),
        st.adjoint().sub(&st)?.norm(),
    ])
}

/// `(T*T)† · T*`.
pub fn pinv_gram_left(t: &AMatrix, rel_tol: f64) -> Result<AMatrix> {
    let ts = t.adjoint();
    ts.compose(t)?.pinv(rel_tol)?.compose(&ts)
}

/// `T* · (TT*)†`.
pub fn pinv_gram_right(t: &AMatrix, rel_tol: f64) -> Result<AMatrix> {
    let ts = t.adjoint();
    ts.compose(&t.compose(&ts)?.pinv(rel_tol)?)
}

/// `‖(T*T)† − T† · (T*)†‖`.
pub fn gram_pinv_product_check(t: &AMatrix, rel_tol: f64) -> Result<f64> {
    let ts = t.adjoint();
    let gram_inv = ts.compose(t)?.pinv(rel_tol)?;
    let product = t.pinv(rel_tol)?.compose(&ts.pinv(rel_tol)?)?;
    Ok(gram_inv.sub(&product)?.norm())
}

/// `T · T†`, the projection onto the range of `T`.
pub fn range_projection(t: &AMatrix, rel_tol: f64) -> Result<AMatrix> {
    t.compose(&t.pinv(rel_tol)?)
}

/// `T† · T`, the projection onto the range of `T*`.
pub fn source_projection(t: &AMatrix, rel_tol: f64) -> Result<AMatrix> {
    t.pinv(rel_tol)?.compose(t)
}

/// Residuals of the projection identities for `TT†` and `T†T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionCheck {
    pub range_hermitian: f64,
    pub range_idempotent: f64,
    /// `‖P·T − T‖`
    pub range_fixes: f64,
    pub source_hermitian: f64,
    pub source_idempotent: f64,
    /// `‖T·Q − T‖`
    pub source_fixes: f64,
}

impl ProjectionCheck {
    pub fn max(&self) -> f64 {
        [
            self.range_hermitian,
            self.range_idempotent,
            self.range_fixes,
            self.source_hermitian,
            self.source_idempotent,
            self.source_fixes,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn projection_check(t: &AMatrix, rel_tol: f64) -> Result<ProjectionCheck> {
    let s = t.pinv(rel_tol)?;
    let p = t.compose(&s)?;
    let q = s.compose(t)?;
    Ok(ProjectionCheck {
        range_hermitian: p.adjoint().sub(&p)?.norm(),
        range_idempotent: p.compose(&p)?.sub(&p)?.norm(),
        range_fixes: p.compose(t)?.sub(t)?.norm(),
        source_hermitian: q.adjoint().sub(&q)?.norm(),
        source_idempotent: q.compose(&q)?.sub(&q)?.norm(),
        source_fixes: t.compose(&q)?.sub(t)?.norm(),
    })
}

/// Orthogonal projection onto the kernel, built from null-space bases of the
/// flattened summands.
fn kernel_projection(t: &AMatrix, rel_tol: f64) -> Result<AMatrix> {
    let parts = t
        .summands()
        .iter()
        .map(|m| {
            let b = densela::null_space_basis(m, rel_tol)?;
            if b.cols() == 0 {
                Ok(ComplexMatrix::zeros(m.cols(), m.cols()))
            } else {
                b.mat_mul(&b.adjoint())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    AMatrix::from_summands(t.shape(), &parts)
}

/// `(‖P_Ker(T) + T†T − I‖, ‖P_Ker(T*) + TT† − I‖)`.
pub fn decomposition_check(t: &AMatrix, rel_tol: f64) -> Result<(f64, f64)> {
    let s = t.pinv(rel_tol)?;
    let id_in = AMatrix::identity(t.shape(), t.in_len());
    let id_out = AMatrix::identity(t.shape(), t.out_len());
    let res1 = kernel_projection(t, rel_tol)?
        .add(&s.compose(t)?)?
        .sub(&id_in)?
        .norm();
    let res2 = kernel_projection(&t.adjoint(), rel_tol)?
        .add(&t.compose(&s)?)?
        .sub(&id_out)?
        .norm();
    Ok((res1, res2))
}

/// `‖P_Ran(T) − P_Ran(TT*)‖`.
pub fn gram_range_check(t: &AMatrix, rel_tol: f64) -> Result<f64> {
    let gram = t.compose(&t.adjoint())?;
    Ok(range_projection(t, rel_tol)?
        .sub(&range_projection(&gram, rel_tol)?)?
        .norm())
}

/// `(‖T − (T†T)·T*‖, ‖T − T*‖)` for square `T`. The first vanishes exactly
/// when the second does.
pub fn selfadjoint_criterion(t: &AMatrix, rel_tol: f64) -> Result<(f64, f64)> {
    if !t.is_square() {
        return Err(Error::NotSquare {
            op: "selfadjoint_criterion",
            rows: t.out_len(),
            cols: t.in_len(),
        });
    }
    let ts = t.adjoint();
    let lhs = t.sub(&source_projection(t, rel_tol)?.compose(&ts)?)?.norm();
    let sa = t.sub(&ts)?.norm();
    Ok((lhs, sa))
}

/// `Q = (1 + T*T)^{-1/2}` and `F = T·Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedTransform {
    pub q: AMatrix,
    pub f: AMatrix,
}

pub fn bounded_transform(t: &AMatrix) -> Result<BoundedTransform> {
    // Q = 1 − V·diag(1 − (1 + σ²)^{-1/2})·V*, exact on the kernel of T
    let q = t.map_summands(|_, m| {
        let f = densela::svd(m, densela::DEFAULT_MAX_SWEEPS)?;
        let d: Vec<f64> = f.singulars.iter().map(|s| 1.0 - 1.0 / (1.0 + s * s).sqrt()).collect();
        let vd = ComplexMatrix::from_fn(f.v.rows(), d.len(), |i, j| f.v[(i, j)] * d[j]);
        ComplexMatrix::identity(m.cols()).sub(&vd.mat_mul(&f.v.adjoint())?)
    })?;
    let f = t.compose(&q)?;
    Ok(BoundedTransform { q, f })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedTransformCheck {
    pub q_eig_min: f64,
    pub q_eig_max: f64,
    pub f_norm: f64,
    /// `‖Q − (1 − F*F)^{1/2}‖`
    pub sqrt_residual: f64,
}

pub fn bounded_transform_check(t: &AMatrix) -> Result<BoundedTransformCheck> {
    let BoundedTransform { q, f } = bounded_transform(t)?;
    let mut q_eig_min = f64::INFINITY;
    let mut q_eig_max = f64::NEG_INFINITY;
    for m in q.summands() {
        let e = densela::herm_eig(&m)?;
        q_eig_min = q_eig_min.min(e.eigenvalues[0]);
        q_eig_max = q_eig_max.max(*e.eigenvalues.last().expect("nonempty"));
    }
    let defect = AMatrix::identity(t.shape(), t.in_len()).sub(&f.adjoint().compose(&f)?)?;
    let root = defect.map_summands(|_, m| densela::psd_sqrt(m))?;
    Ok(BoundedTransformCheck {
        q_eig_min,
        q_eig_max,
        f_norm: f.norm(),
        sqrt_residual: q.sub(&root)?.norm(),
    })
}
