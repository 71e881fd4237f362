use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::svd::{svd, SvdFactors};
use super::DEFAULT_MAX_SWEEPS;
use crate::error::{Error, Result};

/// Default relative rank tolerance for a `rows × cols` matrix.
pub fn default_rel_tol(rows: usize, cols: usize) -> f64 {
    1e-10 * rows.max(cols).max(1) as f64
}

/// Number of singular values strictly above `rel_tol · σ_max`.
///
/// `singulars` must be sorted in descending order.
pub fn rank_from_singulars(singulars: &[f64], rel_tol: f64) -> usize {
    let smax = match singulars.first() {
        Some(&s) if s > 0.0 => s,
        _ => return 0,
    };
    singulars.iter().take_while(|&&s| s > rel_tol * smax).count()
}

fn check_tol(rel_tol: f64) -> Result<()> {
    if rel_tol > 0.0 && rel_tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "relative tolerance must be positive, got {rel_tol}"
        )))
    }
}

/// A pseudoinverse together with the factorization it came from.
#[derive(Debug, Clone)]
pub struct Pinv {
    pub inverse: ComplexMatrix,
    pub rank: usize,
    pub factors: SvdFactors,
}

/// Pseudoinverse from a precomputed SVD of an `rows × cols` matrix.
pub fn pinv_from_factors(f: &SvdFactors, rows: usize, cols: usize, rel_tol: f64) -> ComplexMatrix {
    let rank = rank_from_singulars(&f.singulars, rel_tol);
    let mut out = ComplexMatrix::zeros(cols, rows);
    for l in 0..rank {
        let inv = 1.0 / f.singulars[l];
        for i in 0..cols {
            let vi = f.v[(i, l)] * inv;
            if vi.re == 0.0 && vi.im == 0.0 {
                continue;
            }
            for j in 0..rows {
                out[(i, j)] += vi * f.u[(j, l)].conj();
            }
        }
    }
    out
}

/// Moore–Penrose pseudoinverse with rank and factors.
pub fn pinv_detailed(m: &ComplexMatrix, rel_tol: f64) -> Result<Pinv> {
    check_tol(rel_tol)?;
    if m.is_empty() {
        return Ok(Pinv {
            inverse: ComplexMatrix::zeros(m.cols(), m.rows()),
            rank: 0,
            factors: SvdFactors {
                u: ComplexMatrix::zeros(m.rows(), 0),
                singulars: Vec::new(),
                v: ComplexMatrix::zeros(m.cols(), 0),
            },
        });
    }
    let factors = svd(m, DEFAULT_MAX_SWEEPS)?;
    let rank = rank_from_singulars(&factors.singulars, rel_tol);
    let inverse = pinv_from_factors(&factors, m.rows(), m.cols(), rel_tol);
    Ok(Pinv {
        inverse,
        rank,
        factors,
    })
}

/// `M† = V · diag(1/σᵢ) · U*` over the retained singular values.
pub fn pinv_svd(m: &ComplexMatrix, rel_tol: f64) -> Result<ComplexMatrix> {
    pinv_detailed(m, rel_tol).map(|p| p.inverse)
}

/// Minimum-norm least-squares solution `M† · rhs`.
pub fn min_norm_lss(m: &ComplexMatrix, rhs: &ComplexMatrix, rel_tol: f64) -> Result<ComplexMatrix> {
    if m.rows() != rhs.rows() {
        return Err(Error::DimensionMismatch {
            op: "min_norm_lss",
            left: m.dims(),
            right: rhs.dims(),
        });
    }
    pinv_svd(m, rel_tol)?.mat_mul(rhs)
}

/// Orthonormal basis (as columns) of the numerical null space of `m`.
pub fn null_space_basis(m: &ComplexMatrix, rel_tol: f64) -> Result<ComplexMatrix> {
    check_tol(rel_tol)?;
    let cols = m.cols();
    if cols == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    // pad wide inputs with zero rows so V comes back square
    let padded;
    let work = if m.rows() < cols {
        padded = m.vstack(&ComplexMatrix::zeros(cols - m.rows(), cols))?;
        &padded
    } else {
        m
    };
    let f = svd(work, DEFAULT_MAX_SWEEPS)?;
    let rank = rank_from_singulars(&f.singulars, rel_tol);
    Ok(f.v.columns(rank, cols))
}

/// Solves `H X = B` for Hermitian positive definite `H` by Cholesky.
pub fn cholesky_solve(h: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = h.rows();
    if !h.is_square() || b.rows() != n {
        return Err(Error::DimensionMismatch {
            op: "cholesky_solve",
            left: h.dims(),
            right: b.dims(),
        });
    }
    // lower factor L with H = L L*
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = h[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::NotPositive { eigenvalue: d });
        }
        let d = d.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    let mut x = b.clone();
    for c in 0..b.cols() {
        for i in 0..n {
            let mut s = x[(i, c)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = x[(i, c)];
            for k in i + 1..n {
                s -= l[(k, i)].conj() * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
    }
    Ok(x)
}

/// The four Penrose residuals `‖MXM − M‖, ‖XMX − X‖, ‖(MX)* − MX‖,
/// ‖(XM)* − XM‖` in the spectral norm.
pub fn penrose_residuals(m: &ComplexMatrix, x: &ComplexMatrix) -> Result<[f64; 4]> {
    let mx = m.mat_mul(x)?;
    let xm = x.mat_mul(m)?;
    Ok([
        mx.mat_mul(m)?.sub(m)?.norm2(),
        xm.mat_mul(x)?.sub(x)?.norm2(),
        mx.adjoint().sub(&mx)?.norm2(),
        xm.adjoint().sub(&xm)?.norm2(),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_counts() {
        assert_eq!(rank_from_singulars(&[3.0, 1.0, 1e-15], 1e-10), 2);
        assert_eq!(rank_from_singulars(&[0.0, 0.0], 1e-10), 0);
        assert_eq!(rank_from_singulars(&[], 1e-10), 0);
    }

    #[test]
    fn pinv_of_identity_and_diagonal() {
        let i = ComplexMatrix::identity(3);
        assert!(pinv_svd(&i, 1e-10).unwrap().sub(&i).unwrap().max_abs() < 1e-15);
        let p = pinv_svd(&ComplexMatrix::from_real_diag(&[2.0, 0.0]), 1e-10).unwrap();
        assert_eq!(p, ComplexMatrix::from_real_diag(&[0.5, 0.0]));
    }

    #[test]
    fn pinv_of_zero_is_zero_transpose() {
        let p = pinv_svd(&ComplexMatrix::zeros(2, 3), 1e-10).unwrap();
        assert_eq!(p, ComplexMatrix::zeros(3, 2));
    }

    #[test]
    fn non_positive_tolerance_rejected() {
        let i = ComplexMatrix::identity(2);
        assert!(pinv_svd(&i, 0.0).is_err());
        assert!(null_space_basis(&i, -1.0).is_err());
    }

    #[test]
    fn lss_identity_and_zero() {
        let b = ComplexMatrix::from_real_rows(&[&[1.0], &[-2.0]]);
        let x = min_norm_lss(&ComplexMatrix::identity(2), &b, 1e-10).unwrap();
        assert!(x.sub(&b).unwrap().max_abs() < 1e-15);
        let z = min_norm_lss(&ComplexMatrix::zeros(2, 2), &b, 1e-10).unwrap();
        assert_eq!(z, ComplexMatrix::zeros(2, 1));
        assert!(min_norm_lss(&ComplexMatrix::identity(3), &b, 1e-10).is_err());
    }

    #[test]
    fn null_space_of_identity_is_empty() {
        let n = null_space_basis(&ComplexMatrix::identity(3), 1e-10).unwrap();
        assert_eq!(n.dims(), (3, 0));
    }

    #[test]
    fn null_space_of_coordinate_projection() {
        let n = null_space_basis(&ComplexMatrix::from_real_diag(&[1.0, 0.0]), 1e-10).unwrap();
        assert_eq!(n.cols(), 1);
        assert!(n[(0, 0)].norm() < 1e-15);
        assert!((n[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0, 0.0]]);
        let n = null_space_basis(&m, 1e-10).unwrap();
        assert_eq!(n.cols(), 2);
        assert!(m.mat_mul(&n).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let h = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert!(matches!(
            cholesky_solve(&h, &ComplexMatrix::identity(2)),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn cholesky_solves_spd() {
        let h = ComplexMatrix::from_real_rows(&[&[4.0, 1.0], &[1.0, 3.0]]);
        let b = ComplexMatrix::from_real_rows(&[&[1.0], &[2.0]]);
        let x = cholesky_solve(&h, &b).unwrap();
        assert!(h.mat_mul(&x).unwrap().sub(&b).unwrap().max_abs() < 1e-14);
    }
}
