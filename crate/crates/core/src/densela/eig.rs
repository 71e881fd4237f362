//! Cyclic Jacobi eigensolver for Hermitian matrices and the matrix functions
//! built on it.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::DEFAULT_MAX_SWEEPS;
use crate::error::{Error, Result};

/// Relative Hermitian defect tolerated on input.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues clamped to zero down to `-PSD_TOL · ‖m‖`.
pub const PSD_TOL: f64 = 1e-10;

/// Eigen-decomposition `m = W · diag(λ) · W*` with λ ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `W · diag(f(λ)) · W*`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let w = &self.eigenvectors;
        let n = w.rows();
        let scaled = ComplexMatrix::from_fn(n, n, |i, j| w[(i, j)] * f(self.eigenvalues[j]));
        scaled.mat_mul(&w.adjoint()).expect("square factors")
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let defect = m.hermitian_defect().ok_or(Error::NotSquare {
        op: "herm_eig",
        rows: m.rows(),
        cols: m.cols(),
    })?;
    if defect > HERMITIAN_TOL * m.frobenius_norm() {
        return Err(Error::NotHermitian { residual: defect });
    }
    Ok(())
}

pub fn herm_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    herm_eig_with_sweeps(m, DEFAULT_MAX_SWEEPS)
}

pub fn herm_eig_with_sweeps(m: &ComplexMatrix, max_sweeps: usize) -> Result<HermitianEigen> {
    if m.is_empty() {
        return Err(Error::Empty { op: "herm_eig" });
    }
    check_hermitian(m)?;
    let n = m.rows();
    // symmetrize so the iteration starts exactly Hermitian
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
    let mut w = ComplexMatrix::identity(n);
    let total = a.frobenius_norm();

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += a[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };

    let mut converged = false;
    for _ in 0..=max_sweeps {
        if off_norm(&a) <= f64::EPSILON * total {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let phase = (apq / g).conj();
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // J restricted to (p, q): [[c, s], [-s·phase, c·phase]]
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = phase * -s;
                let jqq = phase * c;
                for i in 0..n {
                    let (x, y) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = x * jpp + y * jqp;
                    a[(i, q)] = x * jpq + y * jqq;
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = x * jpp + y * jqp;
                    w[(i, q)] = x * jpq + y * jqq;
                }
                for j in 0..n {
                    let (x, y) = (a[(p, j)], a[(q, j)]);
                    a[(p, j)] = jpp.conj() * x + jqp.conj() * y;
                    a[(q, j)] = jpq.conj() * x + jqq.conj() * y;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence { sweeps: max_sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| w[(i, order[j])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

fn psd_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let mut e = herm_eig(m)?;
    let floor = -PSD_TOL * m.frobenius_norm();
    if let Some(&lowest) = e.eigenvalues.first() {
        if lowest < floor {
            return Err(Error::NotPositive { eigenvalue: lowest });
        }
    }
    for l in &mut e.eigenvalues {
        *l = l.max(0.0);
    }
    Ok(e)
}

/// Inverse square root of a positive semidefinite matrix, taken as zero on
/// the kernel.
pub fn psd_inv_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = psd_eigen(m)?;
    let cut = e.eigenvalues.last().copied().unwrap_or(0.0) * f64::EPSILON * m.rows() as f64;
    Ok(e.apply_fn(|l| if l > cut && l > 0.0 { 1.0 / l.sqrt() } else { 0.0 }))
}

/// Principal square root of a positive semidefinite matrix.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = psd_eigen(m)?;
    Ok(e.apply_fn(f64::sqrt))
}
