//! One-sided (Hestenes) Jacobi SVD for dense complex matrices.
//!
//! Column pairs of a working copy of `M` are rotated until they are mutually
//! orthogonal to working precision; the accumulated rotations form `V` and the
//! column norms are the singular values. The method is slow for large inputs
//! but has excellent relative accuracy on the small matrices this crate
//! handles.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Thin SVD `M = U · diag(singulars) · V*` with `r = min(rows, cols)`
/// columns in `u` and `v`.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: ComplexMatrix,
    pub singulars: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SvdFactors {
    /// `U · diag(σ) · V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let r = self.singulars.len();
        let us = ComplexMatrix::from_fn(self.u.rows(), r, |i, j| self.u[(i, j)] * self.singulars[j]);
        us.mat_mul(&self.v.adjoint()).expect("factor dimensions agree")
    }

    pub fn sigma_max(&self) -> f64 {
        self.singulars.first().copied().unwrap_or(0.0)
    }
}

pub fn svd(m: &ComplexMatrix, max_sweeps: usize) -> Result<SvdFactors> {
    if m.is_empty() {
        return Err(Error::Empty { op: "svd" });
    }
    if m.rows() >= m.cols() {
        svd_tall(m, max_sweeps)
    } else {
        let f = svd_tall(&m.adjoint(), max_sweeps)?;
        Ok(SvdFactors {
            u: f.v,
            singulars: f.singulars,
            v: f.u,
        })
    }
}

fn col_dot(cols: &[Vec<Complex64>], p: usize, q: usize) -> Complex64 {
    cols[p]
        .iter()
        .zip(&cols[q])
        .map(|(a, b)| a.conj() * b)
        .sum()
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Rotates columns `p`, `q` of `cols`: `q` is first multiplied by `phase`,
/// then `(p, q) ← (c·p − s·q, s·p + c·q)`.
fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, phase: Complex64, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let a = *x;
        let b = *y * phase;
        *x = a * c - b * s;
        *y = a * s + b * c;
    }
}

fn svd_tall(m: &ComplexMatrix, max_sweeps: usize) -> Result<SvdFactors> {
    let (rows, k) = m.dims();
    let mut work: Vec<Vec<Complex64>> = (0..k).map(|j| m.col(j)).collect();
    let mut vcols: Vec<Vec<Complex64>> = (0..k)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); k];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    let tol = f64::EPSILON * rows as f64;
    // columns at roundoff level relative to the whole matrix carry no
    // information and can otherwise keep the sweep rotating noise forever
    let negligible = (f64::EPSILON * m.frobenius_norm()).powi(2);
    let mut converged = k < 2;
    for _ in 0..max_sweeps {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..k - 1 {
            for q in p + 1..k {
                let alpha = norm_sqr(&work[p]);
                let beta = norm_sqr(&work[q]);
                let gamma = col_dot(&work, p, q);
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut work, p, q, phase, c, s);
                rotate(&mut vcols, p, q, phase, c, s);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NonConvergence { sweeps: max_sweeps });
    }

    let mut order: Vec<(f64, usize)> = work
        .iter()
        .enumerate()
        .map(|(j, c)| (norm_sqr(c).sqrt(), j))
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let singulars: Vec<f64> = order.iter().map(|&(s, _)| s).collect();
    let ucols: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&(s, j)| {
            if s > f64::MIN_POSITIVE {
                work[j].iter().map(|z| z / s).collect()
            } else {
                vec![Complex64::new(0.0, 0.0); rows]
            }
        })
        .collect();
    let ucols = orthonormalize_with_completion(ucols, rows);

    let mut u = ComplexMatrix::zeros(rows, k);
    let mut v = ComplexMatrix::zeros(k, k);
    for (dst, (&(_, j), ucol)) in order.iter().zip(&ucols).enumerate() {
        u.set_col(dst, ucol);
        v.set_col(dst, &vcols[j]);
    }
    Ok(SvdFactors { u, singulars, v })
}

/// Modified Gram–Schmidt over the given columns in order. A column that
/// loses more than half its length to earlier columns (zero singular
/// directions) is replaced by the standard basis vector with the largest
/// component orthogonal to them.
fn orthonormalize_with_completion(cols: Vec<Vec<Complex64>>, dim: usize) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(cols.len());
    for col in cols {
        let mut v = col;
        if project_out(&mut v, &basis) <= 0.5 {
            v = (0..dim)
                .map(|i| {
                    let mut e = vec![Complex64::new(0.0, 0.0); dim];
                    e[i] = Complex64::new(1.0, 0.0);
                    let n = project_out(&mut e, &basis);
                    (n, e)
                })
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .map(|(_, e)| e)
                .expect("dim > 0");
        }
        basis.push(v);
    }
    basis
}

/// Removes the components of `v` along `basis` (twice, for stability) and
/// normalizes; returns the remaining norm before normalization.
fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) -> f64 {
    for _ in 0..2 {
        for b in basis {
            let coef: Complex64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
            for (y, x) in v.iter_mut().zip(b) {
                *y -= coef * x;
            }
        }
    }
    let n = norm_sqr(v).sqrt();
    if n > 0.0 {
        for y in v.iter_mut() {
            *y /= n;
        }
    }
    n
}
