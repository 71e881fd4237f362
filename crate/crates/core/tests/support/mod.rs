//! Reference routines shared by the integration tests. Nothing here calls
//! into the SVD or eigen code of the crate under test.
#![allow(dead_code)]

use gram_pinv::densela::ComplexMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let a = random_matrix(n, n, rng);
    ComplexMatrix::from_fn(n, n, |i, j| a[(i, j)] + a[(j, i)].conj())
}

/// Triple-loop product.
pub fn naive_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.cols(), b.rows());
    let mut out = ComplexMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..a.cols() {
                acc += a[(i, l)] * b[(l, j)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

pub fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.dims(), b.dims());
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    assert_eq!(n, a.cols());
    assert_eq!(n, b.rows());
    let m = b.cols();
    let mut aug = ComplexMatrix::from_fn(n, n + m, |i, j| if j < n { a[(i, j)] } else { b[(i, j - n)] });
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| aug[(x, k)].norm().total_cmp(&aug[(y, k)].norm()))
            .unwrap();
        assert!(aug[(p, k)].norm() > 1e-300, "singular system");
        if p != k {
            for j in 0..n + m {
                let t = aug[(k, j)];
                aug[(k, j)] = aug[(p, j)];
                aug[(p, j)] = t;
            }
        }
        for i in k + 1..n {
            let f = aug[(i, k)] / aug[(k, k)];
            for j in k..n + m {
                let v = aug[(k, j)];
                aug[(i, j)] -= f * v;
            }
        }
    }
    let mut x = ComplexMatrix::zeros(n, m);
    for c in 0..m {
        for i in (0..n).rev() {
            let mut s = aug[(i, n + c)];
            for j in i + 1..n {
                s -= aug[(i, j)] * x[(j, c)];
            }
            x[(i, c)] = s / aug[(i, i)];
        }
    }
    x
}

pub fn gauss_inverse(a: &ComplexMatrix) -> ComplexMatrix {
    gauss_solve(a, &ComplexMatrix::identity(a.rows()))
}

/// Rank factorization `M = F G` from the reduced row echelon form: `F` holds
/// the pivot columns of `M`, `G` the nonzero rows of the RREF.
pub fn rank_factorization(m: &ComplexMatrix, tol: f64) -> (ComplexMatrix, ComplexMatrix) {
    let (rows, cols) = m.dims();
    let mut r = m.clone();
    let scale = m.max_abs().max(1e-300);
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        if row == rows {
            break;
        }
        let p = (row..rows)
            .max_by(|&x, &y| r[(x, c)].norm().total_cmp(&r[(y, c)].norm()))
            .unwrap();
        if r[(p, c)].norm() <= tol * scale {
            continue;
        }
        for j in 0..cols {
            let t = r[(row, j)];
            r[(row, j)] = r[(p, j)];
            r[(p, j)] = t;
        }
        let d = r[(row, c)];
        for j in 0..cols {
            r[(row, j)] /= d;
        }
        for i in 0..rows {
            if i != row {
                let f = r[(i, c)];
                for j in 0..cols {
                    let v = r[(row, j)];
                    r[(i, j)] -= f * v;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let k = pivots.len();
    let f = ComplexMatrix::from_fn(rows, k, |i, j| m[(i, pivots[j])]);
    let g = ComplexMatrix::from_fn(k, cols, |i, j| r[(i, j)]);
    (f, g)
}

/// `G*(GG*)⁻¹(F*F)⁻¹F*` for `M = FG`.
pub fn rank_factorization_pinv(m: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    let (f, g) = rank_factorization(m, tol);
    let gs = g.adjoint();
    let fs = f.adjoint();
    let ggs_inv = gauss_inverse(&naive_mul(&g, &gs));
    let fsf_inv = gauss_inverse(&naive_mul(&fs, &f));
    naive_mul(&naive_mul(&naive_mul(&gs, &ggs_inv), &fsf_inv), &fs)
}

/// `(M*M)⁻¹M*` for full column rank `M`.
pub fn normal_equations_pinv(m: &ComplexMatrix) -> ComplexMatrix {
    let ms = m.adjoint();
    naive_mul(&gauss_inverse(&naive_mul(&ms, m)), &ms)
}

/// Classical Gram–Schmidt QR of a random Gaussian matrix: a random matrix
/// with orthonormal columns.
pub fn random_orthonormal(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    assert!(cols <= rows);
    let g = random_matrix(rows, cols, rng);
    let mut q: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..cols {
        let mut v = g.col(j);
        for _ in 0..2 {
            for b in &q {
                let c: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (y, x) in v.iter_mut().zip(b) {
                    *y -= c * x;
                }
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        q.push(v.iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| q[j][i])
}

/// `U · diag(sigma) · V*` with random orthonormal `U`, `V`.
pub fn with_singulars(rows: usize, cols: usize, sigma: &[f64], rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let r = sigma.len();
    let u = random_orthonormal(rows, r, rng);
    let v = random_orthonormal(cols, r, rng);
    let us = ComplexMatrix::from_fn(rows, r, |i, j| u[(i, j)] * sigma[j]);
    naive_mul(&us, &v.adjoint())
}

/// Standard complex dot product `Σ conj(xᵢ) yᵢ` of two column vectors.
pub fn dot(x: &ComplexMatrix, y: &ComplexMatrix) -> Complex64 {
    x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| a.conj() * b).sum()
}
