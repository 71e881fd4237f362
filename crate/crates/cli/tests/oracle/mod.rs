//! Gaussian-elimination pseudoinverse used as an independent reference.
#![allow(dead_code)]

use gram_pinv::densela::ComplexMatrix;
use num_complex::Complex64;

fn mul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).map(|l| a[(i, l)] * b[(l, j)]).sum::<Complex64>()
    })
}

fn inverse(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut aug = ComplexMatrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a[(i, j)]
        } else if j - n == i {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| aug[(x, k)].norm().total_cmp(&aug[(y, k)].norm()))
            .unwrap();
        for j in 0..2 * n {
            let t = aug[(k, j)];
            aug[(k, j)] = aug[(p, j)];
            aug[(p, j)] = t;
        }
        let d = aug[(k, k)];
        for j in 0..2 * n {
            aug[(k, j)] /= d;
        }
        for i in 0..n {
            if i != k {
                let f = aug[(i, k)];
                for j in 0..2 * n {
                    let v = aug[(k, j)];
                    aug[(i, j)] -= f * v;
                }
            }
        }
    }
    aug.submatrix(0, n, n, n)
}

/// `G*(GG*)⁻¹(F*F)⁻¹F*` from the rank factorization `M = FG` read off the
/// reduced row echelon form.
pub fn rank_factorization_pinv(m: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    let (rows, cols) = m.dims();
    let mut r = m.clone();
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
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
    let (fs, gs) = (f.adjoint(), g.adjoint());
    mul(&mul(&mul(&gs, &inverse(&mul(&g, &gs))), &inverse(&mul(&fs, &f))), &fs)
}
