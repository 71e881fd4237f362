mod support;

use gram_pinv::densela::ComplexMatrix;
use gram_pinv::volterra::{build_volterra, grid, h_norm, no_solution_study, DEFAULT_GRIDS};
use num_complex::Complex64;
use support::{max_diff, naive_mul};

fn column(values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(values.len(), 1, |i, _| Complex64::new(values[i], 0.0))
}

#[test]
fn integrates_constants_and_lines() {
    for n in [8, 32, 100] {
        let h = 1.0 / n as f64;
        let xs = grid(n);
        let v = build_volterra(n).unwrap();
        let ones = naive_mul(&v, &column(&vec![1.0; n]));
        let lines = naive_mul(&v, &column(&xs));
        for (i, &x) in xs.iter().enumerate() {
            assert!((ones[(i, 0)].re - x).abs() <= h);
            assert!((lines[(i, 0)].re - x * x / 2.0).abs() <= 2.0 * h);
        }
    }
}

#[test]
fn exact_discrete_solution_for_identity_ramp() {
    // for f = x the discrete system VV*g = f is solved by
    // g = (−n/2, 0, …, 0, n), whose h-norm is √(5n/4)
    let n = 16;
    let study = no_solution_study(&[n]).unwrap();
    assert!((study.solution_norms[0] - (5.0 * n as f64 / 4.0).sqrt()).abs() <= 1e-8);
    let v = build_volterra(n).unwrap();
    let mut g = vec![0.0; n];
    g[0] = -(n as f64) / 2.0;
    g[n - 1] = n as f64;
    let lhs = naive_mul(&naive_mul(&v, &v.adjoint()), &column(&g));
    assert!(max_diff(&lhs, &column(&grid(n))) <= 1e-12);
}

#[test]
fn discrete_adjoint_is_conjugate_transpose() {
    let n = 12;
    let h = 1.0 / n as f64;
    let v = build_volterra(n).unwrap();
    let f = column(&grid(n).iter().map(|x| x.sin()).collect::<Vec<_>>());
    let g = column(&grid(n).iter().map(|x| x * x).collect::<Vec<_>>());
    // h-weighted inner products on both sides
    let lhs: f64 = h * naive_mul(&v, &f).as_slice().iter().zip(g.as_slice()).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
    let rhs: f64 = h * f.as_slice().iter().zip(naive_mul(&v.adjoint(), &g).as_slice()).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
    assert!((lhs - rhs).abs() <= 1e-15);
    assert!(h_norm(&column(&vec![1.0; n]), h) - 1.0 < 1e-15);
}

#[test]
fn default_study_trends() {
    let s = no_solution_study(&DEFAULT_GRIDS).unwrap();
    assert!(s.solution_norms.windows(2).all(|w| w[1] > w[0]));
    let (lo, hi) = s
        .control_norms
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    assert!(hi <= 2.0 * lo);
    assert!(s.condition_numbers.windows(2).all(|w| w[1] >= 3.0 * w[0]));
    for (i, &n) in s.grid_sizes.iter().enumerate() {
        assert!(s.penrose_max[i] <= 1e-9, "n = {n}: {}", s.penrose_max[i]);
        assert!(s.lss_residuals[i] <= 1e-6 * s.solution_norms[i]);
        assert!(s.gram_identity_gaps[i].is_finite());
    }
}
