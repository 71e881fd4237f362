mod support;

use gram_pinv::cstar::{AlgElem, AlgebraShape, POSITIVITY_TOL};
use gram_pinv::hmodule::ModuleVector;
use num_complex::Complex64;
use proptest::prelude::*;

fn shapes() -> impl Strategy<Value = AlgebraShape> {
    prop::sample::select(vec![vec![1], vec![2], vec![1, 2], vec![2, 3], vec![3, 1, 2]])
        .prop_map(|b| AlgebraShape::new(b).unwrap())
}

fn diff(a: &AlgElem, b: &AlgElem) -> f64 {
    a.sub(b).unwrap().norm()
}

#[test]
fn shape_validation() {
    assert!(AlgebraShape::new(vec![]).is_err());
    assert!(AlgebraShape::new(vec![2, 0]).is_err());
    let s = AlgebraShape::new(vec![1, 2, 3]).unwrap();
    assert_eq!(s.dimension(), 1 + 4 + 9);
    assert_eq!(AlgebraShape::scalar().blocks(), &[1]);
}

#[test]
fn mixing_shapes_fails() {
    let a = AlgElem::identity(&AlgebraShape::new(vec![2]).unwrap());
    let b = AlgElem::identity(&AlgebraShape::new(vec![1, 1]).unwrap());
    assert!(a.add(&b).is_err());
    assert!(a.mul(&b).is_err());
}

#[test]
fn gaussian_entries_have_unit_second_moment() {
    let shape = AlgebraShape::new(vec![2]).unwrap();
    let mut rng = support::rng(77);
    let draws = 10_000;
    let mut acc = 0.0;
    for _ in 0..draws {
        let a = AlgElem::random_with(&shape, &mut rng);
        acc += a.block(0).as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>() / 4.0;
    }
    let mean = acc / draws as f64;
    assert!((0.9..=1.1).contains(&mean), "mean |z|² = {mean}");
}

#[test]
fn zero_vector_is_zero() {
    let shape = AlgebraShape::new(vec![1, 2]).unwrap();
    assert!(ModuleVector::zeros(&shape, 3).is_zero());
    assert!(!ModuleVector::basis(&shape, 3, 1).is_zero());
    assert!((ModuleVector::basis(&shape, 3, 1).norm() - 1.0).abs() < 1e-15);
}

#[test]
fn flatten_round_trip() {
    let shape = AlgebraShape::new(vec![2, 3]).unwrap();
    let x = ModuleVector::random(&shape, 3, 5);
    let parts: Vec<_> = (0..2).map(|i| x.flatten_summand(i).unwrap()).collect();
    assert_eq!(parts[1].dims(), (9, 3));
    assert_eq!(ModuleVector::from_summands(&shape, &parts).unwrap(), x);
    assert!(x.flatten_summand(2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn star_reverses_products(shape in shapes(), seed in any::<u64>()) {
        let a = AlgElem::random(&shape, seed);
        let b = AlgElem::random(&shape, seed ^ 1);
        let lhs = a.mul(&b).unwrap().star();
        let rhs = b.star().mul(&a.star()).unwrap();
        prop_assert!(diff(&lhs, &rhs) <= 1e-13 * (1.0 + a.norm() * b.norm()));
        prop_assert_eq!(a.star().star(), a);
    }

    #[test]
    fn c_star_identity(shape in shapes(), seed in any::<u64>()) {
        let a = AlgElem::random(&shape, seed);
        let n = a.norm();
        let lhs = a.star().mul(&a).unwrap().norm();
        prop_assert!((lhs - n * n).abs() <= 1e-9 * n * n);
    }

    #[test]
    fn norm_is_submultiplicative(shape in shapes(), seed in any::<u64>()) {
        let a = AlgElem::random(&shape, seed);
        let b = AlgElem::random(&shape, seed.wrapping_add(9));
        prop_assert!(a.mul(&b).unwrap().norm() <= a.norm() * b.norm() * (1.0 + 1e-12));
    }

    #[test]
    fn star_products_are_positive(shape in shapes(), seed in any::<u64>()) {
        let a = AlgElem::random(&shape, seed);
        prop_assert!(a.star().mul(&a).unwrap().is_positive(POSITIVITY_TOL));
    }

    #[test]
    fn inner_product_is_module_linear(shape in shapes(), seed in any::<u64>(), len in 1usize..5) {
        let x = ModuleVector::random(&shape, len, seed);
        let y = ModuleVector::random(&shape, len, seed ^ 0xabc);
        let a = AlgElem::random(&shape, seed ^ 0xdef);
        let lhs = x.inner(&y.right_action(&a).unwrap()).unwrap();
        let rhs = x.inner(&y).unwrap().mul(&a).unwrap();
        prop_assert!(diff(&lhs, &rhs) <= 1e-12 * (1.0 + x.norm() * y.norm() * a.norm()));
    }

    #[test]
    fn norm_is_homogeneous(shape in shapes(), seed in any::<u64>(), len in 1usize..5, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let x = ModuleVector::random(&shape, len, seed);
        let lambda = Complex64::new(re, im);
        let scaled = x.right_action(&AlgElem::scalar(&shape, lambda)).unwrap();
        prop_assert!((scaled.norm() - lambda.norm() * x.norm()).abs() <= 1e-10 * (1.0 + x.norm()));
        let a = AlgElem::random(&shape, seed ^ 5);
        prop_assert!(x.right_action(&a).unwrap().norm() <= x.norm() * a.norm() * (1.0 + 1e-10));
    }

    #[test]
    fn right_action_is_associative(shape in shapes(), seed in any::<u64>(), len in 1usize..5) {
        let x = ModuleVector::random(&shape, len, seed);
        let a = AlgElem::random(&shape, seed ^ 2);
        let b = AlgElem::random(&shape, seed ^ 3);
        let lhs = x.right_action(&a).unwrap().right_action(&b).unwrap();
        let rhs = x.right_action(&a.mul(&b).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-12 * (1.0 + x.norm() * a.norm() * b.norm()));
    }

    #[test]
    fn inner_product_is_hermitian(shape in shapes(), seed in any::<u64>(), len in 1usize..5) {
        let x = ModuleVector::random(&shape, len, seed);
        let y = ModuleVector::random(&shape, len, seed ^ 4);
        let lhs = x.inner(&y).unwrap().star();
        let rhs = y.inner(&x).unwrap();
        prop_assert!(diff(&lhs, &rhs) <= 1e-13 * (1.0 + x.norm() * y.norm()));
    }

    #[test]
    fn cauchy_schwarz(shape in shapes(), seed in any::<u64>(), len in 1usize..5) {
        let x = ModuleVector::random(&shape, len, seed);
        let y = ModuleVector::random(&shape, len, seed ^ 6);
        let xy = x.inner(&y).unwrap().norm();
        prop_assert!(xy * xy <= x.norm().powi(2) * y.norm().powi(2) + 1e-10);
        // ⟨x,y⟩*⟨x,y⟩ ≤ ‖x‖² ⟨y,y⟩ in the positive cone
        let g = x.inner(&y).unwrap();
        let bound = y.inner(&y).unwrap().scale(Complex64::new(x.norm().powi(2), 0.0));
        let slack = AlgElem::scalar(&shape, Complex64::new(1e-10 * (1.0 + bound.norm()), 0.0));
        let gap = bound.sub(&g.star().mul(&g).unwrap()).unwrap().add(&slack).unwrap();
        prop_assert!(gap.is_positive(1e-12));
    }

    #[test]
    fn inner_product_is_definite(shape in shapes(), seed in any::<u64>(), len in 1usize..5) {
        let x = ModuleVector::random(&shape, len, seed);
        let g = x.inner(&x).unwrap();
        prop_assert!(g.is_positive(POSITIVITY_TOL));
        prop_assert!(g.norm() > 0.0);
        let z = ModuleVector::zeros(&shape, len);
        prop_assert_eq!(z.inner(&z).unwrap().max_abs(), 0.0);
    }
}
