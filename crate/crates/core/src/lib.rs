//! Moore–Penrose inverses of adjointable operators on Hilbert modules over
//! finite-dimensional C*-algebras.
//!
//! The coefficient algebra is a finite direct sum of full matrix algebras
//! `A = M_{n₁}(ℂ) ⊕ … ⊕ M_{n_s}(ℂ)` ([`cstar`]). Operators between the free
//! modules `Aᵏ → Aᵐ` ([`hmodule`]) are `m × k` arrays of algebra elements
//! ([`aop::AMatrix`]). Each operator splits into one complex matrix per
//! summand, which is where the actual numerics happen ([`densela`]).
//!
//! On top of that the crate computes Moore–Penrose inverses by several
//! independent routes (SVD, Gram operators, the Tikhonov limit) and checks
//! the identities relating them, the range/kernel decompositions, the joint
//! commutant, and the bounded transform. [`volterra`] studies a discretized
//! Volterra operator, where the Gram-route identities degrade as the grid is
//! refined.
//!
//! ```
//! use gram_pinv::aop::AMatrix;
//! use gram_pinv::cstar::AlgebraShape;
//!
//! let shape = AlgebraShape::new(vec![1, 2]).unwrap();
//! let t = AMatrix::random(&shape, 3, 2, 7);
//! let (t_dag, report) = t.mp_inverse(1e-10).unwrap();
//! assert!(report.penrose_residuals.iter().all(|&r| r < 1e-10));
//! assert_eq!((t_dag.out_len(), t_dag.in_len()), (2, 3));
//! ```

pub mod aop;
pub mod cstar;
pub mod densela;
mod error;
pub mod hmodule;
pub mod volterra;

pub use error::{Error, Result};

/// Chapters of the guide under `book/`, compiled so their snippets run as
/// doc-tests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    pub mod algebra {}
    #[doc = include_str!("../../../book/src/operators.md")]
    pub mod operators {}
    #[doc = include_str!("../../../book/src/pseudoinverse.md")]
    pub mod pseudoinverse {}
    #[doc = include_str!("../../../book/src/gram.md")]
    pub mod gram {}
    #[doc = include_str!("../../../book/src/tikhonov.md")]
    pub mod tikhonov {}
    #[doc = include_str!("../../../book/src/commutant.md")]
    pub mod commutant {}
    #[doc = include_str!("../../../book/src/transform.md")]
    pub mod transform {}
    #[doc = include_str!("../../../book/src/volterra.md")]
    pub mod volterra {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
