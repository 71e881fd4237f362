//! The coefficient algebra `A = M_{n₁}(ℂ) ⊕ … ⊕ M_{n_s}(ℂ)`.
//!
//! Every element carries its [`AlgebraShape`], and binary operations check
//! that shapes agree. The algebra is unital; the C*-norm of a direct sum is
//! the largest spectral norm among its blocks.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::densela::{herm_eig, ComplexMatrix};
use crate::error::{Error, Result};

/// Default tolerance for [`AlgElem::is_positive`].
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Block sizes `(n₁, …, n_s)` of a direct sum of matrix algebras.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraShape(Vec<usize>);

impl AlgebraShape {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidShape("shape needs at least one block".into()));
        }
        if let Some(i) = blocks.iter().position(|&n| n == 0) {
            return Err(Error::InvalidShape(format!("block {i} has size 0")));
        }
        Ok(AlgebraShape(blocks))
    }

    /// The scalar algebra ℂ.
    pub fn scalar() -> Self {
        AlgebraShape(vec![1])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.0
    }

    pub fn num_blocks(&self) -> usize {
        self.0.len()
    }

    pub fn block_size(&self, i: usize) -> usize {
        self.0[i]
    }

    /// Complex dimension `Σ nᵢ²`.
    pub fn dimension(&self) -> usize {
        self.0.iter().map(|n| n * n).sum()
    }

    pub(crate) fn ensure_same(&self, other: &AlgebraShape) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                left: self.0.clone(),
                right: other.0.clone(),
            })
        }
    }
}

impl fmt::Debug for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Element of the algebra: one `nᵢ × nᵢ` complex matrix per block.
#[derive(Clone, PartialEq)]
pub struct AlgElem {
    shape: AlgebraShape,
    blocks: Vec<ComplexMatrix>,
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgElem")
            .field("shape", &self.shape)
            .field("blocks", &self.blocks)
            .finish()
    }
}

impl AlgElem {
    pub fn from_blocks(shape: &AlgebraShape, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(Error::InvalidShape(format!(
                "expected {} blocks, got {}",
                shape.num_blocks(),
                blocks.len()
            )));
        }
        for (i, (b, &n)) in blocks.iter().zip(shape.blocks()).enumerate() {
            if b.dims() != (n, n) {
                return Err(Error::InvalidShape(format!(
                    "block {i} should be {n}x{n}, got {}x{}",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(AlgElem {
            shape: shape.clone(),
            blocks,
        })
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        Self::from_fn(shape, |_, n| ComplexMatrix::zeros(n, n))
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        Self::from_fn(shape, |_, n| ComplexMatrix::identity(n))
    }

    /// `c · 1`.
    pub fn scalar(shape: &AlgebraShape, c: Complex64) -> Self {
        Self::from_fn(shape, |_, n| ComplexMatrix::identity(n).scale(c))
    }

    /// Builds each block from its index and size.
    pub fn from_fn(shape: &AlgebraShape, mut f: impl FnMut(usize, usize) -> ComplexMatrix) -> Self {
        let blocks = shape.blocks().iter().enumerate().map(|(i, &n)| f(i, n)).collect();
        AlgElem {
            shape: shape.clone(),
            blocks,
        }
    }

    /// Blocks with i.i.d. standard complex Gaussian entries (`E|z|² = 1`),
    /// deterministic in `seed`.
    pub fn random(shape: &AlgebraShape, seed: u64) -> Self {
        Self::random_with(shape, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn random_with<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Self {
        Self::from_fn(shape, |_, n| {
            ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
        })
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn block(&self, i: usize) -> &ComplexMatrix {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    fn blockwise(
        &self,
        other: &AlgElem,
        f: impl Fn(&ComplexMatrix, &ComplexMatrix) -> Result<ComplexMatrix>,
    ) -> Result<AlgElem> {
        self.shape.ensure_same(&other.shape)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect::<Result<_>>()?;
        Ok(AlgElem {
            shape: self.shape.clone(),
            blocks,
        })
    }

    pub fn add(&self, other: &AlgElem) -> Result<AlgElem> {
        self.blockwise(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &AlgElem) -> Result<AlgElem> {
        self.blockwise(other, |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &AlgElem) -> Result<AlgElem> {
        self.blockwise(other, |a, b| a.mat_mul(b))
    }

    /// The involution: blockwise conjugate transpose.
    pub fn star(&self) -> AlgElem {
        AlgElem {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(ComplexMatrix::adjoint).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> AlgElem {
        AlgElem {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(c)).collect(),
        }
    }

    /// C*-norm: the largest spectral norm over the blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(ComplexMatrix::norm2).fold(0.0, f64::max)
    }

    /// Largest absolute entry, a cheap exact-zero test.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(ComplexMatrix::max_abs).fold(0.0, f64::max)
    }

    /// True iff every block is Hermitian within `tol` and no eigenvalue is
    /// below `-tol · ‖a‖`.
    pub fn is_positive(&self, tol: f64) -> bool {
        let norm = self.norm();
        self.blocks.iter().all(|b| {
            let defect = b.hermitian_defect().unwrap_or(f64::INFINITY);
            if defect > tol * norm.max(1.0) {
                return false;
            }
            match herm_eig(b) {
                Ok(e) => e.eigenvalues.iter().all(|&l| l >= -tol * norm),
                Err(_) => false,
            }
        })
    }
}

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(b: &[usize]) -> AlgebraShape {
        AlgebraShape::new(b.to_vec()).unwrap()
    }

    #[test]
    fn shape_validation() {
        assert!(AlgebraShape::new(vec![]).is_err());
        assert!(AlgebraShape::new(vec![2, 0]).is_err());
        assert_eq!(shape(&[2, 3]).dimension(), 13);
    }

    #[test]
    fn star_is_involution_and_identity_is_unit() {
        let s = shape(&[2, 3]);
        let a = AlgElem::random(&s, 3);
        assert_eq!(a.star().star(), a);
        assert_eq!(AlgElem::identity(&s).mul(&a).unwrap(), a);
    }

    #[test]
    fn mismatched_shapes_rejected() {
        let a = AlgElem::identity(&shape(&[2]));
        let b = AlgElem::identity(&shape(&[1, 1]));
        assert!(matches!(a.add(&b), Err(Error::ShapeMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn from_blocks_checks_sizes() {
        let s = shape(&[2]);
        assert!(AlgElem::from_blocks(&s, vec![ComplexMatrix::identity(3)]).is_err());
        assert!(AlgElem::from_blocks(&s, vec![]).is_err());
    }

    #[test]
    fn norms_of_unit_and_zero() {
        let s = shape(&[2, 3]);
        assert!((AlgElem::identity(&s).norm() - 1.0).abs() < 1e-15);
        assert_eq!(AlgElem::zero(&s).norm(), 0.0);
    }

    #[test]
    fn positivity() {
        let s = shape(&[1, 2]);
        assert!(AlgElem::identity(&s).is_positive(POSITIVITY_TOL));
        let neg = AlgElem::scalar(&shape(&[1]), Complex64::new(-1.0, 0.0));
        assert!(!neg.is_positive(POSITIVITY_TOL));
        let nonherm = AlgElem::from_blocks(
            &shape(&[2]),
            vec![ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]])],
        )
        .unwrap();
        assert!(!nonherm.is_positive(POSITIVITY_TOL));
    }

    #[test]
    fn random_is_seeded() {
        let s = shape(&[2, 1]);
        assert_eq!(AlgElem::random(&s, 11), AlgElem::random(&s, 11));
        assert_ne!(AlgElem::random(&s, 11), AlgElem::random(&s, 12));
    }
}
