//! The free Hilbert module `Aᵏ` with its `A`-valued inner product
//! `⟨x, y⟩ = Σᵢ xᵢ* yᵢ` and right action `(x·a)ᵢ = xᵢ a`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cstar::{AlgElem, AlgebraShape};
use crate::densela::ComplexMatrix;
use crate::error::{Error, Result};

/// Norms at or below this are treated as the zero vector.
pub const ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVector {
    shape: AlgebraShape,
    coords: Vec<AlgElem>,
}

impl ModuleVector {
    pub fn new(coords: Vec<AlgElem>) -> Result<Self> {
        let first = coords
            .first()
            .ok_or_else(|| Error::InvalidArgument("module vector needs at least one coordinate".into()))?;
        let shape = first.shape().clone();
        for c in &coords[1..] {
            shape.ensure_same(c.shape())?;
        }
        Ok(ModuleVector { shape, coords })
    }

    pub fn zeros(shape: &AlgebraShape, len: usize) -> Self {
        assert!(len >= 1, "module length must be positive");
        ModuleVector {
            shape: shape.clone(),
            coords: vec![AlgElem::zero(shape); len],
        }
    }

    /// The vector with the unit in coordinate `i` and zeros elsewhere.
    pub fn basis(shape: &AlgebraShape, len: usize, i: usize) -> Self {
        let mut v = Self::zeros(shape, len);
        v.coords[i] = AlgElem::identity(shape);
        v
    }

    pub fn random(shape: &AlgebraShape, len: usize, seed: u64) -> Self {
        Self::random_with(shape, len, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn random_with<R: Rng + ?Sized>(shape: &AlgebraShape, len: usize, rng: &mut R) -> Self {
        assert!(len >= 1, "module length must be positive");
        ModuleVector {
            shape: shape.clone(),
            coords: (0..len).map(|_| AlgElem::random_with(shape, rng)).collect(),
        }
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[AlgElem] {
        &self.coords
    }

    fn ensure_compatible(&self, other: &ModuleVector, op: &'static str) -> Result<()> {
        self.shape.ensure_same(&other.shape)?;
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                op,
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    /// `⟨x, y⟩ = Σᵢ xᵢ* yᵢ`, linear in `y`.
    pub fn inner(&self, other: &ModuleVector) -> Result<AlgElem> {
        self.ensure_compatible(other, "inner")?;
        let mut acc = AlgElem::zero(&self.shape);
        for (x, y) in self.coords.iter().zip(&other.coords) {
            acc = acc.add(&x.star().mul(y)?)?;
        }
        Ok(acc)
    }

    /// `‖x‖ = ‖⟨x, x⟩‖^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.inner(self).map(|g| g.norm().sqrt()).unwrap_or(f64::NAN)
    }

    pub fn is_zero(&self) -> bool {
        self.norm() <= ZERO_THRESHOLD
    }

    /// Right module action `x · a`.
    pub fn right_action(&self, a: &AlgElem) -> Result<ModuleVector> {
        self.shape.ensure_same(a.shape())?;
        Ok(ModuleVector {
            shape: self.shape.clone(),
            coords: self.coords.iter().map(|x| x.mul(a)).collect::<Result<_>>()?,
        })
    }

    pub fn add(&self, other: &ModuleVector) -> Result<ModuleVector> {
        self.ensure_compatible(other, "add")?;
        Ok(ModuleVector {
            shape: self.shape.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(x, y)| x.add(y))
                .collect::<Result<_>>()?,
        })
    }

    pub fn sub(&self, other: &ModuleVector) -> Result<ModuleVector> {
        self.ensure_compatible(other, "sub")?;
        Ok(ModuleVector {
            shape: self.shape.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(x, y)| x.sub(y))
                .collect::<Result<_>>()?,
        })
    }

    /// Summand `i` as a `(k·nᵢ) × nᵢ` complex matrix, coordinate blocks
    /// stacked top to bottom.
    pub fn flatten_summand(&self, i: usize) -> Result<ComplexMatrix> {
        let s = self.shape.num_blocks();
        if i >= s {
            return Err(Error::IndexOutOfRange { index: i, len: s });
        }
        let n = self.shape.block_size(i);
        let mut out = ComplexMatrix::zeros(self.len() * n, n);
        for (c, x) in self.coords.iter().enumerate() {
            out.set_submatrix(c * n, 0, x.block(i));
        }
        Ok(out)
    }

    /// Inverse of [`ModuleVector::flatten_summand`] over all summands.
    pub fn from_summands(shape: &AlgebraShape, summands: &[ComplexMatrix]) -> Result<ModuleVector> {
        if summands.len() != shape.num_blocks() {
            return Err(Error::InvalidShape(format!(
                "expected {} summands, got {}",
                shape.num_blocks(),
                summands.len()
            )));
        }
        let n0 = shape.block_size(0);
        let len = summands[0].rows() / n0;
        for (i, m) in summands.iter().enumerate() {
            let n = shape.block_size(i);
            if m.dims() != (len * n, n) {
                return Err(Error::InvalidShape(format!("summand {i} has dimensions {:?}", m.dims())));
            }
        }
        let coords = (0..len)
            .map(|c| AlgElem::from_fn(shape, |i, n| summands[i].submatrix(c * n, 0, n, n)))
            .collect();
        ModuleVector::new(coords)
    }
}
