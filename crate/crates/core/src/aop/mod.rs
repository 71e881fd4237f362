//! Adjointable operators `Aᵏ → Aᵐ` represented as `m × k` arrays of algebra
//! elements, acting by `(Tx)ᵢ = Σⱼ Tᵢⱼ xⱼ`.
//!
//! Because `Aᵏ` splits along the summands of `A`, every operator splits into
//! one complex matrix per summand ([`AMatrix::flatten_summand`]): summand `i`
//! is the `(m·nᵢ) × (k·nᵢ)` matrix whose `(I, J)` block is block `i` of
//! `T_{IJ}`. A module vector flattens to a `(k·nᵢ) × nᵢ` matrix and the
//! operator acts by left multiplication, so the right `A`-action (right
//! multiplication) commutes with it automatically. Conversely every complex
//! matrix of that size is the flattening of exactly one operator, which is
//! what lets spectral computations run per summand and be reassembled.

mod commutant;
mod generate;
mod pinv;
mod tikhonov;

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cstar::{AlgElem, AlgebraShape};
use crate::densela::{self, ComplexMatrix};
use crate::error::{Error, Result};
use crate::hmodule::ModuleVector;

pub use commutant::{commutation_check, joint_commutant_basis, CommutantBasis, COMMUTANT_DIM_LIMIT};
pub use generate::{random_with_ranks, MAX_GENERATION_ATTEMPTS, MIN_RELATIVE_GAP};
pub use pinv::{
    bounded_transform, bounded_transform_check, decomposition_check, gram_pinv_product_check,
    gram_range_check, pinv_gram_left, pinv_gram_right, projection_check, range_projection,
    selfadjoint_criterion, source_projection, BoundedTransform, BoundedTransformCheck, PinvReport,
    ProjectionCheck, STRUCTURE_TOL,
};
pub use tikhonov::{mp_inverse_tikhonov, tikhonov_iterate, TikhonovLimit, TikhonovOptions};

/// Operator between free Hilbert modules over a common algebra.
#[derive(Clone, PartialEq)]
pub struct AMatrix {
    shape: AlgebraShape,
    out_len: usize,
    in_len: usize,
    entries: Vec<AlgElem>,
}

impl fmt::Debug for AMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AMatrix")
            .field("shape", &self.shape)
            .field("out_len", &self.out_len)
            .field("in_len", &self.in_len)
            .field("entries", &self.entries)
            .finish()
    }
}

impl AMatrix {
    /// Builds an operator from row-major entries.
    pub fn from_entries(
        shape: &AlgebraShape,
        out_len: usize,
        in_len: usize,
        entries: Vec<AlgElem>,
    ) -> Result<Self> {
        if out_len == 0 || in_len == 0 {
            return Err(Error::InvalidArgument("operator dimensions must be positive".into()));
        }
        if entries.len() != out_len * in_len {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a {out_len}x{in_len} operator, got {}",
                out_len * in_len,
                entries.len()
            )));
        }
        for e in &entries {
            shape.ensure_same(e.shape())?;
        }
        Ok(AMatrix {
            shape: shape.clone(),
            out_len,
            in_len,
            entries,
        })
    }

    pub fn from_fn(
        shape: &AlgebraShape,
        out_len: usize,
        in_len: usize,
        mut f: impl FnMut(usize, usize) -> AlgElem,
    ) -> Self {
        assert!(out_len > 0 && in_len > 0, "operator dimensions must be positive");
        let mut entries = Vec::with_capacity(out_len * in_len);
        for i in 0..out_len {
            for j in 0..in_len {
                let e = f(i, j);
                assert_eq!(e.shape(), shape, "entry shape differs from operator shape");
                entries.push(e);
            }
        }
        AMatrix {
            shape: shape.clone(),
            out_len,
            in_len,
            entries,
        }
    }

    pub fn zero(shape: &AlgebraShape, out_len: usize, in_len: usize) -> Self {
        Self::from_fn(shape, out_len, in_len, |_, _| AlgElem::zero(shape))
    }

    pub fn identity(shape: &AlgebraShape, len: usize) -> Self {
        Self::from_fn(shape, len, len, |i, j| {
            if i == j {
                AlgElem::identity(shape)
            } else {
                AlgElem::zero(shape)
            }
        })
    }

    /// Square operator with the given diagonal entries.
    pub fn diagonal(shape: &AlgebraShape, diag: &[AlgElem]) -> Result<Self> {
        let n = diag.len();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(if i == j {
                    diag[i].clone()
                } else {
                    AlgElem::zero(shape)
                });
            }
        }
        Self::from_entries(shape, n, n, entries)
    }

    /// Entries i.i.d. standard complex Gaussian, deterministic in `seed`.
    pub fn random(shape: &AlgebraShape, out_len: usize, in_len: usize, seed: u64) -> Self {
        Self::random_with(shape, out_len, in_len, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn random_with<R: Rng + ?Sized>(
        shape: &AlgebraShape,
        out_len: usize,
        in_len: usize,
        rng: &mut R,
    ) -> Self {
        Self::from_fn(shape, out_len, in_len, |_, _| AlgElem::random_with(shape, rng))
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn out_len(&self) -> usize {
        self.out_len
    }

    pub fn in_len(&self) -> usize {
        self.in_len
    }

    pub fn is_square(&self) -> bool {
        self.in_len == self.out_len
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgElem {
        &self.entries[i * self.in_len + j]
    }

    pub fn entries(&self) -> &[AlgElem] {
        &self.entries
    }

    /// `(Tx)ᵢ = Σⱼ Tᵢⱼ xⱼ`.
    pub fn apply(&self, x: &ModuleVector) -> Result<ModuleVector> {
        self.shape.ensure_same(x.shape())?;
        if x.len() != self.in_len {
            return Err(Error::LengthMismatch {
                op: "apply",
                left: self.in_len,
                right: x.len(),
            });
        }
        let coords = (0..self.out_len)
            .map(|i| {
                let mut acc = AlgElem::zero(&self.shape);
                for (j, xj) in x.coords().iter().enumerate() {
                    acc = acc.add(&self.entry(i, j).mul(xj)?)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        ModuleVector::new(coords)
    }

    /// `(T*)ᵢⱼ = (Tⱼᵢ)*`.
    pub fn adjoint(&self) -> AMatrix {
        AMatrix::from_fn(&self.shape, self.in_len, self.out_len, |i, j| self.entry(j, i).star())
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &AMatrix) -> Result<AMatrix> {
        self.shape.ensure_same(&other.shape)?;
        if self.in_len != other.out_len {
            return Err(Error::LengthMismatch {
                op: "compose",
                left: self.in_len,
                right: other.out_len,
            });
        }
        let mut entries = Vec::with_capacity(self.out_len * other.in_len);
        for i in 0..self.out_len {
            for j in 0..other.in_len {
                let mut acc = AlgElem::zero(&self.shape);
                for l in 0..self.in_len {
                    acc = acc.add(&self.entry(i, l).mul(other.entry(l, j))?)?;
                }
                entries.push(acc);
            }
        }
        AMatrix::from_entries(&self.shape, self.out_len, other.in_len, entries)
    }

    fn zip_entries(&self, other: &AMatrix, op: &'static str, f: impl Fn(&AlgElem, &AlgElem) -> Result<AlgElem>) -> Result<AMatrix> {
        self.shape.ensure_same(&other.shape)?;
        if (self.out_len, self.in_len) != (other.out_len, other.in_len) {
            return Err(Error::DimensionMismatch {
                op,
                left: (self.out_len, self.in_len),
                right: (other.out_len, other.in_len),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect::<Result<_>>()?;
        AMatrix::from_entries(&self.shape, self.out_len, self.in_len, entries)
    }

    pub fn add(&self, other: &AMatrix) -> Result<AMatrix> {
        self.zip_entries(other, "add", |a, b| a.add(b))
    }

    pub fn sub(&self, other: &AMatrix) -> Result<AMatrix> {
        self.zip_entries(other, "sub", |a, b| a.sub(b))
    }

    pub fn scale(&self, c: Complex64) -> AMatrix {
        AMatrix {
            shape: self.shape.clone(),
            out_len: self.out_len,
            in_len: self.in_len,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// Summand `i` as an `(m·nᵢ) × (k·nᵢ)` complex matrix.
    pub fn flatten_summand(&self, i: usize) -> Result<ComplexMatrix> {
        let s = self.shape.num_blocks();
        if i >= s {
            return Err(Error::IndexOutOfRange { index: i, len: s });
        }
        let n = self.shape.block_size(i);
        let mut out = ComplexMatrix::zeros(self.out_len * n, self.in_len * n);
        for r in 0..self.out_len {
            for c in 0..self.in_len {
                out.set_submatrix(r * n, c * n, self.entry(r, c).block(i));
            }
        }
        Ok(out)
    }

    pub fn summands(&self) -> Vec<ComplexMatrix> {
        (0..self.shape.num_blocks())
            .map(|i| self.flatten_summand(i).expect("index in range"))
            .collect()
    }

    /// Reassembles an operator from one flattened matrix per summand.
    pub fn from_summands(shape: &AlgebraShape, summands: &[ComplexMatrix]) -> Result<AMatrix> {
        if summands.len() != shape.num_blocks() {
            return Err(Error::InvalidShape(format!(
                "expected {} summands, got {}",
                shape.num_blocks(),
                summands.len()
            )));
        }
        let n0 = shape.block_size(0);
        let (out_len, in_len) = (summands[0].rows() / n0, summands[0].cols() / n0);
        for (i, m) in summands.iter().enumerate() {
            let n = shape.block_size(i);
            if m.dims() != (out_len * n, in_len * n) {
                return Err(Error::InvalidShape(format!(
                    "summand {i} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    out_len * n,
                    in_len * n
                )));
            }
        }
        let mut entries = Vec::with_capacity(out_len * in_len);
        for r in 0..out_len {
            for c in 0..in_len {
                entries.push(AlgElem::from_fn(shape, |i, n| {
                    summands[i].submatrix(r * n, c * n, n, n)
                }));
            }
        }
        AMatrix::from_entries(shape, out_len, in_len, entries)
    }

    /// Applies `f` to every flattened summand and reassembles.
    pub fn map_summands(&self, f: impl Fn(usize, &ComplexMatrix) -> Result<ComplexMatrix>) -> Result<AMatrix> {
        let parts = self
            .summands()
            .iter()
            .enumerate()
            .map(|(i, m)| f(i, m))
            .collect::<Result<Vec<_>>>()?;
        AMatrix::from_summands(&self.shape, &parts)
    }

    /// Operator norm on the Hilbert module: the largest spectral norm over
    /// the flattened summands.
    pub fn norm(&self) -> f64 {
        self.summands().iter().map(ComplexMatrix::norm2).fold(0.0, f64::max)
    }

    /// Default rank tolerance: `1e-10 · max` flattened dimension.
    pub fn default_rel_tol(&self) -> f64 {
        let n = self.shape.blocks().iter().copied().max().unwrap_or(1);
        densela::default_rel_tol(self.out_len * n, self.in_len * n)
    }

    /// Per-summand singular values, each descending.
    pub fn singular_values(&self) -> Result<Vec<Vec<f64>>> {
        self.summands()
            .iter()
            .map(|m| densela::svd(m, densela::DEFAULT_MAX_SWEEPS).map(|f| f.singulars))
            .collect()
    }

    /// Per-summand numerical ranks at `rel_tol`.
    pub fn ranks(&self, rel_tol: f64) -> Result<Vec<usize>> {
        Ok(self
            .singular_values()?
            .iter()
            .map(|s| densela::rank_from_singulars(s, rel_tol))
            .collect())
    }
}
