use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::AMatrix;
use crate::cstar::{AlgElem, AlgebraShape};
use crate::densela::ComplexMatrix;
use crate::error::{Error, Result};

/// Generated operators keep `σ_r ≥ MIN_RELATIVE_GAP · σ₁` in every summand,
/// where `r` is the prescribed rank.
pub const MIN_RELATIVE_GAP: f64 = 1e-3;

pub const MAX_GENERATION_ATTEMPTS: usize = 100;

/// Seeded random operator whose flattened summand `i` has rank `ranks[i]`.
///
/// Full-rank summands come straight from Gaussian entries. Otherwise the
/// operator is `G₁ · D · G₂` with Gaussian `G₁`, `G₂` and a diagonal `D`
/// whose entries are coordinate projections, so the module structure holds
/// by construction. Draws that violate [`MIN_RELATIVE_GAP`] are rejected.
pub fn random_with_ranks(
    shape: &AlgebraShape,
    out_len: usize,
    in_len: usize,
    ranks: &[usize],
    seed: u64,
) -> Result<AMatrix> {
    if out_len == 0 || in_len == 0 {
        return Err(Error::InvalidArgument("operator dimensions must be positive".into()));
    }
    if ranks.len() != shape.num_blocks() {
        return Err(Error::InvalidArgument(format!(
            "expected {} ranks, got {}",
            shape.num_blocks(),
            ranks.len()
        )));
    }
    let inner = out_len.min(in_len);
    for (i, (&r, &n)) in ranks.iter().zip(shape.blocks()).enumerate() {
        let max = inner * n;
        if r > max {
            return Err(Error::InvalidRank { summand: i, rank: r, max });
        }
    }
    let full = ranks.iter().zip(shape.blocks()).all(|(&r, &n)| r == inner * n);

    // coordinate projection of rank c within an n×n block
    let projector = |n: usize, c: usize| {
        ComplexMatrix::from_fn(n, n, |a, b| {
            Complex64::new(if a == b && a < c { 1.0 } else { 0.0 }, 0.0)
        })
    };
    let diag: Vec<AlgElem> = (0..inner)
        .map(|j| {
            AlgElem::from_fn(shape, |i, n| {
                let c = ranks[i].saturating_sub(j * n).min(n);
                projector(n, c)
            })
        })
        .collect();
    let d = AMatrix::diagonal(shape, &diag)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_GENERATION_ATTEMPTS {
        let t = if full {
            AMatrix::random_with(shape, out_len, in_len, &mut rng)
        } else {
            let g1 = AMatrix::random_with(shape, out_len, inner, &mut rng);
            let g2 = AMatrix::random_with(shape, inner, in_len, &mut rng);
            g1.compose(&d)?.compose(&g2)?
        };
        let sv = t.singular_values()?;
        let ok = sv.iter().zip(ranks).all(|(s, &r)| r == 0 || s[r - 1] >= MIN_RELATIVE_GAP * s[0]);
        if ok {
            return Ok(t);
        }
    }
    Err(Error::InvalidArgument(format!(
        "no draw met the singular gap within {MAX_GENERATION_ATTEMPTS} attempts"
    )))
}
