use gram_pinv::aop::{random_with_ranks, COMMUTANT_DIM_LIMIT};
use gram_pinv::cstar::AlgebraShape;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};
use crate::format::{CaseFile, CaseSpec, Check, Source, Tolerances};

/// Tikhonov checks are attached only to cases whose smallest singular value
/// clears this bound.
pub const TIKHONOV_MIN_SIGMA: f64 = 0.1;

/// Commutant checks are attached only up to this flattened dimension.
pub const COMMUTANT_GEN_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankProfile {
    Full,
    PerSummand(Vec<usize>),
}

impl std::str::FromStr for RankProfile {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "full" {
            return Ok(RankProfile::Full);
        }
        s.split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| format!("bad rank {p:?}: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(RankProfile::PerSummand)
    }
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub shape: Vec<usize>,
    pub out_len: usize,
    pub in_len: usize,
    pub ranks: RankProfile,
    pub count: usize,
    pub seed: u64,
    pub id_prefix: String,
    /// Explicit check list; `None` picks every check that applies.
    pub checks: Option<Vec<Check>>,
}

impl GenConfig {
    pub fn new(shape: &[usize], out_len: usize, in_len: usize, ranks: RankProfile, count: usize, seed: u64) -> Self {
        GenConfig {
            shape: shape.to_vec(),
            out_len,
            in_len,
            ranks,
            count,
            seed,
            id_prefix: "case".into(),
            checks: None,
        }
    }
}

/// A reproducible corpus: case `i` draws its seed from a ChaCha stream keyed
/// by `config.seed`, and records that seed and its ranks.
pub fn gen_cases(config: &GenConfig) -> Result<CaseFile> {
    let shape = AlgebraShape::new(config.shape.clone()).map_err(|e| CliError::Validation(e.to_string()))?;
    if config.out_len == 0 || config.in_len == 0 {
        return Err(CliError::Validation("dimensions must be positive".into()));
    }
    let inner = config.out_len.min(config.in_len);
    let ranks = match &config.ranks {
        RankProfile::Full => shape.blocks().iter().map(|&n| inner * n).collect(),
        RankProfile::PerSummand(r) => r.clone(),
    };
    if ranks.len() != shape.num_blocks() {
        return Err(CliError::Validation(format!(
            "{} ranks given for {} summands",
            ranks.len(),
            shape.num_blocks()
        )));
    }
    let full = ranks.iter().zip(shape.blocks()).all(|(&r, &n)| r == inner * n);
    let square = config.out_len == config.in_len;
    let max_flat = config.in_len * shape.blocks().iter().copied().max().unwrap_or(1);

    let mut stream = ChaCha8Rng::seed_from_u64(config.seed);
    let mut cases = Vec::with_capacity(config.count);
    for i in 0..config.count {
        let seed = stream.next_u64();
        let t = random_with_ranks(&shape, config.out_len, config.in_len, &ranks, seed).map_err(|e| match e {
            gram_pinv::Error::InvalidRank { .. } | gram_pinv::Error::InvalidArgument(_) => {
                CliError::Validation(e.to_string())
            }
            other => CliError::Kernel(other),
        })?;
        let checks = match &config.checks {
            Some(c) => c.clone(),
            None => {
                let mut c = vec![
                    Check::Penrose,
                    Check::GramLeft,
                    Check::GramRight,
                    Check::GramProduct,
                    Check::Projections,
                    Check::Decomposition,
                    Check::GramRange,
                    Check::BoundedTransform,
                ];
                if square {
                    c.push(Check::Selfadjoint);
                    if max_flat <= COMMUTANT_GEN_DIM.min(COMMUTANT_DIM_LIMIT) {
                        c.push(Check::Commutant);
                    }
                }
                if full {
                    let smin = t
                        .singular_values()?
                        .iter()
                        .filter_map(|s| s.last().copied())
                        .fold(f64::INFINITY, f64::min);
                    if smin >= TIKHONOV_MIN_SIGMA {
                        c.push(Check::Tikhonov);
                    }
                }
                c
            }
        };
        cases.push(CaseSpec {
            id: format!("{}-{i:04}", config.id_prefix),
            shape: config.shape.clone(),
            in_len: config.in_len,
            out_len: config.out_len,
            source: Source::Generated {
                seed,
                ranks: ranks.clone(),
            },
            tolerances: Tolerances::default(),
            checks,
        });
    }
    Ok(CaseFile { cases })
}
