//! The JSON case format.
//!
//! A complex number is `[re, im]`, an algebra element is an array of blocks
//! and each block is a row-major array of rows. An operator is
//! `{"shape", "out_len", "in_len", "entries"}` with `entries` an
//! `out_len × in_len` array of algebra elements.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use gram_pinv::aop::AMatrix;
use gram_pinv::cstar::{AlgElem, AlgebraShape};
use gram_pinv::densela::ComplexMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub type ComplexJson = [f64; 2];
pub type BlockJson = Vec<Vec<ComplexJson>>;
pub type AlgElemJson = Vec<BlockJson>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AMatrixJson {
    pub shape: Vec<usize>,
    pub out_len: usize,
    pub in_len: usize,
    pub entries: Vec<Vec<AlgElemJson>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Penrose,
    GramLeft,
    GramRight,
    GramProduct,
    Projections,
    Decomposition,
    GramRange,
    Commutant,
    Selfadjoint,
    BoundedTransform,
    Tikhonov,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::Penrose,
        Check::GramLeft,
        Check::GramRight,
        Check::GramProduct,
        Check::Projections,
        Check::Decomposition,
        Check::GramRange,
        Check::Commutant,
        Check::Selfadjoint,
        Check::BoundedTransform,
        Check::Tikhonov,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Penrose => "penrose",
            Check::GramLeft => "gram_left",
            Check::GramRight => "gram_right",
            Check::GramProduct => "gram_product",
            Check::Projections => "projections",
            Check::Decomposition => "decomposition",
            Check::GramRange => "gram_range",
            Check::Commutant => "commutant",
            Check::Selfadjoint => "selfadjoint",
            Check::BoundedTransform => "bounded_transform",
            Check::Tikhonov => "tikhonov",
        }
    }

    fn needs_square(self) -> bool {
        matches!(self, Check::Commutant | Check::Selfadjoint)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    Inline { entries: Vec<Vec<AlgElemJson>> },
    Generated { seed: u64, ranks: Vec<usize> },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub id: String,
    pub shape: Vec<usize>,
    pub in_len: usize,
    pub out_len: usize,
    pub source: Source,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseFile {
    pub cases: Vec<CaseSpec>,
}

impl CaseSpec {
    pub fn algebra_shape(&self) -> Result<AlgebraShape> {
        AlgebraShape::new(self.shape.clone()).map_err(|e| CliError::Validation(format!("case {}: {e}", self.id)))
    }

    /// Builds (or regenerates) the operator the case describes.
    pub fn operator(&self) -> Result<AMatrix> {
        let shape = self.algebra_shape()?;
        match &self.source {
            Source::Inline { entries } => {
                let json = AMatrixJson {
                    shape: self.shape.clone(),
                    out_len: self.out_len,
                    in_len: self.in_len,
                    entries: entries.clone(),
                };
                amatrix_from_json(&json).map_err(|e| match e {
                    CliError::Validation(m) => CliError::Validation(format!("case {}: {m}", self.id)),
                    other => other,
                })
            }
            Source::Generated { seed, ranks } => Ok(gram_pinv::aop::random_with_ranks(
                &shape,
                self.out_len,
                self.in_len,
                ranks,
                *seed,
            )?),
        }
    }

    fn validate(&self) -> Result<()> {
        let shape = self.algebra_shape()?;
        let err = |m: String| CliError::Validation(format!("case {}: {m}", self.id));
        if self.in_len == 0 || self.out_len == 0 {
            return Err(err("in_len and out_len must be positive".into()));
        }
        if let Source::Generated { ranks, .. } = &self.source {
            if ranks.len() != shape.num_blocks() {
                return Err(err(format!("{} ranks for {} summands", ranks.len(), shape.num_blocks())));
            }
            for (i, (&r, &n)) in ranks.iter().zip(shape.blocks()).enumerate() {
                let max = self.in_len.min(self.out_len) * n;
                if r > max {
                    return Err(err(format!("rank {r} of summand {i} exceeds {max}")));
                }
            }
        }
        for c in &self.checks {
            if c.needs_square() && self.in_len != self.out_len {
                return Err(err(format!("check {} needs a square operator", c.name())));
            }
        }
        for (name, t) in [("rel_tol", self.tolerances.rel_tol), ("stop_tol", self.tolerances.stop_tol)] {
            if let Some(x) = t {
                if !(x > 0.0 && x.is_finite()) {
                    return Err(err(format!("{name} must be positive, got {x}")));
                }
            }
        }
        Ok(())
    }
}

pub fn validate_cases(cases: &[CaseSpec]) -> Result<()> {
    let mut seen = HashSet::new();
    for c in cases {
        if !seen.insert(c.id.as_str()) {
            return Err(CliError::Validation(format!("duplicate case id {:?}", c.id)));
        }
        c.validate()?;
    }
    Ok(())
}

pub fn parse_case_str(text: &str) -> Result<Vec<CaseSpec>> {
    let file: CaseFile = serde_json::from_str(text)?;
    validate_cases(&file.cases)?;
    Ok(file.cases)
}

pub fn parse_case_file(path: &Path) -> Result<Vec<CaseSpec>> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_case_str(&text)
}

pub fn to_json_complex(z: Complex64) -> ComplexJson {
    [z.re, z.im]
}

pub fn alg_elem_to_json(a: &AlgElem) -> AlgElemJson {
    a.blocks()
        .iter()
        .map(|b| (0..b.rows()).map(|i| (0..b.cols()).map(|j| to_json_complex(b[(i, j)])).collect()).collect())
        .collect()
}

pub fn alg_elem_from_json(shape: &AlgebraShape, json: &AlgElemJson) -> Result<AlgElem> {
    if json.len() != shape.num_blocks() {
        return Err(CliError::Validation(format!(
            "algebra element has {} blocks, shape needs {}",
            json.len(),
            shape.num_blocks()
        )));
    }
    let mut blocks = Vec::with_capacity(json.len());
    for (i, (rows, &n)) in json.iter().zip(shape.blocks()).enumerate() {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(CliError::Validation(format!("block {i} is not {n}x{n}")));
        }
        let flat: Vec<Complex64> = rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
        blocks.push(ComplexMatrix::from_row_major(n, n, flat).map_err(|e| CliError::Validation(e.to_string()))?);
    }
    AlgElem::from_blocks(shape, blocks).map_err(|e| CliError::Validation(e.to_string()))
}

pub fn amatrix_to_json(t: &AMatrix) -> AMatrixJson {
    AMatrixJson {
        shape: t.shape().blocks().to_vec(),
        out_len: t.out_len(),
        in_len: t.in_len(),
        entries: (0..t.out_len())
            .map(|i| (0..t.in_len()).map(|j| alg_elem_to_json(t.entry(i, j))).collect())
            .collect(),
    }
}

pub fn amatrix_from_json(json: &AMatrixJson) -> Result<AMatrix> {
    let shape = AlgebraShape::new(json.shape.clone()).map_err(|e| CliError::Validation(e.to_string()))?;
    if json.entries.len() != json.out_len || json.entries.iter().any(|r| r.len() != json.in_len) {
        return Err(CliError::Validation(format!(
            "entries must be a {}x{} array",
            json.out_len, json.in_len
        )));
    }
    let entries = json
        .entries
        .iter()
        .flatten()
        .map(|a| alg_elem_from_json(&shape, a))
        .collect::<Result<Vec<_>>>()?;
    AMatrix::from_entries(&shape, json.out_len, json.in_len, entries).map_err(|e| CliError::Validation(e.to_string()))
}
