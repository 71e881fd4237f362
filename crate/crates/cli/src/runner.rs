use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use gram_pinv::aop::{self, AMatrix, TikhonovOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::format::{CaseSpec, Check};

/// Threshold coefficients. Several are scaled per case; the effective value
/// is recorded next to every residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    /// times `1 + ‖T‖ + ‖T†‖`
    pub penrose: f64,
    /// times `1 + ‖T†‖²`
    pub gram_left: f64,
    pub gram_right: f64,
    /// times `(1 + ‖T†‖²)²`
    pub gram_product: f64,
    pub projections: f64,
    pub decomposition: f64,
    pub gram_range: f64,
    /// bound on `‖ST† − T†S‖ / (‖S‖‖T†‖)`
    pub commutant: f64,
    /// `‖T − T*‖ ≤ selfadjoint_sa_trigger·‖T‖` must give `lhs ≤ selfadjoint_lhs·‖T‖`
    pub selfadjoint_lhs: f64,
    pub selfadjoint_sa_trigger: f64,
    /// `lhs ≤ selfadjoint_lhs_trigger·‖T‖` must give `‖T − T*‖ ≤ selfadjoint_sa·‖T‖`
    pub selfadjoint_sa: f64,
    pub selfadjoint_lhs_trigger: f64,
    pub bounded_transform: f64,
    pub tikhonov_gap: f64,
    /// largest tolerated factor between a measured error ratio and the step ratio
    pub tikhonov_ratio: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            penrose: 1e-9,
            gram_left: 1e-9,
            gram_right: 1e-9,
            gram_product: 1e-9,
            projections: 1e-10,
            decomposition: 1e-9,
            gram_range: 1e-9,
            commutant: 1e-8,
            selfadjoint_lhs: 1e-9,
            selfadjoint_sa_trigger: 1e-12,
            selfadjoint_sa: 1e-8,
            selfadjoint_lhs_trigger: 1e-10,
            bounded_transform: 1e-9,
            tikhonov_gap: 1e-8,
            tikhonov_ratio: 2.0,
        }
    }
}

impl Thresholds {
    /// Overrides one coefficient by its field name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(CliError::Validation(format!("threshold {name} must be positive, got {value}")));
        }
        let slot = match name {
            "penrose" => &mut self.penrose,
            "gram_left" => &mut self.gram_left,
            "gram_right" => &mut self.gram_right,
            "gram_product" => &mut self.gram_product,
            "projections" => &mut self.projections,
            "decomposition" => &mut self.decomposition,
            "gram_range" => &mut self.gram_range,
            "commutant" => &mut self.commutant,
            "selfadjoint_lhs" => &mut self.selfadjoint_lhs,
            "selfadjoint_sa_trigger" => &mut self.selfadjoint_sa_trigger,
            "selfadjoint_sa" => &mut self.selfadjoint_sa,
            "selfadjoint_lhs_trigger" => &mut self.selfadjoint_lhs_trigger,
            "bounded_transform" => &mut self.bounded_transform,
            "tikhonov_gap" => &mut self.tikhonov_gap,
            "tikhonov_ratio" => &mut self.tikhonov_ratio,
            _ => return Err(CliError::Validation(format!("unknown threshold {name:?}"))),
        };
        *slot = value;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Worker threads; 0 lets the pool decide.
    pub parallelism: usize,
    /// Replaces every case's own `rel_tol`.
    pub rel_tol: Option<f64>,
    pub thresholds: Thresholds,
    /// Include wall-clock timings; off by default so reports are reproducible.
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            parallelism: 0,
            rel_tol: None,
            thresholds: Thresholds::default(),
            timings: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: String,
    /// `null` in JSON when the computation did not produce a finite value.
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckOutcome {
    fn new(check: &str, residual: f64, threshold: f64) -> Self {
        CheckOutcome {
            check: check.to_string(),
            residual,
            threshold,
            pass: residual <= threshold,
            note: None,
        }
    }

    fn failed(check: &str, threshold: f64, note: String) -> Self {
        CheckOutcome {
            check: check.to_string(),
            residual: f64::INFINITY,
            threshold,
            pass: false,
            note: Some(note),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    InputError,
    KernelError,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub tol_used: f64,
    pub per_summand_ranks: Vec<usize>,
    pub rank_stable: bool,
    pub penrose_residuals: [f64; 4],
    pub identity_residuals: BTreeMap<String, f64>,
    pub checks: Vec<CheckOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl CaseReport {
    fn errored(id: &str, err: &CliError) -> Self {
        CaseReport {
            id: id.to_string(),
            status: if err.exit_code() == 3 { Status::KernelError } else { Status::InputError },
            error: Some(err.to_string()),
            tol_used: 0.0,
            per_summand_ranks: Vec::new(),
            rank_stable: false,
            penrose_residuals: [0.0; 4],
            identity_residuals: BTreeMap::new(),
            checks: Vec::new(),
            runtime_ms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub input_errors: usize,
    pub kernel_errors: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub thresholds: Thresholds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol_override: Option<f64>,
    pub cases: Vec<CaseReport>,
    pub summary: Summary,
}

impl RunReport {
    /// 3 if any case hit a kernel error, 2 for bad case input, 1 for
    /// residual failures, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.kernel_errors > 0 {
            3
        } else if self.summary.input_errors > 0 {
            2
        } else if self.summary.failed > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Plain-text table, residuals at 3 significant digits.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<20} {:<24} {:>10} {:>10}  verdict", "case", "check", "residual", "threshold");
        for c in &self.cases {
            if let Some(e) = &c.error {
                let _ = writeln!(out, "{:<20} {:<24} {}", c.id, "-", e);
                continue;
            }
            if c.checks.is_empty() {
                let _ = writeln!(out, "{:<20} {:<24} {:>10} {:>10}  pass", c.id, "-", "-", "-");
            }
            for k in &c.checks {
                let _ = writeln!(
                    out,
                    "{:<20} {:<24} {:>10} {:>10.2e}  {}",
                    c.id,
                    k.check,
                    sig3(k.residual),
                    k.threshold,
                    if k.pass { "pass" } else { "FAIL" }
                );
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} cases: {} passed, {} failed, {} input errors, {} kernel errors",
            s.cases, s.passed, s.failed, s.input_errors, s.kernel_errors
        );
        out
    }
}

fn sig3(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.2e}")
    } else {
        format!("{x}")
    }
}

pub fn run_suite(cases: &[CaseSpec], opts: &RunOptions) -> Result<RunReport> {
    if cases.is_empty() {
        return Err(CliError::Validation("no cases to run".into()));
    }
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.parallelism)
        .build()
        .map_err(|e| CliError::Validation(format!("cannot start worker pool: {e}")))?;
    let mut reports: Vec<CaseReport> = pool.install(|| cases.par_iter().map(|c| run_case(c, opts)).collect());
    reports.sort_by(|a, b| a.id.cmp(&b.id));

    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let summary = Summary {
        cases: reports.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        input_errors: count(Status::InputError),
        kernel_errors: count(Status::KernelError),
        runtime_ms: opts.timings.then(|| start.elapsed().as_secs_f64() * 1e3),
    };
    Ok(RunReport {
        thresholds: opts.thresholds,
        rel_tol_override: opts.rel_tol,
        cases: reports,
        summary,
    })
}

pub fn run_case(spec: &CaseSpec, opts: &RunOptions) -> CaseReport {
    let start = Instant::now();
    let mut report = match evaluate(spec, opts) {
        Ok(r) => r,
        Err(e) => CaseReport::errored(&spec.id, &e),
    };
    if opts.timings {
        report.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    report
}

fn evaluate(spec: &CaseSpec, opts: &RunOptions) -> Result<CaseReport> {
    let t = spec.operator()?;
    let rel_tol = opts
        .rel_tol
        .or(spec.tolerances.rel_tol)
        .unwrap_or_else(|| t.default_rel_tol());
    let (s, pinv) = t.mp_inverse(rel_tol)?;
    let th = &opts.thresholds;
    let t_norm = t.norm();
    let s_norm = s.norm();
    let w = 1.0 + s_norm * s_norm;

    let mut identities = BTreeMap::new();
    let mut outcomes = Vec::new();
    let mut checks = spec.checks.clone();
    checks.sort();
    checks.dedup();
    for check in checks {
        let name = check.name();
        match check {
            Check::Penrose => {
                let r = pinv.penrose_residuals.iter().copied().fold(0.0, f64::max);
                outcomes.push(CheckOutcome::new(name, r, th.penrose * (1.0 + t_norm + s_norm)));
            }
            Check::GramLeft => {
                let r = aop::pinv_gram_left(&t, rel_tol)?.sub(&s)?.norm();
                identities.insert("gram_left".into(), r);
                outcomes.push(CheckOutcome::new(name, r, th.gram_left * w));
            }
            Check::GramRight => {
                let r = aop::pinv_gram_right(&t, rel_tol)?.sub(&s)?.norm();
                identities.insert("gram_right".into(), r);
                outcomes.push(CheckOutcome::new(name, r, th.gram_right * w));
            }
            Check::GramProduct => {
                let r = aop::gram_pinv_product_check(&t, rel_tol)?;
                identities.insert("gram_product".into(), r);
                outcomes.push(CheckOutcome::new(name, r, th.gram_product * w * w));
            }
            Check::Projections => {
                let r = aop::projection_check(&t, rel_tol)?.max();
                identities.insert("range_projection".into(), r);
                outcomes.push(CheckOutcome::new(name, r, th.projections));
            }
            Check::Decomposition => {
                let (r1, r2) = aop::decomposition_check(&t, rel_tol)?;
                identities.insert("kernel_decomposition".into(), r1.max(r2));
                outcomes.push(CheckOutcome::new(name, r1.max(r2), th.decomposition));
            }
            Check::GramRange => {
                let r = aop::gram_range_check(&t, rel_tol)?;
                identities.insert("gram_range".into(), r);
                outcomes.push(CheckOutcome::new(name, r, th.gram_range));
            }
            Check::Commutant => {
                let basis = aop::joint_commutant_basis(&t, rel_tol)?;
                let mut worst = 0.0f64;
                let mut note = None;
                for el in &basis.elements {
                    match aop::commutation_check(&t, el, rel_tol) {
                        Ok(r) => {
                            let scale = el.norm() * s_norm;
                            if scale > 0.0 {
                                worst = worst.max(r / scale);
                            }
                        }
                        Err(e) => {
                            note = Some(e.to_string());
                            break;
                        }
                    }
                }
                identities.insert("commutant_dim".into(), basis.dim as f64);
                outcomes.push(match note {
                    None => {
                        identities.insert("commutant".into(), worst);
                        CheckOutcome::new(name, worst, th.commutant)
                    }
                    Some(n) => CheckOutcome::failed(name, th.commutant, n),
                });
            }
            Check::Selfadjoint => {
                let (lhs, sa) = aop::selfadjoint_criterion(&t, rel_tol)?;
                identities.insert("selfadjoint_lhs".into(), lhs);
                identities.insert("selfadjoint_sa".into(), sa);
                // each direction is vacuous unless its premise holds
                let forward = if sa <= th.selfadjoint_sa_trigger * t_norm { lhs } else { 0.0 };
                let backward = if lhs <= th.selfadjoint_lhs_trigger * t_norm { sa } else { 0.0 };
                outcomes.push(CheckOutcome::new("selfadjoint_forward", forward, th.selfadjoint_lhs * t_norm));
                outcomes.push(CheckOutcome::new("selfadjoint_backward", backward, th.selfadjoint_sa * t_norm));
            }
            Check::BoundedTransform => {
                let c = aop::bounded_transform_check(&t)?;
                let r = c
                    .sqrt_residual
                    .max(c.q_eig_max - 1.0)
                    .max(-c.q_eig_min)
                    .max(c.f_norm - 1.0)
                    .max(0.0);
                identities.insert("bounded_transform".into(), c.sqrt_residual);
                outcomes.push(CheckOutcome::new(name, r, th.bounded_transform));
            }
            Check::Tikhonov => {
                let mut topts = TikhonovOptions::default();
                if let Some(st) = spec.tolerances.stop_tol {
                    topts.stop_tol = st;
                }
                match aop::mp_inverse_tikhonov(&t, &topts, rel_tol) {
                    Ok(lim) => {
                        identities.insert("tikhonov_gap".into(), lim.gap);
                        outcomes.push(CheckOutcome::new("tikhonov_gap", lim.gap, th.tikhonov_gap));
                        let spread = tikhonov_ratio_spread(&t, &s, &lim.omegas, topts.ratio)?;
                        outcomes.push(match spread {
                            Some(x) => {
                                identities.insert("tikhonov_ratio".into(), x);
                                CheckOutcome::new("tikhonov_ratio", x, th.tikhonov_ratio)
                            }
                            None => CheckOutcome::failed(
                                "tikhonov_ratio",
                                th.tikhonov_ratio,
                                "no step fell in the asymptotic window".into(),
                            ),
                        });
                    }
                    Err(e @ gram_pinv::Error::NoConvergence { .. }) => {
                        outcomes.push(CheckOutcome::failed("tikhonov_gap", th.tikhonov_gap, e.to_string()));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    let pass = outcomes.iter().all(|o| o.pass);
    Ok(CaseReport {
        id: spec.id.clone(),
        status: if pass { Status::Pass } else { Status::Fail },
        error: None,
        tol_used: pinv.tol_used,
        per_summand_ranks: pinv.per_summand_ranks,
        rank_stable: pinv.rank_stable,
        penrose_residuals: pinv.penrose_residuals,
        identity_residuals: identities,
        checks: outcomes,
        runtime_ms: None,
    })
}

/// Error ratios `eₙ/eₙ₋₁` with `eₙ = ‖Sₙ − T†‖` are compared with the step
/// ratio once the iteration is asymptotic: `ωₙ₋₁ ≤ σ_min²/10`, where
/// `eₙ ≈ ωₙ/σ_min³`, and while `eₙ ≥ 1e-7` so rounding in the solve does not
/// dominate. Returns the worst factor `max(q/ratio, ratio/q)`, or `None`
/// when no step qualifies.
pub fn tikhonov_ratio_spread(t: &AMatrix, dagger: &AMatrix, omegas: &[f64], ratio: f64) -> Result<Option<f64>> {
    let smin = t
        .singular_values()?
        .iter()
        .filter_map(|s| s.last().copied())
        .fold(f64::INFINITY, f64::min);
    let errors = omegas
        .iter()
        .map(|&w| Ok(aop::tikhonov_iterate(t, w)?.sub(dagger)?.norm()))
        .collect::<Result<Vec<f64>>>()?;
    let mut worst: Option<f64> = None;
    for n in 1..errors.len() {
        if omegas[n - 1] <= smin * smin / 10.0 && errors[n] >= 1e-7 {
            let q = errors[n] / errors[n - 1];
            let f = (q / ratio).max(ratio / q);
            worst = Some(worst.map_or(f, |w| w.max(f)));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{Source, Tolerances};
    use crate::format::{alg_elem_to_json, CaseSpec};
    use gram_pinv::cstar::{AlgElem, AlgebraShape};

    fn identity_case(checks: Vec<Check>) -> CaseSpec {
        let shape = AlgebraShape::new(vec![1, 2]).unwrap();
        let one = alg_elem_to_json(&AlgElem::identity(&shape));
        let zero = alg_elem_to_json(&AlgElem::zero(&shape));
        CaseSpec {
            id: "identity".into(),
            shape: vec![1, 2],
            in_len: 2,
            out_len: 2,
            source: Source::Inline {
                entries: vec![vec![one.clone(), zero.clone()], vec![zero, one]],
            },
            tolerances: Tolerances::default(),
            checks,
        }
    }

    #[test]
    fn empty_check_set_passes() {
        let r = run_suite(&[identity_case(vec![])], &RunOptions::default()).unwrap();
        assert_eq!(r.cases[0].status, Status::Pass);
        assert!(r.cases[0].checks.is_empty());
        assert!(r.cases[0].identity_residuals.is_empty());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn identity_case_has_zero_residuals() {
        let checks: Vec<Check> = Check::ALL.into_iter().filter(|&c| c != Check::Tikhonov).collect();
        let r = run_suite(&[identity_case(checks)], &RunOptions::default()).unwrap();
        let c = &r.cases[0];
        assert_eq!(c.status, Status::Pass, "{c:?}");
        assert!(c.checks.iter().all(|k| k.residual <= 1e-14), "{:?}", c.checks);
    }

    #[test]
    fn errors_stay_in_their_case() {
        let mut bad = identity_case(vec![Check::Penrose]);
        bad.id = "bad".into();
        bad.shape = vec![3];
        let r = run_suite(&[identity_case(vec![Check::Penrose]), bad], &RunOptions::default()).unwrap();
        assert_eq!(r.cases[0].id, "bad");
        assert_eq!(r.cases[0].status, Status::InputError);
        assert_eq!(r.cases[1].status, Status::Pass);
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn tightened_threshold_fails() {
        let mut case = identity_case(vec![Check::BoundedTransform]);
        case.source = Source::Generated { seed: 3, ranks: vec![2, 4] };
        let mut opts = RunOptions::default();
        opts.thresholds.set("bounded_transform", 1e-300).unwrap();
        let r = run_suite(&[case], &opts).unwrap();
        assert_eq!(r.cases[0].status, Status::Fail);
        assert_eq!(r.exit_code(), 1);
        assert!(opts.thresholds.set("nope", 1.0).is_err());
    }

    #[test]
    fn empty_suite_rejected() {
        assert!(run_suite(&[], &RunOptions::default()).is_err());
    }
}
