//! Batch harness around `gram-pinv`: case files, corpus generation and the
//! verification runner behind the `gram-pinv` binary.

pub mod error;
pub mod format;
pub mod generate;
pub mod runner;
pub mod volterra;

pub use error::{CliError, Result};
pub use format::{parse_case_file, parse_case_str, CaseFile, CaseSpec, Check, Source, Tolerances};
pub use generate::{gen_cases, GenConfig, RankProfile};
pub use runner::{run_suite, CaseReport, RunOptions, RunReport, Status, Thresholds};
pub use volterra::{volterra_report, VolterraReport};
