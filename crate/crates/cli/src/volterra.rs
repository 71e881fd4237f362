use std::fmt::Write as _;

use gram_pinv::volterra::{no_solution_study, VolterraStudy};
use serde::Serialize;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolterraReport {
    pub grid_sizes: Vec<usize>,
    pub solution_norms: Vec<f64>,
    pub lss_residuals: Vec<f64>,
    pub control_norms: Vec<f64>,
    pub condition_numbers: Vec<f64>,
    pub gram_identity_gaps: Vec<f64>,
    pub penrose_max: Vec<f64>,
    /// Whether the ramp solutions grow strictly with the grid.
    pub diverging: bool,
    /// Largest over smallest control solution norm.
    pub control_spread: f64,
    /// Smallest condition number ratio between consecutive grids.
    pub min_condition_growth: f64,
}

impl From<VolterraStudy> for VolterraReport {
    fn from(s: VolterraStudy) -> Self {
        let diverging = s.solution_norms.windows(2).all(|w| w[1] > w[0]);
        let lo = s.control_norms.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = s.control_norms.iter().copied().fold(0.0, f64::max);
        let min_condition_growth = s
            .condition_numbers
            .windows(2)
            .map(|w| w[1] / w[0])
            .fold(f64::INFINITY, f64::min);
        VolterraReport {
            grid_sizes: s.grid_sizes,
            solution_norms: s.solution_norms,
            lss_residuals: s.lss_residuals,
            control_norms: s.control_norms,
            condition_numbers: s.condition_numbers,
            gram_identity_gaps: s.gram_identity_gaps,
            penrose_max: s.penrose_max,
            diverging,
            control_spread: hi / lo,
            min_condition_growth,
        }
    }
}

impl VolterraReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>6} {:>10} {:>10} {:>10} {:>10} {:>10}",
            "n", "|g_n|", "control", "cond", "gram gap", "penrose"
        );
        for i in 0..self.grid_sizes.len() {
            let _ = writeln!(
                out,
                "{:>6} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e}",
                self.grid_sizes[i],
                self.solution_norms[i],
                self.control_norms[i],
                self.condition_numbers[i],
                self.gram_identity_gaps[i],
                self.penrose_max[i]
            );
        }
        let _ = writeln!(
            out,
            "diverging: {}, control spread {:.3}, condition growth >= {:.3}",
            self.diverging, self.control_spread, self.min_condition_growth
        );
        out
    }
}

pub fn volterra_report(grids: &[usize]) -> Result<VolterraReport> {
    Ok(no_solution_study(grids)?.into())
}
