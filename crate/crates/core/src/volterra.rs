//! Discretized Volterra operator `(Vf)(x) = ∫₀ˣ f(y) dy` on `L²[0, 1]`.
//!
//! `V` is injective with dense but non-closed range, and `f(x) = x` lies in
//! the range of `V` but not in the range of `VV*`: a solution of `VV*g = f`
//! would need `f'(1) = 0`. At any fixed grid size the discretized system is
//! invertible, so every finite identity holds; what survives of the
//! continuous obstruction is the trend as the grid is refined. The
//! minimum-norm solutions `g_n` blow up in the discrete `L²` norm while the
//! same solve applied to a right-hand side known to lie in the range of
//! `VV*` stays bounded.
//!
//! The quadrature is the left-rectangle rule on the midpoint grid
//! `xᵢ = (i + ½)h`, `h = 1/n`, with uniform weights, so the discrete adjoint
//! is the plain conjugate transpose.

use num_complex::Complex64;

use crate::densela::{self, ComplexMatrix};
use crate::error::{Error, Result};

/// Rank tolerance used throughout the study.
pub const STUDY_REL_TOL: f64 = 1e-10;

/// Default grid ladder.
pub const DEFAULT_GRIDS: [usize; 4] = [16, 32, 64, 128];

/// Results per grid size; all sequences are indexed like `grid_sizes`.
#[derive(Debug, Clone, PartialEq)]
pub struct VolterraStudy {
    pub grid_sizes: Vec<usize>,
    /// `‖g_n‖ₕ` for the minimum-norm solution of `VV*g = f`, `f(x) = x`.
    pub solution_norms: Vec<f64>,
    /// `‖VV*g_n − f‖ₕ`.
    pub lss_residuals: Vec<f64>,
    /// `‖g_n‖ₕ` for the control right-hand side `f = VV*g₀`.
    pub control_norms: Vec<f64>,
    /// Spectral condition number of `VV*`.
    pub condition_numbers: Vec<f64>,
    /// `‖V† − V*(VV*)†‖`.
    pub gram_identity_gaps: Vec<f64>,
    /// Largest Penrose residual of `V†`.
    pub penrose_max: Vec<f64>,
}

/// Midpoint grid `xᵢ = (i + ½)/n`.
pub fn grid(n: usize) -> Vec<f64> {
    let h = 1.0 / n as f64;
    (0..n).map(|i| (i as f64 + 0.5) * h).collect()
}

/// `V[i][j] = h` for `j ≤ i`, zero above the diagonal.
pub fn build_volterra(n: usize) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("Volterra grid needs n >= 2, got {n}")));
    }
    let h = 1.0 / n as f64;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        Complex64::new(if j <= i { h } else { 0.0 }, 0.0)
    }))
}

/// Smooth density used for the in-range control.
pub fn control_density(x: f64) -> f64 {
    (std::f64::consts::PI * x).cos() + 0.5
}

/// `(h · Σ|vᵢ|²)^{1/2}` for a column vector.
pub fn h_norm(v: &ComplexMatrix, h: f64) -> f64 {
    (h * v.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
}

fn column(values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(values.len(), 1, |i, _| Complex64::new(values[i], 0.0))
}

pub fn no_solution_study(grid_sizes: &[usize]) -> Result<VolterraStudy> {
    if grid_sizes.is_empty() {
        return Err(Error::InvalidArgument("need at least one grid size".into()));
    }
    if let Some(&n) = grid_sizes.iter().find(|&&n| n < 4) {
        return Err(Error::InvalidArgument(format!("grid sizes must be >= 4, got {n}")));
    }
    if grid_sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("grid sizes must be strictly ascending".into()));
    }
    let mut study = VolterraStudy {
        grid_sizes: grid_sizes.to_vec(),
        solution_norms: Vec::new(),
        lss_residuals: Vec::new(),
        control_norms: Vec::new(),
        condition_numbers: Vec::new(),
        gram_identity_gaps: Vec::new(),
        penrose_max: Vec::new(),
    };
    for &n in grid_sizes {
        let h = 1.0 / n as f64;
        let xs = grid(n);
        let v = build_volterra(n)?;
        let vs = v.adjoint();
        let gram = v.mat_mul(&vs)?;

        let gram_pinv = densela::pinv_detailed(&gram, STUDY_REL_TOL)?;
        let sing = &gram_pinv.factors.singulars;
        let smin = sing.last().copied().unwrap_or(0.0);
        study
            .condition_numbers
            .push(if smin > 0.0 { sing[0] / smin } else { f64::INFINITY });

        let f = column(&xs);
        let g = gram_pinv.inverse.mat_mul(&f)?;
        study.solution_norms.push(h_norm(&g, h));
        study
            .lss_residuals
            .push(h_norm(&gram.mat_mul(&g)?.sub(&f)?, h));

        let g0 = column(&xs.iter().map(|&x| control_density(x)).collect::<Vec<_>>());
        let f0 = gram.mat_mul(&g0)?;
        study
            .control_norms
            .push(h_norm(&gram_pinv.inverse.mat_mul(&f0)?, h));

        let v_pinv = densela::pinv_svd(&v, STUDY_REL_TOL)?;
        let gram_route = vs.mat_mul(&gram_pinv.inverse)?;
        study
            .gram_identity_gaps
            .push(v_pinv.sub(&gram_route)?.norm2());
        let pen = densela::penrose_residuals(&v, &v_pinv)?;
        study.penrose_max.push(pen.into_iter().fold(0.0, f64::max));
    }
    Ok(study)
}
