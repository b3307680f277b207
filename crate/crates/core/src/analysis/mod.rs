//! Equilibrium verification, structural screens, welfare and price of
//! stability.

mod diagnostics;
mod verify;
mod welfare;

pub use diagnostics::{structural_diagnostics, StructuralDiagnostics};
pub use verify::{
    verify_construction, verify_equilibrium, verify_with_certificate, ClosedFormCheck,
    EquilibriumReport, CLOSED_FORM_ALERT,
};
pub use welfare::{
    full_disclosure_policy, optimal_welfare, optimal_welfare_by_splits, pos_bound, OptimalWelfare,
    PoSResult,
};

use crate::equilibria::EquilibriumError;
use crate::lp::LpError;
use crate::model::{Grid, ModelError};
use thiserror::Error;

/// Grid-step coefficient of the verification tolerance.
pub const TOL_GRID_COEFF: f64 = 2.0;
/// Discretization coefficient of the verification tolerance.
pub const TOL_K_COEFF: f64 = 2.0;

/// Verdict tolerance c₁·h·Vmax + c₂·Vmax/K.
pub fn tolerance(grid: Grid, k: usize, vmax: f64) -> f64 {
    TOL_GRID_COEFF * grid.step() * vmax + TOL_K_COEFF * vmax / k as f64
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("policy has n={policy} but utility has n={utility}")]
    DimensionMismatch { policy: usize, utility: usize },
    #[error("family {0} supplies no closed-form welfare")]
    NoWelfare(String),
    #[error("closed-form bound {bound} disagrees with welfare ratio {ratio}")]
    InconsistentBound { bound: f64, ratio: f64 },
}
