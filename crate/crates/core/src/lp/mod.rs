//! Simplex solver and the best-response linear program.

mod best_response;
mod simplex;

pub use best_response::{best_response, best_response_on_table, BestResponse, PayoffTable};
pub use simplex::{
    solve_columns, solve_lp, BasicSolution, ColumnSource, LinearProgram, LpDiagnostics,
    LpOptions, LpSolution, LpStatus, PivotRule, MAX_ROWS,
};

use crate::model::ModelError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("linear program must have between 1 and 64 rows, got {0}")]
    RowCount(usize),
    #[error("malformed linear program: {0}")]
    Shape(String),
    #[error("opponent policy has n={policy}, utility has n={utility}, grid has n={grid}")]
    DimensionMismatch {
        policy: usize,
        utility: usize,
        grid: usize,
    },
    #[error("simplex solver ended with status {0:?}")]
    Solver(LpStatus),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Supporting hyperplane q ↦ α·q + β.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneCertificate {
    pub alpha: Vec<f64>,
    pub beta: f64,
}

impl HyperplaneCertificate {
    pub fn evaluate(&self, q: &[f64]) -> f64 {
        self.alpha.iter().zip(q).map(|(a, x)| a * x).sum::<f64>() + self.beta
    }

    pub fn min_alpha(&self) -> f64 {
        self.alpha.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// True when α ≥ −tol componentwise and β ≥ −tol.
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.min_alpha() >= -tol && self.beta >= -tol
    }
}
