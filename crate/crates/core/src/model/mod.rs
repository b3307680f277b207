//! Core domain types: priors, utility functions, signaling policies and grids.

mod format;
mod grid;
mod policy;
mod utility;

pub use format::{
    format_exact, format_float, parse_policy_file, parse_utility_file, write_policy_file, write_utility_file,
    PolicyFile,
};
pub use grid::Grid;
pub use policy::{
    check_bayes_plausible, discretize_policy, segment_atom_parameter, segment_point, Atom,
    Segment, SignalingPolicy, MIN_WEIGHT, WEIGHT_SUM_TOL,
};
pub use utility::{
    validate_utility, Curvature, UtilityFunction, UtilityKind, ValidationReport, Violation,
    MAX_RECEIVERS,
};

use thiserror::Error;

/// Errors raised while building or parsing model objects.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("prior must lie strictly between 0 and 1, got {0}")]
    InvalidPrior(f64),
    #[error("receiver count must be between 1 and {max}, got {got}")]
    ReceiverCount { got: usize, max: usize },
    #[error("utility table for n={n} needs {expected} values, got {got}")]
    DimensionMismatch { n: usize, expected: usize, got: usize },
    #[error("utility value for subset {mask:#b} must be finite and nonnegative, got {value}")]
    InvalidUtilityValue { mask: usize, value: f64 },
    #[error("weight {0} is not above the minimum weight 1e-12")]
    WeightTooSmall(f64),
    #[error("weights sum to {0}, expected 1 within 1e-12")]
    WeightSum(f64),
    #[error("point has {got} coordinates, expected {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("coordinate {0} lies outside [0,1]")]
    CoordinateOutOfRange(f64),
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("policy has no atoms and no segments")]
    EmptyPolicy,
    #[error("grid needs at least 2 points per axis, got {0}")]
    GridTooSmall(usize),
    #[error("grid with {points_per_axis}^{n} points is too large")]
    GridTooLarge { n: usize, points_per_axis: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Probability that a sender's quality is high.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Prior(f64);

impl Prior {
    pub fn new(lambda: f64) -> Result<Self, ModelError> {
        if lambda.is_finite() && lambda > 0.0 && lambda < 1.0 {
            Ok(Self(lambda))
        } else {
            Err(ModelError::InvalidPrior(lambda))
        }
    }

    pub fn lambda(self) -> f64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prior_bounds() {
        assert!(Prior::new(0.3).is_ok());
        assert!(Prior::new(0.0).is_err());
        assert!(Prior::new(1.0).is_err());
        assert!(Prior::new(f64::NAN).is_err());
    }
}
