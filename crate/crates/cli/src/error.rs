use std::path::PathBuf;

use persuasion::analysis::AnalysisError;
use persuasion::equilibria::EquilibriumError;
use persuasion::lp::LpError;
use persuasion::model::ModelError;
use thiserror::Error;

/// Exit code for invalid arguments or unreadable input.
pub const EXIT_USAGE: i32 = 2;
/// Exit code when parameters fall outside a family's region.
pub const EXIT_REGION: i32 = 3;
/// Exit code for numerical solver failures.
pub const EXIT_SOLVER: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: ModelError },
    #[error("sweep spec {path}: {message}")]
    Spec { path: PathBuf, message: String },
    #[error("{0}")]
    Region(String),
    #[error("{0}")]
    Solver(String),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Region(_) => EXIT_REGION,
            Self::Solver(_) => EXIT_SOLVER,
            Self::Csv(_) => EXIT_USAGE,
            Self::Usage(_) | Self::Io { .. } | Self::Input { .. } | Self::Spec { .. } => EXIT_USAGE,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<EquilibriumError> for CliError {
    fn from(e: EquilibriumError) -> Self {
        use EquilibriumError as E;
        match e {
            E::PriorOutOfRange { .. }
            | E::UtilityShape { .. }
            | E::OddReceivers(_)
            | E::MuOutsideInterval { .. }
            | E::EmptyInterval
            | E::NegativeDiscriminant
            | E::ParameterInvariant(_) => Self::Region(format!("no equilibrium from this family: {e}")),
            E::NewtonFailed { .. } => Self::Solver(e.to_string()),
            E::UnknownFamily(_) | E::UnknownFixture(_) | E::MissingArgument(_) | E::Model(_) => {
                Self::Usage(e.to_string())
            }
        }
    }
}

impl From<LpError> for CliError {
    fn from(e: LpError) -> Self {
        match e {
            LpError::Solver(_) | LpError::RowCount(_) | LpError::Shape(_) => Self::Solver(e.to_string()),
            LpError::DimensionMismatch { .. } | LpError::Model(_) => Self::Usage(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Lp(e) => e.into(),
            AnalysisError::Equilibrium(e) => e.into(),
            AnalysisError::Model(e) => e.into(),
            AnalysisError::DimensionMismatch { .. } => Self::Usage(e.to_string()),
            AnalysisError::NoWelfare(_) => Self::Region(format!("no bound available from this family: {e}")),
            AnalysisError::InconsistentBound { .. } => Self::Solver(e.to_string()),
        }
    }
}
