use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use persuasion::model::{parse_utility_file, UtilityFunction};
use persuasion::payoff::DEFAULT_K;

use crate::error::CliError;

pub const DEFAULT_GRID: usize = 51;

#[derive(Debug, Parser)]
#[command(name = "persuade", version, about = "Construct, verify and analyze symmetric equilibria of competitive persuasion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a named equilibrium and write it as a policy file.
    Construct(ConstructArgs),
    /// Check a policy against its own best response on a grid.
    Verify(VerifyArgs),
    /// Best response on a grid to an opponent policy.
    BestResponse(BestResponseArgs),
    /// Price-of-stability bound from a named family.
    Pos(PosArgs),
    /// Feasible-mass region of the submodular large-prior families.
    Region(RegionArgs),
    /// Run every sweep of a TOML spec and write one CSV per figure.
    Sweep(SweepArgs),
}

/// Ways to specify a utility function; at most one may be given.
#[derive(Debug, Clone, Default, Args)]
pub struct UtilityArgs {
    /// Two-receiver utility (0, ρ, 1).
    #[arg(long, group = "utility")]
    pub rho: Option<f64>,
    /// Anonymous values v(0),…,v(n).
    #[arg(long, value_delimiter = ',', num_args = 1.., group = "utility")]
    pub v: Option<Vec<f64>>,
    /// Power utility v(k) = k^τ.
    #[arg(long, group = "utility")]
    pub tau: Option<f64>,
    /// Utility file.
    #[arg(long, group = "utility")]
    pub utility_file: Option<PathBuf>,
}

impl UtilityArgs {
    /// The utility for `n` receivers, or `None` when nothing was given.
    pub fn resolve(&self, n: usize) -> Result<Option<UtilityFunction>, CliError> {
        let v = if let Some(rho) = self.rho {
            if n != 2 {
                return Err(CliError::Usage(format!("--rho describes two receivers, but n={n}")));
            }
            UtilityFunction::two_receiver(rho)?
        } else if let Some(values) = &self.v {
            if values.len() != n + 1 {
                return Err(CliError::Usage(format!(
                    "--v needs n+1 = {} values, got {}",
                    n + 1,
                    values.len()
                )));
            }
            UtilityFunction::anonymous(values.clone())?
        } else if let Some(tau) = self.tau {
            UtilityFunction::power(n, tau)?
        } else if let Some(path) = &self.utility_file {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let v = parse_utility_file(&text).map_err(|source| CliError::Input { path: path.clone(), source })?;
            if v.n() != n {
                return Err(CliError::Usage(format!("utility file has n={}, expected n={n}", v.n())));
            }
            v
        } else {
            return Ok(None);
        };
        Ok(Some(v))
    }

    /// Receiver count implied by the arguments, if any.
    pub fn implied_n(&self) -> Option<usize> {
        if self.rho.is_some() {
            Some(2)
        } else {
            self.v.as_ref().map(|v| v.len().saturating_sub(1))
        }
    }

    pub fn require(&self, n: usize) -> Result<UtilityFunction, CliError> {
        self.resolve(n)?
            .ok_or_else(|| CliError::Usage("a utility is required: pass --rho, --v, --tau or --utility-file".into()))
    }

    /// The ρ or τ parameter for CSV output.
    pub fn shape_parameter(&self) -> Option<f64> {
        self.rho.or(self.tau)
    }
}

/// Family selection shared by construct, verify and pos.
#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Family name, or example:<id> for a worked example.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Receiver count; inferred from --rho or --v when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub utility: UtilityArgs,
    /// Mass parameter for families with a feasible range.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Half-width for example:ex31.
    #[arg(long)]
    pub c: Option<f64>,
    /// Piece count for example:ex43b.
    #[arg(long)]
    pub pieces: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Policy output file; stdout when omitted.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    /// Also write the utility to this file.
    #[arg(long)]
    pub utility_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct GridArgs {
    /// Grid points per axis.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Atoms per segment when discretizing.
    #[arg(long = "K", default_value_t = DEFAULT_K)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Policy file to verify.
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    pub policy: Option<PathBuf>,
    /// Prior; defaults to the one recorded in the policy file.
    #[arg(long)]
    pub prior: Option<f64>,
    #[command(flatten)]
    pub utility: UtilityArgs,
    /// Build this family in-process instead, which also checks its
    /// closed-form certificate.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, requires = "family")]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, requires = "family")]
    pub mu: Option<f64>,
    #[arg(long, requires = "family")]
    pub c: Option<f64>,
    #[arg(long, requires = "family")]
    pub pieces: Option<usize>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Write the CSV row here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Exit with code 3 when the gap exceeds the tolerance.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct BestResponseArgs {
    #[arg(long)]
    pub opponent: PathBuf,
    /// Prior; defaults to the one recorded in the opponent file.
    #[arg(long)]
    pub prior: Option<f64>,
    #[command(flatten)]
    pub utility: UtilityArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Output file for the best-response policy; stdout when omitted.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PosArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionTarget {
    /// Two receivers over ρ ∈ [½, 1].
    Sub2,
    /// n receivers with v(k) = k^τ over τ ∈ (0, 1].
    SubMulti,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long, value_enum)]
    pub target: RegionTarget,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Step of the feasibility scan over μ.
    #[arg(long, default_value_t = 1e-3)]
    pub scan_step: f64,
    /// Spacing of the utility parameter (ρ or τ) rows.
    #[arg(long, default_value_t = 0.01)]
    pub param_step: f64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Output directory for the figure CSVs.
    #[arg(short = 'o', long)]
    pub output: PathBuf,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub threads: Option<usize>,
}
