//! Closed-form symmetric equilibrium constructions, their parameter
//! machinery and a runtime registry of families.

mod fixtures;
mod independent;
mod multi;
mod registry;
pub mod roots;
mod scalars;
mod two_receiver;

pub use fixtures::{example_fixture, Fixture, FIXTURE_IDS};
pub use independent::{construct_independent_additive, IndependentPolicy};
pub use multi::{
    construct_sup_large_multi, construct_sub_large_multi_even, construct_sub_large_multi_odd,
    odd_residuals, sub_multi_even_conditions, sub_multi_even_interval, sub_multi_even_params,
    sub_multi_odd_interval,
    OddParams, SubMultiEvenParams,
};
pub use registry::{EquilibriumFamily, FamilyRegistry, FamilyRequest};
pub use scalars::{binomial_average, binomial_half, multi_scalars, MultiReceiverScalars};
pub use two_receiver::{
    construct_sub_large, construct_sub_small, construct_sup_large, construct_sup_small,
    probe_infeasible_sub, solve_mu_sup, sub_conditions, sub_feasible_interval,
    sub_feasible_interval_scan, sub_large_params, sup_large_params, FeasibleInterval,
    ProbeResult, SubLargePriorParams, SupLargePriorParams,
};

use crate::lp::HyperplaneCertificate;
use crate::model::{ModelError, Prior, Segment, SignalingPolicy, UtilityFunction, MIN_WEIGHT};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error("{family} requires {requirement}, got lambda={lambda}")]
    PriorOutOfRange {
        family: &'static str,
        lambda: f64,
        requirement: &'static str,
    },
    #[error("{family} requires {requirement}")]
    UtilityShape {
        family: &'static str,
        requirement: &'static str,
    },
    #[error("n={0} is odd; the half-size sums need an even receiver count")]
    OddReceivers(usize),
    #[error("mu={mu} lies outside the feasible set")]
    MuOutsideInterval { mu: f64 },
    #[error("no feasible mu exists for these parameters")]
    EmptyInterval,
    #[error("quadratic for the mass at the all-ones point has no real root")]
    NegativeDiscriminant,
    #[error("parameter invariant violated: {0}")]
    ParameterInvariant(String),
    #[error("Newton iteration failed to converge, best residual {residual:e}")]
    NewtonFailed { residual: f64 },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("unknown example fixture {0:?}")]
    UnknownFixture(String),
    #[error("{0} is required for this family")]
    MissingArgument(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// How a condition residual is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionKind {
    /// Holds when the value is zero.
    Equality,
    /// Holds when the value is at most zero.
    Inequality,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub kind: ConditionKind,
    pub value: f64,
}

impl ConditionCheck {
    pub fn eq(name: &'static str, value: f64) -> Self {
        Self { name, kind: ConditionKind::Equality, value }
    }

    /// Condition lhs ≤ rhs stored as lhs − rhs.
    pub fn le(name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { name, kind: ConditionKind::Inequality, value: lhs - rhs }
    }

    pub fn violation(&self) -> f64 {
        match self.kind {
            ConditionKind::Equality => self.value.abs(),
            ConditionKind::Inequality => self.value.max(0.0),
        }
    }
}

/// Typed parameters of a construction.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyParams {
    None,
    SupLarge(SupLargePriorParams),
    SubLarge(SubLargePriorParams),
    SubMultiEven(SubMultiEvenParams),
    SubMultiOdd(OddParams),
}

/// A constructed policy with its certificate and closed-form quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub family: String,
    pub prior: Prior,
    pub utility: UtilityFunction,
    pub policy: SignalingPolicy,
    pub params: FamilyParams,
    /// Closed-form supporting hyperplane when the family supplies one.
    pub certificate: Option<HyperplaneCertificate>,
    pub conditions: Vec<ConditionCheck>,
    /// Closed-form WEL(G,G) = 2·E_G[Π(q,G)].
    pub welfare: Option<f64>,
    /// Closed-form price-of-stability bound.
    pub pos_bound: Option<f64>,
}

impl Construction {
    pub fn max_violation(&self) -> f64 {
        self.conditions.iter().map(ConditionCheck::violation).fold(0.0, f64::max)
    }

    /// Named scalar parameters for display.
    pub fn named_params(&self) -> Vec<(&'static str, f64)> {
        match &self.params {
            FamilyParams::None => Vec::new(),
            FamilyParams::SupLarge(p) => vec![
                ("mu", p.mu_s),
                ("p_hat", p.p_hat),
                ("alpha", p.alpha),
                ("beta", p.beta),
            ],
            FamilyParams::SubLarge(p) => vec![
                ("mu", p.mu),
                ("ell", p.ell),
                ("p_hat", p.p_hat),
                ("alpha", p.alpha),
                ("beta", p.beta),
            ],
            FamilyParams::SubMultiEven(p) => vec![
                ("mu", p.mu),
                ("ell", p.ell),
                ("p_hat", p.p_hat),
                ("alpha", p.alpha),
                ("beta", p.beta),
            ],
            FamilyParams::SubMultiOdd(p) => vec![
                ("mu1", p.mu1),
                ("mu2", p.mu2),
                ("ell1", p.ell1),
                ("ell2", p.ell2),
                ("p_hat1", p.p_hat1),
                ("p_hat2", p.p_hat2),
                ("alpha1", p.alpha1),
                ("alpha2", p.alpha2),
                ("beta", p.beta),
                ("residual", p.residual_norm),
            ],
        }
    }
}

/// Collects pieces, dropping those at or below the weight floor and
/// renormalizing so the remainder sums to one.
#[derive(Debug, Default)]
pub(crate) struct PolicyBuilder {
    atoms: Vec<crate::model::Atom>,
    segments: Vec<Segment>,
}

impl PolicyBuilder {
    pub fn atom(mut self, weight: f64, point: Vec<f64>) -> Self {
        if weight > MIN_WEIGHT {
            self.atoms.push(crate::model::Atom { weight, point });
        }
        self
    }

    pub fn segment(mut self, weight: f64, a: Vec<f64>, b: Vec<f64>) -> Self {
        if weight > MIN_WEIGHT {
            self.segments.push(Segment { weight, a, b });
        }
        self
    }

    pub fn build(mut self, n: usize) -> Result<SignalingPolicy, ModelError> {
        let total: f64 = self.atoms.iter().map(|a| a.weight).sum::<f64>()
            + self.segments.iter().map(|s| s.weight).sum::<f64>();
        for a in &mut self.atoms {
            a.weight /= total;
        }
        for s in &mut self.segments {
            s.weight /= total;
        }
        SignalingPolicy::new(n, self.atoms, self.segments)
    }
}

/// Anonymous values v(0..=n), failing for general tables.
pub(crate) fn anonymous_values<'a>(
    v: &'a UtilityFunction,
    family: &'static str,
) -> Result<&'a [f64], EquilibriumError> {
    v.anonymous_values().ok_or(EquilibriumError::UtilityShape {
        family,
        requirement: "an anonymous utility",
    })
}

pub(crate) fn require_large_prior(prior: Prior, family: &'static str) -> Result<f64, EquilibriumError> {
    let lambda = prior.lambda();
    if lambda > 0.5 {
        Ok(lambda)
    } else {
        Err(EquilibriumError::PriorOutOfRange {
            family,
            lambda,
            requirement: "lambda > 1/2",
        })
    }
}

pub(crate) fn require_small_prior(prior: Prior, family: &'static str) -> Result<f64, EquilibriumError> {
    let lambda = prior.lambda();
    if lambda <= 0.5 {
        Ok(lambda)
    } else {
        Err(EquilibriumError::PriorOutOfRange {
            family,
            lambda,
            requirement: "lambda <= 1/2",
        })
    }
}

/// Fails with the first condition whose violation exceeds `tol`.
pub(crate) fn check_conditions(conditions: &[ConditionCheck], tol: f64) -> Result<(), EquilibriumError> {
    match conditions.iter().find(|c| c.violation() > tol) {
        Some(c) => Err(EquilibriumError::ParameterInvariant(format!(
            "{} off by {:e}",
            c.name,
            c.violation()
        ))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_violations() {
        assert_eq!(ConditionCheck::le("a", 1.0, 2.0).violation(), 0.0);
        assert_eq!(ConditionCheck::le("a", 2.0, 1.0).violation(), 1.0);
        assert_eq!(ConditionCheck::eq("b", -0.5).violation(), 0.5);
    }

    #[test]
    fn builder_drops_negligible_pieces() {
        let g = PolicyBuilder::default()
            .atom(1.0, vec![0.5])
            .segment(1e-13, vec![0.0], vec![1.0])
            .build(1)
            .unwrap();
        assert!(g.is_atomic());
        assert_eq!(g.atoms()[0].weight, 1.0);
    }
}
