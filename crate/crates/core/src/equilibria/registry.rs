//! Runtime registry of equilibrium families selected by name.

use std::collections::BTreeMap;

use super::fixtures::{example_fixture, FIXTURE_IDS};
use super::independent::construct_independent_additive;
use super::multi::{construct_sub_large_multi_even, construct_sub_large_multi_odd, construct_sup_large_multi};
use super::two_receiver::{construct_sub_large, construct_sub_small, construct_sup_large, construct_sup_small};
use super::{Construction, EquilibriumError, FamilyParams};
use crate::model::{Prior, UtilityFunction};

/// Inputs shared by every family; unused fields are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyRequest {
    pub prior: Prior,
    pub utility: Option<UtilityFunction>,
    /// Mass parameter for families with a feasible range.
    pub mu: Option<f64>,
    /// Half-width for the ex31 example.
    pub c: Option<f64>,
    /// Piece count for the ex43b example.
    pub pieces: Option<usize>,
}

impl FamilyRequest {
    pub fn new(prior: Prior, utility: UtilityFunction) -> Self {
        Self { prior, utility: Some(utility), mu: None, c: None, pieces: None }
    }

    fn utility(&self) -> Result<&UtilityFunction, EquilibriumError> {
        self.utility.as_ref().ok_or(EquilibriumError::MissingArgument("a utility function"))
    }
}

/// A named constructor of symmetric equilibria.
pub trait EquilibriumFamily: Send + Sync {
    fn name(&self) -> &str;

    fn description(&self) -> &str;

    fn construct(&self, req: &FamilyRequest) -> Result<Construction, EquilibriumError>;

    /// Family that covers λ ≤ ½ for the same utility class.
    fn small_prior_counterpart(&self) -> Option<&str> {
        None
    }
}

type Builder = Box<dyn Fn(&FamilyRequest) -> Result<Construction, EquilibriumError> + Send + Sync>;

struct FnFamily {
    name: String,
    description: &'static str,
    small: Option<&'static str>,
    build: Builder,
}

impl EquilibriumFamily for FnFamily {
    fn name(&self) -> &str {
        &self.name
    }

    fn description(&self) -> &str {
        self.description
    }

    fn construct(&self, req: &FamilyRequest) -> Result<Construction, EquilibriumError> {
        (self.build)(req)
    }

    fn small_prior_counterpart(&self) -> Option<&str> {
        self.small
    }
}

#[derive(Default)]
pub struct FamilyRegistry {
    entries: BTreeMap<String, Box<dyn EquilibriumFamily>>,
}

impl FamilyRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry with every built-in family and example fixture.
    pub fn standard() -> Self {
        let mut reg = Self::new();
        let mut add = |name: &str, description, small, build: Builder| {
            reg.register(Box::new(FnFamily { name: name.to_string(), description, small, build }));
        };
        add(
            "sup-small",
            "diagonal segment to 2λ·1 for supermodular v and λ ≤ 1/2",
            None,
            Box::new(|r| construct_sup_small(r.prior, r.utility()?)),
        );
        add(
            "sub-small",
            "split-half anti-diagonal for submodular v and λ ≤ 1/2",
            None,
            Box::new(|r| construct_sub_small(r.prior, r.utility()?)),
        );
        add(
            "sup-large",
            "two receivers, diagonal plus mass at (1,1) for supermodular v and λ > 1/2",
            Some("sup-small"),
            Box::new(|r| construct_sup_large(r.prior, r.utility()?)),
        );
        add(
            "sub-large",
            "two receivers, axis segments plus anti-diagonal for submodular v and λ > 1/2",
            Some("sub-small"),
            Box::new(|r| construct_sub_large(r.prior, r.utility()?, r.mu)),
        );
        add(
            "sup-multi",
            "n receivers, diagonal plus mass at 1 for supermodular v and λ > 1/2",
            Some("sup-small"),
            Box::new(|r| construct_sup_large_multi(r.prior, r.utility()?)),
        );
        add(
            "sub-multi-even",
            "even n, split-half axis blocks plus anti-diagonal for submodular v and λ > 1/2",
            Some("sub-small"),
            Box::new(|r| construct_sub_large_multi_even(r.prior, r.utility()?, r.mu)),
        );
        add(
            "sub-multi-odd",
            "odd n, two-block construction solved numerically for submodular v and λ > 1/2",
            Some("sub-small"),
            Box::new(|r| construct_sub_large_multi_odd(r.prior, r.utility()?, r.mu)),
        );
        add(
            "independent",
            "independent single-receiver marginals for additive v",
            None,
            Box::new(|r| {
                let v = r.utility()?;
                construct_independent_additive(r.prior, v)?.to_construction(v)
            }),
        );
        for id in FIXTURE_IDS {
            add(
                &format!("example:{id}"),
                "worked example policy with its own prior and utility",
                None,
                Box::new(move |r| {
                    let f = example_fixture(id, r.c, r.pieces)?;
                    Ok(Construction {
                        family: format!("example:{id}"),
                        prior: f.prior,
                        utility: f.utility,
                        policy: f.policy,
                        params: FamilyParams::None,
                        certificate: None,
                        conditions: Vec::new(),
                        welfare: None,
                        pos_bound: None,
                    })
                }),
            );
        }
        reg
    }

    /// Adds a family, replacing any family of the same name.
    pub fn register(&mut self, family: Box<dyn EquilibriumFamily>) {
        self.entries.insert(family.name().to_string(), family);
    }

    pub fn get(&self, name: &str) -> Result<&dyn EquilibriumFamily, EquilibriumError> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| EquilibriumError::UnknownFamily(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn construct(&self, name: &str, req: &FamilyRequest) -> Result<Construction, EquilibriumError> {
        self.get(name)?.construct(req)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_registry_lists_families() {
        let reg = FamilyRegistry::standard();
        let names: Vec<&str> = reg.names().collect();
        for n in ["sup-large", "sub-multi-odd", "independent", "example:ex43b"] {
            assert!(names.contains(&n), "{n}");
        }
        assert_eq!(reg.get("sup-large").unwrap().small_prior_counterpart(), Some("sup-small"));
        assert!(matches!(reg.get("nope"), Err(EquilibriumError::UnknownFamily(_))));
    }

    #[test]
    fn construct_by_name() {
        let reg = FamilyRegistry::standard();
        let req = FamilyRequest::new(Prior::new(0.75).unwrap(), UtilityFunction::two_receiver(0.5).unwrap());
        let g = reg.construct("sup-large", &req).unwrap();
        assert_eq!(g.family, "sup-large");
        let mut req = req;
        req.utility = None;
        assert!(matches!(reg.construct("sup-large", &req), Err(EquilibriumError::MissingArgument(_))));
        let ex = reg.construct("example:ex31", &req).unwrap();
        assert_eq!(ex.prior.lambda(), 0.5);
    }

    #[test]
    fn custom_family_registration() {
        struct Fixed;
        impl EquilibriumFamily for Fixed {
            fn name(&self) -> &str {
                "fixed"
            }
            fn description(&self) -> &str {
                "test"
            }
            fn construct(&self, req: &FamilyRequest) -> Result<Construction, EquilibriumError> {
                construct_sup_small(req.prior, req.utility()?)
            }
        }
        let mut reg = FamilyRegistry::new();
        reg.register(Box::new(Fixed));
        let req = FamilyRequest::new(Prior::new(0.3).unwrap(), UtilityFunction::two_receiver(0.2).unwrap());
        assert!(reg.construct("fixed", &req).is_ok());
    }
}
