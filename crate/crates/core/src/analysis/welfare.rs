//! Optimal split welfare, price-of-stability bounds and the full-disclosure
//! probe policy.

use super::AnalysisError;
use crate::equilibria::{FamilyRegistry, FamilyRequest};
use crate::model::{Atom, Prior, SignalingPolicy, UtilityFunction};

/// max over splits S of V(S) + V([n]∖S).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalWelfare {
    pub value: f64,
    /// Bitmask of S for one maximizing split.
    pub split: usize,
}

/// Exhaustive enumeration over all 2^n splits.
pub fn optimal_welfare_by_splits(v: &UtilityFunction) -> OptimalWelfare {
    let full = (1usize << v.n()) - 1;
    let mut best = OptimalWelfare { value: f64::NEG_INFINITY, split: 0 };
    for s in 0..=full {
        let w = v.value(s) + v.value(full & !s);
        if w > best.value {
            best = OptimalWelfare { value: w, split: s };
        }
    }
    best
}

/// Scan over |S| for anonymous utilities, split enumeration otherwise.
pub fn optimal_welfare(v: &UtilityFunction) -> OptimalWelfare {
    let Some(values) = v.anonymous_values() else {
        return optimal_welfare_by_splits(v);
    };
    let n = v.n();
    let mut best = OptimalWelfare { value: f64::NEG_INFINITY, split: 0 };
    for k in 0..=n {
        let w = values[k] + values[n - k];
        if w > best.value {
            best = OptimalWelfare { value: w, split: (1usize << k) - 1 };
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoSResult {
    /// Family whose construction supplied the welfare.
    pub family: String,
    pub lambda: f64,
    pub n: usize,
    pub mu: Option<f64>,
    pub optimal_welfare: f64,
    pub optimal_split: usize,
    pub equilibrium_welfare: f64,
    pub ratio: f64,
    pub closed_form_bound: Option<f64>,
}

/// PoS bound from the named family. For λ ≤ ½ the family's small-prior
/// counterpart is used. The closed-form bound must agree with
/// optimal/equilibrium welfare.
pub fn pos_bound(registry: &FamilyRegistry, family: &str, req: &FamilyRequest) -> Result<PoSResult, AnalysisError> {
    let mut fam = registry.get(family)?;
    if req.prior.lambda() <= 0.5 {
        if let Some(small) = fam.small_prior_counterpart() {
            fam = registry.get(small)?;
        }
    }
    let c = fam.construct(req)?;
    let welfare = c.welfare.ok_or_else(|| AnalysisError::NoWelfare(c.family.clone()))?;
    let opt = optimal_welfare(&c.utility);
    let ratio = opt.value / welfare;
    if let Some(bound) = c.pos_bound {
        if (bound - ratio).abs() > 1e-9 * ratio.abs().max(1.0) {
            return Err(AnalysisError::InconsistentBound { bound, ratio });
        }
    }
    let mu = c
        .named_params()
        .into_iter()
        .find(|(k, _)| *k == "mu" || *k == "mu1")
        .map(|(_, x)| x);
    Ok(PoSResult {
        family: c.family.clone(),
        lambda: c.prior.lambda(),
        n: c.utility.n(),
        mu,
        optimal_welfare: opt.value,
        optimal_split: opt.split,
        equilibrium_welfare: welfare,
        ratio,
        closed_form_bound: c.pos_bound,
    })
}

/// Correlated full disclosure: all receivers learn the quality together, so
/// the posterior is 1 with probability λ and 0 otherwise.
pub fn full_disclosure_policy(prior: Prior, n: usize) -> Result<SignalingPolicy, AnalysisError> {
    let lambda = prior.lambda();
    Ok(SignalingPolicy::from_atoms(
        n,
        vec![
            Atom { weight: 1.0 - lambda, point: vec![0.0; n] },
            Atom { weight: lambda, point: vec![1.0; n] },
        ],
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optimal_welfare_examples() {
        let v = UtilityFunction::two_receiver(0.3).unwrap();
        let o = optimal_welfare(&v);
        assert_eq!((o.value, o.split), (1.0, 0));
        let v = UtilityFunction::anonymous(vec![0.0, 1.0, 1.001]).unwrap();
        let o = optimal_welfare(&v);
        assert_eq!(o.value, 2.0);
        assert_eq!(o.split.count_ones(), 1);
        let v = UtilityFunction::additive(4, 1.0).unwrap();
        assert_eq!(optimal_welfare(&v).value, 4.0);
    }

    #[test]
    fn two_routes_agree() {
        for tau in [0.3, 0.5, 1.0, 1.7, 3.0] {
            for n in 1..=6 {
                let v = UtilityFunction::power(n, tau).unwrap();
                assert_eq!(optimal_welfare(&v).value, optimal_welfare_by_splits(&v).value);
            }
        }
    }

    #[test]
    fn pos_examples() {
        let reg = FamilyRegistry::standard();
        let req = |l: f64, rho: f64| FamilyRequest::new(Prior::new(l).unwrap(), UtilityFunction::two_receiver(rho).unwrap());
        assert_eq!(pos_bound(&reg, "sup-large", &req(0.5, 0.3)).unwrap().ratio, 1.0);
        let r = pos_bound(&reg, "sup-large", &req(0.75, 0.5)).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-15);
        assert!((r.mu.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        for l in [0.55, 0.7, 0.95] {
            let r = pos_bound(&reg, "sup-large", &req(l, 0.1)).unwrap();
            assert!(r.ratio >= 1.0 && r.ratio <= 2.0);
        }
        assert!(pos_bound(&reg, "sub-large", &req(0.95, 0.99)).is_err());
    }

    #[test]
    fn full_disclosure_is_bayes_plausible() {
        let g = full_disclosure_policy(Prior::new(0.3).unwrap(), 3).unwrap();
        for j in 0..3 {
            assert!((g.marginal_mean(j) - 0.3).abs() < 1e-15);
        }
    }
}
