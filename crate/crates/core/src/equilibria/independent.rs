//! Independent signaling for additive utilities: each receiver gets its own
//! single-receiver equilibrium marginal.

use super::{Construction, EquilibriumError, FamilyParams, PolicyBuilder};
use crate::lp::HyperplaneCertificate;
use crate::model::{discretize_policy, Atom, Prior, SignalingPolicy, UtilityFunction};

/// Product of identical one-dimensional marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependentPolicy {
    pub prior: Prior,
    pub n: usize,
    /// Marginal of a single receiver as a one-dimensional policy.
    pub marginal: SignalingPolicy,
}

/// Largest joint support produced by `IndependentPolicy::joint`.
const MAX_JOINT_ATOMS: usize = 1_000_000;
/// Joint support size aimed for by `IndependentPolicy::to_construction`.
const JOINT_TARGET_ATOMS: usize = 4096;

impl IndependentPolicy {
    /// Product of the marginals discretized at `k` atoms per segment.
    pub fn joint(&self, k: usize) -> Result<SignalingPolicy, EquilibriumError> {
        if self.n == 1 {
            return Ok(self.marginal.clone());
        }
        let disc = discretize_policy(&self.marginal, k);
        let axis: Vec<(f64, f64)> = disc.atoms().iter().map(|a| (a.weight, a.point[0])).collect();
        let total = axis.len().checked_pow(self.n as u32).unwrap_or(usize::MAX);
        if total > MAX_JOINT_ATOMS {
            return Err(EquilibriumError::ParameterInvariant(format!(
                "joint product would have {} atoms",
                total
            )));
        }
        let mut atoms = Vec::with_capacity(total);
        let mut digits = vec![0usize; self.n];
        for _ in 0..total {
            let weight = digits.iter().map(|&d| axis[d].0).product();
            let point = digits.iter().map(|&d| axis[d].1).collect();
            atoms.push(Atom { weight, point });
            for d in digits.iter_mut() {
                *d += 1;
                if *d < axis.len() {
                    break;
                }
                *d = 0;
            }
        }
        // Rounding in ~10^5 products can push the total past the weight tolerance.
        let sum: f64 = atoms.iter().map(|a| a.weight).sum();
        atoms.iter_mut().for_each(|a| a.weight /= sum);
        Ok(SignalingPolicy::from_atoms(self.n, atoms)?)
    }

    /// Construction view with a joint product of about `JOINT_TARGET_ATOMS`
    /// atoms. Self-play payoff evaluation is quadratic in the atom count.
    pub fn to_construction(&self, v: &UtilityFunction) -> Result<Construction, EquilibriumError> {
        let k = ((JOINT_TARGET_ATOMS as f64).powf(1.0 / self.n as f64).floor() as usize).clamp(2, 512);
        let unit = v.value(1);
        let lambda = self.prior.lambda();
        Ok(Construction {
            family: "independent".into(),
            prior: self.prior,
            utility: v.clone(),
            policy: self.joint(k)?,
            params: FamilyParams::None,
            certificate: Some(HyperplaneCertificate {
                alpha: vec![unit / (2.0 * lambda); self.n],
                beta: 0.0,
            }),
            conditions: Vec::new(),
            welfare: Some(self.n as f64 * unit),
            pos_bound: Some(1.0),
        })
    }
}

/// Uniform on [0,2λ] when λ ≤ ½. Otherwise uniform on [0,2−2λ] with weight
/// (1−λ)/λ plus an atom at 1 with weight (2λ−1)/λ.
pub fn construct_independent_additive(prior: Prior, v: &UtilityFunction) -> Result<IndependentPolicy, EquilibriumError> {
    if !v.is_additive(1e-12) || v.value(1) <= 0.0 {
        return Err(EquilibriumError::UtilityShape {
            family: "independent",
            requirement: "an additive utility V(S) = |S|·v(1) with v(1) > 0",
        });
    }
    let lambda = prior.lambda();
    let marginal = if lambda <= 0.5 {
        PolicyBuilder::default().segment(1.0, vec![0.0], vec![2.0 * lambda])
    } else {
        PolicyBuilder::default()
            .segment((1.0 - lambda) / lambda, vec![0.0], vec![2.0 - 2.0 * lambda])
            .atom((2.0 * lambda - 1.0) / lambda, vec![1.0])
    }
    .build(1)?;
    Ok(IndependentPolicy { prior, n: v.n(), marginal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_bayes_plausible;

    #[test]
    fn marginals_match_both_branches() {
        let v = UtilityFunction::additive(2, 1.0).unwrap();
        let g = construct_independent_additive(Prior::new(0.3).unwrap(), &v).unwrap();
        assert_eq!(g.marginal.segments()[0].b, vec![0.6]);
        let g = construct_independent_additive(Prior::new(0.75).unwrap(), &v).unwrap();
        assert!((g.marginal.atoms()[0].weight - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(g.marginal.segments()[0].b, vec![0.5]);
        let joint = g.joint(16).unwrap();
        assert!(check_bayes_plausible(&joint, g.prior).iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn rejects_non_additive() {
        let v = UtilityFunction::two_receiver(0.3).unwrap();
        assert!(construct_independent_additive(Prior::new(0.3).unwrap(), &v).is_err());
    }
}
