//! Small-prior constructions for any n and the two-receiver large-prior
//! families.

use super::roots::{quadratic_roots, scan_feasible_set};
#[cfg(test)]
use super::roots::DEFAULT_SCAN_STEP;
use super::{
    anonymous_values, check_conditions, require_large_prior, require_small_prior, ConditionCheck,
    Construction, EquilibriumError, FamilyParams, PolicyBuilder,
};
use crate::lp::HyperplaneCertificate;
use crate::model::{check_bayes_plausible, Curvature, Prior, UtilityFunction};

/// Tolerance on closed-form certificate conditions.
const CONDITION_TOL: f64 = 1e-9;

pub(crate) fn bayes_condition(policy: &crate::model::SignalingPolicy, prior: Prior) -> ConditionCheck {
    let worst = check_bayes_plausible(policy, prior)
        .into_iter()
        .fold(0.0, |m: f64, x| m.max(x.abs()));
    ConditionCheck::eq("bayes_plausible", worst)
}

fn require_curvature(
    v: &UtilityFunction,
    family: &'static str,
    allowed: Curvature,
    requirement: &'static str,
) -> Result<(), EquilibriumError> {
    match v.curvature() {
        Some(c) if c == allowed || c == Curvature::Additive => Ok(()),
        _ => Err(EquilibriumError::UtilityShape { family, requirement }),
    }
}

/// (t, r) = (v(1), v(2)) of a two-receiver anonymous utility.
fn two_receiver_values(v: &UtilityFunction, family: &'static str) -> Result<(f64, f64), EquilibriumError> {
    let values = anonymous_values(v, family)?;
    if values.len() != 3 || values[0] != 0.0 || values[1] <= 0.0 || values[2] <= 0.0 {
        return Err(EquilibriumError::UtilityShape {
            family,
            requirement: "v = (0, t, r) with t, r > 0 and n = 2",
        });
    }
    Ok((values[1], values[2]))
}

/// Diagonal segment from 0 to 2λ·1.
pub fn construct_sup_small(prior: Prior, v: &UtilityFunction) -> Result<Construction, EquilibriumError> {
    const FAMILY: &str = "sup-small";
    let lambda = require_small_prior(prior, FAMILY)?;
    anonymous_values(v, FAMILY)?;
    require_curvature(v, FAMILY, Curvature::StrictlySupermodular, "a supermodular anonymous utility")?;
    let n = v.n();
    let policy = PolicyBuilder::default()
        .segment(1.0, vec![0.0; n], vec![2.0 * lambda; n])
        .build(n)?;
    let vn = v.full_value();
    let conditions = vec![bayes_condition(&policy, prior)];
    check_conditions(&conditions, CONDITION_TOL)?;
    Ok(Construction {
        family: FAMILY.into(),
        prior,
        utility: v.clone(),
        policy,
        params: FamilyParams::None,
        certificate: Some(HyperplaneCertificate {
            alpha: vec![vn / (2.0 * lambda * n as f64); n],
            beta: 0.0,
        }),
        conditions,
        welfare: Some(vn),
        pos_bound: Some(1.0),
    })
}

/// Split-half anti-diagonal: the first ⌊n/2⌋ coordinates run 0→2λ while the
/// rest run 2λ→0.
pub fn construct_sub_small(prior: Prior, v: &UtilityFunction) -> Result<Construction, EquilibriumError> {
    const FAMILY: &str = "sub-small";
    let lambda = require_small_prior(prior, FAMILY)?;
    let values = anonymous_values(v, FAMILY)?;
    require_curvature(v, FAMILY, Curvature::StrictlySubmodular, "a submodular anonymous utility")?;
    let n = v.n();
    let lo = n / 2;
    let hi = n - lo;
    let top = 2.0 * lambda;
    let a: Vec<f64> = (0..n).map(|j| if j < lo { 0.0 } else { top }).collect();
    let b: Vec<f64> = (0..n).map(|j| if j < lo { top } else { 0.0 }).collect();
    let policy = PolicyBuilder::default().segment(1.0, a, b).build(n)?;
    // With c = v(hi) − v(hi−1) the line v(hi) + c(k − hi) dominates v at
    // every integer k, and E[#wins] ≤ Σq/2λ, so Π(q) ≤ c·Σq/2λ + β.
    let c = values[hi] - values[hi - 1];
    let alpha = vec![c / top; n];
    let beta = values[hi] - hi as f64 * c;
    let conditions = vec![bayes_condition(&policy, prior)];
    check_conditions(&conditions, CONDITION_TOL)?;
    Ok(Construction {
        family: FAMILY.into(),
        prior,
        utility: v.clone(),
        policy,
        params: FamilyParams::None,
        certificate: Some(HyperplaneCertificate { alpha, beta }),
        conditions,
        welfare: Some(values[lo] + values[hi]),
        pos_bound: Some(1.0),
    })
}

/// Parameters of the diagonal-plus-mass equilibrium for supermodular v.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupLargePriorParams {
    /// Mass at the all-ones point.
    pub mu_s: f64,
    /// Endpoint of the diagonal segment.
    pub p_hat: f64,
    /// Common hyperplane slope.
    pub alpha: f64,
    pub beta: f64,
}

/// Minus-branch root of μ²(2ρ−1) + μλ(3−2ρ) + (2−4λ) = 0, in the
/// cancellation-free form 2c/(−b−√D).
pub fn solve_mu_sup(lambda: f64, rho: f64) -> Result<f64, EquilibriumError> {
    if !(0.5..1.0).contains(&lambda) {
        return Err(EquilibriumError::PriorOutOfRange {
            family: "sup-large",
            lambda,
            requirement: "1/2 <= lambda < 1",
        });
    }
    if !(rho > 0.0 && rho <= 0.5) {
        return Err(EquilibriumError::UtilityShape {
            family: "sup-large",
            requirement: "0 < rho <= 1/2",
        });
    }
    if rho == 0.5 {
        return Ok((2.0 * lambda - 1.0) / lambda);
    }
    let a = 2.0 * rho - 1.0;
    let b = lambda * (3.0 - 2.0 * rho);
    let c = 2.0 - 4.0 * lambda;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(EquilibriumError::NegativeDiscriminant);
    }
    Ok(2.0 * c / (-b - disc.sqrt()))
}

/// Closed-form parameters for v = (0, t, r).
pub fn sup_large_params(lambda: f64, t: f64, r: f64) -> Result<SupLargePriorParams, EquilibriumError> {
    let mu = solve_mu_sup(lambda, t / r)?;
    let alpha = (0.5 - 3.0 * mu / 8.0) * r + mu * t / 4.0;
    let p_hat = (1.0 - mu) * r / (2.0 * alpha);
    Ok(SupLargePriorParams { mu_s: mu, p_hat, alpha, beta: 0.0 })
}

fn sup_large_conditions(lambda: f64, t: f64, r: f64, p: &SupLargePriorParams) -> Vec<ConditionCheck> {
    let SupLargePriorParams { mu_s: mu, p_hat, alpha, beta } = *p;
    let dominance = |q2: f64| (q2 / p_hat) * (1.0 - mu) * r + (1.0 - q2 / p_hat) * (1.0 - mu) * t;
    let mut out = vec![
        ConditionCheck::eq(
            "mass_quadratic",
            mu * mu * (2.0 * t - r) + mu * lambda * (3.0 * r - 2.0 * t) + r * (2.0 - 4.0 * lambda),
        ),
        ConditionCheck::eq("beta_zero", beta),
        ConditionCheck::eq("payoff_at_p_hat", (1.0 - mu) * r - (2.0 * alpha * p_hat + beta)),
        ConditionCheck::eq(
            "payoff_at_ones",
            0.5 * mu * t + (1.0 - 0.75 * mu) * r - (2.0 * alpha + beta),
        ),
    ];
    // Both dominance inequalities are linear in q2, so the endpoints suffice.
    for q2 in [0.0, p_hat] {
        out.push(ConditionCheck::le("dominance_inner", dominance(q2), alpha * (p_hat + q2)));
        out.push(ConditionCheck::le("dominance_edge", dominance(q2) + 0.5 * mu * t, alpha * (1.0 + q2)));
    }
    out.push(ConditionCheck::le("p_hat_le_one", p_hat, 1.0));
    out
}

/// Diagonal segment 0→(p̂,p̂) with weight 1−μ plus an atom at (1,1) with weight μ.
pub fn construct_sup_large(prior: Prior, v: &UtilityFunction) -> Result<Construction, EquilibriumError> {
    const FAMILY: &str = "sup-large";
    let lambda = require_large_prior(prior, FAMILY)?;
    let (t, r) = two_receiver_values(v, FAMILY)?;
    if 2.0 * t > r {
        return Err(EquilibriumError::UtilityShape {
            family: FAMILY,
            requirement: "2 v(1) <= v(2)",
        });
    }
    let p = sup_large_params(lambda, t, r)?;
    let policy = PolicyBuilder::default()
        .segment(1.0 - p.mu_s, vec![0.0, 0.0], vec![p.p_hat, p.p_hat])
        .atom(p.mu_s, vec![1.0, 1.0])
        .build(2)?;
    let mut conditions = sup_large_conditions(lambda, t, r, &p);
    conditions.push(bayes_condition(&policy, prior));
    check_conditions(&conditions, CONDITION_TOL)?;
    let rho = t / r;
    let shrink = 1.0 - p.mu_s * p.mu_s * (0.5 - rho);
    Ok(Construction {
        family: FAMILY.into(),
        prior,
        utility: v.clone(),
        policy,
        params: FamilyParams::SupLarge(p),
        certificate: Some(HyperplaneCertificate { alpha: vec![p.alpha; 2], beta: p.beta }),
        conditions,
        welfare: Some(r * shrink),
        pos_bound: Some(1.0 / shrink),
    })
}

/// Parameters of the axis-plus-anti-diagonal equilibrium for submodular v.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubLargePriorParams {
    /// Mass of each axis segment.
    pub mu: f64,
    /// Length of the axis segments.
    pub ell: f64,
    /// Far end of the anti-diagonal.
    pub p_hat: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// The four polynomial feasibility conditions, each satisfied when ≤ 0.
pub fn sub_conditions(lambda: f64, t: f64, r: f64, mu: f64) -> [ConditionCheck; 4] {
    let a = 2.0 * t - r;
    let k = 4.0 * lambda - 2.0;
    [
        ConditionCheck::le("p_hat_above_ell", mu * a, 2.0 * lambda * t - 2.0 * r * (2.0 * lambda - 1.0)),
        ConditionCheck::le("beta_nonnegative", 0.0, mu * mu * a - 2.0 * lambda * t * mu + t * k),
        ConditionCheck::le(
            "payoff_at_ones",
            mu * mu * a - mu * (2.0 * t * (1.0 - lambda) + k * (r - t)) + k * (r - t),
            0.0,
        ),
        ConditionCheck::le(
            "payoff_at_ell",
            0.0,
            mu * mu * a - mu * (t + k * (2.5 * t - r)) + k * t,
        ),
    ]
}

/// Closed feasible interval of the axis mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibleInterval {
    pub lo: f64,
    pub hi: f64,
}

impl FeasibleInterval {
    pub fn contains(&self, mu: f64, tol: f64) -> bool {
        mu >= self.lo - tol && mu <= self.hi + tol
    }
}

fn sub_max_violation(lambda: f64, rho: f64, mu: f64) -> f64 {
    sub_conditions(lambda, rho, 1.0, mu)
        .iter()
        .map(ConditionCheck::violation)
        .fold(0.0, f64::max)
}

/// I(λ,ρ) from the roots of the four conditions, intersected with (0, ½]
/// and re-verified at both endpoints.
pub fn sub_feasible_interval(lambda: f64, rho: f64) -> Option<FeasibleInterval> {
    if lambda <= 0.5 || lambda >= 1.0 || !(0.5..=1.0).contains(&rho) {
        return None;
    }
    let (t, r) = (rho, 1.0);
    let a = 2.0 * t - r;
    let k = 4.0 * lambda - 2.0;
    let mut lo: f64 = 0.0;
    let mut hi: f64 = 0.5;

    // Π((1,1)) condition: convex quadratic ≤ 0 between its roots.
    let b3 = 2.0 * t * (1.0 - lambda) + k * (r - t);
    match quadratic_roots(a, -b3, k * (r - t)).as_slice() {
        [root] => lo = lo.max(*root),
        [r1, r2] => {
            lo = lo.max(*r1);
            hi = hi.min(*r2);
        }
        _ => return None,
    }
    // Π((ℓ,ℓ)) condition: quadratic ≥ 0 up to its smaller root.
    let b4 = t + k * (2.5 * t - r);
    match quadratic_roots(a, -b4, k * t).as_slice() {
        [root] if b4 > 0.0 => hi = hi.min(*root),
        [r1, _] => hi = hi.min(*r1),
        _ => {}
    }
    // p̂ > ℓ is linear in μ.
    let c1 = 2.0 * lambda * t - 2.0 * r * (2.0 * lambda - 1.0);
    if a > 1e-14 {
        hi = hi.min(c1 / a);
    } else if c1 < 0.0 {
        return None;
    }
    // β ≥ 0 holds below the smaller root.
    match quadratic_roots(a, -2.0 * lambda * t, t * k).as_slice() {
        [root] => hi = hi.min(*root),
        [r1, _] => hi = hi.min(*r1),
        _ => {}
    }
    if lo > hi {
        if lo - hi > 1e-12 {
            return None;
        }
        hi = lo;
    }
    let ok = |mu: f64| sub_max_violation(lambda, rho, mu) <= 1e-9;
    (ok(lo) && ok(hi)).then_some(FeasibleInterval { lo, hi })
}

/// I(λ,ρ) by condition-sign scanning at `step` with boundaries bisected to
/// 1e-9. Isolated feasible points are recovered by minimizing the worst
/// violation.
pub fn sub_feasible_interval_scan(lambda: f64, rho: f64, step: f64) -> Vec<(f64, f64)> {
    if lambda <= 0.5 || lambda >= 1.0 {
        return Vec::new();
    }
    scan_feasible_set(|mu| sub_max_violation(lambda, rho, mu), step)
}

/// Closed-form hyperplane and breakpoints for a given axis mass μ.
pub fn sub_large_params(lambda: f64, t: f64, r: f64, mu: f64) -> SubLargePriorParams {
    let alpha = (t * mu - mu * mu * (2.0 * t - r)) / (4.0 * lambda - 2.0);
    let beta = (1.0 - mu / 2.0) * t - alpha;
    let ell = mu * r / (2.0 * alpha);
    let p_hat = (2.0 * alpha - mu * (r - t)) / (2.0 * alpha);
    SubLargePriorParams { mu, ell, p_hat, alpha, beta }
}

/// Axis segments (1,0)→(1,ℓ) and (0,1)→(ℓ,1) with weight μ each plus the
/// anti-diagonal (ℓ,p̂)→(p̂,ℓ) with weight 1−2μ. Defaults to μ = min I.
pub fn construct_sub_large(
    prior: Prior,
    v: &UtilityFunction,
    mu: Option<f64>,
) -> Result<Construction, EquilibriumError> {
    const FAMILY: &str = "sub-large";
    let lambda = require_large_prior(prior, FAMILY)?;
    let (t, r) = two_receiver_values(v, FAMILY)?;
    let rho = t / r;
    if !(0.5..=1.0).contains(&rho) {
        return Err(EquilibriumError::UtilityShape {
            family: FAMILY,
            requirement: "v(2)/2 <= v(1) <= v(2)",
        });
    }
    let interval = sub_feasible_interval(lambda, rho).ok_or(EquilibriumError::EmptyInterval)?;
    let mu = match mu {
        Some(m) if interval.contains(m, 1e-12) && m > 0.0 => m,
        Some(m) => return Err(EquilibriumError::MuOutsideInterval { mu: m }),
        None if interval.lo > 0.0 => interval.lo,
        None => return Err(EquilibriumError::MuOutsideInterval { mu: interval.lo }),
    };
    let p = sub_large_params(lambda, t, r, mu);
    if !(p.ell > 0.0 && p.ell < p.p_hat) {
        return Err(EquilibriumError::ParameterInvariant(format!(
            "need 0 < ell < p_hat, got ell={} p_hat={}",
            p.ell, p.p_hat
        )));
    }
    let policy = PolicyBuilder::default()
        .segment(mu, vec![1.0, 0.0], vec![1.0, p.ell])
        .segment(mu, vec![0.0, 1.0], vec![p.ell, 1.0])
        .segment(1.0 - 2.0 * mu, vec![p.ell, p.p_hat], vec![p.p_hat, p.ell])
        .build(2)?;
    let mut conditions: Vec<ConditionCheck> = sub_conditions(lambda, t, r, mu).to_vec();
    conditions.extend([
        ConditionCheck::eq("axis_base", (1.0 - mu / 2.0) * t - (p.alpha + p.beta)),
        ConditionCheck::eq("axis_slope", mu * r / (2.0 * p.ell) - p.alpha),
        ConditionCheck::eq("anti_diagonal", t - (p.alpha * (p.p_hat + p.ell) + p.beta)),
        ConditionCheck::le("ones_raw", r - mu * (r - t), 2.0 * p.alpha + p.beta),
        ConditionCheck::le("ell_raw", 2.0 * mu * t, 2.0 * p.alpha * p.ell + p.beta),
        ConditionCheck::le("alpha_nonnegative", -p.alpha, 0.0),
        ConditionCheck::le("beta_nonnegative_raw", -p.beta, 0.0),
        ConditionCheck::le("p_hat_le_one", p.p_hat, 1.0),
        bayes_condition(&policy, prior),
    ]);
    check_conditions(&conditions, CONDITION_TOL)?;
    let welfare = 2.0 * t - mu * mu * (2.0 * t - r);
    Ok(Construction {
        family: FAMILY.into(),
        prior,
        utility: v.clone(),
        policy,
        params: FamilyParams::SubLarge(p),
        certificate: Some(HyperplaneCertificate { alpha: vec![p.alpha; 2], beta: p.beta }),
        conditions,
        welfare: Some(welfare),
        pos_bound: Some(2.0 * t / welfare),
    })
}

/// Outcome of certifying the anti-diagonal plus (1,1)-mass layout.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub certifiable: bool,
    pub violated_condition: Option<&'static str>,
    pub mu: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub p_hat: Option<f64>,
}

/// Hyperplane forced by the binding equations of the layout at mass μ, with
/// the worst violation of α ≥ 0, β ≥ 0 and the two envelope inequalities.
fn probe_layout(lambda: f64, t: f64, r: f64, mu: f64) -> (f64, f64, f64, f64) {
    let p_hat = 2.0 * (lambda - mu) / (1.0 - mu);
    let alpha = (0.5 * mu * t + (1.0 - 0.75 * mu) * r - (1.0 - mu) * t) / (2.0 - p_hat);
    let beta = (1.0 - mu) * t - alpha * p_hat;
    let worst = [
        -alpha,
        -beta,
        p_hat - 1.0,
        (1.0 - mu) * r - (2.0 * alpha * p_hat + beta),
        (1.0 - mu / 2.0) * t - (alpha + beta),
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max);
    (alpha, beta, p_hat, worst)
}

/// Checks whether the simpler layout admits a nonnegative certificate. The two
/// envelope inequalities combine to μ(2t − r) ≤ 0, so only ρ = ½ survives.
pub fn probe_infeasible_sub(lambda: f64, rho: f64) -> ProbeResult {
    let (t, r) = (rho, 1.0);
    let fail = |violated| ProbeResult {
        certifiable: false,
        violated_condition: Some(violated),
        mu: None,
        alpha: None,
        beta: None,
        p_hat: None,
    };
    if lambda <= 0.5 || lambda >= 1.0 {
        return fail("lambda > 1/2");
    }
    let accept = |mu: f64, (alpha, beta, p_hat, _): (f64, f64, f64, f64)| ProbeResult {
        certifiable: true,
        violated_condition: None,
        mu: Some(mu),
        alpha: Some(alpha),
        beta: Some(beta),
        p_hat: Some(p_hat),
    };
    if (2.0 * t - r).abs() <= 1e-12 {
        let mu = (2.0 * lambda - 1.0) / lambda;
        let layout = probe_layout(lambda, t, r, mu);
        return if layout.3 <= 1e-9 { accept(mu, layout) } else { fail("envelope at (1,1) or (1,0)") };
    }
    // Search the admissible masses μ ∈ [2λ−1, λ) for a certificate.
    let lo = (2.0 * lambda - 1.0).max(0.0);
    let steps = 2000;
    for i in 0..steps {
        let mu = lo + (lambda - lo) * i as f64 / steps as f64;
        let layout = probe_layout(lambda, t, r, mu);
        if layout.3 <= 1e-12 {
            return accept(mu, layout);
        }
    }
    fail(if 2.0 * t > r { "2t <= r" } else { "envelope at (1,1) or (1,0)" })
}
