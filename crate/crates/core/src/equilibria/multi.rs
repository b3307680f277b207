//! Large-prior constructions for n receivers.

use super::roots::{scan_intervals, scan_feasible_set, DEFAULT_SCAN_STEP};
use super::scalars::{binomial_average, multi_scalars};
use super::two_receiver::bayes_condition;
use super::{
    anonymous_values, check_conditions, require_large_prior, ConditionCheck, Construction,
    EquilibriumError, FamilyParams, PolicyBuilder, SupLargePriorParams,
};
use crate::lp::HyperplaneCertificate;
use crate::model::{Curvature, Prior, SignalingPolicy, UtilityFunction};
use crate::payoff::{PayoffEvaluator, SegmentMode};

const CONDITION_TOL: f64 = 1e-9;

fn require_class(v: &UtilityFunction, family: &'static str, allowed: Curvature) -> Result<(), EquilibriumError> {
    match v.curvature() {
        Some(c) if c == allowed || c == Curvature::Additive => Ok(()),
        _ => Err(EquilibriumError::UtilityShape {
            family,
            requirement: match allowed {
                Curvature::StrictlySupermodular => "a supermodular anonymous utility",
                _ => "a submodular anonymous utility",
            },
        }),
    }
}

/// Diagonal segment 0→p̂·1 with weight 1−μ plus an atom at 1 with weight μ.
pub fn construct_sup_large_multi(prior: Prior, v: &UtilityFunction) -> Result<Construction, EquilibriumError> {
    const FAMILY: &str = "sup-multi";
    let lambda = require_large_prior(prior, FAMILY)?;
    let values = anonymous_values(v, FAMILY)?;
    require_class(v, FAMILY, Curvature::StrictlySupermodular)?;
    let n = v.n();
    let vn = values[n];
    let s = multi_scalars(values);
    let (a, b, c) = (s.r, 2.0 * lambda * (vn - s.t_full), vn * (1.0 - 2.0 * lambda));
    let mu = if a.abs() <= 1e-14 * vn {
        -c / b
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return Err(EquilibriumError::NegativeDiscriminant);
        }
        2.0 * c / (-b - disc.sqrt())
    };
    if !(0.0..=1.0).contains(&mu) {
        return Err(EquilibriumError::MuOutsideInterval { mu });
    }
    let nf = n as f64;
    let alpha = (mu * s.t_full + (1.0 - mu) * vn) / nf;
    let p_hat = (1.0 - mu) * vn / (nf * alpha);
    let policy = PolicyBuilder::default()
        .segment(1.0 - mu, vec![0.0; n], vec![p_hat; n])
        .atom(mu, vec![1.0; n])
        .build(n)?;
    let conditions = vec![
        ConditionCheck::eq("mass_quadratic", a * mu * mu + b * mu + c),
        ConditionCheck::eq("payoff_at_p_hat", (1.0 - mu) * vn - nf * alpha * p_hat),
        ConditionCheck::eq("payoff_at_ones", mu * s.t_full + (1.0 - mu) * vn - nf * alpha),
        ConditionCheck::le("p_hat_le_one", p_hat, 1.0),
        bayes_condition(&policy, prior),
    ];
    check_conditions(&conditions, CONDITION_TOL)?;
    let welfare = vn + mu * mu * s.r;
    Ok(Construction {
        family: FAMILY.into(),
        prior,
        utility: v.clone(),
        policy,
        params: FamilyParams::SupLarge(SupLargePriorParams { mu_s: mu, p_hat, alpha, beta: 0.0 }),
        certificate: Some(HyperplaneCertificate { alpha: vec![alpha; n], beta: 0.0 }),
        conditions,
        welfare: Some(welfare),
        pos_bound: Some(vn / welfare),
    })
}

/// Parameters of the even-n split-half construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubMultiEvenParams {
    pub mu: f64,
    pub ell: f64,
    pub p_hat: f64,
    pub alpha: f64,
    pub beta: f64,
}

fn even_values<'a>(v: &'a UtilityFunction, family: &'static str) -> Result<&'a [f64], EquilibriumError> {
    let values = anonymous_values(v, family)?;
    let n = values.len() - 1;
    if n % 2 == 1 {
        return Err(EquilibriumError::OddReceivers(n));
    }
    Ok(values)
}

/// Closed-form hyperplane and breakpoints at mass μ for v(0..=n), n even.
pub fn sub_multi_even_params(lambda: f64, values: &[f64], mu: f64) -> SubMultiEvenParams {
    let n = values.len() - 1;
    let h = n / 2;
    let hf = h as f64;
    let s = multi_scalars(values);
    let (t_half, t_bar) = (s.t_half.unwrap(), s.t_bar.unwrap());
    let vh = values[h];
    let d1 = vh * 0.5f64.powi(h as i32) + t_bar - t_half;
    let d2 = vh - t_half;
    let alpha = (mu * mu * d1 + mu * (1.0 - 2.0 * mu) * d2) / ((2.0 * lambda - 1.0) * hf);
    let beta = mu * t_half + (1.0 - mu) * vh - alpha * hf;
    let ell = mu * d1 / (alpha * hf);
    let p_hat = 1.0 + mu * d2 / (alpha * hf) - ell;
    SubMultiEvenParams { mu, ell, p_hat, alpha, beta }
}

/// Feasibility conditions at mass μ, each satisfied when ≤ 0.
pub fn sub_multi_even_conditions(lambda: f64, values: &[f64], mu: f64) -> Vec<ConditionCheck> {
    let n = values.len() - 1;
    let h = n / 2;
    let nf = n as f64;
    let s = multi_scalars(values);
    let p = sub_multi_even_params(lambda, values, mu);
    let vh = values[h];
    let ones = 2.0 * mu * (s.t_bar.unwrap() + vh * 0.5f64.powi(h as i32)) + (1.0 - 2.0 * mu) * values[n];
    vec![
        ConditionCheck::le("mu_le_half", mu, 0.5),
        ConditionCheck::le("alpha_nonnegative", -p.alpha, 0.0),
        ConditionCheck::le("beta_nonnegative", -p.beta, 0.0),
        ConditionCheck::le("ell_positive", -p.ell, 0.0),
        ConditionCheck::le("ell_below_one", p.ell, 1.0),
        ConditionCheck::le("p_hat_above_ell", p.ell, p.p_hat),
        ConditionCheck::le("p_hat_le_one", p.p_hat, 1.0),
        ConditionCheck::le("payoff_at_ones", ones, nf * p.alpha + p.beta),
        ConditionCheck::le("payoff_at_ell", 2.0 * mu * vh, nf * p.alpha * p.ell + p.beta),
    ]
}

fn worst(conditions: &[ConditionCheck]) -> f64 {
    conditions.iter().map(ConditionCheck::violation).fold(0.0, f64::max)
}

/// I(λ,v,n) by condition-sign scanning at `step`.
pub fn sub_multi_even_interval(lambda: f64, values: &[f64], step: f64) -> Vec<(f64, f64)> {
    if lambda <= 0.5 || (values.len() - 1) % 2 == 1 {
        return Vec::new();
    }
    scan_feasible_set(|mu| worst(&sub_multi_even_conditions(lambda, values, mu)), step)
}

/// Split-half policy: two axis blocks of weight μ pairing one half on [0,ℓ]
/// with the other half at 1, and a central anti-diagonal block on [ℓ,p̂].
pub fn construct_sub_large_multi_even(
    prior: Prior,
    v: &UtilityFunction,
    mu: Option<f64>,
) -> Result<Construction, EquilibriumError> {
    const FAMILY: &str = "sub-multi-even";
    let lambda = require_large_prior(prior, FAMILY)?;
    let values = even_values(v, FAMILY)?;
    require_class(v, FAMILY, Curvature::StrictlySubmodular)?;
    let n = v.n();
    let h = n / 2;
    let scalars = multi_scalars(values);
    let s_n = scalars.s()?;
    if s_n > 1e-12 {
        return Err(EquilibriumError::ParameterInvariant(format!("S(n) = {s_n} > 0")));
    }
    let mu = match mu {
        Some(m) => {
            if !(m > 0.0 && worst(&sub_multi_even_conditions(lambda, values, m)) <= CONDITION_TOL) {
                return Err(EquilibriumError::MuOutsideInterval { mu: m });
            }
            m
        }
        None => sub_multi_even_interval(lambda, values, DEFAULT_SCAN_STEP)
            .first()
            .ok_or(EquilibriumError::EmptyInterval)?
            .0,
    };
    let p = sub_multi_even_params(lambda, values, mu);
    let block = |first: f64, second: f64| {
        let mut q = vec![first; h];
        q.extend(std::iter::repeat(second).take(h));
        q
    };
    let policy = PolicyBuilder::default()
        .segment(mu, block(0.0, 1.0), block(p.ell, 1.0))
        .segment(mu, block(1.0, 0.0), block(1.0, p.ell))
        .segment(1.0 - 2.0 * mu, block(p.ell, p.p_hat), block(p.p_hat, p.ell))
        .build(n)?;
    let mut conditions = sub_multi_even_conditions(lambda, values, mu);
    conditions.push(bayes_condition(&policy, prior));
    check_conditions(&conditions, CONDITION_TOL)?;
    let vh = values[h];
    let welfare = 2.0 * (vh + mu * mu * s_n);
    Ok(Construction {
        family: FAMILY.into(),
        prior,
        utility: v.clone(),
        policy,
        params: FamilyParams::SubMultiEven(p),
        certificate: Some(HyperplaneCertificate { alpha: vec![p.alpha; n], beta: p.beta }),
        conditions,
        welfare: Some(welfare),
        pos_bound: Some(vh / (vh + mu * mu * s_n)),
    })
}

/// Parameters of the odd-n construction. Block 1 holds the first (n+1)/2
/// coordinates and block 2 the remaining (n−1)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OddParams {
    pub mu1: f64,
    pub mu2: f64,
    pub ell1: f64,
    pub ell2: f64,
    pub p_hat1: f64,
    pub p_hat2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    /// Max-norm of the equation residuals at the solution.
    pub residual_norm: f64,
    pub iterations: usize,
}

/// Unknowns in the order α1, α2, β, ℓ1, ℓ2, p̂1, p̂2, μ2.
type OddState = [f64; 8];

/// Binding equations at the six segment endpoints plus both Bayes constraints.
pub fn odd_residuals(lambda: f64, values: &[f64], mu1: f64, x: &OddState) -> [f64; 8] {
    let n = values.len() - 1;
    let hi = (n + 1) / 2;
    let lo = n - hi;
    let (hf, lf) = (hi as f64, lo as f64);
    let [a1, a2, beta, l1, l2, p1, p2, mu2] = *x;
    let v = values;
    let w = 1.0 - mu1 - mu2;
    [
        mu1 * binomial_average(v, lo, 0, 0) + (1.0 - mu1) * v[lo] - (a2 * lf + beta),
        mu1 * binomial_average(v, lo, hi, 0) + (1.0 - mu1) * v[lo] - (a1 * hf * l1 + a2 * lf + beta),
        mu2 * binomial_average(v, hi, 0, 0) + (1.0 - mu2) * v[hi] - (a1 * hf + beta),
        mu2 * binomial_average(v, hi, lo, 0) + (1.0 - mu2) * v[hi] - (a1 * hf + a2 * lf * l2 + beta),
        mu1 * v[hi] + (1.0 - mu1) * v[lo] - (a1 * hf * l1 + a2 * lf * p2 + beta),
        mu2 * v[lo] + (1.0 - mu2) * v[hi] - (a1 * hf * p1 + a2 * lf * l2 + beta),
        mu1 * l1 / 2.0 + w * (l1 + p1) / 2.0 + mu2 - lambda,
        mu2 * l2 / 2.0 + w * (l2 + p2) / 2.0 + mu1 - lambda,
    ]
}

fn max_norm(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

/// Solves a·x = b by Gaussian elimination with partial pivoting.
fn solve_dense(mut a: [[f64; 8]; 8], mut b: [f64; 8]) -> Option<[f64; 8]> {
    for col in 0..8 {
        let piv = (col..8).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..8 {
            let f = a[row][col] / a[col][col];
            for k in col..8 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 8];
    for row in (0..8).rev() {
        let s: f64 = (row + 1..8).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Damped Newton with a central-difference Jacobian.
fn newton(f: impl Fn(&OddState) -> [f64; 8], mut x: OddState) -> (OddState, f64, usize) {
    let mut fx = f(&x);
    let mut norm = max_norm(&fx);
    for iter in 0..200 {
        if norm <= 1e-13 {
            return (x, norm, iter);
        }
        let mut jac = [[0.0; 8]; 8];
        for k in 0..8 {
            let h = 1e-7 * x[k].abs().max(1.0);
            let (mut xp, mut xm) = (x, x);
            xp[k] += h;
            xm[k] -= h;
            let (fp, fm) = (f(&xp), f(&xm));
            for i in 0..8 {
                jac[i][k] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let Some(dx) = solve_dense(jac, fx.map(|v| -v)) else {
            return (x, norm, iter);
        };
        let mut step = 1.0;
        loop {
            let mut trial = x;
            for k in 0..8 {
                trial[k] += step * dx[k];
            }
            let ft = f(&trial);
            let nt = max_norm(&ft);
            if nt < norm || step < 1e-10 {
                if nt < norm {
                    x = trial;
                    fx = ft;
                    norm = nt;
                }
                break;
            }
            step *= 0.5;
        }
        if step < 1e-10 {
            return (x, norm, iter + 1);
        }
    }
    (x, norm, 200)
}

fn odd_seeds(lambda: f64, values: &[f64], mu1: f64) -> Vec<OddState> {
    let n = values.len() - 1;
    let mut seeds = Vec::new();
    let mut from_even = |vals: &[f64]| {
        let p = sub_multi_even_params(lambda, vals, mu1);
        if [p.alpha, p.beta, p.ell, p.p_hat].iter().all(|x| x.is_finite()) {
            seeds.push([p.alpha, p.alpha, p.beta, p.ell, p.ell, p.p_hat, p.p_hat, mu1]);
        }
    };
    from_even(&values[..n]);
    // The n+1 seed extends v linearly by its last increment.
    let mut ext = values.to_vec();
    ext.push(2.0 * values[n] - values[n - 1]);
    from_even(&ext);
    let vn = values[n];
    seeds.push([vn / n as f64, vn / n as f64, 0.0, 0.2, 0.2, 0.8, 0.8, mu1]);
    seeds
}

fn odd_policy(n: usize, p: &OddParams) -> Result<SignalingPolicy, EquilibriumError> {
    let hi = (n + 1) / 2;
    let lo = n - hi;
    let point = |first: f64, second: f64| {
        let mut q = vec![first; hi];
        q.extend(std::iter::repeat(second).take(lo));
        q
    };
    let w = 1.0 - p.mu1 - p.mu2;
    Ok(PolicyBuilder::default()
        .segment(p.mu1, point(0.0, 1.0), point(p.ell1, 1.0))
        .segment(w, point(p.ell1, p.p_hat2), point(p.p_hat1, p.ell2))
        .segment(p.mu2, point(1.0, 0.0), point(1.0, p.ell2))
        .build(n)?)
}

fn solve_odd(lambda: f64, values: &[f64], mu1: f64) -> Result<OddParams, EquilibriumError> {
    let f = |x: &OddState| odd_residuals(lambda, values, mu1, x);
    let mut best: Option<(OddState, f64, usize)> = None;
    for seed in odd_seeds(lambda, values, mu1) {
        let out = newton(f, seed);
        if best.as_ref().map_or(true, |b| out.1 < b.1) {
            best = Some(out);
        }
        if out.1 <= 1e-12 {
            break;
        }
    }
    let (x, residual, iterations) = best.expect("at least one seed");
    if !(residual <= 1e-10) {
        return Err(EquilibriumError::NewtonFailed { residual });
    }
    let [alpha1, alpha2, beta, ell1, ell2, p_hat1, p_hat2, mu2] = x;
    Ok(OddParams {
        mu1,
        mu2,
        ell1,
        ell2,
        p_hat1,
        p_hat2,
        alpha1,
        alpha2,
        beta,
        residual_norm: residual,
        iterations,
    })
}

/// Range conditions plus the envelope inequalities at 1 and at the corner
/// (ℓ1, ℓ2), the latter evaluated with exact segment payoffs.
fn odd_conditions(prior: Prior, v: &UtilityFunction, p: &OddParams, policy: &SignalingPolicy) -> Vec<ConditionCheck> {
    let n = v.n();
    let hi = (n + 1) / 2;
    let lo = n - hi;
    let (hf, lf) = (hi as f64, lo as f64);
    let eval = PayoffEvaluator::new(policy, v, SegmentMode::Continuous);
    let mut corner = vec![p.ell1; hi];
    corner.extend(std::iter::repeat(p.ell2).take(lo));
    vec![
        ConditionCheck::le("mu2_positive", -p.mu2, 0.0),
        ConditionCheck::le("center_weight_positive", p.mu1 + p.mu2, 1.0),
        ConditionCheck::le("alpha1_nonnegative", -p.alpha1, 0.0),
        ConditionCheck::le("alpha2_nonnegative", -p.alpha2, 0.0),
        ConditionCheck::le("beta_nonnegative", -p.beta, 0.0),
        ConditionCheck::le("p_hat1_le_one", p.p_hat1, 1.0),
        ConditionCheck::le("p_hat2_le_one", p.p_hat2, 1.0),
        ConditionCheck::eq("residual_norm", p.residual_norm),
        ConditionCheck::le(
            "payoff_at_ones",
            eval.payoff(&vec![1.0; n]),
            hf * p.alpha1 + lf * p.alpha2 + p.beta,
        ),
        ConditionCheck::le(
            "payoff_at_corner",
            eval.payoff(&corner),
            hf * p.alpha1 * p.ell1 + lf * p.alpha2 * p.ell2 + p.beta,
        ),
        bayes_condition(policy, prior),
    ]
}

fn odd_candidate(
    prior: Prior,
    v: &UtilityFunction,
    values: &[f64],
    mu1: f64,
) -> Result<(OddParams, SignalingPolicy, Vec<ConditionCheck>), EquilibriumError> {
    let p = solve_odd(prior.lambda(), values, mu1)?;
    let ordered = 0.0 < p.ell1 && p.ell1 < p.p_hat1 && 0.0 < p.ell2 && p.ell2 < p.p_hat2;
    if !ordered || p.mu2 <= 0.0 || p.mu1 + p.mu2 >= 1.0 {
        return Err(EquilibriumError::ParameterInvariant(format!(
            "need 0 < ell < p_hat in both blocks and positive masses, got {p:?}"
        )));
    }
    let policy = odd_policy(v.n(), &p)?;
    let conditions = odd_conditions(prior, v, &p, &policy);
    Ok((p, policy, conditions))
}

/// Masses μ1 ∈ (0, ½) whose odd-n solution satisfies every condition, by
/// scanning at `step` with boundaries bisected to 1e-9.
pub fn sub_multi_odd_interval(prior: Prior, v: &UtilityFunction, step: f64) -> Vec<(f64, f64)> {
    let Some(values) = v.anonymous_values() else { return Vec::new() };
    if prior.lambda() <= 0.5 || v.n() % 2 == 0 || v.n() < 3 {
        return Vec::new();
    }
    let feasible = |m: f64| {
        m > 0.0 && odd_candidate(prior, v, values, m).is_ok_and(|(_, _, c)| worst(&c) <= CONDITION_TOL)
    };
    scan_intervals(feasible, 0.0, 0.5 - step, step, 1e-9)
}

/// Two-block construction for odd n. The eight unknowns are solved from the
/// binding and Bayes equations given μ1. Without μ1 the smallest scanned μ1
/// whose solution satisfies every condition is used.
pub fn construct_sub_large_multi_odd(
    prior: Prior,
    v: &UtilityFunction,
    mu1: Option<f64>,
) -> Result<Construction, EquilibriumError> {
    const FAMILY: &str = "sub-multi-odd";
    require_large_prior(prior, FAMILY)?;
    let values = anonymous_values(v, FAMILY)?;
    let n = v.n();
    if n % 2 == 0 || n < 3 {
        return Err(EquilibriumError::UtilityShape {
            family: FAMILY,
            requirement: "an odd receiver count of at least 3",
        });
    }
    require_class(v, FAMILY, Curvature::StrictlySubmodular)?;
    let (p, policy, conditions) = match mu1 {
        Some(m) => odd_candidate(prior, v, values, m)?,
        None => (1..500)
            .map(|i| i as f64 * 1e-3)
            .filter_map(|m| odd_candidate(prior, v, values, m).ok())
            .find(|(_, _, c)| worst(c) <= CONDITION_TOL)
            .ok_or(EquilibriumError::EmptyInterval)?,
    };
    let hi = (n + 1) / 2;
    let lo = n - hi;
    let lambda = prior.lambda();
    let welfare = 2.0 * (lambda * (hi as f64 * p.alpha1 + lo as f64 * p.alpha2) + p.beta);
    let mut alpha = vec![p.alpha1; hi];
    alpha.extend(std::iter::repeat(p.alpha2).take(lo));
    Ok(Construction {
        family: FAMILY.into(),
        prior,
        utility: v.clone(),
        policy,
        params: FamilyParams::SubMultiOdd(p),
        certificate: Some(HyperplaneCertificate { alpha, beta: p.beta }),
        conditions,
        welfare: Some(welfare),
        pos_bound: Some((values[lo] + values[hi]) / welfare),
    })
}

#[cfg(test)]
mod tests {
    use super::super::two_receiver::{construct_sub_large, construct_sup_large};
    use super::*;

    fn prior(x: f64) -> Prior {
        Prior::new(x).unwrap()
    }

    #[test]
    fn sup_multi_reduces_to_two_receivers() {
        for (lambda, rho) in [(0.6, 0.2), (0.75, 0.5), (0.9, 0.35)] {
            let v = UtilityFunction::two_receiver(rho).unwrap();
            let two = construct_sup_large(prior(lambda), &v).unwrap();
            let multi = construct_sup_large_multi(prior(lambda), &v).unwrap();
            for ((_, a), (_, b)) in two.named_params().iter().zip(multi.named_params()) {
                assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
            }
            assert!((two.welfare.unwrap() - multi.welfare.unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn sub_multi_reduces_to_two_receivers() {
        for (lambda, rho) in [(0.55, 0.5), (0.6, 0.8), (0.7, 0.9)] {
            let v = UtilityFunction::two_receiver(rho).unwrap();
            let Ok(two) = construct_sub_large(prior(lambda), &v, None) else { continue };
            let FamilyParams::SubLarge(p2) = two.params else { panic!() };
            let multi = construct_sub_large_multi_even(prior(lambda), &v, Some(p2.mu)).unwrap();
            let FamilyParams::SubMultiEven(pm) = multi.params else { panic!() };
            for (a, b) in [
                (p2.alpha, pm.alpha),
                (p2.beta, pm.beta),
                (p2.ell, pm.ell),
                (p2.p_hat, pm.p_hat),
            ] {
                assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn additive_bounds_are_one() {
        for n in [2usize, 4, 6, 8] {
            let v = UtilityFunction::additive(n, 1.0).unwrap();
            let g = construct_sup_large_multi(prior(0.7), &v).unwrap();
            assert!((g.pos_bound.unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sub_multi_even_square_root() {
        let v = UtilityFunction::power(4, 0.5).unwrap();
        let iv = sub_multi_even_interval(0.55, v.anonymous_values().unwrap(), DEFAULT_SCAN_STEP);
        assert!(!iv.is_empty());
        let g = construct_sub_large_multi_even(prior(0.55), &v, None).unwrap();
        assert!(g.max_violation() <= 1e-9);
        assert!(g.pos_bound.unwrap() >= 1.0);
    }

    #[test]
    fn odd_solver_converges() {
        let v = UtilityFunction::power(3, 0.5).unwrap();
        let values = v.anonymous_values().unwrap();
        let p = solve_odd(0.55, values, 0.1).unwrap();
        assert!(p.residual_norm <= 1e-8);
        let r = odd_residuals(
            0.55,
            values,
            0.1,
            &[p.alpha1, p.alpha2, p.beta, p.ell1, p.ell2, p.p_hat1, p.p_hat2, p.mu2],
        );
        assert!(max_norm(&r) <= 1e-8);
    }
}
