//! Closed-form mass roots against bisection on the defining conditions.

mod support;

use persuasion::equilibria::roots::DEFAULT_SCAN_STEP;
use persuasion::equilibria::{
    construct_sup_large_multi, solve_mu_sup, sub_feasible_interval, sub_feasible_interval_scan, FamilyParams,
};
use persuasion::model::{Prior, UtilityFunction};
use support::oracle::sup_mass_by_bisection;

#[test]
fn two_receiver_mass_matches_bisection() {
    for i in 1..50 {
        let lambda = 0.5 + i as f64 / 100.0;
        for rho in [0.05, 0.1, 0.2, 0.3, 0.4, 0.45, 0.5] {
            let mu = solve_mu_sup(lambda, rho).unwrap();
            let oracle = sup_mass_by_bisection(lambda, &[0.0, rho, 1.0]);
            assert!((mu - oracle).abs() <= 1e-10, "λ={lambda} ρ={rho}: {mu} vs {oracle}");
            let residual = mu * mu * (2.0 * rho - 1.0) + mu * lambda * (3.0 - 2.0 * rho) + 2.0 - 4.0 * lambda;
            assert!(residual.abs() <= 1e-12);
        }
    }
}

#[test]
fn multi_receiver_mass_matches_bisection() {
    for n in 2..=8 {
        for tau in [1.2, 1.5, 2.0, 3.0] {
            let v = UtilityFunction::power(n, tau).unwrap();
            for lambda in [0.55, 0.7, 0.85, 0.95] {
                let c = construct_sup_large_multi(Prior::new(lambda).unwrap(), &v).unwrap();
                let FamilyParams::SupLarge(p) = c.params else { panic!("wrong params") };
                let oracle = sup_mass_by_bisection(lambda, v.anonymous_values().unwrap());
                assert!((p.mu_s - oracle).abs() <= 1e-10, "n={n} τ={tau} λ={lambda}: {} vs {oracle}", p.mu_s);
            }
        }
    }
}

#[test]
fn closed_form_interval_matches_condition_scan() {
    for lambda in [0.52, 0.55, 0.6, 0.65, 0.7, 0.8, 0.9] {
        for rho in [0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 1.0] {
            let closed = sub_feasible_interval(lambda, rho);
            let scan = sub_feasible_interval_scan(lambda, rho, DEFAULT_SCAN_STEP);
            match closed {
                None => assert!(scan.is_empty(), "λ={lambda} ρ={rho}: scan {scan:?}"),
                Some(i) => {
                    assert_eq!(scan.len(), 1, "λ={lambda} ρ={rho}");
                    assert!((scan[0].0 - i.lo).abs() <= 1e-8 && (scan[0].1 - i.hi).abs() <= 1e-8);
                }
            }
        }
    }
}
