//! Grid verification of symmetric equilibria.

use super::{structural_diagnostics, tolerance, AnalysisError, StructuralDiagnostics};
use crate::equilibria::Construction;
use crate::lp::{best_response_on_table, HyperplaneCertificate, PayoffTable};
use crate::model::{discretize_policy, Grid, Prior, SignalingPolicy, UtilityFunction};
use crate::payoff::{PayoffEvaluator, SegmentMode};

/// Closed-form certificates deviating from the exact payoff by more than
/// this are flagged.
pub const CLOSED_FORM_ALERT: f64 = 1e-6;

/// Largest grid on which a closed-form certificate is checked point by point;
/// finer grids are thinned per axis for that check.
const CLOSED_FORM_MAX_POINTS: usize = 200_000;

/// Closed-form certificate checked against exact segment payoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormCheck {
    pub certificate: HyperplaneCertificate,
    /// max over checked grid points of Π(q,G) − (α·q+β).
    pub envelope_violation: f64,
    /// max over the discretized support of |Π(q,G) − (α·q+β)|.
    pub support_slack: f64,
    /// max_j |α_j(LP) − α_j(closed form)|, informational.
    pub alpha_distance: f64,
    pub beta_distance: f64,
    /// Points per axis of the grid used for the envelope check.
    pub check_points_per_axis: usize,
    /// True when either residual exceeds `CLOSED_FORM_ALERT`.
    pub alert: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport {
    /// E_{q~G}[Π(q,G)] over discretize(G,K).
    pub payoff_vs_self: f64,
    pub best_response_value: f64,
    pub gap: f64,
    /// LP dual certificate.
    pub certificate: HyperplaneCertificate,
    pub max_envelope_violation: f64,
    /// max over discretize(G,K) of |Π(q) − (α·q+β)| for the LP certificate.
    pub support_slack: f64,
    pub diagnostics: StructuralDiagnostics,
    pub points_per_axis: usize,
    pub k: usize,
    pub tol: f64,
    pub is_equilibrium: bool,
    pub closed_form: Option<ClosedFormCheck>,
    pub lp_iterations: usize,
    pub duality_gap: f64,
}

/// Verifies G against its own best response on the grid.
pub fn verify_equilibrium(
    g: &SignalingPolicy,
    prior: Prior,
    v: &UtilityFunction,
    grid: Grid,
    k: usize,
) -> Result<EquilibriumReport, AnalysisError> {
    verify_with_certificate(g, prior, v, grid, k, None)
}

/// Verifies a construction, also checking its closed-form certificate.
pub fn verify_construction(c: &Construction, grid: Grid, k: usize) -> Result<EquilibriumReport, AnalysisError> {
    verify_with_certificate(&c.policy, c.prior, &c.utility, grid, k, c.certificate.as_ref())
}

/// The LP columns are the grid plus the atoms of discretize(G,K), so G itself
/// is feasible and the gap is nonnegative up to solver precision.
pub fn verify_with_certificate(
    g: &SignalingPolicy,
    prior: Prior,
    v: &UtilityFunction,
    grid: Grid,
    k: usize,
    closed_form: Option<&HyperplaneCertificate>,
) -> Result<EquilibriumReport, AnalysisError> {
    if g.n() != v.n() {
        return Err(AnalysisError::DimensionMismatch { policy: g.n(), utility: v.n() });
    }
    let table = PayoffTable::build(g, v, grid, k)?;
    let disc = discretize_policy(g, k);
    let eval = PayoffEvaluator::new(g, v, SegmentMode::Discretized(k));
    let points: Vec<Vec<f64>> = disc.atoms().iter().map(|a| a.point.clone()).collect();
    let values: Vec<f64> = points.iter().map(|p| eval.payoff(p)).collect();
    let payoff_vs_self: f64 = disc.atoms().iter().zip(&values).map(|(a, x)| a.weight * x).sum();
    let br = best_response_on_table(&table, prior, &points, &values)?;
    let support_slack = points
        .iter()
        .zip(&values)
        .map(|(p, x)| (br.certificate.evaluate(p) - x).abs())
        .fold(0.0, f64::max);
    let closed_form = closed_form.map(|cf| check_closed_form(g, v, grid, &points, cf, &br.certificate));
    let tol = tolerance(grid, k, v.max_value());
    let gap = br.value - payoff_vs_self;
    Ok(EquilibriumReport {
        payoff_vs_self,
        best_response_value: br.value,
        gap,
        certificate: br.certificate,
        max_envelope_violation: br.envelope_violation,
        support_slack,
        diagnostics: structural_diagnostics(g, v),
        points_per_axis: grid.points_per_axis(),
        k,
        tol,
        is_equilibrium: gap <= tol,
        closed_form,
        lp_iterations: br.lp.iterations,
        duality_gap: br.lp.diagnostics.duality_gap,
    })
}

fn check_closed_form(
    g: &SignalingPolicy,
    v: &UtilityFunction,
    grid: Grid,
    support: &[Vec<f64>],
    cf: &HyperplaneCertificate,
    lp: &HyperplaneCertificate,
) -> ClosedFormCheck {
    let exact = PayoffEvaluator::new(g, v, SegmentMode::Continuous);
    let n = grid.n();
    let mut ppa = grid.points_per_axis();
    while ppa > 2 && ppa.pow(n as u32) > CLOSED_FORM_MAX_POINTS {
        ppa = (ppa + 1) / 2;
    }
    let check_grid = Grid::new(n, ppa).expect("thinned grid is valid");
    let mut envelope_violation = f64::NEG_INFINITY;
    check_grid.for_each_point(|_, q| {
        envelope_violation = envelope_violation.max(exact.payoff(q) - cf.evaluate(q));
    });
    let support_slack = support
        .iter()
        .map(|p| (exact.payoff(p) - cf.evaluate(p)).abs())
        .fold(0.0, f64::max);
    let alpha_distance = cf
        .alpha
        .iter()
        .zip(&lp.alpha)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    ClosedFormCheck {
        certificate: cf.clone(),
        envelope_violation,
        support_slack,
        alpha_distance,
        beta_distance: (cf.beta - lp.beta).abs(),
        check_points_per_axis: ppa,
        alert: envelope_violation > CLOSED_FORM_ALERT || support_slack > CLOSED_FORM_ALERT,
    }
}
