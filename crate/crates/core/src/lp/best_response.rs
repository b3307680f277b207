//! Best response on a grid: maximize E_g[Π(q,F)] over distributions g on
//! grid points whose marginal means equal the prior.

use super::simplex::{solve_columns, BasicSolution, ColumnSource, LpOptions, LpStatus};
use super::{HyperplaneCertificate, LpError};
use crate::model::{Atom, Grid, Prior, SignalingPolicy, UtilityFunction, MIN_WEIGHT};
use crate::payoff::{PayoffEvaluator, SegmentMode};

/// Π(q, discretize(F,K)) at every grid point. Reusable across priors.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffTable {
    grid: Grid,
    k: usize,
    values: Vec<f64>,
}

impl PayoffTable {
    pub fn build(
        f: &SignalingPolicy,
        v: &UtilityFunction,
        grid: Grid,
        k: usize,
    ) -> Result<Self, LpError> {
        if f.n() != v.n() || f.n() != grid.n() {
            return Err(LpError::DimensionMismatch {
                policy: f.n(),
                utility: v.n(),
                grid: grid.n(),
            });
        }
        let eval = PayoffEvaluator::new(f, v, SegmentMode::Discretized(k));
        let mut values = Vec::with_capacity(grid.len());
        grid.for_each_point(|_, q| values.push(eval.payoff(q)));
        Ok(Self { grid, k, values })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Columns: every grid point, then optional extra points.
struct GridColumns<'a> {
    table: &'a PayoffTable,
    extra_points: &'a [Vec<f64>],
    extra_values: &'a [f64],
    rhs: Vec<f64>,
}

impl GridColumns<'_> {
    fn n(&self) -> usize {
        self.table.grid.n()
    }

    fn point(&self, j: usize, out: &mut [f64]) {
        let grid_len = self.table.values.len();
        if j < grid_len {
            self.table.grid.point(j, out);
        } else {
            out.copy_from_slice(&self.extra_points[j - grid_len]);
        }
    }
}

impl ColumnSource for GridColumns<'_> {
    fn rows(&self) -> usize {
        self.n() + 1
    }

    fn cols(&self) -> usize {
        self.table.values.len() + self.extra_points.len()
    }

    fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    fn cost(&self, j: usize) -> f64 {
        let grid_len = self.table.values.len();
        if j < grid_len {
            self.table.values[j]
        } else {
            self.extra_values[j - grid_len]
        }
    }

    fn column(&self, j: usize, out: &mut [f64]) {
        let n = self.n();
        self.point(j, &mut out[..n]);
        out[n] = 1.0;
    }

    fn price(&self, y: &[f64], visit: &mut dyn FnMut(usize, f64) -> bool) {
        let n = self.n();
        let grid = self.table.grid;
        let m = grid.points_per_axis();
        // scaled[j][i] = α_j times the i-th axis coordinate.
        let scaled: Vec<Vec<f64>> = (0..n)
            .map(|j| (0..m).map(|i| y[j] * grid.coordinate(i)).collect())
            .collect();
        let beta = y[n];
        let mut digits = vec![0usize; n];
        for (idx, &c) in self.table.values.iter().enumerate() {
            let mut hyper = beta;
            for j in 0..n {
                hyper += scaled[j][digits[j]];
            }
            if !visit(idx, c - hyper) {
                return;
            }
            for d in digits.iter_mut() {
                *d += 1;
                if *d < m {
                    break;
                }
                *d = 0;
            }
        }
        let base = self.table.values.len();
        for (e, (p, &c)) in self.extra_points.iter().zip(self.extra_values).enumerate() {
            let hyper = beta + p.iter().zip(y).map(|(x, a)| x * a).sum::<f64>();
            if !visit(base + e, c - hyper) {
                return;
            }
        }
    }
}

/// Optimal grid best response with its dual certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    /// Optimal atomic policy; atoms at or below the weight floor are dropped.
    pub policy: SignalingPolicy,
    pub value: f64,
    pub certificate: HyperplaneCertificate,
    /// max over columns of Π(q) − (α·q + β).
    pub envelope_violation: f64,
    /// max over the returned support of |Π(q) − (α·q + β)|.
    pub support_slack: f64,
    pub lp: BasicSolution,
}

/// Best response to `f` over the grid.
pub fn best_response(
    f: &SignalingPolicy,
    prior: Prior,
    v: &UtilityFunction,
    grid: Grid,
    k: usize,
) -> Result<BestResponse, LpError> {
    let table = PayoffTable::build(f, v, grid, k)?;
    best_response_on_table(&table, prior, &[], &[])
}

/// Best response over the grid of `table` plus explicit extra points with
/// precomputed payoffs.
pub fn best_response_on_table(
    table: &PayoffTable,
    prior: Prior,
    extra_points: &[Vec<f64>],
    extra_values: &[f64],
) -> Result<BestResponse, LpError> {
    let n = table.grid.n();
    assert_eq!(extra_points.len(), extra_values.len());
    let mut rhs = vec![prior.lambda(); n];
    rhs.push(1.0);
    let cols = GridColumns {
        table,
        extra_points,
        extra_values,
        rhs,
    };
    let sol = solve_columns(&cols, LpOptions::default());
    if sol.status != LpStatus::Optimal {
        return Err(LpError::Solver(sol.status));
    }
    let certificate = HyperplaneCertificate {
        alpha: sol.duals[..n].to_vec(),
        beta: sol.duals[n],
    };
    let mut atoms = Vec::new();
    let mut support_slack: f64 = 0.0;
    let mut point = vec![0.0; n];
    for &(j, x) in &sol.support {
        cols.point(j, &mut point);
        support_slack = support_slack.max((cols.cost(j) - certificate.evaluate(&point)).abs());
        if x > MIN_WEIGHT {
            atoms.push(Atom {
                weight: x,
                point: point.clone(),
            });
        }
    }
    let total: f64 = atoms.iter().map(|a| a.weight).sum();
    for a in &mut atoms {
        a.weight /= total;
    }
    let policy = SignalingPolicy::from_atoms(n, atoms)?;
    Ok(BestResponse {
        policy,
        value: sol.value,
        certificate,
        envelope_violation: sol.diagnostics.max_reduced_cost,
        support_slack,
        lp: sol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_bayes_plausible, Segment};

    fn single_atom(x: f64) -> SignalingPolicy {
        SignalingPolicy::from_atoms(1, vec![Atom { weight: 1.0, point: vec![x] }]).unwrap()
    }

    #[test]
    fn atom_opponent_on_coarse_grid() {
        // Concave envelope of the payoff at 0.3 mixes 0 and 0.4: value 0.75.
        let f = single_atom(0.3);
        let v = UtilityFunction::anonymous(vec![0.0, 1.0]).unwrap();
        let prior = Prior::new(0.3).unwrap();
        let br = best_response(&f, prior, &v, Grid::new(1, 11).unwrap(), 512).unwrap();
        assert!((br.value - 0.75).abs() < 1e-12, "{}", br.value);
        let pts: Vec<f64> = br.policy.atoms().iter().map(|a| a.point[0]).collect();
        assert!(pts.contains(&0.0));
        assert!(pts.iter().any(|&p| (p - 0.4).abs() < 1e-15));
        assert!(br.envelope_violation <= 1e-9);
        assert!(br.certificate.is_nonnegative(1e-9));
    }

    #[test]
    fn uniform_opponent_gives_half() {
        let f = SignalingPolicy::new(
            1,
            vec![],
            vec![Segment { weight: 1.0, a: vec![0.0], b: vec![0.6] }],
        )
        .unwrap();
        let v = UtilityFunction::anonymous(vec![0.0, 1.0]).unwrap();
        let prior = Prior::new(0.3).unwrap();
        let br = best_response(&f, prior, &v, Grid::new(1, 11).unwrap(), 512).unwrap();
        assert!((br.value - 0.5).abs() <= 0.01, "{}", br.value);
        let r = check_bayes_plausible(&br.policy, prior);
        assert!(r.iter().all(|x| x.abs() <= 1e-9));
    }

    #[test]
    fn two_dimensional_certificate() {
        let f = SignalingPolicy::new(
            2,
            vec![],
            vec![Segment { weight: 1.0, a: vec![0.0, 0.0], b: vec![0.6, 0.6] }],
        )
        .unwrap();
        let v = UtilityFunction::anonymous(vec![0.0, 0.4, 1.0]).unwrap();
        let prior = Prior::new(0.3).unwrap();
        let br = best_response(&f, prior, &v, Grid::new(2, 21).unwrap(), 64).unwrap();
        assert!(br.lp.diagnostics.duality_gap <= 1e-9);
        assert!(br.envelope_violation <= 1e-9);
        assert!(br.support_slack <= 1e-9);
        assert!(br.policy.atoms().len() <= 3);
        // The symmetric equilibrium payoff is v(2)/2.
        assert!((br.value - 0.5).abs() < 0.03, "{}", br.value);
    }

    #[test]
    fn dimension_mismatch() {
        let f = single_atom(0.3);
        let v = UtilityFunction::anonymous(vec![0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            best_response(&f, Prior::new(0.3).unwrap(), &v, Grid::new(1, 5).unwrap(), 8),
            Err(LpError::DimensionMismatch { .. })
        ));
    }
}
