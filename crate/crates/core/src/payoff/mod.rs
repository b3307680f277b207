//! Win-set probabilities, expected sender payoff and welfare.

mod evaluator;

pub use evaluator::{PayoffEvaluator, SegmentMode};

use crate::model::{discretize_policy, SignalingPolicy, UtilityFunction};
use thiserror::Error;

/// Absolute tolerance under which two posteriors count as tied.
pub const TIE_TOL: f64 = 1e-12;
/// Default number of atoms per segment when discretizing.
pub const DEFAULT_K: usize = 512;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PayoffError {
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("opponent policy must consist of atoms only")]
    NotAtomic,
    #[error("subset {mask:#b} is not a subset of {n} receivers")]
    SubsetOutOfRange { mask: usize, n: usize },
}

/// How one receiver compares the two senders' posteriors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Win,
    Tie,
    Lose,
}

/// Status of own posterior `q` against opponent posterior `p`.
#[inline]
pub fn classify(q: f64, p: f64, tie_tol: f64) -> Status {
    if (p - q).abs() <= tie_tol {
        Status::Tie
    } else if p < q {
        Status::Win
    } else {
        Status::Lose
    }
}

/// Per-receiver outcome of `q` against one opponent atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinOutcome {
    pub statuses: Vec<Status>,
}

impl WinOutcome {
    pub fn new(q: &[f64], p: &[f64], tie_tol: f64) -> Self {
        Self {
            statuses: q.iter().zip(p).map(|(&a, &b)| classify(a, b, tie_tol)).collect(),
        }
    }

    /// Bitmasks of strict wins and ties.
    pub fn masks(&self) -> (usize, usize) {
        let mut win = 0;
        let mut tie = 0;
        for (j, s) in self.statuses.iter().enumerate() {
            match s {
                Status::Win => win |= 1 << j,
                Status::Tie => tie |= 1 << j,
                Status::Lose => {}
            }
        }
        (win, tie)
    }
}

fn check_dims(q: &[f64], f: &SignalingPolicy) -> Result<(), PayoffError> {
    if q.len() != f.n() {
        return Err(PayoffError::DimensionMismatch {
            expected: f.n(),
            got: q.len(),
        });
    }
    if !f.is_atomic() {
        return Err(PayoffError::NotAtomic);
    }
    Ok(())
}

/// Probability that exactly the receivers in `mask` choose the sender
/// signalling `q` against the atomic opponent `f`, ties split evenly.
pub fn win_set_probability(
    q: &[f64],
    mask: usize,
    f: &SignalingPolicy,
    tie_tol: f64,
) -> Result<f64, PayoffError> {
    check_dims(q, f)?;
    let n = f.n();
    if mask >> n != 0 {
        return Err(PayoffError::SubsetOutOfRange { mask, n });
    }
    let mut total = 0.0;
    for atom in f.atoms() {
        let (win, tie) = WinOutcome::new(q, &atom.point, tie_tol).masks();
        if win & !mask == 0 && mask & !(win | tie) == 0 {
            total += atom.weight * 0.5f64.powi(tie.count_ones() as i32);
        }
    }
    Ok(total)
}

/// Π(q,F) as the literal sum over all 2^n win sets.
pub fn expected_payoff_by_subsets(
    q: &[f64],
    f: &SignalingPolicy,
    v: &UtilityFunction,
) -> Result<f64, PayoffError> {
    check_dims(q, f)?;
    let mut total = 0.0;
    for mask in 0..1usize << f.n() {
        total += win_set_probability(q, mask, f, TIE_TOL)? * v.value(mask);
    }
    Ok(total)
}

/// Π(q,F) accumulated per opponent atom. Anonymous utilities use the
/// binomial identity E[v(#wins + Binomial(#ties, 1/2))].
pub fn expected_payoff(
    q: &[f64],
    f: &SignalingPolicy,
    v: &UtilityFunction,
) -> Result<f64, PayoffError> {
    check_dims(q, f)?;
    let table = OutcomeTable::new(v);
    let mut total = 0.0;
    for atom in f.atoms() {
        let (win, tie) = WinOutcome::new(q, &atom.point, TIE_TOL).masks();
        total += atom.weight * table.value(win, tie);
    }
    Ok(total)
}

/// Expected utility of a single outcome, with ties resolved by fair coins.
#[derive(Debug, Clone)]
pub(crate) struct OutcomeTable<'a> {
    v: &'a UtilityFunction,
    /// For anonymous V: entry [wins * (n+1) + ties].
    anonymous: Option<Vec<f64>>,
    n: usize,
}

impl<'a> OutcomeTable<'a> {
    pub(crate) fn new(v: &'a UtilityFunction) -> Self {
        let n = v.n();
        let anonymous = v.anonymous_values().map(|vals| {
            let mut table = vec![0.0; (n + 1) * (n + 1)];
            for wins in 0..=n {
                for ties in 0..=n - wins {
                    let mut coef = 0.5f64.powi(ties as i32);
                    let mut acc = 0.0;
                    for i in 0..=ties {
                        acc += coef * vals[wins + i];
                        coef = coef * (ties - i) as f64 / (i + 1) as f64;
                    }
                    table[wins * (n + 1) + ties] = acc;
                }
            }
            table
        });
        Self { v, anonymous, n }
    }

    #[inline]
    pub(crate) fn value(&self, win: usize, tie: usize) -> f64 {
        let ties = tie.count_ones() as usize;
        if let Some(t) = &self.anonymous {
            return t[win.count_ones() as usize * (self.n + 1) + ties];
        }
        if tie == 0 {
            return self.v.value(win);
        }
        // Enumerate subsets of the tie mask.
        let mut acc = 0.0;
        let mut sub = tie;
        loop {
            acc += self.v.value(win | sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & tie;
        }
        acc * 0.5f64.powi(ties as i32)
    }
}

/// WEL(G,F): total expected utility of both senders, with segments
/// discretized into `k` atoms each.
pub fn welfare(g: &SignalingPolicy, f: &SignalingPolicy, v: &UtilityFunction, k: usize) -> f64 {
    let mode = SegmentMode::Discretized(k);
    let against_f = PayoffEvaluator::new(f, v, mode);
    let against_g = PayoffEvaluator::new(g, v, mode);
    let first: f64 = discretize_policy(g, k)
        .atoms()
        .iter()
        .map(|a| a.weight * against_f.payoff(&a.point))
        .sum();
    let second: f64 = discretize_policy(f, k)
        .atoms()
        .iter()
        .map(|a| a.weight * against_g.payoff(&a.point))
        .sum();
    first + second
}

/// E_{q~G}[Π(q,G)] with one shared discretization.
pub fn payoff_vs_self(g: &SignalingPolicy, v: &UtilityFunction, k: usize) -> f64 {
    let eval = PayoffEvaluator::new(g, v, SegmentMode::Discretized(k));
    discretize_policy(g, k)
        .atoms()
        .iter()
        .map(|a| a.weight * eval.payoff(&a.point))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Atom, Segment};

    fn atoms(n: usize, list: &[(f64, &[f64])]) -> SignalingPolicy {
        SignalingPolicy::from_atoms(
            n,
            list.iter()
                .map(|(w, p)| Atom {
                    weight: *w,
                    point: p.to_vec(),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn double_tie_splits_evenly() {
        let f = atoms(2, &[(1.0, &[1.0, 1.0])]);
        for mask in 0..4 {
            assert_eq!(win_set_probability(&[1.0, 1.0], mask, &f, TIE_TOL).unwrap(), 0.25);
        }
    }

    #[test]
    fn strict_outcome() {
        let f = atoms(2, &[(1.0, &[0.5, 0.5])]);
        let p: Vec<f64> = (0..4)
            .map(|m| win_set_probability(&[0.6, 0.2], m, &f, TIE_TOL).unwrap())
            .collect();
        assert_eq!(p, vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn two_atom_enumeration() {
        let f = atoms(2, &[(0.5, &[0.4, 0.4]), (0.5, &[0.6, 0.6])]);
        let q = [0.5, 0.5];
        assert_eq!(win_set_probability(&q, 0b11, &f, TIE_TOL).unwrap(), 0.5);
        assert_eq!(win_set_probability(&q, 0b00, &f, TIE_TOL).unwrap(), 0.5);
        let v = UtilityFunction::anonymous(vec![0.0, 0.4, 1.0]).unwrap();
        assert_eq!(expected_payoff(&q, &f, &v).unwrap(), 0.5);
    }

    #[test]
    fn tie_at_top_gives_half_t_plus_quarter_r() {
        let f = atoms(2, &[(1.0, &[1.0, 1.0])]);
        let (t, r) = (0.3, 1.0);
        let v = UtilityFunction::anonymous(vec![0.0, t, r]).unwrap();
        let expected = 0.5 * t + 0.25 * r;
        assert!((expected_payoff(&[1.0, 1.0], &f, &v).unwrap() - expected).abs() < 1e-15);
        assert!((expected_payoff_by_subsets(&[1.0, 1.0], &f, &v).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn zero_signal_never_wins() {
        let f = atoms(2, &[(0.3, &[0.1, 0.2]), (0.7, &[0.9, 0.05])]);
        let v = UtilityFunction::anonymous(vec![0.0, 1.0, 1.5]).unwrap();
        assert_eq!(expected_payoff(&[0.0, 0.0], &f, &v).unwrap(), 0.0);
    }

    #[test]
    fn errors() {
        let f = atoms(2, &[(1.0, &[0.5, 0.5])]);
        let v = UtilityFunction::anonymous(vec![0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            expected_payoff(&[0.5], &f, &v),
            Err(PayoffError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            win_set_probability(&[0.5, 0.5], 4, &f, TIE_TOL),
            Err(PayoffError::SubsetOutOfRange { .. })
        ));
        let seg = SignalingPolicy::new(
            2,
            vec![],
            vec![Segment {
                weight: 1.0,
                a: vec![0.0, 0.0],
                b: vec![1.0, 1.0],
            }],
        )
        .unwrap();
        assert_eq!(expected_payoff(&[0.5, 0.5], &seg, &v), Err(PayoffError::NotAtomic));
    }

    #[test]
    fn additive_welfare_is_n_without_ties() {
        let g = SignalingPolicy::new(
            2,
            vec![],
            vec![Segment {
                weight: 1.0,
                a: vec![0.0, 0.0],
                b: vec![0.6, 0.6],
            }],
        )
        .unwrap();
        let f = SignalingPolicy::new(
            2,
            vec![],
            vec![Segment {
                weight: 1.0,
                a: vec![0.0, 0.6],
                b: vec![0.6, 0.0],
            }],
        )
        .unwrap();
        let v = UtilityFunction::additive(2, 1.0).unwrap();
        assert!((welfare(&g, &f, &v, 512) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_welfare_error_model() {
        let lambda = 0.3;
        let g = SignalingPolicy::new(
            2,
            vec![],
            vec![Segment {
                weight: 1.0,
                a: vec![0.0, 0.0],
                b: vec![2.0 * lambda, 2.0 * lambda],
            }],
        )
        .unwrap();
        let v = UtilityFunction::anonymous(vec![0.0, 0.4, 1.0]).unwrap();
        let w = welfare(&g, &g, &v, 512);
        // Self ties cost exactly R(2)/K with R(2) = t - r/2.
        assert!((w - (1.0 + (0.4 - 0.5) / 512.0)).abs() < 1e-12, "{w}");
        assert!((w - 1.0).abs() <= 1.0 / 512.0);
    }
}
