//! Fast Π(q,F) for policies with segments.
//!
//! Along a segment each coordinate is monotone in the segment parameter, so
//! every receiver's status changes at most twice. The parameter range splits
//! into at most 2n+1 pieces of constant outcome, and each piece contributes
//! its mass times the outcome value. In discretized mode piece boundaries are
//! located by direct comparison of the discretization atoms, so the result
//! equals the atom-by-atom sum over `discretize_policy(F, K)`.

use super::{classify, OutcomeTable, Status, TIE_TOL};
use crate::model::{segment_atom_parameter, segment_point, Segment, SignalingPolicy, UtilityFunction, MAX_RECEIVERS};

/// Treatment of segments in the opponent policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentMode {
    /// Each segment stands for its `K` discretization atoms.
    Discretized(usize),
    /// Exact uniform density; ties along non-constant coordinates have
    /// measure zero.
    Continuous,
}

const MAX_BREAKS: usize = 2 * MAX_RECEIVERS + 2;

/// Evaluates Π(q,F) for a fixed opponent policy and utility.
#[derive(Debug, Clone)]
pub struct PayoffEvaluator<'a> {
    policy: &'a SignalingPolicy,
    table: OutcomeTable<'a>,
    mode: SegmentMode,
}

impl<'a> PayoffEvaluator<'a> {
    pub fn new(policy: &'a SignalingPolicy, v: &'a UtilityFunction, mode: SegmentMode) -> Self {
        assert_eq!(policy.n(), v.n(), "policy and utility disagree on n");
        if let SegmentMode::Discretized(k) = mode {
            assert!(k >= 1, "discretization needs at least one atom per segment");
        }
        Self {
            policy,
            table: OutcomeTable::new(v),
            mode,
        }
    }

    pub fn policy(&self) -> &SignalingPolicy {
        self.policy
    }

    pub fn mode(&self) -> SegmentMode {
        self.mode
    }

    /// Π(q,F).
    pub fn payoff(&self, q: &[f64]) -> f64 {
        debug_assert_eq!(q.len(), self.policy.n());
        let mut total = 0.0;
        for atom in self.policy.atoms() {
            let (win, tie) = masks(q, &atom.point);
            total += atom.weight * self.table.value(win, tie);
        }
        for seg in self.policy.segments() {
            total += seg.weight
                * match self.mode {
                    SegmentMode::Discretized(k) => self.discrete_segment(q, seg, k),
                    SegmentMode::Continuous => self.continuous_segment(q, seg),
                };
        }
        total
    }

    /// Average outcome value over the K atoms of one segment.
    fn discrete_segment(&self, q: &[f64], seg: &Segment, k: usize) -> f64 {
        let mut breaks = [0usize; MAX_BREAKS];
        let mut nb = 0;
        breaks[nb] = 0;
        nb += 1;
        breaks[nb] = k;
        nb += 1;
        for j in 0..q.len() {
            if seg.a[j] == seg.b[j] {
                continue;
            }
            let rank = |i: usize| status_rank(q[j], &seg.a[j..], &seg.b[j..], i, k);
            let (lo, hi) = crossing_estimates(q[j], seg.a[j], seg.b[j]);
            breaks[nb] = first_rank_at_least(rank, 1, lo, k);
            breaks[nb + 1] = first_rank_at_least(rank, 2, hi, k);
            nb += 2;
        }
        let breaks = &mut breaks[..nb];
        breaks.sort_unstable();
        let mut acc = 0.0;
        for w in breaks.windows(2) {
            let (start, end) = (w[0], w[1]);
            if end == start {
                continue;
            }
            let t = segment_atom_parameter(start, k);
            let (win, tie) = piece_masks(q, seg, |a, b| segment_point(a, b, t));
            acc += (end - start) as f64 * self.table.value(win, tie);
        }
        acc / k as f64
    }

    /// Exact average outcome value along one segment.
    fn continuous_segment(&self, q: &[f64], seg: &Segment) -> f64 {
        let mut breaks = [0.0f64; MAX_BREAKS];
        let mut nb = 0;
        breaks[nb] = 0.0;
        nb += 1;
        breaks[nb] = 1.0;
        nb += 1;
        for j in 0..q.len() {
            let d = seg.b[j] - seg.a[j];
            if d != 0.0 {
                let t = ((q[j] - seg.a[j]) / d).clamp(0.0, 1.0);
                breaks[nb] = t;
                nb += 1;
            }
        }
        let breaks = &mut breaks[..nb];
        breaks.sort_unstable_by(|x, y| x.total_cmp(y));
        let mut acc = 0.0;
        for w in breaks.windows(2) {
            let len = w[1] - w[0];
            if len <= 0.0 {
                continue;
            }
            let mid = 0.5 * (w[0] + w[1]);
            let (win, tie) = piece_masks_continuous(q, seg, mid);
            acc += len * self.table.value(win, tie);
        }
        acc
    }
}

#[inline]
fn masks(q: &[f64], p: &[f64]) -> (usize, usize) {
    let mut win = 0;
    let mut tie = 0;
    for j in 0..q.len() {
        match classify(q[j], p[j], TIE_TOL) {
            Status::Win => win |= 1 << j,
            Status::Tie => tie |= 1 << j,
            Status::Lose => {}
        }
    }
    (win, tie)
}

#[inline]
fn piece_masks(q: &[f64], seg: &Segment, point: impl Fn(f64, f64) -> f64) -> (usize, usize) {
    let mut win = 0;
    let mut tie = 0;
    for j in 0..q.len() {
        match classify(q[j], point(seg.a[j], seg.b[j]), TIE_TOL) {
            Status::Win => win |= 1 << j,
            Status::Tie => tie |= 1 << j,
            Status::Lose => {}
        }
    }
    (win, tie)
}

/// Outcome at an interior parameter of a continuous piece. Only constant
/// coordinates can tie with positive probability.
#[inline]
fn piece_masks_continuous(q: &[f64], seg: &Segment, t: f64) -> (usize, usize) {
    let mut win = 0;
    let mut tie = 0;
    for j in 0..q.len() {
        if seg.a[j] == seg.b[j] {
            match classify(q[j], seg.a[j], TIE_TOL) {
                Status::Win => win |= 1 << j,
                Status::Tie => tie |= 1 << j,
                Status::Lose => {}
            }
        } else if segment_point(seg.a[j], seg.b[j], t) < q[j] {
            win |= 1 << j;
        }
    }
    (win, tie)
}

/// Orders statuses so that they are nondecreasing along the segment:
/// 0 before the tie band, 1 inside it, 2 after it.
#[inline]
fn status_rank(q: f64, a: &[f64], b: &[f64], i: usize, k: usize) -> u8 {
    let p = segment_point(a[0], b[0], segment_atom_parameter(i, k));
    let s = classify(q, p, TIE_TOL);
    let increasing = b[0] > a[0];
    match (s, increasing) {
        (Status::Tie, _) => 1,
        (Status::Win, true) | (Status::Lose, false) => 0,
        _ => 2,
    }
}

/// Segment parameters where the coordinate enters and leaves the tie band.
fn crossing_estimates(q: f64, a: f64, b: f64) -> (f64, f64) {
    let d = b - a;
    let t1 = (q - TIE_TOL - a) / d;
    let t2 = (q + TIE_TOL - a) / d;
    (t1.min(t2), t1.max(t2))
}

/// Smallest atom index whose rank is at least `r`, or `k` if none. The
/// estimate only seeds the search; exact comparisons decide the answer.
fn first_rank_at_least(rank: impl Fn(usize) -> u8, r: u8, t_est: f64, k: usize) -> usize {
    let guess = t_est * k as f64 - 0.5;
    let mut i = if guess.is_finite() {
        guess.ceil().clamp(0.0, k as f64) as usize
    } else {
        0
    };
    while i > 0 && rank(i - 1) >= r {
        i -= 1;
    }
    while i < k && rank(i) < r {
        i += 1;
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{discretize_policy, Atom};
    use crate::payoff::expected_payoff;

    fn policy(n: usize, atoms: Vec<(f64, Vec<f64>)>, segs: Vec<(f64, Vec<f64>, Vec<f64>)>) -> SignalingPolicy {
        SignalingPolicy::new(
            n,
            atoms.into_iter().map(|(weight, point)| Atom { weight, point }).collect(),
            segs.into_iter().map(|(weight, a, b)| Segment { weight, a, b }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn matches_atom_sum_with_ties() {
        let g = policy(
            2,
            vec![(0.2, vec![1.0, 1.0])],
            vec![
                (0.3, vec![1.0, 0.0], vec![1.0, 0.25]),
                (0.3, vec![0.0, 1.0], vec![0.25, 1.0]),
                (0.2, vec![0.25, 0.75], vec![0.75, 0.25]),
            ],
        );
        let v = UtilityFunction::anonymous(vec![0.0, 1.0, 1.3]).unwrap();
        let k = 64;
        let disc = discretize_policy(&g, k);
        let eval = PayoffEvaluator::new(&g, &v, SegmentMode::Discretized(k));
        let coords = [0.0, 0.1, 0.25, 0.5, 0.51171875, 0.75, 1.0];
        for &x in &coords {
            for &y in &coords {
                let q = [x, y];
                let slow = expected_payoff(&q, &disc, &v).unwrap();
                assert!((eval.payoff(&q) - slow).abs() < 1e-13, "{q:?}");
            }
        }
        // A point sitting exactly on a discretization atom ties with it.
        let q = disc.atoms()[70].point.clone();
        let slow = expected_payoff(&q, &disc, &v).unwrap();
        assert!((eval.payoff(&q) - slow).abs() < 1e-13);
    }

    #[test]
    fn continuous_limit_of_diagonal() {
        let g = policy(2, vec![], vec![(1.0, vec![0.0, 0.0], vec![0.6, 0.6])]);
        let v = UtilityFunction::anonymous(vec![0.0, 0.4, 1.0]).unwrap();
        let eval = PayoffEvaluator::new(&g, &v, SegmentMode::Continuous);
        assert!((eval.payoff(&[0.3, 0.3]) - 0.5).abs() < 1e-15);
        // Above on one coordinate only: win that one receiver half the time.
        assert!((eval.payoff(&[0.3, 1.0]) - (0.5 * 1.0 + 0.5 * 0.4)).abs() < 1e-15);
    }

    #[test]
    fn constant_coordinate_ties_in_continuous_mode() {
        let g = policy(2, vec![], vec![(1.0, vec![1.0, 0.0], vec![1.0, 0.5])]);
        let v = UtilityFunction::anonymous(vec![0.0, 0.6, 1.0]).unwrap();
        let eval = PayoffEvaluator::new(&g, &v, SegmentMode::Continuous);
        // Receiver 1 ties, receiver 2 wins on [0,0.25).
        let expected = 0.5 * (0.5 * 1.0 + 0.5 * 0.6) + 0.5 * (0.5 * 0.6);
        assert!((eval.payoff(&[1.0, 0.25]) - expected).abs() < 1e-15);
    }
}
