//! Necessary-condition screens on the shape of a symmetric equilibrium.

use crate::model::{validate_utility, SignalingPolicy, UtilityFunction};

const EPS: f64 = 1e-12;
/// Intervals closer than this count as touching.
const JOIN_TOL: f64 = 1e-9;

/// Structural flags. `None` means the screen was suppressed because its
/// hypotheses fail for the given utility.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralDiagnostics {
    /// Joint atom away from the all-ones point.
    pub interior_atom_present: bool,
    /// Some marginal has a point mass below 1.
    pub marginal_atom_below_one: Option<bool>,
    /// Some marginal support is not of the form [0, q̂] ∪ {1}.
    pub marginal_support_gap: Option<bool>,
    pub notes: Vec<String>,
}

impl StructuralDiagnostics {
    pub fn all_clear(&self) -> bool {
        !self.interior_atom_present
            && self.marginal_atom_below_one != Some(true)
            && self.marginal_support_gap != Some(true)
    }
}

/// Marginal of receiver j: point masses and the closed intervals covered by
/// non-constant segments.
fn marginal(g: &SignalingPolicy, j: usize) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let mut points = Vec::new();
    let mut intervals = Vec::new();
    for a in g.atoms() {
        points.push((a.point[j], a.weight));
    }
    for s in g.segments() {
        let (x, y) = (s.a[j], s.b[j]);
        if (x - y).abs() <= EPS {
            points.push((x, s.weight));
        } else {
            intervals.push((x.min(y), x.max(y)));
        }
    }
    (points, intervals)
}

fn has_atom_below_one(points: &[(f64, f64)]) -> bool {
    points.iter().any(|&(x, w)| x < 1.0 - EPS && w > 0.0)
}

/// True unless the support below 1 is a single interval starting at 0.
fn has_support_gap(points: &[(f64, f64)], intervals: &[(f64, f64)]) -> bool {
    let mut pieces: Vec<(f64, f64)> = intervals.to_vec();
    pieces.extend(points.iter().filter(|p| p.0 < 1.0 - EPS).map(|p| (p.0, p.0)));
    pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in pieces {
        match merged.last_mut() {
            Some(last) if lo <= last.1 + JOIN_TOL => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    // An interval reaching 1 absorbs a point mass at 1.
    match merged.as_slice() {
        [] => false,
        [(lo, _)] => *lo > JOIN_TOL,
        _ => true,
    }
}

/// Screens G against the shape that every symmetric equilibrium must have:
/// no atom except at the all-ones point, and for strictly monotone V no
/// marginal atom below 1 and a marginal support [0, q̂] ∪ {1}.
pub fn structural_diagnostics(g: &SignalingPolicy, v: &UtilityFunction) -> StructuralDiagnostics {
    let n = g.n();
    let mut notes = Vec::new();
    let interior_atom_present = g
        .atoms()
        .iter()
        .any(|a| a.point.iter().any(|&x| x < 1.0 - EPS));
    if interior_atom_present {
        notes.push("joint atom away from the all-ones point: no mass point except at 1 allowed".into());
    }
    let strict = validate_utility(v).strictly_monotone;
    if !strict {
        notes.push("utility not strictly monotone: marginal screens suppressed".into());
        return StructuralDiagnostics {
            interior_atom_present,
            marginal_atom_below_one: None,
            marginal_support_gap: None,
            notes,
        };
    }
    let mut atom_below = false;
    let mut gap = false;
    for j in 0..n {
        let (points, intervals) = marginal(g, j);
        if has_atom_below_one(&points) {
            atom_below = true;
            notes.push(format!("receiver {}: marginal atom below 1, marginals must be atomless below 1", j + 1));
        }
        if has_support_gap(&points, &intervals) {
            gap = true;
            notes.push(format!("receiver {}: marginal support is not a single interval [0, q] plus 1", j + 1));
        }
    }
    StructuralDiagnostics {
        interior_atom_present,
        marginal_atom_below_one: Some(atom_below),
        marginal_support_gap: Some(gap),
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{construct_sub_large, construct_sup_large, example_fixture};
    use crate::model::{Atom, Prior, Segment};

    #[test]
    fn large_prior_constructions_are_clear() {
        let v = UtilityFunction::two_receiver(0.3).unwrap();
        let c = construct_sup_large(Prior::new(0.75).unwrap(), &v).unwrap();
        assert!(structural_diagnostics(&c.policy, &v).all_clear());
        let v = UtilityFunction::two_receiver(0.8).unwrap();
        let c = construct_sub_large(Prior::new(0.6).unwrap(), &v, None).unwrap();
        let d = structural_diagnostics(&c.policy, &v);
        assert!(d.all_clear(), "{d:?}");
    }

    #[test]
    fn interior_atom_is_flagged() {
        let v = UtilityFunction::two_receiver(0.3).unwrap();
        let g = SignalingPolicy::from_atoms(2, vec![Atom { weight: 1.0, point: vec![0.5, 0.5] }]).unwrap();
        let d = structural_diagnostics(&g, &v);
        assert!(d.interior_atom_present);
        assert_eq!(d.marginal_atom_below_one, Some(true));
    }

    #[test]
    fn gap_is_flagged() {
        let v = UtilityFunction::two_receiver(0.3).unwrap();
        let g = SignalingPolicy::new(
            2,
            vec![],
            vec![
                Segment { weight: 0.5, a: vec![0.0, 0.0], b: vec![0.2, 0.2] },
                Segment { weight: 0.5, a: vec![0.4, 0.4], b: vec![0.6, 0.6] },
            ],
        )
        .unwrap();
        assert_eq!(structural_diagnostics(&g, &v).marginal_support_gap, Some(true));
    }

    #[test]
    fn non_strict_utility_suppresses_marginal_screens() {
        let f = example_fixture("ex31", Some(0.1), None).unwrap();
        let d = structural_diagnostics(&f.policy, &f.utility);
        assert_eq!(d.marginal_support_gap, None);
        assert_eq!(d.marginal_atom_below_one, None);
    }
}
