use super::{ModelError, Prior};

/// Smallest weight accepted for an atom or segment.
pub const MIN_WEIGHT: f64 = 1e-12;
/// Allowed deviation of the total weight from one.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Coordinates within this distance outside [0,1] are clamped instead of rejected.
const COORD_SLACK: f64 = 1e-12;

/// Point mass in posterior space.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub weight: f64,
    pub point: Vec<f64>,
}

/// Uniform density along the straight segment from `a` to `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub weight: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Distribution over posterior vectors made of atoms and uniform segments.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalingPolicy {
    n: usize,
    atoms: Vec<Atom>,
    segments: Vec<Segment>,
}

fn clean_point(p: &mut [f64], n: usize) -> Result<(), ModelError> {
    if p.len() != n {
        return Err(ModelError::PointDimension {
            expected: n,
            got: p.len(),
        });
    }
    for x in p.iter_mut() {
        if !x.is_finite() || *x < -COORD_SLACK || *x > 1.0 + COORD_SLACK {
            return Err(ModelError::CoordinateOutOfRange(*x));
        }
        *x = x.clamp(0.0, 1.0);
    }
    Ok(())
}

fn check_weight(w: f64) -> Result<(), ModelError> {
    if w.is_finite() && w > MIN_WEIGHT {
        Ok(())
    } else {
        Err(ModelError::WeightTooSmall(w))
    }
}

impl SignalingPolicy {
    /// Validates weights, coordinates and dimensions. Coordinates within 1e-12
    /// of the unit cube are clamped into it.
    pub fn new(
        n: usize,
        mut atoms: Vec<Atom>,
        mut segments: Vec<Segment>,
    ) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::ReceiverCount {
                got: 0,
                max: super::MAX_RECEIVERS,
            });
        }
        if atoms.is_empty() && segments.is_empty() {
            return Err(ModelError::EmptyPolicy);
        }
        for atom in &mut atoms {
            check_weight(atom.weight)?;
            clean_point(&mut atom.point, n)?;
        }
        for seg in &mut segments {
            check_weight(seg.weight)?;
            clean_point(&mut seg.a, n)?;
            clean_point(&mut seg.b, n)?;
            if seg.a == seg.b {
                return Err(ModelError::DegenerateSegment);
            }
        }
        let policy = Self { n, atoms, segments };
        let total = policy.total_weight();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(ModelError::WeightSum(total));
        }
        Ok(policy)
    }

    /// Policy made of atoms only.
    pub fn from_atoms(n: usize, atoms: Vec<Atom>) -> Result<Self, ModelError> {
        Self::new(n, atoms, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_atomic(&self) -> bool {
        self.segments.is_empty()
    }

    /// Sum of all weights in a fixed order.
    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum::<f64>()
            + self.segments.iter().map(|s| s.weight).sum::<f64>()
    }

    /// Mean of the marginal distribution of receiver `j`.
    pub fn marginal_mean(&self, j: usize) -> f64 {
        self.atoms.iter().map(|a| a.weight * a.point[j]).sum::<f64>()
            + self
                .segments
                .iter()
                .map(|s| s.weight * (s.a[j] + s.b[j]) / 2.0)
                .sum::<f64>()
    }
}

/// Parameter of the k-th of K discretization atoms along a segment.
pub fn segment_atom_parameter(k: usize, count: usize) -> f64 {
    (k as f64 + 0.5) / count as f64
}

/// Coordinate `j` of the point at parameter `t` on a segment. Every code path
/// that places atoms on segments goes through this formula.
#[inline]
pub fn segment_point(a: f64, b: f64, t: f64) -> f64 {
    a + t * (b - a)
}

/// Per-receiver marginal mean minus the prior.
pub fn check_bayes_plausible(g: &SignalingPolicy, prior: Prior) -> Vec<f64> {
    (0..g.n()).map(|j| g.marginal_mean(j) - prior.lambda()).collect()
}

/// Replaces each segment by `k` equally weighted atoms at the midpoints of
/// its `k` equal sub-intervals. Atoms of the input are kept first, in order.
pub fn discretize_policy(g: &SignalingPolicy, k: usize) -> SignalingPolicy {
    assert!(k >= 1, "discretization needs at least one atom per segment");
    let mut atoms = g.atoms.clone();
    atoms.reserve(k * g.segments.len());
    for seg in &g.segments {
        let w = seg.weight / k as f64;
        for i in 0..k {
            let t = segment_atom_parameter(i, k);
            let point = seg
                .a
                .iter()
                .zip(&seg.b)
                .map(|(&a, &b)| segment_point(a, b, t))
                .collect();
            atoms.push(Atom { weight: w, point });
        }
    }
    // Discretized weights may fall below the construction floor; the input
    // already passed validation, so the output is assembled directly.
    SignalingPolicy {
        n: g.n,
        atoms,
        segments: Vec::new(),
    }
}
