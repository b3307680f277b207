use super::ModelError;

/// Largest receiver count supported by subset bitmasks.
pub const MAX_RECEIVERS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UtilityKind {
    Anonymous,
    General,
}

#[derive(Debug, Clone, PartialEq)]
enum Table {
    /// v(0..=n), indexed by the number of receivers won.
    Anonymous(Vec<f64>),
    /// V(S) indexed by bitmask, receiver j is bit j-1.
    General(Vec<f64>),
}

/// Set function V over subsets of the receivers.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityFunction {
    n: usize,
    table: Table,
}

fn check_n(n: usize) -> Result<(), ModelError> {
    if n == 0 || n > MAX_RECEIVERS {
        return Err(ModelError::ReceiverCount {
            got: n,
            max: MAX_RECEIVERS,
        });
    }
    Ok(())
}

fn check_values(values: &[f64]) -> Result<(), ModelError> {
    for (mask, &value) in values.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(ModelError::InvalidUtilityValue { mask, value });
        }
    }
    Ok(())
}

impl UtilityFunction {
    /// Anonymous utility from v(0), ..., v(n); n is inferred from the length.
    pub fn anonymous(values: Vec<f64>) -> Result<Self, ModelError> {
        let n = values.len().saturating_sub(1);
        Self::anonymous_with_n(n, values)
    }

    /// Anonymous utility with an explicit receiver count checked against the table.
    pub fn anonymous_with_n(n: usize, values: Vec<f64>) -> Result<Self, ModelError> {
        check_n(n)?;
        if values.len() != n + 1 {
            return Err(ModelError::DimensionMismatch {
                n,
                expected: n + 1,
                got: values.len(),
            });
        }
        check_values(&values)?;
        Ok(Self {
            n,
            table: Table::Anonymous(values),
        })
    }

    /// General utility from a table of 2^n values indexed by bitmask.
    pub fn general(n: usize, values: Vec<f64>) -> Result<Self, ModelError> {
        check_n(n)?;
        if values.len() != 1 << n {
            return Err(ModelError::DimensionMismatch {
                n,
                expected: 1 << n,
                got: values.len(),
            });
        }
        check_values(&values)?;
        Ok(Self {
            n,
            table: Table::General(values),
        })
    }

    /// Power family v(k) = k^tau.
    pub fn power(n: usize, tau: f64) -> Result<Self, ModelError> {
        let values = (0..=n)
            .map(|k| if k == 0 { 0.0 } else { (k as f64).powf(tau) })
            .collect();
        Self::anonymous_with_n(n, values)
    }

    /// Two-receiver anonymous utility normalized to v = (0, rho, 1).
    pub fn two_receiver(rho: f64) -> Result<Self, ModelError> {
        Self::anonymous(vec![0.0, rho, 1.0])
    }

    /// Additive utility v(k) = k * unit.
    pub fn additive(n: usize, unit: f64) -> Result<Self, ModelError> {
        Self::anonymous_with_n(n, (0..=n).map(|k| k as f64 * unit).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> UtilityKind {
        match self.table {
            Table::Anonymous(_) => UtilityKind::Anonymous,
            Table::General(_) => UtilityKind::General,
        }
    }

    /// v(0..=n) when the utility is anonymous.
    pub fn anonymous_values(&self) -> Option<&[f64]> {
        match &self.table {
            Table::Anonymous(v) => Some(v),
            Table::General(_) => None,
        }
    }

    /// V(S) for the subset encoded by `mask`.
    pub fn value(&self, mask: usize) -> f64 {
        match &self.table {
            Table::Anonymous(v) => v[mask.count_ones() as usize],
            Table::General(v) => v[mask],
        }
    }

    /// V of the full receiver set.
    pub fn full_value(&self) -> f64 {
        self.value((1 << self.n) - 1)
    }

    /// Largest value of V over all subsets.
    pub fn max_value(&self) -> f64 {
        match &self.table {
            Table::Anonymous(v) => v.iter().cloned().fold(0.0, f64::max),
            Table::General(v) => v.iter().cloned().fold(0.0, f64::max),
        }
    }

    /// Expands to the 2^n table regardless of representation.
    pub fn to_table(&self) -> Vec<f64> {
        (0..1usize << self.n).map(|m| self.value(m)).collect()
    }

    /// True when V(S) = v(1)·|S| for some v(1).
    pub fn is_additive(&self, tol: f64) -> bool {
        let unit = self.value(1);
        (0..1usize << self.n).all(|m| (self.value(m) - unit * m.count_ones() as f64).abs() <= tol)
    }

    /// Curvature class of an anonymous utility, `None` for general tables.
    pub fn curvature(&self) -> Option<Curvature> {
        let v = self.anonymous_values()?;
        let diffs: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
        let increasing = diffs.windows(2).all(|d| d[1] > d[0]);
        let decreasing = diffs.windows(2).all(|d| d[1] < d[0]);
        let constant = diffs.windows(2).all(|d| d[1] == d[0]);
        Some(if constant {
            Curvature::Additive
        } else if increasing {
            Curvature::StrictlySupermodular
        } else if decreasing {
            Curvature::StrictlySubmodular
        } else {
            Curvature::Mixed
        })
    }
}

/// Shape of the increments of an anonymous utility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    StrictlySupermodular,
    StrictlySubmodular,
    Additive,
    Mixed,
}

/// One violated requirement together with the witnessing subsets.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptySetNonzero { value: f64 },
    /// V(subset) > V(superset).
    NotMonotone { subset: usize, superset: usize },
    /// Receiver never changes the value of any set it joins.
    Degenerate { receiver: usize },
}

/// Result of `validate_utility`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub strictly_monotone: bool,
    pub curvature: Option<Curvature>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks normalization, monotonicity and non-degeneracy; single-receiver
/// additions suffice because monotonicity is transitive along chains.
pub fn validate_utility(v: &UtilityFunction) -> ValidationReport {
    let n = v.n();
    let mut violations = Vec::new();
    if v.value(0) != 0.0 {
        violations.push(Violation::EmptySetNonzero { value: v.value(0) });
    }
    let mut strictly_monotone = true;
    let mut pivotal = vec![false; n];
    for mask in 0..1usize << n {
        for (j, seen) in pivotal.iter_mut().enumerate() {
            if mask & (1 << j) != 0 {
                continue;
            }
            let sup = mask | (1 << j);
            let (a, b) = (v.value(mask), v.value(sup));
            if a > b {
                violations.push(Violation::NotMonotone {
                    subset: mask,
                    superset: sup,
                });
            }
            if a < b {
                *seen = true;
            } else {
                strictly_monotone = false;
            }
        }
    }
    for (j, seen) in pivotal.iter().enumerate() {
        if !seen {
            violations.push(Violation::Degenerate { receiver: j + 1 });
        }
    }
    ValidationReport {
        violations,
        strictly_monotone,
        curvature: v.curvature(),
    }
}
