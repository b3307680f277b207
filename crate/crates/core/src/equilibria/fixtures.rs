//! Worked example policies, including equilibria that coexist with the
//! closed-form families.

use super::{EquilibriumError, PolicyBuilder};
use crate::model::{Prior, SignalingPolicy, UtilityFunction};

pub const FIXTURE_IDS: [&str; 5] = ["ex31", "ex42a", "ex42b", "ex43a", "ex43b"];

/// Small increment used where an example only needs strict curvature.
const EPSILON: f64 = 1e-3;
/// Default piece count for the non-uniform segment of ex43b.
const DEFAULT_PIECES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub id: &'static str,
    pub prior: Prior,
    pub utility: UtilityFunction,
    pub policy: SignalingPolicy,
}

/// Example policy by id. `c` sets the half-width for ex31 (default ½) and
/// `pieces` the piece count for ex43b.
pub fn example_fixture(id: &str, c: Option<f64>, pieces: Option<usize>) -> Result<Fixture, EquilibriumError> {
    let prior = |x: f64| Prior::new(x).expect("fixture priors are valid");
    let supermodular = || UtilityFunction::anonymous(vec![0.0, EPSILON, 1.0]);
    let submodular = || UtilityFunction::anonymous(vec![0.0, 1.0, 1.0 + EPSILON]);
    let (id, lambda, utility, policy): (&'static str, f64, UtilityFunction, SignalingPolicy) = match id {
        "ex31" => {
            let c = c.unwrap_or(0.5);
            if !(c > 0.0 && c <= 0.5) {
                return Err(EquilibriumError::ParameterInvariant(format!("ex31 needs 0 < c <= 1/2, got {c}")));
            }
            let l = 0.5;
            let policy = PolicyBuilder::default()
                .segment(1.0, vec![l - c, l + c], vec![l + c, l - c])
                .build(2)?;
            ("ex31", l, UtilityFunction::general(2, vec![0.0, 1.0, 1.0, 1.0])?, policy)
        }
        "ex42a" => {
            let policy = PolicyBuilder::default()
                .segment(1.0, vec![0.0, 0.0], vec![0.8, 0.8])
                .build(2)?;
            ("ex42a", 0.4, supermodular()?, policy)
        }
        "ex42b" => {
            let policy = PolicyBuilder::default()
                .segment(87.0 / 237.0, vec![0.0, 0.0], vec![0.3, 681.0 / 2370.0])
                .segment(2450.0 / 3871.0, vec![0.3, 227.0 / 790.0], vec![0.79, 0.81])
                .build(2)?;
            ("ex42b", 0.4, supermodular()?, policy)
        }
        "ex43a" => {
            let policy = PolicyBuilder::default()
                .segment(1.0, vec![0.0, 0.2], vec![0.2, 0.0])
                .build(2)?;
            ("ex43a", 0.1, submodular()?, policy)
        }
        "ex43b" => {
            let l = 0.1;
            let m = pieces.unwrap_or(DEFAULT_PIECES);
            if m == 0 {
                return Err(EquilibriumError::ParameterInvariant("ex43b needs at least one piece".into()));
            }
            // Density 8q/(9λ²) in q1 on [0, 1.5λ] along q2 = 3λ − 2q1. Each
            // piece splits into two uniform halves weighted to carry the
            // piece's exact mass and mean.
            let top = 1.5 * l;
            let on_line = |q1: f64| vec![q1, 3.0 * l - 2.0 * q1];
            let mut b = PolicyBuilder::default();
            for i in 0..m {
                let x = top * i as f64 / m as f64;
                let y = top * (i + 1) as f64 / m as f64;
                let mass = 4.0 / (9.0 * l * l) * (y * y - x * x);
                let mean = (2.0 / 3.0) * (y * y * y - x * x * x) / (y * y - x * x);
                let d = 0.5 * (y - x);
                let upper = mass * (mean - (x + 0.5 * d)) / d;
                b = b
                    .segment(mass - upper, on_line(x), on_line(x + d))
                    .segment(upper, on_line(x + d), on_line(y));
            }
            ("ex43b", l, submodular()?, b.build(2)?)
        }
        other => return Err(EquilibriumError::UnknownFixture(other.to_string())),
    };
    Ok(Fixture { id, prior: prior(lambda), utility, policy })
}
