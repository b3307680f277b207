use std::io::Write;

use persuasion::equilibria::{sub_feasible_interval_scan, sub_multi_even_interval, sub_multi_odd_interval};
use persuasion::model::{Prior, UtilityFunction};

use crate::args::{RegionArgs, RegionTarget};
use crate::error::CliError;
use crate::output::{float, write_csv};
use crate::sweep::Range;

pub const REGION_HEADER: [&str; 6] = ["lambda", "n", "rho", "feasible", "mu_lb", "mu_ub"];

/// Feasible μ intervals for the submodular large-prior family selected by
/// `target`. For sub-multi the shape parameter is τ of v(k) = k^τ.
pub fn feasible_intervals(
    target: RegionTarget,
    prior: Prior,
    n: usize,
    shape: f64,
    step: f64,
) -> Result<Vec<(f64, f64)>, CliError> {
    Ok(match target {
        RegionTarget::Sub2 => sub_feasible_interval_scan(prior.lambda(), shape, step),
        RegionTarget::SubMulti => {
            let v = UtilityFunction::power(n, shape)?;
            if n % 2 == 0 {
                sub_multi_even_interval(prior.lambda(), v.anonymous_values().expect("power is anonymous"), step)
            } else {
                sub_multi_odd_interval(prior, &v, step)
            }
        }
    })
}

pub fn run(a: RegionArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let prior = Prior::new(a.lambda)?;
    if !(a.scan_step > 0.0 && a.scan_step < 0.5) {
        return Err(CliError::Usage(format!("--scan-step must lie in (0, 1/2), got {}", a.scan_step)));
    }
    let params = match a.target {
        RegionTarget::Sub2 => {
            if a.n != 2 {
                return Err(CliError::Usage(format!("target sub2 has two receivers, got --n {}", a.n)));
            }
            Range::new(0.5, 1.0, a.param_step)?.values()
        }
        RegionTarget::SubMulti => {
            if a.n < 2 {
                return Err(CliError::Usage("target sub-multi needs --n of at least 2".into()));
            }
            Range::new(a.param_step, 1.0, a.param_step)?.values()
        }
    };
    let mut rows = Vec::new();
    for shape in params {
        let intervals = feasible_intervals(a.target, prior, a.n, shape, a.scan_step)?;
        let base = vec![float(a.lambda), a.n.to_string(), float(shape)];
        if intervals.is_empty() {
            rows.push([base.clone(), vec!["false".into(), String::new(), String::new()]].concat());
        }
        for (lo, hi) in intervals {
            rows.push([base.clone(), vec!["true".into(), float(lo), float(hi)]].concat());
        }
    }
    write_csv(a.csv.as_deref(), &REGION_HEADER, &rows, out)?;
    Ok(0)
}
