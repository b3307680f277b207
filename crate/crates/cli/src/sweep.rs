//! Parameter sweeps driven by a TOML spec, one CSV per figure.

use std::io::Write;
use std::path::{Path, PathBuf};

use persuasion::analysis::{pos_bound, verify_construction};
use persuasion::equilibria::{
    sub_feasible_interval_scan, sub_multi_even_interval, sub_multi_odd_interval, FamilyRegistry, FamilyRequest,
};
use persuasion::model::{Grid, Prior, UtilityFunction};
use serde::Deserialize;

use crate::args::SweepArgs;
use crate::commands::resolve_family;
use crate::error::CliError;
use crate::output::{float, opt_float, write_csv};

/// Largest number of values one range may expand to.
const MAX_RANGE_LEN: usize = 1_000_000;
/// Range values are rounded to this many decimals to remove step drift.
const RANGE_DECIMALS: i32 = 12;

pub const SWEEP_HEADER: [&str; 11] = [
    "family",
    "lambda",
    "rho_or_tau",
    "n",
    "status",
    "mu",
    "mu_lb",
    "mu_ub",
    "optimal_welfare",
    "eq_welfare",
    "pos_bound",
];
pub const VERIFY_COLUMNS: [&str; 3] = ["gap", "tol", "closed_form_alert"];

/// Inclusive arithmetic range.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, CliError> {
        let r = Self { start, stop, step };
        r.validate().map_err(CliError::Usage)?;
        Ok(r)
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if self.step <= 0.0 {
            return Err(format!("range step must be positive, got {}", self.step));
        }
        if self.stop < self.start {
            return Err(format!("range is empty: stop {} < start {}", self.stop, self.start));
        }
        if (self.stop - self.start) / self.step >= MAX_RANGE_LEN as f64 {
            return Err("range has too many values".into());
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        let scale = 10f64.powi(RANGE_DECIMALS);
        (0..count)
            .map(|i| ((self.start + i as f64 * self.step) * scale).round() / scale)
            .collect()
    }
}

/// A parameter axis given as a range or an explicit list.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    List(Vec<f64>),
    Range(Range),
}

impl Axis {
    fn values(&self) -> Result<Vec<f64>, String> {
        match self {
            Axis::List(v) if v.is_empty() => Err("value list is empty".into()),
            Axis::List(v) => Ok(v.clone()),
            Axis::Range(r) => r.validate().map(|_| r.values()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    pub grid: usize,
    #[serde(rename = "K")]
    pub k: usize,
}

fn default_n() -> Vec<usize> {
    vec![2]
}

fn default_scan_step() -> f64 {
    1e-3
}

/// One figure's sweep: a family over λ × (ρ or τ) × n.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Output is written to fig_<name>.csv.
    pub name: String,
    pub family: String,
    pub lambda: Axis,
    /// Two-receiver utility (0, ρ, 1).
    pub rho: Option<Axis>,
    /// Power utility v(k) = k^τ.
    pub tau: Option<Axis>,
    #[serde(default = "default_n")]
    pub n: Vec<usize>,
    #[serde(default = "default_scan_step")]
    pub scan_step: f64,
    /// Also verify each construction on a grid.
    pub verify: Option<VerifySpec>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    #[serde(rename = "sweep")]
    pub sweeps: Vec<SweepSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Rho(f64),
    Tau(f64),
}

impl Shape {
    fn value(self) -> f64 {
        match self {
            Shape::Rho(x) | Shape::Tau(x) => x,
        }
    }

    fn utility(self, n: usize) -> Result<UtilityFunction, CliError> {
        Ok(match self {
            Shape::Rho(r) => UtilityFunction::two_receiver(r)?,
            Shape::Tau(t) => UtilityFunction::power(n, t)?,
        })
    }
}

/// Expanded and validated sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub name: String,
    pub family: String,
    points: Vec<(usize, Shape, f64)>,
    scan_step: f64,
    verify: Option<VerifySpec>,
}

impl SweepPlan {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn header(&self) -> Vec<&'static str> {
        let mut h = SWEEP_HEADER.to_vec();
        if self.verify.is_some() {
            h.extend(VERIFY_COLUMNS);
        }
        h
    }
}

impl SweepSpec {
    pub fn plan(&self) -> Result<SweepPlan, String> {
        let valid_name = !self.name.is_empty()
            && self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if !valid_name {
            return Err(format!("sweep name {:?} must be nonempty ASCII letters, digits, '_' or '-'", self.name));
        }
        let ctx = |e: String| format!("sweep {}: {e}", self.name);
        let lambdas = self.lambda.values().map_err(ctx)?;
        let shapes: Vec<Shape> = match (&self.rho, &self.tau) {
            (Some(r), None) => r.values().map_err(ctx)?.into_iter().map(Shape::Rho).collect(),
            (None, Some(t)) => t.values().map_err(ctx)?.into_iter().map(Shape::Tau).collect(),
            _ => return Err(ctx("exactly one of rho and tau must be given".into())),
        };
        if self.n.is_empty() {
            return Err(ctx("n list is empty".into()));
        }
        if self.rho.is_some() && self.n.iter().any(|&n| n != 2) {
            return Err(ctx("rho describes two receivers, so n must be [2]".into()));
        }
        if !(self.scan_step > 0.0 && self.scan_step < 0.5) {
            return Err(ctx(format!("scan_step must lie in (0, 1/2), got {}", self.scan_step)));
        }
        if let Some(v) = self.verify {
            if v.grid < 2 || v.k == 0 {
                return Err(ctx("verify needs grid >= 2 and K >= 1".into()));
            }
        }
        let mut points = Vec::new();
        for &n in &self.n {
            for &s in &shapes {
                for &l in &lambdas {
                    points.push((n, s, l));
                }
            }
        }
        Ok(SweepPlan {
            name: self.name.clone(),
            family: self.family.clone(),
            points,
            scan_step: self.scan_step,
            verify: self.verify,
        })
    }
}

pub fn parse_spec(text: &str) -> Result<Vec<SweepPlan>, String> {
    let file: SweepFile = toml::from_str(text).map_err(|e| e.to_string())?;
    if file.sweeps.is_empty() {
        return Err("spec defines no [[sweep]] tables".into());
    }
    let plans = file.sweeps.iter().map(SweepSpec::plan).collect::<Result<Vec<_>, _>>()?;
    let mut names: Vec<&str> = plans.iter().map(|p| p.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(format!("duplicate sweep name {:?}", w[0]));
    }
    Ok(plans)
}

fn status_of(e: &CliError) -> &'static str {
    match e.exit_code() {
        crate::EXIT_REGION => "no_equilibrium",
        crate::EXIT_SOLVER => "solver_failure",
        _ => "invalid",
    }
}

/// Hull of the scanned feasible-mass set for the submodular large-prior
/// families, `None` for other families.
fn mass_interval(family: &str, prior: Prior, v: &UtilityFunction, step: f64) -> Option<(f64, f64)> {
    let values = v.anonymous_values()?;
    let found = match family {
        "sub-large" => sub_feasible_interval_scan(prior.lambda(), values[1] / values[2], step),
        "sub-multi-even" => sub_multi_even_interval(prior.lambda(), values, step),
        "sub-multi-odd" => sub_multi_odd_interval(prior, v, step),
        _ => return None,
    };
    Some(match (found.first(), found.last()) {
        (Some(a), Some(b)) => (a.0, b.1),
        _ => (f64::NAN, f64::NAN),
    })
}

fn row(plan: &SweepPlan, registry: &FamilyRegistry, (n, shape, lambda): (usize, Shape, f64)) -> Vec<String> {
    let family = resolve_family(&plan.family, n);
    let mut out = vec![family.to_string(), float(lambda), float(shape.value()), n.to_string()];
    let width = plan.header().len();
    let fail = |mut out: Vec<String>, e: &CliError| {
        out.push(status_of(e).to_string());
        out.resize(width, String::new());
        out
    };
    let prior = match Prior::new(lambda) {
        Ok(p) => p,
        Err(e) => return fail(out, &e.into()),
    };
    let v = match shape.utility(n) {
        Ok(v) => v,
        Err(e) => return fail(out, &e),
    };
    let interval = if lambda > 0.5 { mass_interval(family, prior, &v, plan.scan_step) } else { None };
    let req = FamilyRequest::new(prior, v);
    let pos = match pos_bound(registry, family, &req) {
        Ok(p) => p,
        Err(e) => {
            let mut r = fail(out, &e.into());
            if let Some((lo, hi)) = interval.filter(|i| !i.0.is_nan()) {
                r[6] = float(lo);
                r[7] = float(hi);
            }
            return r;
        }
    };
    out[0] = pos.family.clone();
    let (lo, hi) = interval.filter(|i| !i.0.is_nan()).unzip();
    out.extend([
        "ok".to_string(),
        opt_float(pos.mu),
        opt_float(lo),
        opt_float(hi),
        float(pos.optimal_welfare),
        float(pos.equilibrium_welfare),
        float(pos.closed_form_bound.unwrap_or(pos.ratio)),
    ]);
    if let Some(spec) = plan.verify {
        let checked = registry
            .construct(&pos.family, &req)
            .map_err(CliError::from)
            .and_then(|c| {
                let grid = Grid::new(n, spec.grid)?;
                verify_construction(&c, grid, spec.k).map_err(CliError::from)
            });
        match checked {
            Ok(r) => out.extend([
                float(r.gap),
                float(r.tol),
                r.closed_form.map_or(String::new(), |cf| cf.alert.to_string()),
            ]),
            Err(e) => {
                out[4] = format!("verify_{}", status_of(&e));
                out.resize(width, String::new());
            }
        }
    }
    out
}

/// Evaluates every point of `plan`, splitting the points into contiguous
/// chunks across `threads` workers; row order follows the plan.
pub fn evaluate(plan: &SweepPlan, registry: &FamilyRegistry, threads: usize) -> Vec<Vec<String>> {
    let threads = threads.clamp(1, plan.points.len().max(1));
    let chunk = plan.points.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = plan
            .points
            .chunks(chunk)
            .map(|pts| s.spawn(move || pts.iter().map(|&p| row(plan, registry, p)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}

pub fn output_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!("fig_{name}.csv"))
}

pub fn run(a: SweepArgs, err: &mut dyn Write) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(&a.spec).map_err(|e| CliError::io(&a.spec, e))?;
    let plans = parse_spec(&text).map_err(|message| CliError::Spec { path: a.spec.clone(), message })?;
    std::fs::create_dir_all(&a.output).map_err(|e| CliError::io(&a.output, e))?;
    let threads = match a.threads {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => t,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let registry = FamilyRegistry::standard();
    for plan in &plans {
        let rows = evaluate(plan, &registry, threads);
        let path = output_path(&a.output, &plan.name);
        write_csv(Some(&path), &plan.header(), &rows, err)?;
        writeln!(err, "wrote {} ({} rows)", path.display(), rows.len()).map_err(|e| CliError::io("<stderr>", e))?;
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_are_inclusive_and_drift_free() {
        let v = Range::new(0.51, 0.99, 0.01).unwrap().values();
        assert_eq!(v.len(), 49);
        assert_eq!(v[48], 0.99);
        assert_eq!(Range::new(0.1, 0.1, 0.5).unwrap().values(), vec![0.1]);
        assert!(Range::new(1.0, 0.0, 0.1).is_err());
        assert!(Range::new(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn spec_parsing_and_validation() {
        let ok = r#"
            [[sweep]]
            name = "a"
            family = "sup-large"
            lambda = { start = 0.6, stop = 0.8, step = 0.1 }
            rho = [0.1, 0.3]
        "#;
        let plans = parse_spec(ok).unwrap();
        assert_eq!(plans[0].len(), 6);
        let both = ok.replace("rho = [0.1, 0.3]", "rho = [0.1]\ntau = [2.0]");
        assert!(parse_spec(&both).unwrap_err().contains("exactly one"));
        let multi = ok.replace("rho = [0.1, 0.3]", "rho = [0.1]\nn = [2, 3]");
        assert!(parse_spec(&multi).is_err());
        let unknown = ok.replace("family", "famly");
        assert!(parse_spec(&unknown).is_err());
        let dup = format!("{ok}\n{ok}");
        assert!(parse_spec(&dup).unwrap_err().contains("duplicate"));
        assert!(parse_spec("").is_err());
    }

    #[test]
    fn rows_report_status_and_keep_order() {
        let spec = r#"
            [[sweep]]
            name = "s"
            family = "sub-large"
            lambda = [0.55, 0.95]
            rho = [0.5, 0.99]
        "#;
        let plan = &parse_spec(spec).unwrap()[0];
        let reg = FamilyRegistry::standard();
        let serial = evaluate(plan, &reg, 1);
        assert_eq!(serial, evaluate(plan, &reg, 3));
        assert_eq!(serial[0][4], "ok");
        assert_eq!(serial[0][5], "0.181818181818");
        let infeasible = &serial[3];
        assert_eq!((infeasible[1].as_str(), infeasible[2].as_str()), ("0.95", "0.99"));
        assert_eq!(infeasible[4], "no_equilibrium");
        assert!(serial.iter().all(|r| r.len() == SWEEP_HEADER.len()));
    }
}
