use std::io::Write;
use std::path::Path;

use persuasion::analysis::{verify_with_certificate, EquilibriumReport};
use persuasion::equilibria::Construction;
use persuasion::model::{parse_policy_file, Grid, PolicyFile, Prior, SignalingPolicy, UtilityFunction};

use super::build;
use crate::args::{FamilyArgs, VerifyArgs};
use crate::error::CliError;
use crate::output::{float, join_floats, write_csv};

pub const VERIFY_HEADER: [&str; 11] = [
    "policy",
    "lambda",
    "n",
    "grid",
    "K",
    "payoff_self",
    "best_response",
    "gap",
    "cert_alpha_min",
    "cert_beta",
    "envelope_violation",
];

pub fn read_policy(path: &Path) -> Result<PolicyFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_policy_file(&text).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
}

struct Subject {
    label: String,
    prior: Prior,
    policy: SignalingPolicy,
    utility: UtilityFunction,
    construction: Option<Construction>,
}

fn subject(a: &VerifyArgs) -> Result<Subject, CliError> {
    if let Some(path) = &a.policy {
        let file = read_policy(path)?;
        let n = file.policy.n();
        if let Some(m) = a.n.filter(|&m| m != n) {
            return Err(CliError::Usage(format!("--n {m} disagrees with the policy file, which has n={n}")));
        }
        let prior = match a.prior {
            Some(p) => Prior::new(p)?,
            None => file.prior,
        };
        return Ok(Subject {
            label: path.display().to_string(),
            prior,
            utility: a.utility.require(n)?,
            policy: file.policy,
            construction: None,
        });
    }
    let family = a.family.clone().expect("clap requires --policy or --family");
    let fa = FamilyArgs {
        family: family.clone(),
        lambda: a.lambda.or(a.prior),
        n: a.n,
        utility: a.utility.clone(),
        mu: a.mu,
        c: a.c,
        pieces: a.pieces,
    };
    let c = build(&fa)?;
    Ok(Subject {
        label: family,
        prior: c.prior,
        policy: c.policy.clone(),
        utility: c.utility.clone(),
        construction: Some(c),
    })
}

pub fn csv_row(label: &str, prior: Prior, n: usize, r: &EquilibriumReport) -> Vec<String> {
    let alpha_min = r.certificate.alpha.iter().copied().fold(f64::INFINITY, f64::min);
    vec![
        label.to_string(),
        float(prior.lambda()),
        n.to_string(),
        r.points_per_axis.to_string(),
        r.k.to_string(),
        float(r.payoff_vs_self),
        float(r.best_response_value),
        float(r.gap),
        float(alpha_min),
        float(r.certificate.beta),
        float(r.max_envelope_violation),
    ]
}

pub fn run(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let s = subject(&a)?;
    let n = s.policy.n();
    let grid = Grid::new(n, a.grid.grid)?;
    let cert = s.construction.as_ref().and_then(|c| c.certificate.as_ref());
    let r = verify_with_certificate(&s.policy, s.prior, &s.utility, grid, a.grid.k, cert)?;
    report(&s.label, s.prior, &r, out).map_err(|e| CliError::io("<stdout>", e))?;
    if a.csv.is_none() {
        writeln!(out).map_err(|e| CliError::io("<stdout>", e))?;
    }
    write_csv(a.csv.as_deref(), &VERIFY_HEADER, &[csv_row(&s.label, s.prior, n, &r)], out)?;
    if let Some(cf) = r.closed_form.as_ref().filter(|cf| cf.alert) {
        writeln!(
            err,
            "alert: closed-form certificate deviates from exact payoffs (envelope {}, support slack {})",
            float(cf.envelope_violation),
            float(cf.support_slack)
        )
        .map_err(|e| CliError::io("<stderr>", e))?;
    }
    if a.strict && !r.is_equilibrium {
        return Err(CliError::Region(format!("gap {} exceeds tolerance {}", float(r.gap), float(r.tol))));
    }
    Ok(0)
}

fn report(label: &str, prior: Prior, r: &EquilibriumReport, out: &mut dyn Write) -> std::io::Result<()> {
    let verdict = if r.is_equilibrium { "equilibrium within tolerance" } else { "not an equilibrium" };
    writeln!(out, "policy: {label}")?;
    writeln!(out, "lambda: {}  grid: {} points/axis  K: {}", float(prior.lambda()), r.points_per_axis, r.k)?;
    writeln!(out, "payoff_self: {}", float(r.payoff_vs_self))?;
    writeln!(out, "best_response: {}", float(r.best_response_value))?;
    writeln!(out, "gap: {}  tol: {}  verdict: {verdict}", float(r.gap), float(r.tol))?;
    writeln!(out, "certificate: alpha={} beta={}", join_floats(&r.certificate.alpha), float(r.certificate.beta))?;
    writeln!(
        out,
        "envelope_violation: {}  support_slack: {}",
        float(r.max_envelope_violation),
        float(r.support_slack)
    )?;
    writeln!(out, "lp: iterations={} duality_gap={}", r.lp_iterations, float(r.duality_gap))?;
    if let Some(cf) = &r.closed_form {
        writeln!(
            out,
            "closed_form: alpha={} beta={} envelope_violation={} support_slack={} alpha_distance={} beta_distance={} checked_on={} points/axis alert={}",
            join_floats(&cf.certificate.alpha),
            float(cf.certificate.beta),
            float(cf.envelope_violation),
            float(cf.support_slack),
            float(cf.alpha_distance),
            float(cf.beta_distance),
            cf.check_points_per_axis,
            cf.alert
        )?;
    }
    let d = &r.diagnostics;
    let flag = |x: Option<bool>| x.map_or("suppressed".to_string(), |b| b.to_string());
    writeln!(
        out,
        "diagnostics: interior_atom={} marginal_atom_below_one={} marginal_support_gap={}",
        d.interior_atom_present,
        flag(d.marginal_atom_below_one),
        flag(d.marginal_support_gap)
    )?;
    for note in &d.notes {
        writeln!(out, "  {note}")?;
    }
    Ok(())
}
