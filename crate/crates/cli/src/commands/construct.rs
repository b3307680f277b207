use std::io::Write;

use persuasion::equilibria::Construction;
use persuasion::model::{write_policy_file, write_utility_file, PolicyFile};

use super::build;
use crate::args::ConstructArgs;
use crate::error::CliError;
use crate::output::{float, join_floats, write_text};

pub fn run(a: ConstructArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let c = build(&a.family)?;
    let text = write_policy_file(&PolicyFile { prior: c.prior, policy: c.policy.clone() });
    write_text(a.output.as_deref(), &text, out)?;
    if let Some(path) = &a.utility_out {
        write_text(Some(path), &write_utility_file(&c.utility), out)?;
    }
    echo(&c, err).map_err(|e| CliError::io("<stderr>", e))?;
    Ok(0)
}

/// Parameters of a construction, one `key=value` per line.
pub fn echo(c: &Construction, err: &mut dyn Write) -> std::io::Result<()> {
    writeln!(err, "family={} lambda={} n={}", c.family, float(c.prior.lambda()), c.utility.n())?;
    for (k, x) in c.named_params() {
        writeln!(err, "{k}={}", float(x))?;
    }
    if let Some(w) = c.welfare {
        writeln!(err, "welfare={}", float(w))?;
    }
    if let Some(b) = c.pos_bound {
        writeln!(err, "pos_bound={}", float(b))?;
    }
    if let Some(cert) = &c.certificate {
        writeln!(err, "certificate alpha={} beta={}", join_floats(&cert.alpha), float(cert.beta))?;
    }
    if !c.conditions.is_empty() {
        writeln!(err, "max_condition_violation={}", float(c.max_violation()))?;
    }
    Ok(())
}
