use std::io::Write;

use persuasion::lp::best_response;
use persuasion::model::{write_policy_file, Grid, PolicyFile, Prior};

use super::verify::read_policy;
use crate::args::BestResponseArgs;
use crate::error::CliError;
use crate::output::{float, join_floats, write_text};

pub fn run(a: BestResponseArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let file = read_policy(&a.opponent)?;
    let n = file.policy.n();
    let prior = match a.prior {
        Some(p) => Prior::new(p)?,
        None => file.prior,
    };
    let v = a.utility.require(n)?;
    let grid = Grid::new(n, a.grid.grid)?;
    let br = best_response(&file.policy, prior, &v, grid, a.grid.k)?;
    let text = write_policy_file(&PolicyFile { prior, policy: br.policy.clone() });
    write_text(a.output.as_deref(), &text, out)?;
    let io = |e| CliError::io("<stderr>", e);
    writeln!(err, "value={}", float(br.value)).map_err(io)?;
    writeln!(err, "certificate alpha={} beta={}", join_floats(&br.certificate.alpha), float(br.certificate.beta))
        .map_err(io)?;
    writeln!(
        err,
        "envelope_violation={} support_slack={} duality_gap={} iterations={}",
        float(br.envelope_violation),
        float(br.support_slack),
        float(br.lp.diagnostics.duality_gap),
        br.lp.iterations
    )
    .map_err(io)?;
    Ok(0)
}
