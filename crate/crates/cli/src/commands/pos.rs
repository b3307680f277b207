use std::io::Write;

use persuasion::analysis::{pos_bound, PoSResult};
use persuasion::equilibria::FamilyRegistry;

use super::family_request;
use crate::args::PosArgs;
use crate::error::CliError;
use crate::output::{float, opt_float, write_csv};

pub const POS_HEADER: [&str; 8] =
    ["family", "lambda", "rho_or_tau", "n", "mu", "optimal_welfare", "eq_welfare", "pos_bound"];

pub fn csv_row(r: &PoSResult, shape: Option<f64>) -> Vec<String> {
    vec![
        r.family.clone(),
        float(r.lambda),
        opt_float(shape),
        r.n.to_string(),
        opt_float(r.mu),
        float(r.optimal_welfare),
        float(r.equilibrium_welfare),
        float(r.closed_form_bound.unwrap_or(r.ratio)),
    ]
}

pub fn run(a: PosArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (family, req) = family_request(&a.family)?;
    let r = pos_bound(&FamilyRegistry::standard(), &family, &req)?;
    write_csv(a.csv.as_deref(), &POS_HEADER, &[csv_row(&r, a.family.utility.shape_parameter())], out)?;
    Ok(0)
}
