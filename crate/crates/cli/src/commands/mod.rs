mod best_response;
mod construct;
mod pos;
mod region;
mod verify;

use std::io::Write;

use persuasion::equilibria::{Construction, FamilyRegistry, FamilyRequest};
use persuasion::model::Prior;

use crate::args::{Command, FamilyArgs};
use crate::error::CliError;

pub fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Construct(a) => construct::run(a, out, err),
        Command::Verify(a) => verify::run(a, out, err),
        Command::BestResponse(a) => best_response::run(a, out, err),
        Command::Pos(a) => pos::run(a, out),
        Command::Region(a) => region::run(a, out),
        Command::Sweep(a) => crate::sweep::run(a, err),
    }
}

/// Maps the `sub-multi` alias to the even or odd family for `n`.
pub fn resolve_family(name: &str, n: usize) -> &str {
    match name {
        "sub-multi" if n % 2 == 0 => "sub-multi-even",
        "sub-multi" => "sub-multi-odd",
        other => other,
    }
}

/// Registry request for the family arguments, with the resolved family name.
pub fn family_request(a: &FamilyArgs) -> Result<(String, FamilyRequest), CliError> {
    let n = match (a.n, a.utility.implied_n()) {
        (Some(n), Some(m)) if n != m => {
            return Err(CliError::Usage(format!("--n {n} disagrees with the utility, which has n={m}")))
        }
        (Some(n), _) | (None, Some(n)) => n,
        (None, None) => 2,
    };
    let example = a.family.starts_with("example:");
    let lambda = match a.lambda {
        Some(l) => l,
        // Worked examples carry their own prior.
        None if example => 0.5,
        None => return Err(CliError::Usage("--lambda is required for this family".into())),
    };
    let req = FamilyRequest {
        prior: Prior::new(lambda)?,
        utility: a.utility.resolve(n)?,
        mu: a.mu,
        c: a.c,
        pieces: a.pieces,
    };
    Ok((resolve_family(&a.family, n).to_string(), req))
}

pub fn build(a: &FamilyArgs) -> Result<Construction, CliError> {
    let (family, req) = family_request(a)?;
    Ok(FamilyRegistry::standard().construct(&family, &req)?)
}
