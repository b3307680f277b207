//! Line-oriented text formats for policies and utilities.

use super::{Atom, ModelError, Prior, Segment, SignalingPolicy, UtilityFunction, UtilityKind};
use std::fmt::Write as _;

/// Formats `x` with `sig` significant digits, choosing fixed or scientific
/// notation like C's `%g` and trimming trailing zeros.
pub fn format_float(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -5 || exp >= sig as i32 {
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Shortest decimal that parses back to the same bits; never more than 17
/// significant digits.
pub fn format_exact(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| format_exact(v))
        .collect::<Vec<_>>()
        .join(",")
}

/// A policy together with the prior it was built for.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyFile {
    pub prior: Prior,
    pub policy: SignalingPolicy,
}

pub fn write_policy_file(file: &PolicyFile) -> String {
    let mut out = String::new();
    let p = &file.policy;
    writeln!(out, "policy v1").unwrap();
    writeln!(
        out,
        "n={} lambda={}",
        p.n(),
        format_exact(file.prior.lambda())
    )
    .unwrap();
    for a in p.atoms() {
        writeln!(
            out,
            "atom w={} q={}",
            format_exact(a.weight),
            join(&a.point)
        )
        .unwrap();
    }
    for s in p.segments() {
        writeln!(
            out,
            "segment w={} a={} b={}",
            format_exact(s.weight),
            join(&s.a),
            join(&s.b)
        )
        .unwrap();
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_f64(line: usize, s: &str) -> Result<f64, ModelError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| parse_err(line, format!("invalid number `{s}`")))
}

fn parse_list(line: usize, s: &str) -> Result<Vec<f64>, ModelError> {
    s.split(',').map(|x| parse_f64(line, x)).collect()
}

/// Splits `key=value` tokens and checks that exactly the expected keys occur.
fn key_values<'a>(
    line: usize,
    tokens: &[&'a str],
    keys: &[&str],
) -> Result<Vec<&'a str>, ModelError> {
    if tokens.len() != keys.len() {
        return Err(parse_err(line, format!("expected fields {keys:?}")));
    }
    tokens
        .iter()
        .zip(keys)
        .map(|(tok, key)| {
            tok.strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| parse_err(line, format!("expected `{key}=...`, found `{tok}`")))
        })
        .collect()
}

/// Content lines with their 1-based line numbers, skipping blanks and comments.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_policy_file(text: &str) -> Result<PolicyFile, ModelError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, "policy v1")) => {}
        Some((no, _)) => return Err(parse_err(no, "expected header `policy v1`")),
        None => return Err(parse_err(1, "empty policy file")),
    }
    let (no, dims) = lines
        .next()
        .ok_or_else(|| parse_err(2, "missing `n=... lambda=...` line"))?;
    let tokens: Vec<&str> = dims.split_whitespace().collect();
    let vals = key_values(no, &tokens, &["n", "lambda"])?;
    let n: usize = vals[0]
        .parse()
        .map_err(|_| parse_err(no, format!("invalid receiver count `{}`", vals[0])))?;
    let prior = Prior::new(parse_f64(no, vals[1])?).map_err(|e| parse_err(no, e.to_string()))?;
    let mut atoms = Vec::new();
    let mut segments = Vec::new();
    for (no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "atom" => {
                let v = key_values(no, &tokens[1..], &["w", "q"])?;
                atoms.push(Atom {
                    weight: parse_f64(no, v[0])?,
                    point: parse_list(no, v[1])?,
                });
            }
            "segment" => {
                let v = key_values(no, &tokens[1..], &["w", "a", "b"])?;
                segments.push(Segment {
                    weight: parse_f64(no, v[0])?,
                    a: parse_list(no, v[1])?,
                    b: parse_list(no, v[2])?,
                });
            }
            other => return Err(parse_err(no, format!("unknown record `{other}`"))),
        }
    }
    let policy = SignalingPolicy::new(n, atoms, segments)?;
    Ok(PolicyFile { prior, policy })
}

pub fn write_utility_file(v: &UtilityFunction) -> String {
    let mut out = String::new();
    writeln!(out, "utility v1").unwrap();
    writeln!(out, "n={}", v.n()).unwrap();
    match v.kind() {
        UtilityKind::Anonymous => {
            writeln!(out, "anonymous {}", join(v.anonymous_values().unwrap())).unwrap();
        }
        UtilityKind::General => {
            for (mask, value) in v.to_table().iter().enumerate() {
                writeln!(out, "set {mask} {}", format_exact(*value)).unwrap();
            }
        }
    }
    out
}

/// Parses a utility file. In the `set` form every nonempty subset must be
/// listed; the empty set defaults to 0.
pub fn parse_utility_file(text: &str) -> Result<UtilityFunction, ModelError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, "utility v1")) => {}
        Some((no, _)) => return Err(parse_err(no, "expected header `utility v1`")),
        None => return Err(parse_err(1, "empty utility file")),
    }
    let (no, dims) = lines
        .next()
        .ok_or_else(|| parse_err(2, "missing `n=...` line"))?;
    let n: usize = dims
        .strip_prefix("n=")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| parse_err(no, "expected `n=<int>`"))?;
    if n == 0 || n > super::MAX_RECEIVERS {
        return Err(ModelError::ReceiverCount {
            got: n,
            max: super::MAX_RECEIVERS,
        });
    }
    let mut anonymous = None;
    let mut table: Vec<Option<f64>> = vec![None; 1 << n];
    table[0] = Some(0.0);
    for (no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["anonymous", values] => anonymous = Some(parse_list(no, values)?),
            ["set", mask, value] => {
                let mask: usize = mask
                    .parse()
                    .map_err(|_| parse_err(no, format!("invalid bitmask `{mask}`")))?;
                let slot = table
                    .get_mut(mask)
                    .ok_or_else(|| parse_err(no, format!("bitmask {mask} exceeds n={n}")))?;
                *slot = Some(parse_f64(no, value)?);
            }
            _ => return Err(parse_err(no, format!("unrecognized line `{line}`"))),
        }
    }
    if let Some(values) = anonymous {
        return UtilityFunction::anonymous_with_n(n, values);
    }
    let values: Option<Vec<f64>> = table.into_iter().collect();
    let values = values.ok_or_else(|| parse_err(0, "utility table is missing subsets"))?;
    UtilityFunction::general(n, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0, 12), "0");
        assert_eq!(format_float(1.0, 12), "1");
        assert_eq!(format_float(2.0 / 3.0, 12), "0.666666666667");
        assert_eq!(format_float(1234.5, 12), "1234.5");
        assert_eq!(format_float(1e-7, 12), "1e-7");
        assert_eq!(format_float(-0.25, 12), "-0.25");
        assert_eq!(format_float(9.9999999999999, 12), "10");
        assert_eq!(format_float(1e15, 12), "1e15");
    }

    #[test]
    fn exact_format_round_trips() {
        for &x in &[2.0 / 3.0, 0.1, 1.0 / 3.0, 5e-13, 0.29166666666666669, 1.0 - 1e-16, 1e300, 3e-310] {
            let s = format_exact(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            let mantissa: String = s.split('e').next().unwrap().chars().filter(char::is_ascii_digit).collect();
            assert!(mantissa.trim_start_matches('0').len() <= 17, "{s}");
        }
    }

    #[test]
    fn policy_round_trip_is_exact() {
        let policy = SignalingPolicy::new(
            2,
            vec![Atom {
                weight: 2.0 / 3.0,
                point: vec![1.0, 1.0],
            }],
            vec![Segment {
                weight: 1.0 / 3.0,
                a: vec![0.0, 0.0],
                b: vec![0.571428571428571, 0.1 + 0.2],
            }],
        )
        .unwrap();
        let file = PolicyFile {
            prior: Prior::new(0.75).unwrap(),
            policy,
        };
        let text = write_policy_file(&file);
        assert!(text.starts_with("policy v1\nn=2 lambda=0.75\n"));
        assert_eq!(parse_policy_file(&text).unwrap(), file);
    }

    #[test]
    fn policy_parse_errors_name_the_line() {
        let err = parse_policy_file("policy v1\nn=1 lambda=0.5\nblob\n").unwrap_err();
        assert!(matches!(err, ModelError::Parse { line: 3, .. }));
        assert!(parse_policy_file("policy v2\n").is_err());
        assert!(parse_policy_file("policy v1\nn=1 lambda=1.5\natom w=1 q=1\n").is_err());
    }

    #[test]
    fn utility_round_trip() {
        let anon = UtilityFunction::anonymous(vec![0.0, 0.4, 1.0]).unwrap();
        assert_eq!(parse_utility_file(&write_utility_file(&anon)).unwrap(), anon);
        let general = UtilityFunction::general(2, vec![0.0, 1.0, 0.5, 0.9]).unwrap();
        assert_eq!(
            parse_utility_file(&write_utility_file(&general)).unwrap(),
            general
        );
        let partial = "utility v1\nn=2\nset 1 1\nset 2 1\nset 3 1\n";
        assert_eq!(
            parse_utility_file(partial).unwrap().to_table(),
            vec![0.0, 1.0, 1.0, 1.0]
        );
        assert!(parse_utility_file("utility v1\nn=2\nset 1 1\n").is_err());
    }
}
