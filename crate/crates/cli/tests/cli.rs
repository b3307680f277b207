//! End-to-end runs of the `persuade` binary.

use std::path::Path;
use std::process::{Command, Output};

fn persuade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_persuade")).args(args).output().expect("binary runs")
}

fn csv_field(stdout: &[u8], column: &str) -> f64 {
    let text = String::from_utf8_lossy(stdout);
    let lines: Vec<&str> = text.lines().collect();
    let at = lines.iter().position(|l| l.split(',').any(|c| c == column)).expect("header present");
    let idx = lines[at].split(',').position(|c| c == column).unwrap();
    lines[at + 1].split(',').nth(idx).unwrap().parse().unwrap()
}

fn report_value(stdout: &[u8], key: &str) -> f64 {
    let text = String::from_utf8_lossy(stdout);
    let line = text.lines().find(|l| l.starts_with("gap:")).expect("gap line");
    let mut words = line.split_whitespace();
    while let Some(w) = words.next() {
        if w == key {
            return words.next().unwrap().parse().unwrap();
        }
    }
    panic!("{key} missing in {line}");
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn construct_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&str, &[&str], &str)] = &[
        ("sup-small", &["--lambda", "0.3", "--rho", "0.3"], "51"),
        ("sub-small", &["--lambda", "0.3", "--rho", "0.8"], "51"),
        ("sup-large", &["--lambda", "0.75", "--rho", "0.5"], "51"),
        ("sub-large", &["--lambda", "0.55", "--rho", "0.5"], "51"),
        ("sup-multi", &["--lambda", "0.7", "--n", "3", "--tau", "2"], "21"),
        ("sub-multi-even", &["--lambda", "0.55", "--n", "4", "--tau", "0.5"], "11"),
        ("sub-multi-odd", &["--lambda", "0.6", "--n", "3", "--tau", "0.5"], "21"),
        ("independent", &["--lambda", "0.4", "--v", "0,1,2"], "51"),
        ("example:ex42b", &[], "51"),
        ("example:ex31", &["--c", "0.1"], "51"),
    ];
    for (family, extra, grid) in cases {
        let pol = path(dir.path(), "g.pol");
        let util = path(dir.path(), "g.util");
        let mut args = vec!["construct", "--family", family, "-o", &pol, "--utility-out", &util];
        args.extend_from_slice(extra);
        let c = persuade(&args);
        assert!(c.status.success(), "{family}: {}", String::from_utf8_lossy(&c.stderr));
        assert!(String::from_utf8_lossy(&c.stderr).contains(&format!("family={family}")));
        let v = persuade(&["verify", "--policy", &pol, "--utility-file", &util, "--grid", grid, "--K", "256", "--strict"]);
        assert!(v.status.success(), "{family}: {}", String::from_utf8_lossy(&v.stderr));
        let gap = csv_field(&v.stdout, "gap");
        assert!(gap >= -1e-9 && gap <= report_value(&v.stdout, "tol:"), "{family}: gap {gap}");
    }
}

#[test]
fn sup_large_policy_file_contents() {
    let dir = tempfile::tempdir().unwrap();
    let pol = path(dir.path(), "g.pol");
    let out = persuade(&["construct", "--family", "sup-large", "--lambda", "0.75", "--rho", "0.5", "--n", "2", "-o", &pol]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&pol).unwrap();
    assert!(text.starts_with("policy v1\nn=2 lambda=0.75\n"));
    assert!(text.contains("atom w=0.6666666666666666 q=1,1"));
    assert!(text.contains("segment w="));
}

#[test]
fn verify_family_checks_closed_form() {
    let out = persuade(&["verify", "--family", "sup-large", "--lambda", "0.75", "--rho", "0.3"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("closed_form:") && text.contains("alert=false"), "{text}");
    assert!(text.contains("policy,lambda,n,grid,K,payoff_self,best_response,gap,cert_alpha_min,cert_beta,envelope_violation"));
}

#[test]
fn pos_row_for_small_prior_is_one() {
    let out = persuade(&["pos", "--family", "sup-large", "--lambda", "0.5", "--rho", "0.3", "--n", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("family,lambda,rho_or_tau,n,mu,optimal_welfare,eq_welfare,pos_bound\n"));
    assert_eq!(csv_field(&out.stdout, "pos_bound"), 1.0);
}

#[test]
fn exit_codes() {
    assert_eq!(persuade(&["construct", "--family", "sup-large"]).status.code(), Some(2));
    assert_eq!(persuade(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(persuade(&["construct", "--family", "sup-large", "--lambda", "0.3", "--rho", "0.5"]).status.code(), Some(3));
    assert_eq!(persuade(&["pos", "--family", "sub-large", "--lambda", "0.95", "--rho", "0.99"]).status.code(), Some(3));
    assert_eq!(persuade(&["construct", "--family", "sup-large", "--lambda", "0.75", "--rho", "0.5", "--n", "3"]).status.code(), Some(2));
    let out = persuade(&["verify", "--family", "sub-large", "--lambda", "0.6", "--rho", "0.8", "--mu", "0.45"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside the feasible set"));
    let full = persuade(&["verify", "--policy", "/nonexistent/x.pol", "--rho", "0.3"]);
    assert_eq!(full.status.code(), Some(2));
    assert_eq!(persuade(&["--help"]).status.code(), Some(0));
}

#[test]
fn strict_verify_rejects_full_disclosure() {
    let dir = tempfile::tempdir().unwrap();
    let pol = path(dir.path(), "full.pol");
    std::fs::write(&pol, "policy v1\nn=2 lambda=0.3\natom w=0.7 q=0,0\natom w=0.3 q=1,1\n").unwrap();
    let out = persuade(&["verify", "--policy", &pol, "--v", "0,0.4,1", "--strict"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("not an equilibrium"));
}

#[test]
fn best_response_writes_a_policy() {
    let dir = tempfile::tempdir().unwrap();
    let pol = path(dir.path(), "g.pol");
    let br = path(dir.path(), "br.pol");
    assert!(persuade(&["construct", "--family", "sup-small", "--lambda", "0.3", "--rho", "0.4", "-o", &pol]).status.success());
    let out = persuade(&["best-response", "--opponent", &pol, "--rho", "0.4", "--grid", "21", "--K", "64", "-o", &br]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("value="));
    assert!(std::fs::read_to_string(&br).unwrap().starts_with("policy v1\nn=2 lambda=0.3\n"));
}

#[test]
fn region_rows() {
    let out = persuade(&["region", "--target", "sub2", "--lambda", "0.55", "--param-step", "0.05"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "lambda,n,rho,feasible,mu_lb,mu_ub");
    assert!(rows[1].starts_with("0.55,2,0.5,true,0.181818181818"));
    assert_eq!(rows.len(), 12);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let spec = path(dir.path(), "spec.toml");
    std::fs::write(
        &spec,
        "[[sweep]]\nname = \"t\"\nfamily = \"sub-multi\"\nlambda = [0.55, 0.6]\ntau = [0.5]\nn = [2, 3, 4]\nverify = { grid = 11, K = 32 }\n",
    )
    .unwrap();
    let mut seen = Vec::new();
    for (i, threads) in ["1", "4"].iter().enumerate() {
        let out_dir = path(dir.path(), &format!("o{i}"));
        assert!(persuade(&["sweep", "--spec", &spec, "-o", &out_dir, "--threads", threads]).status.success());
        seen.push(std::fs::read(Path::new(&out_dir).join("fig_t.csv")).unwrap());
    }
    assert_eq!(seen[0], seen[1]);
    let header = String::from_utf8_lossy(&seen[0]).lines().next().unwrap().to_string();
    assert!(header.ends_with(",gap,tol,closed_form_alert"));
    let a = persuade(&["verify", "--family", "sub-large", "--lambda", "0.6", "--rho", "0.8", "--grid", "21"]);
    let b = persuade(&["verify", "--family", "sub-large", "--lambda", "0.6", "--rho", "0.8", "--grid", "21"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_sweep_spec_is_an_argument_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = path(dir.path(), "bad.toml");
    std::fs::write(&spec, "[[sweep]]\nname = \"x\"\nfamily = \"sup-large\"\nlambda = { start = 0.9, stop = 0.5, step = 0.1 }\nrho = [0.1]\n").unwrap();
    let out = persuade(&["sweep", "--spec", &spec, "-o", &path(dir.path(), "o")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("range is empty"));
}
