use std::io::Write;
use std::process::Command as Process;

use clap::Parser;
use selfsmall::cli::{run, Cli, EXIT_ERROR, EXIT_NO, EXIT_UNKNOWN, EXIT_YES};
use selfsmall::records::{read_verdict, CERTIFICATE_HEADER};
use selfsmall_core::decision::check_certificate;

fn cli(args: &[&str]) -> selfsmall::cli::Output {
    let parsed = Cli::try_parse_from(std::iter::once("selfsmall").chain(args.iter().copied())).expect("parses");
    run(&parsed)
}

fn binary(args: &[&str]) -> std::process::Output {
    Process::new(env!("CARGO_BIN_EXE_selfsmall")).args(args).output().expect("binary runs")
}

#[test]
fn documented_examples() {
    let out = cli(&["decide", "product", "family(primes(all, Z/p))"]);
    assert_eq!(out.status, EXIT_YES);
    assert!(out.stdout.contains("finite_p_group_product"));
    assert_eq!(cli(&["decide", "sum", "Q/Z"]).status, EXIT_NO);
    let out = cli(&["query", "small", "sum_Zp", "prod_Zp"]);
    assert_eq!(out.status, EXIT_NO);
    assert!(out.stdout.contains("[base fact]"));
}

#[test]
fn exit_statuses_follow_the_verdict() {
    assert_eq!(cli(&["decide", "product", "family(repeat(Z, omega), repeat(Z/2, 1))"]).status, EXIT_NO);
    assert_eq!(cli(&["decide", "sum", "Z", "Q"]).status, EXIT_YES);
    assert_eq!(cli(&["decide", "sum", "Q", "Z/6"]).status, EXIT_YES);
    assert_eq!(cli(&["decide", "power", "Q", "omega", "--kind", "product"]).status, EXIT_NO);
    assert_eq!(cli(&["decide", "power", "prod_Zp", "5"]).status, EXIT_YES);
    assert_eq!(cli(&["decide", "power", "prod_Zp", "omega"]).status, EXIT_NO);
    assert_eq!(cli(&["query", "selfsmall", "Z_plus_Q"]).status, EXIT_YES);
    assert_eq!(cli(&["query", "small", "prod_Zp", "Q"]).status, EXIT_NO);
    assert_eq!(cli(&["query", "homzero", "Z/4", "Z/6"]).status, EXIT_NO);
    assert_eq!(cli(&["decide", "product", "family(repeat(Z/1, 2))"]).status, EXIT_ERROR);
    assert_eq!(cli(&["query", "selfsmall", "no_such_group"]).status, EXIT_ERROR);
}

#[test]
fn unknown_is_reported_as_such() {
    let mut file = tempfile();
    writeln!(file.1, "group X\ngroup Y").unwrap();
    let path = file.0.to_str().unwrap().to_string();
    let out = cli(&["--facts", &path, "query", "small", "X", "Y"]);
    assert_eq!(out.status, EXIT_UNKNOWN, "{}", out.stderr);
    assert_eq!(cli(&["--facts", &path, "decide", "sum", "X", "Z"]).status, EXIT_UNKNOWN);
    let _ = std::fs::remove_file(&file.0);
}

fn tempfile() -> (std::path::PathBuf, std::fs::File) {
    let path =
        std::env::temp_dir().join(format!("selfsmall-{}-{:?}.facts", std::process::id(), std::thread::current().id()));
    let file = std::fs::File::create(&path).unwrap();
    (path, file)
}

#[test]
fn group_tools() {
    let out = cli(&["normalize", "Z/4 (+) Z/2"]);
    assert_eq!(out.stdout, "group: Z/2 (+) Z/4\n");
    let out = cli(&["normalize", "family(repeat(Z, omega), repeat(Z/2, 1))"]);
    assert!(out.stdout.contains("none (not self-small)"));
    assert_eq!(cli(&["hom", "Z^2 (+) Z/6", "Z/4"]).stdout, "Hom(Z^2 (+) Z/6, Z/4) = Z/2 (+) (Z/4)^2\n");
    assert!(cli(&["primary", "Z/12"]).stdout.contains("p = 3: Z/3"));
    assert_eq!(cli(&["hom", "Q", "Z"]).status, EXIT_ERROR);
}

#[test]
fn oracle_commands() {
    assert_eq!(cli(&["oracle", "homcount", "Z/6", "Z/36"]).status, EXIT_YES);
    assert_eq!(cli(&["oracle", "structure", "Z/2 (+) Z/4", "Z/8"]).status, EXIT_YES);
    assert_eq!(cli(&["oracle", "additivity", "Z/6", "Z/4", "Z/9"]).status, EXIT_YES);
    assert_eq!(cli(&["oracle", "support", "Z/4", "Z/2", "3"]).status, EXIT_YES);
    assert_eq!(cli(&["oracle", "suite", "--pairs", "20", "--triples", "5", "--seed", "7"]).status, EXIT_YES);
    let out = cli(&["--bound", "10", "oracle", "homcount", "Z/2 (+) Z/2", "Z/2 (+) Z/2"]);
    assert_eq!(out.status, EXIT_ERROR);
    assert!(out.stderr.contains("bound exceeded"));
}

#[test]
fn records_output_checks() {
    let out = cli(&["--format", "records", "decide", "product", "family(primes(all_except(2), Z/p^2), repeat(Z, 2))"]);
    assert!(out.stdout.starts_with(CERTIFICATE_HEADER));
    let v = read_verdict(&out.stdout).expect("re-parses");
    assert!(check_certificate(&v));

    let path = std::env::temp_dir().join(format!("selfsmall-cert-{}.txt", std::process::id()));
    let cert = cli(&["--format", "records", "decide", "sum", "Q", "prod_Zp"]);
    std::fs::write(&path, &cert.stdout).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(cli(&["check", p]).status, EXIT_YES);
    std::fs::write(&path, cert.stdout.replace("value truth \"no\"", "value truth \"yes\"")).unwrap();
    assert_eq!(cli(&["check", p]).status, EXIT_NO);
    std::fs::write(&path, "garbage\n").unwrap();
    assert_eq!(cli(&["check", p]).status, EXIT_ERROR);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn binary_uses_the_same_contract() {
    let out = binary(&["decide", "sum", "Q/Z"]);
    assert_eq!(out.status.code(), Some(EXIT_NO));
    let out = binary(&["decide", "product", "family(repeat(Z/1, 2))"]);
    assert_eq!(out.status.code(), Some(EXIT_ERROR));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert_eq!(binary(&["no-such-command"]).status.code(), Some(EXIT_ERROR));
}
