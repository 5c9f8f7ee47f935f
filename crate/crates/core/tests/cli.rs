mod common;

use std::process::{Command, Output};

use common::spec_path;
use heatgraph::cli::GraphSpec;

fn heatgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatgraph")).args(args).output().expect("binary runs")
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn float(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn fiber_sum_on_finite_cover() {
    let spec = spec_path("cyclic_9_over_3.hg");
    let out = heatgraph(&["cover", "fiber-sum", "--spec", spec.to_str().unwrap(), "--t", "1", "--x", "0", "--y", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = rows(&out);
    let last = rows.last().unwrap();
    assert!(float(&last[4]).abs() < 1e-10, "{last:?}");
    let closed = (1.0 + 2.0 * (-3f64).exp()) / 3.0;
    assert!((float(&last[3]) - closed).abs() < 1e-12);
}

#[test]
fn asymmetric_spec_fails_validation() {
    let spec = spec_path("bad.hg");
    let out = heatgraph(&["validate", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("symmetry"), "{stderr}");
}

#[test]
fn exact_kappa_zero() {
    let out = heatgraph(&["curvature", "exact-kappa", "--k", "0", "--N", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert_eq!(rows.len(), 10);
    for row in rows {
        assert!(float(&row[2]).abs() <= 1e-12, "{row:?}");
        let b = float(&row[4]);
        assert!((1.0..=3.0).contains(&b), "{row:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(heatgraph(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(heatgraph(&["heat"]).status.code(), Some(64));
    assert_eq!(heatgraph(&["--help"]).status.code(), Some(0));
    let z3 = spec_path("z3.hg");
    let out = heatgraph(&["capacity", "--spec", z3.to_str().unwrap(), "--Rmax", "8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_moves_verdict_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("lambda.csv");
    let spec = spec_path("cyclic_9_over_3.hg");
    let out = heatgraph(&["cover", "lambda0-compare", "--spec", spec.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("verdict: ok"));
    let written = std::fs::read_to_string(&csv).unwrap();
    assert!(written.starts_with("side,R,lambda0\n"));
}

#[test]
fn shipped_specs_parse_and_reprint() {
    for entry in std::fs::read_dir(spec_path("")).unwrap() {
        let path = entry.unwrap().path();
        let spec = GraphSpec::load(&path).unwrap();
        let mut load = |child: &str| GraphSpec::load(&spec_path(child));
        let reparsed = GraphSpec::parse_with(&spec.to_string(), &mut load).unwrap();
        assert_eq!(reparsed, spec, "{}", path.display());
        spec.build().unwrap();
    }
}
