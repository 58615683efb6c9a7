use std::process::Command;

use nilgeom::cli::run;

fn cli(args: &[&str]) -> nilgeom::cli::Outcome {
    run(std::iter::once("nilgeom").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = cli(&full);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

#[test]
fn classify_text() {
    let out = cli(&["classify", "--family", "F215", "--rho", "0", "--delta", "0", "--s", "1", "--t", "1"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("algebra: h3, J: abelian, balanced: yes"), "{}", out.stdout);
}

#[test]
fn every_subcommand_emits_schema() {
    let cases: [&[&str]; 6] = [
        &["classify", "--preset", "h5"],
        &["build", "--family", "F214"],
        &["connection", "--family", "F214", "--kind", "chern"],
        &["holonomy", "--family", "F214"],
        &["ddbar", "--family", "F215", "--rho", "1", "--b", "0"],
        &["strominger", "--family", "F215", "--rho", "0", "--delta", "0", "--t", "1", "--lambda", "1"],
    ];
    for args in cases {
        let v = json(args);
        assert_eq!(v["schema"], "1", "{args:?}");
    }
}

#[test]
fn holonomy_of_iwasawa() {
    let v = json(&["holonomy", "--family", "F214", "--t", "1"]);
    assert_eq!(v["dim"], 8);
    assert_eq!(v["label"], "su3");
}

#[test]
fn strominger_on_h3() {
    let out = cli(&["strominger", "--family", "F215", "--rho", "0", "--delta", "0", "--t", "1", "--lambda", "1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("anomaly: solved, alpha': 2/3"), "{}", out.stdout);
    assert!(out.stdout.contains("heterotic: true"));
}

#[test]
fn ddbar_fails_on_deformation() {
    let v = json(&["--backend", "float", "ddbar", "--family", "DEF", "--lambda", "1/4"]);
    assert_eq!(v["verdict"], "fails", "{v}");
    assert!(v["witness"]["phi"].is_string());
}

#[test]
fn sweep_keeps_grid_order() {
    let out = cli(&["sweep", "--family", "F214", "--param", "t", "--values", "3,1,2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let firsts: Vec<&str> = out.stdout.lines().skip(1).filter(|l| !l.starts_with('#')).map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(firsts, ["3", "1", "2"]);
}

#[test]
fn empty_sweep_prints_header_only() {
    let out = cli(&["sweep", "--family", "F214", "--param", "t", "--values", ""]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().count(), 1);
}

#[test]
fn parse_errors_exit_one() {
    for args in [
        &["classify", "--family", "F999"][..],
        &["classify", "--bogus"],
        &["classify", "--family", "F214", "--t", "x/y"],
        &["classify", "--salamon", "(0,0,12"],
    ] {
        let out = cli(args);
        assert_eq!(out.code, 1, "{args:?}: {}", out.stdout);
        assert_eq!(out.stderr.lines().count(), 1, "{}", out.stderr);
    }
}

#[test]
fn precondition_failures_exit_two() {
    for args in [
        &["classify", "--family", "F214", "--t", "0"][..],
        &["classify", "--family", "F216", "--s", "1", "--u", "3i", "--t", "1"],
    ] {
        let out = cli(args);
        assert_eq!(out.code, 2, "{args:?}: {}", out.stdout);
        assert_eq!(out.stderr.lines().count(), 1, "{}", out.stderr);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_nilgeom");
    let status = |args: &[&str]| Command::new(bin).args(args).output().expect("spawn");
    let ok = status(&["--json", "classify", "--preset", "h3"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["algebra"], "h3");
    assert_eq!(status(&["classify", "--family", "nope"]).status.code(), Some(1));
    assert_eq!(status(&["classify", "--family", "F214", "--t", "0"]).status.code(), Some(2));
}
