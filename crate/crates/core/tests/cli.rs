use bianchi::catalog::reference_configurations;
use bianchi::cli::{run, run_cli, Check, RunConfig, Status};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bianchi"))
}

fn args(family: &str, params: &[&str], extra: &[&str]) -> Vec<String> {
    let mut v = vec!["verify".to_string(), "--family".into(), family.into()];
    for p in params {
        v.push("--param".into());
        v.push(p.to_string());
    }
    v.extend(extra.iter().map(|s| s.to_string()));
    v
}

const TYPE3: [&str; 3] = ["epsilon=1", "gamma0=0.8", "lambda=-0.6"];

#[test]
fn default_checks_pass_on_every_reference_configuration() {
    for (family, params) in reference_configurations() {
        let cfg = RunConfig { family: Some(family.to_string()), params: params.clone(), ..Default::default() };
        let r = run("verify", &cfg).unwrap();
        assert_eq!(r.checks.len(), Check::DEFAULT.len());
        for (name, c) in &r.checks {
            assert_ne!(c.status, Status::Fail, "{family} {params:?} {name}: {c:?}");
        }
    }
}

#[test]
fn same_seed_gives_identical_bytes() {
    let a = args("bianchi5_euclid", &["lambda=1"], &["--seed", "7", "--checks", "einstein,weyl,petrov"]);
    let one = bin().args(&a).output().unwrap();
    let two = bin().args(&a).output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, two.stdout);
    let other = bin().args(args("bianchi5_euclid", &["lambda=1"], &["--seed", "8", "--checks", "einstein"])).output().unwrap();
    assert_ne!(one.stdout, other.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(run_cli(["bianchi", "verify", "--family", "nope"]), 1);
    assert_eq!(run_cli(["bianchi", "verify", "--family", "bianchi3", "--param", "epsilon=1"]), 1);
    assert_eq!(run_cli(["bianchi", "frobnicate"]), 1);
    let tight: Vec<String> = args("bianchi3", &TYPE3, &["--checks", "einstein", "--tol", "einstein=1e-30", "--out", "/dev/null"]);
    assert_eq!(run_cli(std::iter::once("bianchi".to_string()).chain(tight)), 2);
}

#[test]
fn grid_outside_the_domain_is_a_config_error() {
    let a = args("bianchi3", &TYPE3, &["--grid", "0:1:2,0:1:2,0:1:2,-5:-4:2", "--out", "/dev/null"]);
    let out = bin().args(&a).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside"));
}

#[test]
fn failing_check_reports_its_worst_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let a = args("bianchi3", &TYPE3, &["--checks", "einstein", "--tol", "einstein=1e-30", "--out", path.to_str().unwrap()]);
    assert_eq!(bin().args(&a).status().unwrap().code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["checks"]["einstein"]["status"], "fail");
    assert_eq!(v["checks"]["einstein"]["location"].as_array().unwrap().len(), 4);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"family":"bianchi3","params":{"epsilon":1,"gamma0":0.8,"lambda":-0.6},"checks":["einstein"],"grid":{"count":5}}"#,
    )
    .unwrap();
    let out = bin().args(["verify", "--config", cfg.to_str().unwrap(), "--format", "csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check,status"));
    assert!(text.contains("einstein,pass"));
    assert!(text.contains(",5,"));
}

#[test]
fn classify_reports_the_label() {
    let out = bin()
        .args(["classify", "--family", "bianchi3", "--param", "epsilon=1", "--param", "gamma0=0.8", "--param", "lambda=-0.6"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"]["petrov"]["detail"]["label"], "(D+, D-)");
}

#[test]
fn geodesic_writes_a_trajectory_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let mut a = vec!["geodesic".to_string(), "--family".into(), "bianchi3".into()];
    for p in TYPE3 {
        a.extend(["--param".to_string(), p.to_string()]);
    }
    a.extend(["--start", "0.1,0.2,-0.3,2.5", "--momentum", "0.05,0.3,-0.2,0.1", "--out"].map(String::from));
    a.push(path.to_str().unwrap().into());
    assert_eq!(bin().args(&a).status().unwrap().code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("g.trajectory.csv")).unwrap();
    assert!(csv.starts_with("affine,"));
    assert!(csv.lines().count() > 10);
}

#[test]
fn embed_suite_has_no_failures() {
    let r = run("embed", &RunConfig::default()).unwrap();
    assert!(r.all_pass());
    assert!(r.checks.values().any(|c| c.status == Status::Flagged));
    assert!(r.checks.len() >= 12);
}

#[test]
fn elliptic_selftest_passes() {
    assert_eq!(run_cli(["bianchi", "elliptic-selftest", "--out", "/dev/null"]), 0);
}
