use std::path::Path;
use std::process::{Command, Output};

use lfcheck::harness::parse_json;
use lfcheck::ineq::IneqId;

fn lfcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lfcheck")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const CONFIG: &str = r#"{
    "alphas": [1.0],
    "s_values": [1.0],
    "intervals": [[0.0, 1.0]],
    "x_fractions": [0.5],
    "pq_pairs": [[2.0, 2.0]],
    "functions": ["poly:0,0,0,1"],
    "inequalities": ["thm1", "thm2"]
}"#;

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn constants_prints_m_and_n() {
    let out = lfcheck(&["constants", "--alpha", "1", "--s", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("M = 0.25\nN = 0.0833333333333333"), "{text}");
}

#[test]
fn eval_reports_one_row() {
    let out = lfcheck(&[
        "eval", "--ineq", "thm1", "--alpha", "1", "--s", "1", "--a", "0", "--b", "1", "--x", "0.5", "--fn", "mono:3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "ineq,alpha,s,p,q,a,b,x,fn,lhs,rhs,slack,holds,notes");
    assert!(lines[1].starts_with("thm1,1,1,,,0,1,0.5,mono:3,0.125"), "{}", lines[1]);
    assert!(lines[1].contains(",true,"));

    let out = lfcheck(&[
        "eval", "--ineq", "identity", "--alpha", "0.5", "--a", "0", "--b", "1", "--x", "1", "--fn", "mono:1",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let rows = parse_json(&stdout(&out)).unwrap();
    assert_eq!(rows[0].ineq, IneqId::Identity);
    assert!((rows[0].lhs - 0.644_074_683_8).abs() < 1e-9);
}

#[test]
fn bad_input_exits_2() {
    let out = lfcheck(&["eval", "--ineq", "thm1", "--alpha", "1", "--a", "0", "--b", "1", "--fn", "mono:"]);
    assert_eq!(out.status.code(), Some(2));
    let out = lfcheck(&["eval", "--ineq", "thm1", "--alpha", "1", "--a", "0", "--b", "1", "--x", "0.5", "--fn", "mono:3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("needs parameter s"));
    let out = lfcheck(&["constants", "--alpha", "1.5", "--s", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_writes_file_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), CONFIG);
    let out_path = dir.path().join("rows.json");
    let out = lfcheck(&["sweep", "--config", &config, "--format", "json", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let rows = parse_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].ineq, IneqId::Thm1);
    assert!((rows[0].lhs - 0.125).abs() < 1e-12 && (rows[0].rhs - 0.125).abs() < 1e-12);
    assert!((rows[1].rhs - 0.191_875).abs() < 1e-5);

    let serial = lfcheck(&["sweep", "--config", &config]);
    let parallel = lfcheck(&["sweep", "--config", &config, "--parallel"]);
    assert_eq!(serial.stdout, parallel.stdout);
    assert_eq!(stdout(&serial).lines().count(), 3);
}

#[test]
fn sweep_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &CONFIG.replace("[[2.0, 2.0]]", "[[2.0, 3.0]]"));
    let out = lfcheck(&["sweep", "--config", &config]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("conjugate"));
}

#[test]
fn falsify_is_reproducible() {
    let args = [
        "falsify", "--ineq", "identity-residual-zero", "--family", "mono:1", "--alpha", "0.5", "--trials", "1", "--seed", "11",
    ];
    let first = lfcheck(&args);
    let second = lfcheck(&args);
    assert_eq!(first.status.code(), Some(1));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("identity,0.5,,,,0,1,0.5,mono:1"));

    let none = lfcheck(&["falsify", "--ineq", "ghh", "--family", "mono:2", "--trials", "200", "--seed", "3"]);
    assert_eq!(none.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&none.stderr).contains("no counterexample"));
}

#[test]
fn quad_test_reports_exactness() {
    let out = lfcheck(&["quad-test", "--alpha", "0.5", "--max-grade", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let worst: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("max abs error = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(worst < 1e-12, "{text}");
    let out = lfcheck(&["quad-test", "--alpha", "0.5", "--max-grade", "40"]);
    assert_eq!(out.status.code(), Some(2));
}
