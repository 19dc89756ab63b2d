use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_bbdqc1"));
    c.env_remove("BBDQC1_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn trace_identity_is_exact() {
    let out = run(&[
        "trace",
        "--builtin",
        "identity",
        "--dim",
        "4",
        "--shots",
        "2000",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["command"], "trace");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
    let protocols = v["result"]["protocols"].as_array().unwrap();
    assert_eq!(protocols.len(), 2);
    for p in protocols {
        assert_eq!(p["estimate"]["re"], 1.0);
    }
}

#[test]
fn trace_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    std::fs::write(
        &path,
        r#"{"dim": 2, "re": [[0, 1], [1, 0]], "im": [[0, 0], [0, 0]]}"#,
    )
    .unwrap();
    let out = run(&[
        "trace",
        "--matrix",
        path.to_str().unwrap(),
        "--protocol",
        "bb",
    ]);
    assert_eq!(code(&out), 0);
    let p = &json(&out)["result"]["protocols"][0];
    assert_eq!(p["protocol"], "bb");
    assert_eq!(p["exact"]["re"], 0.0);
}

#[test]
fn bad_matrix_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"dim": 2, "re": [[1, 1], [0, 1]], "im": [[0, 0], [0, 0]]}"#,
    )
    .unwrap();
    let out = run(&["trace", "--matrix", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    std::fs::write(&path, "not json").unwrap();
    assert_eq!(
        code(&run(&["trace", "--matrix", path.to_str().unwrap()])),
        2
    );
}

#[test]
fn csv_rejected_for_json_only_commands() {
    assert_eq!(code(&run(&["factor", "15", "--format", "csv"])), 2);
}

#[test]
fn factor_exit_codes() {
    let out = run(&["factor", "15", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["factors"], serde_json::json!([3, 5]));
    assert_eq!(v["seed"], 7);
    for n in ["9", "13", "22", "2"] {
        assert_eq!(code(&run(&["factor", n])), 3, "N={n}");
    }
    // a base whose attempts never yield a factor exhausts the cap
    let out = run(&["factor", "15", "--a", "14", "--attempts", "5"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn analyze_outputs() {
    let out = run(&["analyze", "15", "2"]);
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("c,probability"));
    assert_eq!(lines.count(), 256);

    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("counting.json");
    let dist = dir.path().join("dist.csv");
    let out = run(&[
        "analyze",
        "21",
        "2",
        "--report",
        report.to_str().unwrap(),
        "-o",
        dist.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&dist).unwrap().lines().count(), 513);
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["result"]["counting"]["usable_pairs_bruteforce"], 128);
    assert_eq!(rep["result"]["counting"]["num_c"], 152);

    let out = run(&["analyze", "15", "2", "--format", "json"]);
    assert_eq!(json(&out)["result"]["counting"]["chi"], 4);
}

#[test]
fn analyze_gcd_shortcut_and_preconditions() {
    let out = run(&["analyze", "15", "6"]);
    assert_eq!(code(&out), 4);
    assert_eq!(code(&run(&["analyze", "15", "15"])), 3);
    assert_eq!(code(&run(&["analyze", "15", "1"])), 3);
}

#[test]
fn verify_and_fault_hook() {
    let out = run(&["verify", "--quick"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["passed"], true);
    let out = run(&["verify", "--quick", "--break-phase-invariance"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    let failures = v["result"]["failures"].as_array().unwrap();
    assert_eq!(failures, &[Value::from("dqc1.global_phase_invariance")]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("dqc1.global_phase_invariance"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["trace"])), 2);
    assert_eq!(code(&run(&["factor", "abc"])), 2);
    assert_eq!(code(&run(&["nonsense"])), 2);
}

fn same_bytes(args: &[&str]) {
    let a = run(args);
    let b = run(args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "{args:?}");
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(a.stdout, run(&seq).stdout, "{args:?} sequential");
}

#[test]
fn reports_are_byte_identical() {
    same_bytes(&[
        "trace",
        "--builtin",
        "random",
        "--dim",
        "3",
        "--shots",
        "20000",
        "--seed",
        "5",
    ]);
    same_bytes(&[
        "factor",
        "35",
        "--seed",
        "5",
        "--sample-all",
        "--attempts",
        "50",
    ]);
    same_bytes(&["factor", "21", "--seed", "5", "--faithful"]);
    same_bytes(&["analyze", "21", "2", "--format", "json"]);
}

#[test]
fn env_seed_overrides_default() {
    let args = ["factor", "33", "--sample-all", "--attempts", "20"];
    let with_env = bin().args(args).env("BBDQC1_SEED", "99").output().unwrap();
    let flag = run(&[&args[..], &["--seed", "99"]].concat());
    assert_eq!(json(&with_env)["seed"], 99);
    assert_eq!(with_env.stdout, flag.stdout);
    let default = run(&args);
    assert_ne!(default.stdout, with_env.stdout);
    // an explicit flag wins over the environment
    let both = bin()
        .args(args)
        .args(["--seed", "3"])
        .env("BBDQC1_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(json(&both)["seed"], 3);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["factor", "15", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(Path::new(&path)).unwrap()).unwrap();
    assert_eq!(v["command"], "factor");
}
