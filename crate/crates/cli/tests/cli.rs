use std::fs;
use std::process::{Command, Output};

use triconfig_cli::csv_body;

fn triconfig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triconfig")).args(args).env_remove("TRICONFIG_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn summary(text: &str, key: &str) -> Option<String> {
    text.lines().find_map(|l| l.strip_prefix(&format!("#= {key} ")).map(str::to_string))
}

fn data_rows(text: &str) -> usize {
    csv_body(text).lines().skip(1).filter(|l| !l.starts_with('#')).count()
}

#[test]
fn exit_codes_follow_error_class() {
    assert_eq!(triconfig(&["selftest", "-q"]).status.code(), Some(0));
    assert_eq!(triconfig(&["bilinear-bound", "--beta1", "0.3", "--beta2", "0.1", "-q"]).status.code(), Some(2));
    assert_eq!(triconfig(&["sharpness", "--alpha", "1.5", "-q"]).status.code(), Some(2));
    assert_eq!(triconfig(&["count", "--t", "1,1,3", "-q"]).status.code(), Some(2));
    assert_eq!(triconfig(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(triconfig(&["sharpness", "--level", "6", "--max-atoms", "100", "-q"]).status.code(), Some(3));
    let tight = triconfig(&["corollary", "--kind", "cluster", "--sizes", "256,512,1024", "--cap", "1", "-q"]);
    assert_eq!(tight.status.code(), Some(4), "{}", String::from_utf8_lossy(&tight.stderr));
}

#[test]
fn help_exits_zero() {
    let o = triconfig(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sharpness"));
}

#[test]
fn bodies_do_not_depend_on_threads() {
    let base = ["annulus-mass", "--level", "4", "--t", "1,1,sqrt(2)", "--eps", "2^-2..2^-4", "-q"];
    let mut bodies = Vec::new();
    for extra in [&[][..], &["--threads", "1"], &["--threads", "3"], &["--sequential"]] {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        let o = triconfig(&args);
        assert!(o.status.success());
        bodies.push(csv_body(&stdout(&o)).to_string());
    }
    assert!(!bodies[0].is_empty());
    assert!(bodies.iter().all(|b| b == &bodies[0]));
}

#[test]
fn thread_env_var_is_echoed() {
    let o = Command::new(env!("CARGO_BIN_EXE_triconfig"))
        .args(["energy", "--level", "2", "-q"])
        .env("TRICONFIG_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("# threads 1 "));
}

#[test]
fn seed_changes_random_sources_only() {
    let run = |seed: &str| {
        csv_body(&stdout(&triconfig(&["generate", "--source", "random-uniform", "--n", "50", "--seed", seed, "-q"]))).to_string()
    };
    assert_eq!(run("4"), run("4"));
    assert_ne!(run("4"), run("5"));
}

#[test]
fn config_file_params_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    fs::write(&cfg, r#"{"command": "sharpness", "seed": 3, "params": {"level": 4, "eps": "2^-2..2^-4"}}"#).unwrap();
    let path = cfg.to_str().unwrap();

    let from_file = stdout(&triconfig(&["--config-file", path, "-q"]));
    assert_eq!(data_rows(&from_file), 3);
    assert!(from_file.contains("# seed 3\n"));

    let overridden = triconfig(&["sharpness", "--config-file", path, "--eps", "2^-2..2^-5", "--level", "5", "-q"]);
    assert!(overridden.status.success());
    let text = stdout(&overridden);
    assert!(text.contains("\"level\":5"), "{text}");
    assert_eq!(data_rows(&text), 4);

    let mismatch = triconfig(&["energy", "--config-file", path, "-q"]);
    assert_eq!(mismatch.status.code(), Some(2));

    fs::write(&cfg, r#"{"command": "sharpness", "params": {"levle": 3}}"#).unwrap();
    assert_eq!(triconfig(&["--config-file", path, "-q"]).status.code(), Some(2));
    fs::write(&cfg, r#"{"command": "sharpness", "extra": 1}"#).unwrap();
    assert_eq!(triconfig(&["--config-file", path, "-q"]).status.code(), Some(2));
}

#[test]
fn output_and_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let json = dir.path().join("report.json");
    let o = triconfig(&[
        "distance-density",
        "--level",
        "4",
        "--eps",
        "2^-2..2^-4",
        "-o",
        csv.to_str().unwrap(),
        "--report",
        json.to_str().unwrap(),
        "-q",
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# triconfig "));
    assert!(summary(&text, "slope").is_some());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["command"], "distance-density");
    assert_eq!(report["ok"], true);
}

#[test]
fn brute_count_agrees_through_cli() {
    let o = triconfig(&["count", "--kind", "grid", "--n", "256", "--t", "0.5,0.5,sqrt(2)/2", "--delta", "auto", "--brute", "-q"]);
    assert!(o.status.success());
    assert_eq!(summary(&stdout(&o), "brute_matches").as_deref(), Some("true"));
}
