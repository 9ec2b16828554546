//! End-to-end tests of the command-line binary: exit codes, determinism of
//! the emitted report, front emission, and config round trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_frontkit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("frontkit-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("tmp dir");
    dir
}

#[test]
fn example1_succeeds_and_is_deterministic() {
    let a = run(&["example1", "--a", "2"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = run(&["example1", "--a", "2"]);
    assert_eq!(a.stdout, b.stdout, "report output must be byte-identical");
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"verdict\": \"free\""));
    assert!(text.contains("\"mu\": 7"));
}

#[test]
fn example2_succeeds() {
    let out = run(&["example2", "--k1", "1", "--k2", "2"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"verdict\": \"free\""));
    assert!(text.contains("\"mu\": 5"));
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["example1", "--a", "not-a-number"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["analyze", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["front"]);
    assert_eq!(out.status.code(), Some(1), "missing required --t");
}

#[test]
fn analyze_writes_report_and_round_trips() {
    let dir = tmpdir("analyze");
    let config_path = dir.join("config.json");
    // Same data as the example1 preset, spelled out as a config document.
    let config = r#"{
        "variables": ["z"],
        "F": "2 z^2 + z^4",
        "focal": ["0", "-1/4", "1/4"]
    }"#;
    std::fs::write(&config_path, config).unwrap();
    let out = run(&[
        "analyze",
        config_path.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report_text = std::fs::read_to_string(dir.join("report.json")).expect("report written");
    let report: serde_json::Value = serde_json::from_str(&report_text).unwrap();
    assert_eq!(report["verdict"], "free");
    assert_eq!(report["config"]["F"], "2 z^2 + z^4");
    // The echoed config parses back to a working config.
    let echoed = frontkit::cli::AnalysisConfig::from_json(&report["config"].to_string()).unwrap();
    assert_eq!(echoed.f, "2 z^2 + z^4");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn pipeline_errors_exit_two_with_report() {
    let dir = tmpdir("pipeline-error");
    let config_path = dir.join("bad.json");
    // Valid JSON, invalid polynomial: the failure is embedded in the report.
    let config = r#"{
        "variables": ["z"],
        "F": "z^",
        "focal": ["0", "0", "1"]
    }"#;
    std::fs::write(&config_path, config).unwrap();
    let out = run(&["analyze", config_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"stage\": \"parse_front\""), "{text}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn front_emits_csv_and_svg() {
    let dir = tmpdir("front");
    let config_path = dir.join("config.json");
    let config = r#"{
        "variables": ["z"],
        "F": "1 z^2 + z^4",
        "focal": ["0", "-1/2", "1/2"]
    }"#;
    std::fs::write(&config_path, config).unwrap();
    let out = run(&[
        "front",
        config_path.to_str().unwrap(),
        "--t",
        "1/2,0.55",
        "--format",
        "csv",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.join("front.csv")).expect("csv written");
    assert!(csv.starts_with("t,branch,z1,x1,x2\n"));
    assert!(csv.lines().count() > 2, "csv has sample rows");
    let out = run(&[
        "front",
        config_path.to_str().unwrap(),
        "--t",
        "1/2",
        "--format",
        "svg",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let svg = std::fs::read_to_string(dir.join("front.svg")).expect("svg written");
    assert!(svg.contains("<path") && svg.contains("viewBox"));
    std::fs::remove_dir_all(&dir).ok();
}
