//! End-to-end tests of the `symhodge` binary: exit codes, output routing,
//! config handling, and the JSON surfaces of each subcommand.

use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symhodge"))
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("symhodge-bin-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_single_model_writes_a_healthy_report() {
    let out = tmp("sphere.json");
    let output = bin()
        .args(["verify", "--model", "sphere-s1", "--seed", "7"])
        .args(["--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(output.status.success());
    // The report goes to the file; stdout stays clean, timing goes to stderr.
    assert!(output.stdout.is_empty());
    assert!(String::from_utf8_lossy(&output.stderr).contains("verify finished"));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["seed"], 7);
    assert_eq!(report["summary"]["failed"], 0);
    assert_eq!(report["summary"]["ok"], true);
}

#[test]
fn verify_expected_failures_count_as_success() {
    let output = bin()
        .args(["verify", "--model", "kodaira-thurston"])
        .output()
        .unwrap();
    assert!(output.status.success(), "witnessed obstructions are expected");
    let report: Value = serde_json::from_slice(&output.stdout).unwrap();
    let statuses: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["status"].as_str().unwrap())
        .collect();
    assert!(statuses.contains(&"counterexample"));
    assert!(!statuses.contains(&"fail"));
}

#[test]
fn verify_renders_markdown_on_request() {
    let output = bin()
        .args(["verify", "--model", "flat-torus-2", "--format", "markdown"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.starts_with("# Verification report"));
    assert!(text.contains("flat-torus-2/strong-lefschetz"));
}

#[test]
fn verify_reads_a_config_file_and_flags_win() {
    let cfg = tmp("verify.toml");
    std::fs::write(&cfg, "model = \"flat-torus-2\"\nseed = 5\n").unwrap();
    let output = bin()
        .args(["verify", "--config", cfg.to_str().unwrap(), "--seed", "9"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let report: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["models"], serde_json::json!(["flat-torus-2"]));
    assert_eq!(report["seed"], 9, "the explicit flag beats the config value");
}

#[test]
fn usage_errors_exit_with_code_two() {
    for args in [
        vec!["verify", "--model", "klein-bottle"],
        vec!["verify"],
        vec!["verify", "--model", "sphere-s1", "--format", "yaml"],
        vec!["extend", "--class", "omega^3"],
        vec!["solve", "--model", "sphere-s1", "--op", "divide", "--input", "{}"],
        vec!["frobnicate"],
    ] {
        let output = bin().args(&args).output().unwrap();
        assert_eq!(output.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn extend_emits_the_moment_extension_of_omega() {
    let output = bin().args(["extend", "--class", "omega"]).output().unwrap();
    assert!(output.status.success());
    let value: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(value["schema"], 1);
    assert_eq!(value["class"], "omega");
    let exps: Vec<&Value> = value["extension"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| &t["u_exps"])
        .collect();
    assert_eq!(exps.len(), 2, "a u⁰ term and a u¹ term");
}

#[test]
fn extend_reports_the_invariant_of_the_squared_class() {
    let output = bin().args(["extend", "--class", "omega^2"]).output().unwrap();
    assert!(output.status.success());
    let value: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(value["chi1"], "1/2");
}

#[test]
fn solve_accepts_a_file_and_inline_json_equally() {
    let form = r#"{"grade": 2, "terms": [
        {"coeff": {"poly": [{"num": "1", "den": "1", "pow": 0},
                            {"num": "-2", "den": "1", "pow": 1}]},
         "frame": [0, 1]}
    ]}"#;
    let path = tmp("gamma.json");
    std::fs::write(&path, form).unwrap();
    let from_file = bin()
        .args(["solve", "--model", "sphere-s1", "--op", "harmonic"])
        .args(["--input", path.to_str().unwrap()])
        .output()
        .unwrap();
    let inline = bin()
        .args(["solve", "--model", "sphere-s1", "--op", "harmonic", "--input", form])
        .output()
        .unwrap();
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, inline.stdout);
    let value: Value = serde_json::from_slice(&from_file.stdout).unwrap();
    assert_eq!(value["status"], "solved");
    // The certificate must exhibit exactly zero residuals.
    for residual in value["result"]["residual"].as_object().unwrap().values() {
        assert_eq!(residual["terms"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn solve_refusals_exit_with_code_one() {
    // The first harmonic generator of the torus is closed and coclosed but
    // not exact, so the equation dδβ = α has no solution to certify.
    let dx = r#"{"grade": 1, "terms": [
        {"coeff": {"trig": [{"freq": [], "kind": "cos", "num": "1", "den": "1"}]},
         "frame": [0]}
    ]}"#;
    let output = bin()
        .args(["solve", "--model", "flat-torus-2", "--op", "ddelta", "--input", dx])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let value: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(value["status"], "refused");
    assert!(value["reason"].as_str().unwrap().contains("neither exact nor coexact"));
}

#[test]
fn solve_handles_the_equivariant_operator() {
    let alpha = r#"{"poly_degree_bound": 6, "terms": [
        {"u_exps": [0], "form": {"grade": 1, "terms": [
            {"coeff": {"poly": [{"num": "-2", "den": "1", "pow": 0}]}, "frame": [0]}
        ]}}
    ]}"#;
    let output = bin()
        .args(["solve", "--model", "sphere-s1", "--op", "dgdelta", "--input", alpha])
        .output()
        .unwrap();
    assert!(output.status.success());
    let value: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(value["status"], "solved");
    assert_eq!(value["result"]["residual"]["terms"].as_array().unwrap().len(), 0);
}
