//! End-to-end checks of the command-line surface: subcommands, flag
//! overrides, config files, output formats, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn cohest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

#[test]
fn list_states_names_the_registry() {
    let out = cohest(&["list-states"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for label in ["bell", "ghz3", "ghz4", "c4", "w3", "w4", "cluster-4"] {
        assert!(text.contains(label), "missing {label} in:\n{text}");
    }
}

#[test]
fn run_emits_csv_schema() {
    let out = cohest(&["run", "--state", "ghz3", "--exact"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "state,n,noise,param,shots,w,m,subset_mask_hex,valid,invalid_reason,l_c,u_c,u_c_sigma,c_re_exact,distance_D,fidelity,seed"
    );
    let row = lines.next().unwrap();
    assert_eq!(row.split(',').count(), 17);
    assert!(row.starts_with("ghz3,3,none,,,"));
    assert!(lines.next().is_none());
}

#[test]
fn exact_subcommand_forces_exact_mode() {
    let out = cohest(&["exact", "--state", "w4"]);
    assert!(out.status.success());
    let row = stdout(&out).lines().nth(1).unwrap().to_string();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[4], "", "shots column is empty in exact mode");
    let l_c: f64 = fields[10].parse().unwrap();
    assert!((l_c - 2.0).abs() < 1e-6);
}

#[test]
fn json_format_parses() {
    let out = cohest(&[
        "w-scan",
        "--state",
        "w3",
        "--noise",
        "depolarizing:0.05",
        "--shots",
        "2000",
        "--w",
        "0,3",
        "--seed",
        "9",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["config"]["state"], "w3");
    assert_eq!(doc["reports"].as_array().unwrap().len(), 2);
    assert_eq!(doc["summary"]["axis"], "w");
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = std::env::temp_dir();
    let config_path: PathBuf = dir.join("cohest_cli_test_config.json");
    let out_path: PathBuf = dir.join("cohest_cli_test_out.csv");
    std::fs::write(
        &config_path,
        r#"{"state": "ghz3", "noise": {"depolarizing": 0.1}, "shots": 500, "seed": 4}"#,
    )
    .unwrap();

    let out = cohest(&[
        "run",
        "--config",
        config_path.to_str().unwrap(),
        "--shots",
        "800",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let written = std::fs::read_to_string(&out_path).unwrap();
    let row = written.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "ghz3");
    assert_eq!(fields[2], "depolarizing");
    assert_eq!(fields[3], "0.1");
    assert_eq!(fields[4], "800", "flag overrides the config file");
    assert_eq!(fields[16], "4", "seed from the config file");

    std::fs::remove_file(&config_path).ok();
    std::fs::remove_file(&out_path).ok();
}

#[test]
fn config_errors_exit_2() {
    let unknown_state = cohest(&["run", "--state", "ghz17"]);
    assert_eq!(unknown_state.status.code(), Some(2));

    let bad_noise = cohest(&["run", "--state", "ghz3", "--noise", "thermal:0.1"]);
    assert_eq!(bad_noise.status.code(), Some(2));

    let bad_m = cohest(&["subset-scan", "--state", "ghz3", "--m", "1..99", "--exact"]);
    assert_eq!(bad_m.status.code(), Some(2));

    let bad_shots = cohest(&["run", "--state", "ghz3", "--shots", "1"]);
    assert_eq!(bad_shots.status.code(), Some(2));

    let missing_file = cohest(&["run", "--config", "/nonexistent/cohest.json"]);
    assert_eq!(missing_file.status.code(), Some(2));

    // clap's own parse failures also exit 2.
    let unknown_flag = cohest(&["run", "--frobnicate"]);
    assert_eq!(unknown_flag.status.code(), Some(2));
}

#[test]
fn identical_seeds_give_identical_bytes() {
    let args = [
        "subset-scan",
        "--state",
        "w3",
        "--noise",
        "dephasing:0.1",
        "--shots",
        "1000",
        "--max-subsets",
        "20",
        "--seed",
        "12",
    ];
    let a = cohest(&args);
    let b = cohest(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_sio_passes() {
    let out = cohest(&["verify-sio", "--trials", "60", "--seed", "5"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("PASS"), "unexpected output:\n{text}");
}
