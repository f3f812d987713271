//! CLI contract tests: exit codes, machine-readable error objects, CSV
//! formats, config echo, and the PF_MEM_CAP override.

use std::process::Command;

fn pf(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_pf"))
        .args(args)
        .output()
        .expect("pf runs")
}

fn pf_env(args: &[&str], key: &str, value: &str) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_pf"))
        .args(args)
        .env(key, value)
        .output()
        .expect("pf runs")
}

fn write_temp(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join("pf_cli_io");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn norm_reports_schema_fields() {
    let element = write_temp(
        "e.json",
        r#"{"group":"free:2","dim":1,"action":"trivial","terms":[{"word":"a","re":0.5,"im":0.0}]}"#,
    );
    let out = pf(&[
        "norm", "--group", "free:2", "--element", &element, "--p", "1.5", "--radius", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tool"], "pf");
    assert_eq!(v["command"], "norm");
    assert_eq!(v["seed"], 42);
    assert_eq!(v["config"]["radius"], 3);
    let r = &v["result"];
    for key in [
        "p",
        "q",
        "lower",
        "upper",
        "radius",
        "method",
        "witness_seed",
        "converged",
        "iterations",
    ] {
        assert!(!r[key].is_null(), "missing result field {key}");
    }
    // single atom: lower = upper = 0.5
    assert!((r["lower"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((r["upper"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    // timing goes to stderr, never stdout
    assert!(String::from_utf8_lossy(&out.stderr).contains("wall_ms"));
}

#[test]
fn norm_of_identity_dirac_is_one_at_p2() {
    let element = write_temp(
        "dirac_e.json",
        r#"{"group":"free:2","dim":1,"action":"trivial","terms":[{"word":"","re":1.0,"im":0.0}]}"#,
    );
    let out = pf(&[
        "norm", "--group", "free:2", "--element", &element, "--p", "2", "--radius", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["lower"], 1.0);
    assert_eq!(v["result"]["upper"], 1.0);
}

#[test]
fn norm_with_amplification_runs() {
    let element = write_temp(
        "amp.json",
        r#"{"group":"free:2","dim":1,"action":"trivial","terms":[{"word":"a","re":0.5,"im":0.0},{"word":"B","re":0.0,"im":-0.5}]}"#,
    );
    let out = pf(&[
        "norm", "--group", "free:2", "--element", &element, "--p", "1.5", "--radius", "3",
        "--amplify", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["result"]["lower"].as_f64().unwrap() <= v["result"]["upper"].as_f64().unwrap());
}

#[test]
fn entropy_nmax2_matches_enumeration() {
    // H_1 = log 4; H_2 over the 13 atoms of the 16-path distribution
    let out = pf(&["entropy", "--group", "free:2", "--measure", "srw", "--nmax", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let h1 = v["result"]["avez"]["h_raw"][0][1].as_f64().unwrap();
    let h2 = v["result"]["avez"]["h_raw"][1][1].as_f64().unwrap();
    assert!((h1 - 4f64.ln()).abs() < 1e-12);
    let expect = -(0.25f64 * 0.25f64.ln()) - 12.0 * (1.0 / 16.0) * (1.0f64 / 16.0).ln();
    assert!((h2 - expect).abs() < 1e-12);
}

#[test]
fn missing_file_is_exit_2_with_error_object() {
    let out = pf(&[
        "norm", "--group", "free:2", "--element", "/nonexistent.json", "--p", "1.5", "--radius",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "structural");
}

#[test]
fn group_mismatch_is_exit_2() {
    let element = write_temp(
        "e3.json",
        r#"{"group":"free:3","dim":1,"action":"trivial","terms":[{"word":"c","re":1.0,"im":0.0}]}"#,
    );
    let out = pf(&[
        "norm", "--group", "free:2", "--element", &element, "--p", "1.5", "--radius", "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn radius_below_support_is_exit_2() {
    let element = write_temp(
        "e2.json",
        r#"{"group":"free:2","dim":1,"action":"trivial","terms":[{"word":"abab","re":1.0,"im":0.0}]}"#,
    );
    let out = pf(&[
        "norm", "--group", "free:2", "--element", &element, "--p", "1.5", "--radius", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "precondition");
}

#[test]
fn mem_cap_env_var_gives_exit_3() {
    let element = write_temp(
        "e4.json",
        r#"{"group":"free:2","dim":1,"action":"trivial","terms":[{"word":"a","re":1.0,"im":0.0}]}"#,
    );
    let out = pf_env(
        &[
            "norm", "--group", "free:2", "--element", &element, "--p", "1.5", "--radius", "6",
        ],
        "PF_MEM_CAP",
        "100",
    );
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "resource");
    assert!(v["error"]["message"]
        .as_str()
        .unwrap()
        .contains("requires"));
}

#[test]
fn unknown_flag_rejected() {
    let out = pf(&["entropy", "--group", "free:2", "--measure", "srw", "--bogus", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn entropy_csv_has_series_rows() {
    let out = pf(&[
        "entropy", "--group", "free:2", "--measure", "srw", "--nmax", "3", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("series,n,value"));
    assert!(text.lines().any(|l| l.starts_with("H_n,1,")));
    assert!(text.lines().any(|l| l.starts_with("speed,")));
}

#[test]
fn csv_rejected_for_non_sequence_reports() {
    let out = pf(&[
        "kahane", "--p", "1.5", "--trials", "100", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "precondition");
}

#[test]
fn lazy_measure_alias_parses() {
    let out = pf(&[
        "entropy", "--group", "free:2", "--measure", "lazy:0.5", "--nmax", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // lazy walk halves the speed
    let s = v["result"]["speed"]["extrapolated"].as_f64().unwrap();
    assert!((s - 0.25).abs() < 1e-3, "{s}");
}

#[test]
fn entropy_bits_toggle_rescales() {
    let nats = pf(&["entropy", "--group", "free:2", "--measure", "srw", "--nmax", "2"]);
    let bits = pf(&[
        "entropy", "--group", "free:2", "--measure", "srw", "--nmax", "2", "--bits",
    ]);
    let vn: serde_json::Value = serde_json::from_slice(&nats.stdout).unwrap();
    let vb: serde_json::Value = serde_json::from_slice(&bits.stdout).unwrap();
    assert_eq!(vn["result"]["units"], "nats");
    assert_eq!(vb["result"]["units"], "bits");
    let hn = vn["result"]["avez"]["h_raw"][0][1].as_f64().unwrap();
    let hb = vb["result"]["avez"]["h_raw"][0][1].as_f64().unwrap();
    assert!((hn - 4f64.ln()).abs() < 1e-12);
    assert!((hb - 2.0).abs() < 1e-12); // log2(4) = 2 bits
}

#[test]
fn check_reports_outcomes_and_exit_zero() {
    let out = pf(&["check", "--suite", "group", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["all_passed"], true);
    assert!(v["result"]["outcomes"].as_array().unwrap().len() >= 3);
}

#[test]
fn check_all_suites_exit_zero() {
    let out = pf(&["check", "--suite", "all", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["all_passed"], true);
    assert!(v["result"]["outcomes"].as_array().unwrap().len() >= 20);
}

#[test]
fn check_unknown_suite_is_exit_2() {
    let out = pf(&["check", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degenerate_measure_file_is_exit_2() {
    let measure = write_temp("point.json", r#"{"terms":[{"word":"a","mass":1.0}]}"#);
    let out = pf(&[
        "entropy", "--group", "free:2", "--measure", &measure, "--nmax", "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["error"]["message"]
        .as_str()
        .unwrap()
        .contains("degenerate"));
}

#[test]
fn xi_rejects_free_one() {
    let out = pf(&["xi", "--group", "free:1", "--measure", "srw"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn criteria_computes_h_and_ell_from_measure() {
    let out = pf(&[
        "criteria", "--group", "free:2", "--measure", "srw", "--hx", "0.1", "--p", "4", "--nmax",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let h = v["result"]["inputs"]["h"].as_f64().unwrap();
    let ell = v["result"]["inputs"]["ell"].as_f64().unwrap();
    assert!((h - 0.5493).abs() < 0.06, "estimated h = {h}");
    assert!((ell - 0.5).abs() < 1e-3, "estimated ell = {ell}");
    assert_eq!(v["result"]["criteria"]["crit_ii"], true);
}
