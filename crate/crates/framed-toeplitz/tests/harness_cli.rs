//! End-to-end checks of the `ftz` command-line interface: exit codes,
//! report schema, and byte-for-byte determinism.

use std::io::Write;
use std::process::{Command, Output};

fn ftz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftz")).args(args).output().expect("spawn ftz")
}

fn write_config(json: &serde_json::Value) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(serde_json::to_string_pretty(json).unwrap().as_bytes()).unwrap();
    f.flush().unwrap();
    f
}

fn exp_config(kind: &str, n_start: u64, n_stop: u64) -> serde_json::Value {
    serde_json::json!({
        "symbol": {"family": "exp-laurent", "params": {"t": 0.3}},
        "kind": kind,
        "n_start": n_start,
        "n_stop": n_stop,
        "seed": 7,
    })
}

#[test]
fn det_csv_has_canonical_header_and_full_precision() {
    let cfg = write_config(&exp_config("pure", 2, 5));
    let out = ftz(&["det", "--config", cfg.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,value_re,value_im,pred_re,pred_im,rel_err");
    let first = lines.next().unwrap();
    let value_re = first.split(',').nth(1).unwrap();
    // 17 significant digits: one leading digit plus 16 decimals in
    // scientific notation.
    let mantissa = value_re.split('e').next().unwrap();
    let decimals = mantissa.split('.').nth(1).unwrap();
    assert_eq!(decimals.len(), 16, "value field {value_re}");
    // One data row per grid point.
    assert_eq!(text.lines().count(), 1 + 4);
}

#[test]
fn identity_suite_passes_and_is_byte_identical() {
    let cfg = write_config(&exp_config("pure", 3, 6));
    let a = ftz(&["identities", "--config", cfg.path().to_str().unwrap()]);
    let b = ftz(&["identities", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout, "same config and seed must reproduce the report exactly");
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("pass"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn unit_weight_skips_inapplicable_checks_instead_of_failing() {
    let cfg = write_config(&serde_json::json!({
        "symbol": {"family": "constant", "params": {"re": 1.0, "im": 0.0}},
        "kind": "pure",
        "n_start": 3,
        "n_stop": 5,
        "seed": 11,
    }));
    let out = ftz(&["identities", "--config", cfg.path().to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("precondition-skipped"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn pole_on_circle_is_a_configuration_error() {
    let cfg = write_config(&serde_json::json!({
        "symbol": {"family": "rational", "params": {"terms": [
            {"kind": "const", "re": 1.0, "im": 0.0},
            {"kind": "pole", "b_re": 1.0, "b_im": 0.0, "c_re": 1.0, "c_im": 0.0}
        ]}},
        "kind": "pure",
        "n_start": 2,
        "n_stop": 4,
    }));
    let out = ftz(&["det", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_and_malformed_configs_exit_two() {
    let missing = ftz(&["det", "--config", "/nonexistent/config.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(b"{ not json").unwrap();
    f.flush().unwrap();
    let bad = ftz(&["det", "--config", f.path().to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    let none = ftz(&["det"]);
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn convergence_sweep_reports_decay_and_exits_zero() {
    let cfg = write_config(&exp_config("pure", 6, 24));
    let out = ftz(&["converge", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().starts_with("n,"), "{text}");
}
