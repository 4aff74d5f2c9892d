use std::process::Command;

fn hkr(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hkr")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

#[test]
fn passing_suite_exits_zero() {
    let (code, out) = hkr(&["suite", "witt", "--prime", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["suite"], "witt");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["elapsed_ms"], 0);
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(hkr(&["suite", "fgl", "--prime", "7"]).0, 2);
    assert_eq!(hkr(&["suite", "bogus"]).0, 2);
    assert_eq!(hkr(&["suite", "lie", "--matrix-dim", "9"]).0, 2);
}

#[test]
fn json_reports_are_byte_identical() {
    let args = ["suite", "lie", "--prime", "2,3", "--trials", "20", "--seed", "7"];
    assert_eq!(hkr(&args), hkr(&args));
}

#[test]
fn text_report_and_demos() {
    let (code, out) = hkr(&["projective-space", "--n", "4", "--prime", "3", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.contains("p3/V(c) = c^p"));
    let (code, out) = hkr(&["gm-restricted", "--prime", "2,3,5"]);
    assert_eq!(code, 0);
    assert!(out.contains("x d/dx"));
}

#[test]
fn pages_command() {
    let (code, out) = hkr(&["pages", "--prime", "3", "--seed", "4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("E_2:"));
    let (code, out) = hkr(&["pages", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.is_array());
}
