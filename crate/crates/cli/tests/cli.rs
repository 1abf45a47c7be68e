use std::process::{Command, Output};

use alkit::report::{Status, SuiteReport};

fn alkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alkit"))
        .args(args)
        .env_remove("ALKIT_DEPTH")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (SuiteReport, String, i32) {
    let mut full = vec!["--report", "json"];
    full.extend_from_slice(args);
    let out = alkit(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    let report = SuiteReport::from_json(&text).unwrap();
    (report, text, out.status.code().unwrap())
}

#[test]
fn schouten_has_seven_passes() {
    let (r, _, code) = json(&["schouten"]);
    assert_eq!(code, 0);
    assert_eq!(r.checks.len(), 7);
    assert!(r.checks.iter().all(|c| c.status == Status::Pass));
}

#[test]
fn central_first_pair() {
    let (r, _, code) = json(&["central", "--pairs", "1,2", "--samples", "100"]);
    assert_eq!(code, 0);
    assert_eq!(r.checks.len(), 1);
    let c = &r.checks[0];
    assert_eq!(c.status, Status::Pass);
    let res = c.residual.as_deref().unwrap();
    let err: f64 = res.split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!(err < 1e-9, "{res}");
    assert!(res.ends_with("over 100 points"));
}

#[test]
fn flipped_projection_fails() {
    let (r, _, code) = json(&["flows", "--kmax", "0", "--flip-projection"]);
    assert_eq!(code, 1);
    assert!(r.checks.iter().any(|c| c.name == "lax t0" && c.status == Status::Fail));
    let (_, _, code) = json(&["flows", "--kmax", "0"]);
    assert_eq!(code, 0);
}

#[test]
fn json_round_trips_byte_for_byte() {
    let (r, text, _) = json(&["duality", "--kmax", "0"]);
    assert_eq!(format!("{}\n", r.to_json()), text);
    let keys = ["\"suite\"", "\"checks\"", "\"name\"", "\"status\"", "\"residual\"", "\"ms\""];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(alkit(&["schouten", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(alkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(alkit(&["central", "--pairs", "1,4"]).status.code(), Some(2));
    assert_eq!(alkit(&["simulate", "--flow", "t7"]).status.code(), Some(2));
}

#[test]
fn text_report() {
    let out = alkit(&["schouten"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("suite schouten\n"));
    assert_eq!(text.matches("  PASS ").count(), 7);
    assert!(text.trim_end().ends_with("7 passed, 0 failed, 0 skipped"));
}

#[test]
fn shallow_depth_is_a_failure() {
    let out = Command::new(env!("CARGO_BIN_EXE_alkit"))
        .args(["--report", "json", "flows", "--kmax", "1"])
        .env("ALKIT_DEPTH", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let r = SuiteReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(r.checks.iter().all(|c| c.status != Status::Skip));
}

fn write_state(name: &str, body: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("alkit-cli-{}-{name}.json", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn simulate_from_file() {
    let n = 16;
    let p: Vec<String> = (0..n)
        .map(|i| format!("{}", 1.0 + 0.05 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).sin()))
        .collect();
    let q: Vec<String> = (0..n)
        .map(|i| format!("{}", -0.5 + 0.04 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos()))
        .collect();
    let body = format!(r#"{{"N": {n}, "P": [{}], "Q": [{}]}}"#, p.join(","), q.join(","));
    let path = write_state("smooth", &body);
    let path_s = path.to_str().unwrap();
    for flow in ["t0", "t1", "s0", "s1"] {
        let (r, _, code) = json(&[
            "simulate", "--flow", flow, "--dt", "1e-3", "--steps", "500", "--conserve", "H-1,H0,H1,G0,G1",
            "--input", path_s,
        ]);
        assert_eq!(code, 0, "{flow}: {r:?}");
        assert_eq!(r.checks.len(), 5);
    }
    let (r, _, code) = json(&["backlund", "--input", path_s, "--steps", "200"]);
    assert_eq!(code, 0, "{r:?}");
    std::fs::remove_file(path).ok();
}

#[test]
fn invalid_state_is_rejected() {
    let path = write_state("bad", r#"{"N": 4, "P": [1, 0, 1, 1], "Q": [0, 0, 0, 0]}"#);
    let out = alkit(&["backlund", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("invalid lattice state"));
    std::fs::remove_file(path).ok();
}

#[test]
fn hamiltonian_reports_third_structure_signs() {
    let (r, _, code) = json(&["hamiltonian", "--kmax", "1"]);
    assert_eq!(code, 1);
    let status = |n: &str| r.checks.iter().find(|c| c.name == n).unwrap().status;
    assert_eq!(status("P1 t1"), Status::Pass);
    assert_eq!(status("P2 s1"), Status::Pass);
    assert_eq!(status("P3 t0"), Status::Pass);
    assert_eq!(status("P3 t1"), Status::Fail);
    assert_eq!(status("residue-2b k=1"), Status::Pass);
}
