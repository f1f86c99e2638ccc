//! Black-box tests of the torus3 binary: formats, round trips, exit codes.

use std::process::{Command, Output};

fn torus3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torus3"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn decompose_verify_round_trip() {
    let dir = std::env::temp_dir();
    let path = dir.join("torus3-cli-roundtrip.json");
    let path = path.to_str().unwrap();
    let out = torus3(&["decompose", "--m", "6", "--format", "json", "--out", path]);
    assert_eq!(code(&out), 0, "{out:?}");
    let out = torus3(&["verify", "--in", path]);
    assert_eq!(code(&out), 0, "{out:?}");
    assert!(stdout(&out).contains("verdict: verified"));
    std::fs::remove_file(path).ok();
}

#[test]
fn verify_rejects_tampered_document() {
    let dir = std::env::temp_dir();
    let path = dir.join("torus3-cli-tampered.json");
    let spath = path.to_str().unwrap();
    let out = torus3(&["decompose", "--m", "5", "--format", "json", "--no-cycles", "--out", spath]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    // swap one triple word for another permutation: injectivity breaks
    let tampered = text.replacen("\"012\"", "\"120\"", 1);
    assert_ne!(text, tampered, "document should contain a canonical word");
    std::fs::write(&path, tampered).unwrap();
    let out = torus3(&["verify", "--in", spath]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    assert!(stdout(&out).contains("NOT VERIFIED"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_missing_file_is_usage_error() {
    let out = torus3(&["verify", "--in", "/nonexistent/torus3.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn decompose_cycles_format() {
    let out = torus3(&["decompose", "--m", "3", "--format", "cycles"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l.starts_with("0,0,0 ")));
    assert_eq!(lines[0].split(' ').count(), 27);
}

#[test]
fn decompose_arcs_format() {
    let out = torus3(&["decompose", "--m", "3", "--format", "arcs", "--no-cycles"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 81);
    assert!(text.lines().all(|l| l.split(' ').count() == 3));
}

#[test]
fn decompose_bad_modulus_is_usage_error() {
    let out = torus3(&["decompose", "--m", "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = torus3(&["decompose", "--modulus", "6"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn sign_reports_parity_barrier_for_canonical_even() {
    let out = torus3(&["sign", "--m", "6", "--coloring", "canonical"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("product: +1"));
    assert!(text.contains("parity obstruction"));
}

#[test]
fn sign_of_hamilton_colorings_is_minus_one_for_even_m() {
    for args in [["sign", "--m", "6", "--coloring", "route-e"], ["sign", "--m", "4", "--coloring", "m4"]] {
        let out = torus3(&args);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).contains("product: -1"));
    }
}

#[test]
fn first_return_prints_lane_table_and_splice() {
    let out = torus3(&["first-return", "--m", "10", "--color", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("sum of return times: 100 (m^2 = 100)"));
    assert!(text.contains("closed-form table agreement: true"));
    assert!(text.contains("single cycle: true"));
}

#[test]
fn first_return_deleted_repair_reports_noninjectivity() {
    let out = torus3(&["first-return", "--m", "10", "--color", "1", "--variant", "deleted-repair"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("NOT a permutation"));
}

#[test]
fn first_return_odd_modulus_is_usage_error() {
    let out = torus3(&["first-return", "--m", "7", "--color", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn defects_csv_shape() {
    let out = torus3(&["defects", "--m", "8", "--color", "1", "--emit", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,t,branch,delta_u,delta_t"));
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 5, "{line}");
        // color 1 defects are pure lane stalls
        assert_eq!(fields[4], "0");
    }
}

#[test]
fn cross_check_range() {
    let out = torus3(&["cross-check", "--m-min", "6", "--m-max", "12"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4); // m = 6, 8, 10, 12
    assert!(text.lines().all(|l| l.contains("agree")));
}

#[test]
fn return_map_prints_branches() {
    let out = torus3(&["return-map", "--m", "6", "--color", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("branch:(i', k')"));
    // (2, 0) is the lone branch-1 point of color 2
    assert!(text.contains("1:(3,3)"));
}
