//! End-to-end checks of the binary: exit codes, output formats and
//! determinism of the exports.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modlie"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn info_prints_prime_facts() {
    let out = run(&["info", "--type", "E7", "--p", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("coxeter number: 18"));
    assert!(text.contains("good prime: yes"));

    let out = run(&["info", "--type", "E8", "--p", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("good prime: no"));

    let out = run(&["info", "--type", "A", "--rank", "4", "--p", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("very good prime: no"));
}

#[test]
fn info_rejects_bad_type() {
    let out = run(&["info", "--type", "H4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_is_byte_identical_across_runs() {
    let a = run(&["export", "--type", "G2", "--p", "7"]);
    let b = run(&["export", "--type", "G2", "--p", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("LIEALG G2 p=7 dim=14\n"));
    // Mod-p export carries reduced coefficients only.
    for line in text.lines().skip(1) {
        let c: i64 = line.split_whitespace().last().unwrap().parse().unwrap();
        assert!((0..7).contains(&c));
    }
}

#[test]
fn export_integral_constants_at_p0() {
    let out = run(&["export", "--type", "A2", "--p", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("LIEALG A2 p=0 dim=8\n"));
    // Negative integral constants appear over Z.
    assert!(text
        .lines()
        .any(|l| l.split_whitespace().last() == Some("-1")));
}

#[test]
fn verify_unknown_scenario_is_usage_error() {
    let out = run(&["verify", "--scenario", "nonsense", "--p", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_witt_e6_excluded() {
    let out = run(&["verify", "--scenario", "witt_maximal", "--type", "E6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_witt_g2_passes_with_json_report() {
    let out = run(&[
        "verify",
        "--scenario",
        "witt_maximal:G2",
        "--format",
        "json",
        "--seed",
        "7",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rep = &v.as_array().unwrap()[0];
    assert_eq!(rep["scenario"], "witt_maximal_G2");
    assert_eq!(rep["p"], 7);
    for c in rep["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "pass");
    }
}

#[test]
fn verify_all_at_13_runs_the_f4_witt_scenario() {
    let out = run(&["verify", "--all", "--p", "13", "--format", "json"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["scenario"], "witt_maximal_F4");
}

#[test]
fn verify_esdp_p5_reports_the_dimension_chain() {
    let out = run(&[
        "verify",
        "--scenario",
        "esdp",
        "--p",
        "5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let checks = v[0]["checks"].as_array().unwrap();
    let get = |id: &str| {
        checks
            .iter()
            .find(|c| c["id"] == id)
            .unwrap_or_else(|| panic!("missing {id}"))["actual"]
            .as_str()
            .unwrap()
            .to_string()
    };
    assert_eq!(get("dim_a_chain"), "5");
    assert_eq!(get("dim_socle"), "15");
    assert_eq!(get("dim_h"), "18");
}

#[test]
fn verify_all_needs_p() {
    let out = run(&["verify", "--all"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_propagates_into_reports() {
    let out = run(&[
        "verify",
        "--scenario",
        "witt_maximal:G2",
        "--format",
        "json",
        "--seed",
        "12345",
    ]);
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    // The witt scenario records the library default seed for its own
    // search; the registry seed governs seeded scenarios. Check the
    // seed field exists and is numeric either way.
    assert!(v[0]["seed"].is_u64());
}
