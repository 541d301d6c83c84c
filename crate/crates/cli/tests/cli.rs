use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abelian-cy")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn row<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|r| r["check_name"] == name).unwrap_or_else(|| panic!("no row {name}"))
}

#[test]
fn construct_is_deterministic() {
    let a = run(&["construct", "--family", "t17", "--prime", "29", "--seed", "1"]);
    let b = run(&["construct", "--family", "t17", "--prime", "29", "--seed", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let inst = json(&a);
    let gens = inst["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 7);
    for g in gens {
        for term in g.as_array().unwrap() {
            let degree: u64 = term["exps"].as_array().unwrap().iter().map(|e| e.as_u64().unwrap()).sum();
            assert_eq!(degree, 3);
        }
    }
}

#[test]
fn incompatible_prime_exits_with_config_error() {
    assert_eq!(run(&["construct", "--family", "hm", "--prime", "7"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--family", "t18", "--prime", "13"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--family", "t17", "--prime", "15"]).status.code(), Some(2));
}

#[test]
fn verify_is_identical_across_job_counts() {
    for family in [["--family", "hm", "--prime", "31"], ["--family", "t14", "--prime", "13"]] {
        let mut one = vec!["verify", "--seed", "5", "--jobs", "1"];
        one.extend(family);
        let mut eight = vec!["verify", "--seed", "5", "--jobs", "8"];
        eight.extend(family);
        let a = run(&one);
        let b = run(&eight);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn t18_rows_pass() {
    let out = run(&["verify", "--family", "t18", "--prime", "17", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(report["checks"].as_array().unwrap().iter().all(|r| r["status"] == "pass"));
    assert_eq!(row(&report, "invariant_quadric_dim")["expected"], 4);
}

#[test]
fn t14_reports_vertex_nodes() {
    let out = run(&["verify", "--family", "t14", "--prime", "13", "--ext", "2"]);
    let report = json(&out);
    let vertex = row(&report, "vertex_nodes");
    assert_eq!(vertex["expected"], 4);
    assert_eq!(vertex["status"], "pass");
}

#[test]
fn hm_reports_orbit_size() {
    let out = run(&["verify", "--family", "hm", "--prime", "11", "--seed", "2"]);
    let report = json(&out);
    assert_eq!(row(&report, "orbit_size")["expected"], 50);
    assert_eq!(row(&report, "orbit_size")["actual"], 50);
}

#[test]
fn exploratory_rows_do_not_fail_the_run() {
    let out = run(&["verify", "--family", "t110", "--prime", "11"]);
    let report = json(&out);
    assert_eq!(row(&report, "orbit_singular")["status"], "report-only");
    let failed: Vec<_> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "fail")
        .map(|r| r["check_name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(out.status.code(), Some(if failed.is_empty() { 0 } else { 1 }));
}

#[test]
fn scan_and_orbit_commands() {
    let out = run(&["scan", "--family", "t16", "--prime", "13", "--out", "/dev/stdout"]);
    assert_eq!(out.status.code(), Some(0));
    let scan = json(&out);
    assert_eq!(scan["points_scanned"], (13u64.pow(6) - 1) / 12);
    let out = run(&["orbit", "--family", "t18", "--prime", "17"]);
    assert_eq!(json(&out)["orbits"][0]["size"], 64);
}

#[test]
fn oversized_scan_is_refused() {
    let out = run(&["scan", "--family", "t110", "--prime", "11"]);
    assert_eq!(out.status.code(), Some(2));
}
