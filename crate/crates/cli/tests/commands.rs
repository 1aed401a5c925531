use std::collections::BTreeSet;
use std::path::PathBuf;

use qtorsion::galois::appendix_elements;
use qtorsion::sieve::{IndeterminateEntry, VerificationReport, Violation};
use qtorsion_cli::{run_command, Outcome, EXIT_CLEAN, EXIT_COUNTEREXAMPLE, EXIT_INDETERMINATE, EXIT_USAGE};

fn run(args: &str) -> Outcome {
    run_command(std::iter::once("qtorsion").chain(args.split_whitespace()))
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("qtorsion-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn torsion_examples() {
    let out = run("torsion --curve 0,0,0,-1,0");
    assert_eq!(out.code, EXIT_CLEAN);
    assert_eq!(out.stdout.lines().next(), Some("C2 x C2"));
    let out = run("torsion --curve 0,0,0,-1,0 --d -1");
    assert_eq!(out.code, EXIT_CLEAN);
    assert_eq!(out.stdout.lines().next(), Some("C2 x C4"));
    assert!(out.stdout.contains("Q(sqrt(-1))"));
    let out = run("torsion --curve=0,0,0,-1,0 --d=-1 --json");
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["display"], "C2 x C4");
    assert_eq!(v["generators"].as_array().unwrap().len(), 2);
}

#[test]
fn galois_elements_match_tabulated_group() {
    let out = run("galois --ell 5 --name 5B.4.1 --elements");
    assert_eq!(out.code, EXIT_CLEAN);
    let mats: BTreeSet<String> = out.stdout.lines().filter(|l| l.starts_with("[[")).map(String::from).collect();
    assert_eq!(mats.len(), 40);
    let want: BTreeSet<String> = appendix_elements("5B.4.1").unwrap().iter().map(ToString::to_string).collect();
    assert_eq!(mats, want);
}

#[test]
fn galois_modes() {
    let out = run("galois --ell 3 --name H11 --fixed-points");
    assert_eq!(out.stdout, "(1,0)\n(2,0)\n");
    let out = run("galois --ell 5 --name H3 --index2 --json");
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(!v.as_array().unwrap().is_empty());
    let out = run("galois --ell 5 --name H3 --analysis");
    assert!(out.stdout.contains("no index-2 subgroup gains fixed vectors"), "{}", out.stdout);
    let out = run("galois --ell 5 --name 5B.4.1 --analysis");
    assert_eq!(out.code, EXIT_CLEAN);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        "",
        "frobnicate",
        "torsion",
        "torsion --curve 0,0,0,-1",
        "torsion --curve 0,0,0,0,0",
        "torsion --curve 0,0,0,-1,0 --d 4",
        "torsion --curve 0,0,0,-1,0 --bogus",
        "growth --curve 0,0,0,-1,0",
        "tate --curve 0,0,0,-1,0 --point 5,5",
        "tate --curve 0,0,0,-1,0 --point 1,0",
        "galois --ell 5 --name 5B.4.1",
        "galois --ell 5 --name 5B.4.1 --elements --index2",
        "galois --ell 11 --name GL2 --elements",
        "galois --ell 5 --name nope --elements",
        "verify --corpus /nonexistent/corpus.csv --dmax 3",
        "verify --corpus x --dmax 3 --jobs 0",
    ] {
        let out = run(args);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}: {out:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let bad = scratch("bad.csv", "label,a1,a2,a3,a4,a6\nx,0,0,0,1,0\nx,0,0,0,2,0\n");
    let out = run(&format!("verify --corpus {bad} --dmax 3"));
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
}

#[test]
fn help_is_not_an_error() {
    let out = run("--help");
    assert_eq!(out.code, EXIT_CLEAN);
    assert!(out.stdout.contains("verify"));
}

#[test]
fn growth_and_sieve() {
    // 15.a3
    let out = run("growth --curve 1,1,1,-10,-10 --dmax 10");
    assert_eq!(out.code, EXIT_CLEAN);
    assert!(out.stdout.contains("d=5: C2 x C4 -> C2 x C8"), "{}", out.stdout);
    let out = run("growth --curve 1,1,1,-10,-10 --dmax 10 --json");
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["curve"] == "1,1,1,-10,-10"));
    let out = run("sieve --curve 0,0,1,-1,0 --dmax 30");
    assert!(out.stdout.contains("sharp primes: 3, 37"), "{}", out.stdout);
    assert!(out.stdout.contains("candidate d (|d| <= 30): -1, -3, 3"), "{}", out.stdout);
}

#[test]
fn tate_reports_identities() {
    let out = run("tate --curve 0,0,0,4,0 --point 2,4");
    assert_eq!(out.code, EXIT_CLEAN);
    assert!(out.stdout.starts_with("b = -1/8\nc = 0\n"), "{}", out.stdout);
    assert!(out.stdout.contains("ok   2^12 delta1 = 16(A^2 B^2 - 4 B^3)"));
    assert!(!out.stdout.contains("FAIL"));
    let out = run("tate --curve 0,0,0,4,0 --point 2,4 --json");
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["form"]["b"], "-1/8");
}

#[test]
fn verify_json_round_trips_and_is_deterministic() {
    let cited = data("cited.csv");
    let out = run(&format!("verify --corpus {cited} --dmax 30 --json"));
    assert_eq!(out.code, EXIT_CLEAN, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let keys: BTreeSet<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, BTreeSet::from(["parameters", "theorems", "records", "indeterminate"]));
    for t in v["theorems"].as_array().unwrap() {
        assert!(t.get("name").is_some() && t.get("checked").is_some() && t.get("violations").is_some());
    }
    let report: VerificationReport = serde_json::from_str(&out.stdout).unwrap();
    let again: VerificationReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(again, report);
    assert_eq!(report.parameters.curves, 9);
    assert!(report.records.iter().any(|r| r.curve == "80.b1" && r.d.to_i64() == Some(3)));

    let four: VerificationReport =
        serde_json::from_str(&run(&format!("verify --corpus {cited} --dmax 30 --jobs 4 --json")).stdout).unwrap();
    let one: VerificationReport =
        serde_json::from_str(&run(&format!("verify --corpus {cited} --dmax 30 --jobs 1 --json")).stdout).unwrap();
    assert_eq!(four.without_timing(), one.without_timing());
    assert_eq!(four.without_timing(), report.without_timing());
}

#[test]
fn verify_reads_json_corpus_and_prints_summary() {
    let path = scratch("c.json", r#"[{"label":"11.a3","a1":0,"a2":-1,"a3":1,"a4":0,"a6":0}]"#);
    let out = run(&format!("verify --corpus {path} --dmax 5"));
    assert_eq!(out.code, EXIT_CLEAN);
    assert!(out.stdout.starts_with("1 curves, |d| <= 5"), "{}", out.stdout);
    assert!(out.stdout.contains("growth_table"));
}

#[test]
fn report_exit_codes() {
    let cited = data("cited.csv");
    let mut report: VerificationReport =
        serde_json::from_str(&run(&format!("verify --corpus {cited} --dmax 5 --json")).stdout).unwrap();
    assert_eq!(report.exit_code(), EXIT_CLEAN);
    report.indeterminate.push(IndeterminateEntry { curve: "x".into(), d: None, reason: "precision".into() });
    assert_eq!(report.exit_code(), EXIT_INDETERMINATE);
    let record = report.records[0].clone();
    report.theorems[0].violations.push(Violation { record, detail: "synthetic".into() });
    assert_eq!(report.exit_code(), EXIT_COUNTEREXAMPLE);
}

#[test]
fn binary_propagates_status() {
    let bin = env!("CARGO_BIN_EXE_qtorsion");
    let ok = std::process::Command::new(bin).args(["torsion", "--curve", "0,0,0,-1,0"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_CLEAN));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("C2 x C2\n"));
    let bad = std::process::Command::new(bin).args(["torsion", "--nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
