//! End-to-end runner checks: determinism of the bundle, exit codes of the
//! binary, and the report round trip.

use radop_cli::config::ExperimentConfig;
use radop_cli::report::{Verdict, VerificationReport};
use radop_cli::suites;
use std::path::Path;
use std::process::Command;

fn small_config(out: &Path, suites: &[&str], seed: u64) -> ExperimentConfig {
    let text = format!(
        r#"
[params]
dim = 3
alpha = 3.0
beta = 2.0
p = 2.0

[grid]
radius = 20.0
n = 220
grading = 2.0

[run]
suites = [{}]
output_dir = "{}"
seed = {}
"#,
        suites.iter().map(|s| format!("\"{s}\"")).collect::<Vec<_>>().join(", "),
        out.display(),
        seed
    );
    toml::from_str(&text).expect("config literal parses")
}

fn read_dir_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().to_string(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn reruns_with_the_same_seed_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let config_a = small_config(&out_a, &["lyapunov", "sector"], 7);
    let config_b = small_config(&out_b, &["lyapunov", "sector"], 7);
    suites::run_config(&config_a).unwrap();
    suites::run_config(&config_b).unwrap();

    let files_a = read_dir_files(&out_a);
    let files_b = read_dir_files(&out_b);
    assert_eq!(files_a.len(), files_b.len());
    for ((name_a, bytes_a), (name_b, bytes_b)) in files_a.iter().zip(&files_b) {
        assert_eq!(name_a, name_b);
        if name_a.ends_with(".csv") {
            assert_eq!(bytes_a, bytes_b, "{name_a} differs between reruns");
        } else {
            // the summary may differ in runtimes only
            let strip = |bytes: &[u8]| -> String {
                String::from_utf8_lossy(bytes)
                    .lines()
                    .filter(|l| !l.starts_with("runtime_ms"))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            assert_eq!(strip(bytes_a), strip(bytes_b), "{name_a} differs beyond runtimes");
        }
    }
}

#[test]
fn empty_suite_list_gives_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("empty");
    let config = small_config(&out, &[], 1);
    let report = suites::run_config(&config).unwrap();
    assert!(report.claims.is_empty());
    assert!(!report.any_fail());
    assert_eq!(report.render().lines().last().unwrap(), "no claims");
    // the bundle still parses
    let loaded = suites::load_bundle(&out).unwrap();
    assert!(loaded.claims.is_empty());
}

#[test]
fn bundle_round_trip_preserves_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bundle");
    let config = small_config(&out, &["lyapunov"], 3);
    let report = suites::run_config(&config).unwrap();
    assert_eq!(report.claims.len(), 1);
    assert_eq!(report.claims[0].verdict, Verdict::Pass);

    let loaded = suites::load_bundle(&out).unwrap();
    assert_eq!(loaded.claims.len(), 1);
    assert_eq!(loaded.claims[0].id, "lyapunov");
    assert_eq!(loaded.claims[0].verdict, Verdict::Pass);
    assert!(loaded.claims[0].evidence.iter().any(|e| e == "lyapunov.csv"));
    // evidence files exist and carry a header row
    for file in &loaded.claims[0].evidence {
        let text = std::fs::read_to_string(out.join(file)).unwrap();
        assert!(text.lines().count() >= 2, "{file} should have header and rows");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_radop");
    let dir = tempfile::tempdir().unwrap();

    // validate: good config
    let good = dir.path().join("good.toml");
    std::fs::write(
        &good,
        r#"
[params]
dim = 3
alpha = 3.0
beta = 2.0
p = 2.0

[grid]
radius = 20.0
n = 100
grading = 2.0

[run]
suites = ["lyapunov"]
output_dir = "unused"
seed = 0
"#,
    )
    .unwrap();
    let status = Command::new(bin).args(["validate"]).arg(&good).status().unwrap();
    assert_eq!(status.code(), Some(0));

    // validate: unknown suite name is rejected at parse time
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, std::fs::read_to_string(&good).unwrap().replace("lyapunov", "nope"))
        .unwrap();
    let status = Command::new(bin).args(["validate"]).arg(&bad).status().unwrap();
    assert_eq!(status.code(), Some(2));

    // report: missing bundle is an input error
    let status =
        Command::new(bin).args(["report"]).arg(dir.path().join("missing")).status().unwrap();
    assert_eq!(status.code(), Some(2));

    // report: a bundle with one failed claim exits nonzero
    let failed_bundle = dir.path().join("failed");
    std::fs::create_dir_all(&failed_bundle).unwrap();
    let mut report = VerificationReport::default();
    report.claims.push(radop_cli::report::ClaimEntry {
        id: "spectrum".into(),
        anchor: "sigma(A) < 0".into(),
        verdict: Verdict::Fail,
        evidence: vec![],
        runtime_ms: 1,
        details: vec!["synthetic failure".into()],
    });
    report.write_summary(&failed_bundle.join("summary.txt")).unwrap();
    let output = Command::new(bin).args(["report"]).arg(&failed_bundle).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("1 failed"));

    // usage errors exit with 2
    let status = Command::new(bin).arg("frobnicate").status().unwrap();
    assert_eq!(status.code(), Some(2));
}
