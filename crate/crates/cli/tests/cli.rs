use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use uecsm::oracle::tener_applicable;
use uecsm::random::{gaussian_matrix, rng_from_seed};
use uecsm::{classify, ToleranceConfig};
use uecsm_cli::document::MatrixDocument;
use uecsm_cli::report::{ReportDocument, ReportInputs};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_uecsm"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn classify_file(name: &str) -> Output {
    run(&["classify", data(name).to_str().unwrap()])
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn uecsm_document_exits_zero_with_certificate() {
    let o = classify_file("section6.json");
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("symmetric unitary S"));
    assert!(text.contains("verdict: UECSM"));
}

#[test]
fn failing_document_exits_one() {
    let o = classify_file("section3.json");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: not UECSM"));
}

#[test]
fn counterexample_reports_cocycle_witness() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let o = run(&["classify", data("example64.json").to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report = ReportDocument::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let strong = report.verdicts.iter().find(|v| v.test == "strong-angle").unwrap();
    assert_eq!(strong.outcome, "fail");
    assert_eq!(strong.witness.as_ref().unwrap().indices.len(), 3);
    for v in report.verdicts.iter().filter(|v| v.test != "strong-angle") {
        assert_eq!(v.outcome, "pass", "{}", v.test);
    }
}

#[test]
fn repeated_spectrum_exits_two_and_runs_oracle() {
    let o = classify_file("identity4.json");
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.contains("not applicable"));
    assert!(text.contains("oracle: UECSM"));
}

#[test]
fn malformed_document_exits_three_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"format_version\": 1,\n  \"n\": 2,\n  \"entries\": [[[1, 0]],\n}").unwrap();
    let o = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn wrong_shape_and_missing_file_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shape.json");
    std::fs::write(&path, r#"{"format_version": 1, "n": 2, "entries": [[[1, 0], [0, 0]]]}"#).unwrap();
    assert_eq!(run(&["classify", path.to_str().unwrap()]).status.code(), Some(3));
    let missing = dir.path().join("absent.json");
    assert_eq!(run(&["classify", missing.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn search_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = run(&["search", "--count", "300", "--dim", "4", "--seed", "11", "--inject", "example64", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ha = std::fs::read(a.join("hits.json")).unwrap();
    assert_eq!(ha, std::fs::read(b.join("hits.json")).unwrap());
    let hit = std::fs::read_to_string(a.join("hit-00000000.json")).unwrap();
    let doc = MatrixDocument::parse(&hit).unwrap();
    assert_eq!(doc.to_matrix(), uecsm::fixtures::counterexample_4x4());
}

#[test]
fn search_rejects_small_dimension() {
    assert_ne!(run(&["search", "--dim", "2", "--count", "5"]).status.code(), Some(0));
}

#[test]
fn fixture_groups_replay_cleanly() {
    for group in ["section1-family", "table3"] {
        let o = run(&["fixtures", "--only", group]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("0 mismatches"));
    }
}

fn report_for(seed: u64, n: usize) -> ReportDocument {
    let cfg = ToleranceConfig::default();
    let t = gaussian_matrix(n, &mut rng_from_seed(seed));
    let report = classify(&t, &cfg, seed).unwrap();
    ReportDocument::build(ReportInputs {
        label: Some(format!("random {seed}")),
        n,
        report: &report,
        cartesian: &tener_applicable(&t, &cfg),
        oracle: None,
        cfg: &cfg,
        seed,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn report_json_round_trips(seed in any::<u64>(), n in 2usize..6) {
        let doc = report_for(seed, n);
        let back = ReportDocument::from_json(&doc.to_json()).unwrap();
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn matrix_document_round_trips(seed in any::<u64>(), n in 1usize..6) {
        let t = gaussian_matrix(n, &mut rng_from_seed(seed));
        let doc = MatrixDocument::from_matrix(&t, None);
        let back = MatrixDocument::parse(&doc.to_json()).unwrap();
        prop_assert_eq!(back.to_matrix(), t);
    }
}
