use std::path::PathBuf;
use std::process::{Command, Output};

use tropibound::io::{parse_input_str, BoundDoc, CrnReport, DecoratedDoc, IntersectionDoc, VerifyReport};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn tropibound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropibound")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn running() -> String {
    data("running_2x5.json").display().to_string()
}

fn kinase() -> String {
    data("hhk_crn.json").display().to_string()
}

#[test]
fn bound_on_running_example() {
    let out = tropibound(&["bound", &running()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("certified_bound 2"), "{}", stdout(&out));

    let out = tropibound(&["bound", &running(), "--format", "json", "--cross-check"]);
    let doc: BoundDoc = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc.certified_bound, 2);
    assert_eq!(doc.decorated.unwrap().count, 1);
}

#[test]
fn decorated_on_running_example() {
    let out = tropibound(&["decorated", &running()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("1 positively decorated simplex"), "{text}");
    assert!(text.contains("Δ = {1,3,5}"));
    assert!(text.contains("kernel (1,1,2)"));

    let out = tropibound(&["decorated", &running(), "--format", "json"]);
    let doc: DecoratedDoc = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc.simplices[0].members, vec![1, 3, 5]);
}

#[test]
fn verify_on_kinase_network() {
    let out = tropibound(&["verify", &kinase(), "--t", "0.01", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: VerifyReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc.count >= 3, "{doc:?}");
    assert_eq!(doc.status, "empirical witness");
    assert!(doc.witnesses.iter().all(|w| w.residual <= 1e-9 && w.x.iter().all(|&x| x > 0.0)));
}

#[test]
fn crn_report_reparses() {
    let out = tropibound(&["crn", &kinase(), "--format", "json", "--threads", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: CrnReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc.bound.certified_bound, 3);
    assert!(doc.bound.tropical.transverse);
    let system = serde_json::to_string(&doc.system).unwrap();
    assert!(parse_input_str(&system).is_ok());
}

#[test]
fn malformed_fraction_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"kind": "matrix", "matrix": [["1/0", "1"]]}"#).unwrap();
    let out = tropibound(&["circuits", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("matrix[1][1]") && err.contains("zero denominator"), "{err}");
}

#[test]
fn invalid_t_is_an_error() {
    let out = tropibound(&["verify", &running(), "--t", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn non_transverse_intersection_exits_uncertified() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("line.json");
    std::fs::write(&path, r#"{"kind": "system", "coefficients": [[0, 1, -1]], "exponents": [[0, 1, 1]], "shift": [0, 0, 0]}"#).unwrap();
    let out = tropibound(&["intersect", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let doc: IntersectionDoc = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!doc.transverse);
}

#[test]
fn machine_output_is_deterministic() {
    for args in [vec!["positive-bergman", "--format", "json"], vec!["intersect", "--format", "json"], vec!["verify", "--format", "json"]] {
        let mut full = args.clone();
        let input = running();
        full.insert(1, &input);
        let first = stdout(&tropibound(&full));
        let second = stdout(&tropibound(&full));
        assert!(!first.is_empty());
        assert_eq!(first, second);
    }
}

#[test]
fn thread_count_from_environment() {
    let out =
        Command::new(env!("CARGO_BIN_EXE_tropibound")).args(["intersect", &running()]).env("TROPIBOUND_THREADS", "2").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("intersection points: 2 (transverse)"));
}

#[test]
fn matrix_documents_feed_matroid_commands() {
    let matrix = data("running_matrix.json").display().to_string();
    let out = tropibound(&["circuits", &matrix]);
    assert!(stdout(&out).contains("6 signed circuits"));
    let out = tropibound(&["bound", &matrix]);
    assert_eq!(out.status.code(), Some(1));
}
