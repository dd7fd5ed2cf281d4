use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn toy() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/toyproj")
}

fn tl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracelocate"))
        .args(args)
        .env_remove("T2L_MODEL")
        .env_remove("T2L_BUDGET_USD")
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn replay_args(runs: &Path) -> Vec<String> {
    vec![
        "--manifest".into(),
        toy().join("manifest.toml").display().to_string(),
        "--runs".into(),
        runs.display().to_string(),
        "--replay-exec".into(),
        toy().join("replay-exec").display().to_string(),
        "--replay-llm".into(),
        toy().join("replay-llm").display().to_string(),
    ]
}

#[test]
fn run_replays_a_case() {
    let runs = tempfile::tempdir().unwrap();
    let mut args = vec!["run".to_string(), "--case".into(), "toy-hbo".into()];
    args.extend(replay_args(runs.path()));
    let out = tl(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let metrics: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(runs.path().join("toy-hbo/metrics.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(metrics["metrics"]["detection"], 1.0);
    let outcome = std::fs::read_to_string(runs.path().join("toy-hbo/outcome.json")).unwrap();
    assert!(outcome.contains("Success"), "{outcome}");
}

#[test]
fn unknown_case_is_a_usage_error() {
    let runs = tempfile::tempdir().unwrap();
    let mut args = vec!["run".to_string(), "--case".into(), "missing".into()];
    args.extend(replay_args(runs.path()));
    let out = tl(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_rejected() {
    let out = tl(&["profile", "--colour"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn bench_then_report_agree() {
    let runs = tempfile::tempdir().unwrap();
    let mut args = vec!["bench".to_string(), "--jobs".into(), "2".into()];
    args.extend(replay_args(runs.path()));
    let out = tl(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let written = std::fs::read_to_string(runs.path().join("report.json")).unwrap();

    let out = tl(&["report", "--runs", s(runs.path())]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), written);
}

#[test]
fn profile_prints_family_shares() {
    let out = tl(&["profile", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_object().map(|m| m.len()), Some(5), "{v}");
    assert_eq!(v["Buffer Overflow"]["percent"], 49.9);

    let out = tl(&["profile"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("49.9"), "{text}");
}

#[test]
fn chunk_and_diff_index_emit_json() {
    let out = tl(&["chunk", "--root", s(&toy().join("hbo")), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let chunks: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(chunks
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["symbol"] == "parse_hdr"));

    let out = tl(&["diff-index", "--patch", s(&toy().join("hbo/fix.diff"))]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["index"].is_object() && v["ground_truth"].is_object(), "{v}");
}
