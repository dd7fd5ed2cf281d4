use std::path::{Path, PathBuf};

use tracelocate::ata::ReplayBackend;
use tracelocate::corpus::load_manifest;
use tracelocate::llm::{ScriptRule, ScriptedProvider};
use tracelocate::orchestrator::{run_case, RunConfig, RunOutcome};

fn toy() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/toyproj")
}

fn scripted() -> ScriptedProvider {
    let rules: Vec<ScriptRule> =
        serde_json::from_str(&std::fs::read_to_string(toy().join("script.json")).unwrap()).unwrap();
    ScriptedProvider::new("replay", rules)
}

#[test]
fn scripted_runs_solve_both_toys() {
    let cases = load_manifest(&toy().join("manifest.toml")).unwrap();
    let cfg = RunConfig::default();
    for case in &cases {
        let mut backend = ReplayBackend::new(toy().join("replay-exec"), &case.id);
        let provider = scripted();
        let run = run_case(case, &cfg, &mut backend, &provider, None);
        assert_eq!(run.outcome, RunOutcome::Success, "{}", case.id);
        assert_eq!(run.metrics.detection, 1.0, "{}", case.id);
        assert_eq!(run.metrics.localization, 1.0, "{}", case.id);
        assert!(run.summaries.len() <= 2, "{}", case.id);
    }
}
