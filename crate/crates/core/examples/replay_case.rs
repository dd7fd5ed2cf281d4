//! Runs one toy case end to end from recorded tool output and model replies.
//!
//! cargo run --example replay_case -- toy-uaf

use std::path::PathBuf;

use tracelocate::ata::ReplayBackend;
use tracelocate::corpus::load_manifest;
use tracelocate::llm::ReplayProvider;
use tracelocate::orchestrator::{run_case, RunConfig};

fn main() -> tracelocate::Result<()> {
    let toy = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/toyproj");
    let id = std::env::args().nth(1).unwrap_or_else(|| "toy-hbo".into());
    let cases = load_manifest(&toy.join("manifest.toml"))?;
    let case = cases.iter().find(|c| c.id == id).expect("case in manifest");

    let mut backend = ReplayBackend::new(toy.join("replay-exec"), &case.id);
    let provider = ReplayProvider::new(toy.join("replay-llm"), "replay");
    let run = run_case(case, &RunConfig::default(), &mut backend, &provider, None);

    for s in &run.summaries {
        println!(
            "round {}: +{} candidates, +{} verified, best {:.2}, {:?}",
            s.round, s.new_candidates, s.new_verified, s.best_confidence, s.decision
        );
    }
    let m = &run.metrics;
    println!("{:?} detection={} localization={} strict={}", run.outcome, m.detection, m.localization, m.strict);
    for v in run.candidates.iter().take(5) {
        let c = &v.candidate;
        println!("  {}:{}-{} {:?}", c.file, c.start_line, c.end_line, v.anchored_by);
    }
    Ok(())
}
