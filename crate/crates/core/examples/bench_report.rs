//! Benchmarks the toy manifest twice, with and without trace evidence, and
//! prints the per-family report of the first with deltas against the second.

use std::path::PathBuf;

use tracelocate::ata::{ExecBackend, ReplayBackend};
use tracelocate::corpus::{load_manifest, CaseEntry};
use tracelocate::llm::ReplayProvider;
use tracelocate::metrics::{aggregate_report, CaseRow};
use tracelocate::orchestrator::{run_bench, CaseRun, RunConfig};

fn rows(cases: &[CaseEntry], runs: &[CaseRun]) -> tracelocate::Result<Vec<CaseRow>> {
    runs.iter()
        .zip(cases)
        .filter(|(r, _)| r.flags.metrics_computed)
        .map(|(r, c)| CaseRow::new(c, r.metrics))
        .collect()
}

fn main() -> tracelocate::Result<()> {
    let toy = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/toyproj");
    let cases = load_manifest(&toy.join("manifest.toml"))?;
    let provider = ReplayProvider::new(toy.join("replay-llm"), "replay");
    let exec = toy.join("replay-exec");
    let backend = |c: &CaseEntry| -> tracelocate::Result<Box<dyn ExecBackend>> {
        Ok(Box::new(ReplayBackend::new(&exec, &c.id)))
    };

    let full = run_bench(&cases, &RunConfig::default(), backend, &provider, None, 2)?;
    let ablated_cfg = RunConfig { ata_enabled: false, ..RunConfig::default() };
    let ablated = run_bench(&cases, &ablated_cfg, backend, &provider, None, 2)?;

    let without = aggregate_report(&rows(&cases, &ablated)?, None);
    let report = aggregate_report(&rows(&cases, &full)?, Some(&without));
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}
