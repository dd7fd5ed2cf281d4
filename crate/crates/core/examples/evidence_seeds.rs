//! Maps a recorded crash onto chunks of the toy project and prints the
//! seed candidates derived from it.

use std::path::PathBuf;

use tracelocate::ata::{correlate_evidence, parse_backtrace, parse_sanitizer_report, seed_candidates};
use tracelocate::chunker::chunk_source_tree;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let toy = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/toyproj");
    let root = toy.join("uaf");
    let chunks = chunk_source_tree(&root)?;

    let mut report = parse_sanitizer_report(&std::fs::read_to_string(toy.join("replay-exec/toy-uaf.san.log"))?, None)?;
    report.resolve_paths(&root);
    let mut graph = correlate_evidence(&report, &chunks);

    let gdb = parse_backtrace(&std::fs::read_to_string(toy.join("replay-exec/toy-uaf.gdb.log"))?);
    graph.merge(tracelocate::ata::correlate_backtrace(&gdb, &chunks));

    for e in &graph.edges {
        println!("{:?}#{} {} {}:{} w={:.3}", e.frame.source, e.frame.index, e.function, e.file, e.line, e.weight);
    }
    for c in seed_candidates(&graph, &chunks, 5)? {
        println!(
            "seed {}:{}-{} {} conf={:.2}",
            c.file,
            c.start_line,
            c.end_line,
            c.symbol.as_deref().unwrap_or("-"),
            c.confidence
        );
    }
    Ok(())
}
