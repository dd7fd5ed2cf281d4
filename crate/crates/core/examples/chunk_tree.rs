//! Lists the function and top-level chunks of a C/C++ tree.
//!
//! cargo run --example chunk_tree -- fixtures/chunk_corpus

use std::path::PathBuf;

use tracelocate::chunker::chunk_source_tree;

fn main() -> tracelocate::Result<()> {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/toyproj/hbo"));
    let chunks = chunk_source_tree(&root)?;
    for c in chunks.iter() {
        println!(
            "{:>4} {:<24} {:>5}-{:<5} {:?} {}",
            c.index, c.file_path, c.start_line, c.end_line, c.chunk_kind, c.symbol
        );
    }
    Ok(())
}
