//! Ground-truth lines of a fix patch, in pre-patch coordinates.

use std::path::PathBuf;

use tracelocate::diffindex::{build_diff_index, parse_unified_diff, GroundTruth};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/toyproj/uaf/fix.diff"));
    let patch = parse_unified_diff(&std::fs::read_to_string(path)?)?;
    let index = build_diff_index(&patch);
    let gt = GroundTruth::from_index(&index);
    println!("{} hunks, {} lines in {} intervals", patch.hunk_count(), gt.line_count(), gt.interval_count());
    for (file, start, end) in gt.intervals() {
        println!("  {file}:{start}-{end}");
    }
    for (file, fi) in &index.files {
        for (line, entry) in &fi.per_line {
            println!("  {file}:{line} {:?}", entry.roles);
        }
    }
    Ok(())
}
