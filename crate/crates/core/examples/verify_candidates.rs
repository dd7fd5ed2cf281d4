//! Grounds proposed locations in the toy project's source.

use std::path::PathBuf;

use tracelocate::chunker::chunk_source_tree;
use tracelocate::verifier::verify_candidates;
use tracelocate::Candidate;

fn main() -> tracelocate::Result<()> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/toyproj/hbo");
    let chunks = chunk_source_tree(&root)?;
    let proposals = vec![
        // right function, interval off by a few lines; the quoted line pins it
        Candidate::new("parse.c", 24, 24, 0.9)
            .with_symbol("parse_hdr")
            .with_rationale("unchecked tag count; reads in `hdr->tags[i] = *(const uint32_t *)(buf + off);`"),
        Candidate::new("src/main.c", 1, 3, 0.4).with_symbol("main"),
        Candidate::new("src/nowhere.c", 7, 9, 0.1).with_symbol("ghost"),
    ];
    for v in verify_candidates(&proposals, &chunks) {
        let c = &v.candidate;
        println!(
            "{:<12} {}:{}-{} verified={} was={:?}",
            format!("{:?}", v.anchored_by),
            c.file,
            c.start_line,
            c.end_line,
            c.verified,
            v.original_interval
        );
    }
    Ok(())
}
