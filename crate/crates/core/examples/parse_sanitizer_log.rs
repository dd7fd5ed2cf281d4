//! Parses a sanitizer report and prints its frames.

use std::path::PathBuf;

use tracelocate::ata::parse_sanitizer_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("fixtures/sanitizer_logs/asan_heap_use_after_free.log")
    });
    let report = parse_sanitizer_report(&std::fs::read_to_string(path)?, None)?;
    println!(
        "{:?} {} ({}) access={:?} size={:?}",
        report.sanitizer,
        report.crash_type,
        report.family.display_name(),
        report.access_op,
        report.access_size
    );
    let traces = [
        ("crash", Some(&report.frames)),
        ("alloc", report.alloc_frames.as_ref()),
        ("free", report.free_frames.as_ref()),
    ];
    for (label, frames) in traces {
        let Some(frames) = frames else { continue };
        println!("{label}:");
        for f in frames {
            println!(
                "  #{:<2} {} {}:{}",
                f.index,
                f.function,
                f.file.as_deref().unwrap_or("?"),
                f.line.map(|l| l.to_string()).unwrap_or_default()
            );
        }
    }
    Ok(())
}
