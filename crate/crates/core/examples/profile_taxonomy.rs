//! Crash family shares of the built-in subtype table, or of a
//! `subtype,count` file given as the first argument.

use tracelocate::corpus::{family_distribution, parse_subtype_counts, reference_subtype_counts};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let counts = match std::env::args().nth(1) {
        Some(path) => parse_subtype_counts(&std::fs::read_to_string(path)?)?,
        None => reference_subtype_counts(),
    };
    for (family, share) in family_distribution(&counts)? {
        println!("{:<40} {:>6} {:>5.1}%", family.display_name(), share.count, share.percent);
    }
    Ok(())
}
