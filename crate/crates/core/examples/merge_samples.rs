//! Merges candidate lists from several sampled replies.

use tracelocate::llm::{extract_candidates, merge_all};

const REPLIES: [&str; 3] = [
    r#"[{"file":"src/session.c","symbol":"session_close","start_line":25,"end_line":26,"confidence":0.8}]"#,
    r#"Probably here: [{"file":"src/session.c","start_line":26,"end_line":27,"confidence":0.6},
        {"file":"src/main.c","start_line":40,"end_line":40,"confidence":0.2}]"#,
    "I could not decide.",
];

fn main() {
    let lists: Vec<_> = REPLIES
        .iter()
        .filter_map(|r| match extract_candidates(r, None) {
            Ok(c) => Some(c),
            Err(e) => {
                println!("skipped reply: {e}");
                None
            }
        })
        .collect();
    for c in merge_all(lists) {
        println!("{}:{}-{} votes={} conf={:.2}", c.file, c.start_line, c.end_line, c.votes, c.confidence);
    }
}
