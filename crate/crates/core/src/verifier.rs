//! Grounding of proposed locations in the actual source.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::candidate::Candidate;
use crate::chunker::{numbered_snapshot, Chunk, ChunkSet};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnchoredBy {
    SymbolSnippet,
    SymbolOnly,
    FallbackOriginal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifiedCandidate {
    #[serde(flatten)]
    pub candidate: Candidate,
    pub anchored_by: AnchoredBy,
    /// The interval as proposed, kept when verification moved it.
    pub original_interval: Option<(u32, u32)>,
}

impl AsRef<Candidate> for VerifiedCandidate {
    fn as_ref(&self) -> &Candidate {
        &self.candidate
    }
}

fn identifier_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^[A-Za-z_~][A-Za-z0-9_:~]*(\(\))?$").unwrap())
}

fn backtick_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?s)```[^\n`]*\n(.*?)```|`([^`\n]+)`").unwrap())
}

/// The first backtick-quoted code line in `rationale` that is more than a
/// bare identifier.
pub fn rationale_snippet(rationale: &str) -> Option<String> {
    backtick_re().captures_iter(rationale).find_map(|c| {
        let body = c.get(1).or_else(|| c.get(2))?.as_str();
        let line = body.lines().map(str::trim).find(|l| !l.is_empty())?;
        (!identifier_re().is_match(line)).then(|| line.to_string())
    })
}

/// Same file, allowing either path to be a `/`-separated suffix of the other.
pub fn same_file(a: &str, b: &str) -> bool {
    let a = a.trim_start_matches("./");
    let b = b.trim_start_matches("./");
    a == b || a.ends_with(&format!("/{b}")) || b.ends_with(&format!("/{a}"))
}

/// Symbol match: same-file chunks first, then the lowest start line.
fn find_chunk<'a>(c: &Candidate, chunks: &'a ChunkSet) -> Option<(&'a Chunk, bool)> {
    let symbol = c.symbol.as_deref()?;
    let matching = chunks.iter().filter(|k| k.symbol_matches(symbol));
    let mut best: Option<(&Chunk, bool)> = None;
    for k in matching {
        let local = same_file(&k.file_path, &c.file);
        let better = match best {
            None => true,
            Some((b, b_local)) => {
                (local, std::cmp::Reverse(k.start_line), std::cmp::Reverse(&k.file_path))
                    > (b_local, std::cmp::Reverse(b.start_line), std::cmp::Reverse(&b.file_path))
            }
        };
        if better {
            best = Some((k, local));
        }
    }
    best
}

/// Lines of `chunk` whose text contains `snippet`.
fn snippet_lines(chunk: &Chunk, snippet: &str) -> Vec<u32> {
    chunk
        .source
        .lines()
        .enumerate()
        .filter(|(_, l)| l.contains(snippet))
        .map(|(i, _)| chunk.start_line + i as u32)
        .collect()
}

fn distance(line: u32, (s, e): (u32, u32)) -> u32 {
    if line < s {
        s - line
    } else {
        line.saturating_sub(e)
    }
}

/// Shifts `(s, e)` by the least amount that makes it contain `line` and lie
/// inside `(cs, ce)`. None when the interval is longer than the chunk.
fn shift_to(line: u32, (s, e): (u32, u32), (cs, ce): (u32, u32)) -> Option<(u32, u32)> {
    let len = e - s;
    if len > ce - cs {
        return None;
    }
    // feasible starts: [max(cs, line - len), min(ce - len, line)]
    let lo = cs.max(line.saturating_sub(len));
    let hi = (ce - len).min(line);
    if lo > hi {
        return None;
    }
    let start = s.clamp(lo, hi);
    Some((start, start + len))
}

fn clamp_into((s, e): (u32, u32), (cs, ce): (u32, u32)) -> (u32, u32) {
    let (a, b) = (s.max(cs), e.min(ce));
    if a <= b {
        (a, b)
    } else {
        (cs, ce)
    }
}

pub fn verify_candidate(c: &Candidate, chunks: &ChunkSet) -> VerifiedCandidate {
    let original = c.interval();
    let Some((chunk, local)) = find_chunk(c, chunks) else {
        let mut kept = c.clone();
        kept.verified = false;
        return VerifiedCandidate {
            candidate: kept,
            anchored_by: AnchoredBy::FallbackOriginal,
            original_interval: None,
        };
    };
    let span = (chunk.start_line, chunk.end_line);
    let snippet_anchor = local
        .then(|| rationale_snippet(&c.rationale))
        .flatten()
        .and_then(|snip| {
            let hits = snippet_lines(chunk, &snip);
            let best = hits.into_iter().min_by_key(|l| (distance(*l, original), *l))?;
            shift_to(best, original, span)
        });
    let (interval, anchored_by) = match snippet_anchor {
        Some(iv) => (iv, AnchoredBy::SymbolSnippet),
        None => (clamp_into(original, span), AnchoredBy::SymbolOnly),
    };
    let mut out = c.clone();
    out.file = chunk.file_path.clone();
    out.start_line = interval.0;
    out.end_line = interval.1;
    out.verified = true;
    let moved = interval != original || out.file != c.file;
    VerifiedCandidate {
        candidate: out,
        anchored_by,
        original_interval: moved.then_some(original),
    }
}

/// Verifies each candidate in order; nothing is dropped.
pub fn verify_candidates(cands: &[Candidate], chunks: &ChunkSet) -> Vec<VerifiedCandidate> {
    cands.par_iter().map(|c| verify_candidate(c, chunks)).collect()
}

fn still_grounded(c: &Candidate, chunks: &ChunkSet) -> bool {
    let (Some(symbol), true) = (c.symbol.as_deref(), c.verified) else {
        return false;
    };
    chunks
        .lookup(&c.file, c.start_line)
        .is_some_and(|k| k.file_path == c.file && k.contains(c.end_line) && k.symbol_matches(symbol))
}

/// Verifies a list again. Candidates still inside a chunk matching their
/// symbol are kept as they are; others keep their earliest original interval.
pub fn reverify(list: &[VerifiedCandidate], chunks: &ChunkSet) -> Vec<VerifiedCandidate> {
    list.par_iter()
        .map(|v| {
            if still_grounded(&v.candidate, chunks) {
                return v.clone();
            }
            let mut again = verify_candidate(&v.candidate, chunks);
            if v.original_interval.is_some() {
                again.original_interval = v.original_interval;
            }
            again
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub line_count: u32,
    /// `(symbol, start_line, end_line)` of every chunk in the file.
    pub chunks: Vec<(String, u32, u32)>,
}

/// Per-file line counts and chunk spans of the snapshots used for
/// verification.
pub fn snapshot_index(chunks: &ChunkSet, root: &Path) -> Result<BTreeMap<String, SnapshotEntry>> {
    let mut out = BTreeMap::new();
    for file in chunks.files() {
        let snap = numbered_snapshot(root, file)?;
        out.insert(
            file.to_string(),
            SnapshotEntry {
                line_count: snap.line_count(),
                chunks: chunks
                    .in_file(file)
                    .iter()
                    .map(|c| (c.symbol.clone(), c.start_line, c.end_line))
                    .collect(),
            },
        );
    }
    Ok(out)
}
