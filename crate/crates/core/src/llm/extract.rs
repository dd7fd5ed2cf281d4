//! Candidate extraction from raw model responses.

use serde_json::{Map, Value};

use super::merge::merge_candidates;
use crate::candidate::{Candidate, CandidateSource};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Extraction {
    pub candidates: Vec<Candidate>,
    /// One note per dropped record.
    pub dropped: Vec<String>,
}

/// Byte ranges of balanced `[...]` spans, in order of their opening bracket.
/// Brackets inside JSON string literals are ignored.
pub fn bracket_spans(raw: &str) -> Vec<(usize, usize)> {
    let bytes = raw.as_bytes();
    let mut spans = Vec::new();
    for (open, _) in raw.match_indices('[') {
        let mut depth = 0usize;
        let mut in_str = false;
        let mut escaped = false;
        for (off, &b) in bytes[open..].iter().enumerate() {
            if in_str {
                match b {
                    _ if escaped => escaped = false,
                    b'\\' => escaped = true,
                    b'"' => in_str = false,
                    _ => {}
                }
                continue;
            }
            match b {
                b'"' => in_str = true,
                b'[' => depth += 1,
                b']' => {
                    depth -= 1;
                    if depth == 0 {
                        spans.push((open, open + off + 1));
                        break;
                    }
                }
                _ => {}
            }
        }
    }
    spans
}

/// The first balanced span that decodes as a JSON array of objects.
pub fn first_record_array(raw: &str) -> Option<Vec<Map<String, Value>>> {
    bracket_spans(raw).into_iter().find_map(|(s, e)| {
        let v: Vec<Value> = serde_json::from_str(&raw[s..e]).ok()?;
        v.into_iter()
            .map(|x| match x {
                Value::Object(m) => Some(m),
                _ => None,
            })
            .collect()
    })
}

fn line_field(rec: &Map<String, Value>, key: &str) -> std::result::Result<u32, String> {
    let v = rec.get(key).ok_or_else(|| format!("missing {key}"))?;
    v.as_u64()
        .filter(|n| *n >= 1 && *n <= u32::MAX as u64)
        .map(|n| n as u32)
        .ok_or_else(|| format!("{key} is not a positive integer"))
}

fn decode_record(rec: &Map<String, Value>) -> std::result::Result<Candidate, String> {
    let file = rec
        .get("file")
        .and_then(Value::as_str)
        .filter(|s| !s.trim().is_empty())
        .ok_or("missing file")?;
    let start = line_field(rec, "start_line")?;
    let end = line_field(rec, "end_line")?;
    let confidence = rec
        .get("confidence")
        .and_then(Value::as_f64)
        .ok_or("missing confidence")?;
    let mut c = Candidate::new(file, start, end, confidence).with_source(CandidateSource::Llm);
    if let Some(sym) = rec.get("symbol").and_then(Value::as_str) {
        if !sym.is_empty() {
            c.symbol = Some(sym.to_string());
        }
    }
    if let Some(r) = rec.get("rationale").and_then(Value::as_str) {
        c.rationale = r.to_string();
    }
    Ok(c)
}

/// Decodes the first candidate array in `raw`, reporting dropped records.
pub fn extract_detailed(raw: &str) -> Result<Extraction> {
    let records = first_record_array(raw)
        .ok_or_else(|| Error::ExtractionFailed(snippet(raw)))?;
    let mut out = Extraction::default();
    for (i, rec) in records.iter().enumerate() {
        match decode_record(rec) {
            Ok(c) => out.candidates.push(c),
            Err(why) => out.dropped.push(format!("record {i}: {why}")),
        }
    }
    for note in &out.dropped {
        log::debug!("dropped candidate {note}");
    }
    Ok(out)
}

/// Decodes candidates from `raw`; with `merge_with`, the result is merged
/// with those candidates.
pub fn extract_candidates(raw: &str, merge_with: Option<&[Candidate]>) -> Result<Vec<Candidate>> {
    let decoded = extract_detailed(raw)?.candidates;
    Ok(match merge_with {
        Some(prev) => merge_candidates(&decoded, prev),
        None => decoded,
    })
}

fn snippet(raw: &str) -> String {
    let t = raw.trim();
    let cut = t.char_indices().nth(80).map(|(i, _)| i).unwrap_or(t.len());
    t[..cut].to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fenced_array() {
        let raw = "```json\n[{\"file\":\"a.c\",\"symbol\":null,\"start_line\":3,\"end_line\":4,\"confidence\":0.9,\"rationale\":\"x\"},\n {\"file\":\"b.c\",\"start_line\":7,\"end_line\":7,\"confidence\":0.4}]\n```";
        let c = extract_candidates(raw, None).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].symbol, None);
        assert_eq!(c[1].rationale, "");
    }

    #[test]
    fn prose_around_array() {
        let raw = "Looking at frame [0] and the [note \"]\"], I think:\n[{\"file\":\"a.c\",\"start_line\":1,\"end_line\":2,\"confidence\":1.5}]\nHope [this] helps.";
        let c = extract_candidates(raw, None).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].confidence, 1.0);
    }

    #[test]
    fn no_array() {
        assert!(matches!(
            extract_candidates("I cannot determine the location.", None),
            Err(Error::ExtractionFailed(_))
        ));
    }

    #[test]
    fn incomplete_records_are_dropped() {
        let raw = r#"[{"file":"a.c","start_line":1,"end_line":2},{"file":"a.c","start_line":0,"end_line":2,"confidence":0.1},{"file":"a.c","start_line":5,"end_line":2,"confidence":0.3}]"#;
        let e = extract_detailed(raw).unwrap();
        assert_eq!(e.dropped.len(), 2);
        assert_eq!(e.candidates[0].interval(), (2, 5));
    }

    #[test]
    fn empty_array_is_zero_candidates() {
        assert!(extract_candidates("[]", None).unwrap().is_empty());
    }

    #[test]
    fn merge_with_previous() {
        let prev = vec![Candidate::new("a.c", 1, 4, 0.2)];
        let raw = r#"[{"file":"a.c","start_line":2,"end_line":4,"confidence":0.7}]"#;
        let c = extract_candidates(raw, Some(&prev)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].votes, c[0].interval()), (2, (1, 4)));
    }
}
