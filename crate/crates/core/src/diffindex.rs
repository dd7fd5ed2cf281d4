//! Unified-diff parsing and the OLD-coordinate line index that ground-truth
//! scoring is based on.
//!
//! Every line number produced here refers to the pre-patch (OLD) file. A
//! deleted line is its own anchor; a pure insertion is anchored at the OLD
//! line it follows (0 for an insertion at the head of the file).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::chunker::ChunkSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineTag {
    Context,
    Del,
    Add,
}

impl LineTag {
    pub fn is_context(self) -> bool {
        self == LineTag::Context
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HunkLine {
    pub tag: LineTag,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HunkDiff {
    pub old_start: u32,
    pub old_len: u32,
    pub new_start: u32,
    pub new_len: u32,
    pub lines: Vec<HunkLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDiff {
    pub old_path: String,
    pub new_path: String,
    pub hunks: Vec<HunkDiff>,
}

pub const DEV_NULL: &str = "/dev/null";

impl FileDiff {
    pub fn is_addition(&self) -> bool {
        self.old_path == DEV_NULL
    }

    pub fn is_deletion(&self) -> bool {
        self.new_path == DEV_NULL
    }

    /// Path used for OLD coordinates: the old path, or the new path for a
    /// file the patch creates.
    pub fn index_path(&self) -> &str {
        if self.is_addition() {
            &self.new_path
        } else {
            &self.old_path
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchModel {
    pub files: Vec<FileDiff>,
}

impl PatchModel {
    pub fn hunk_count(&self) -> usize {
        self.files.iter().map(|f| f.hunks.len()).sum()
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn strip_path(raw: &str) -> String {
    // drop trailing timestamp (`--- a/x.c\t2020-01-01 ...`)
    let raw = raw.split('\t').next().unwrap_or(raw).trim_end();
    let raw = raw.trim_matches('"');
    if raw == DEV_NULL {
        return raw.to_string();
    }
    raw.strip_prefix("a/")
        .or_else(|| raw.strip_prefix("b/"))
        .unwrap_or(raw)
        .to_string()
}

fn parse_range(s: &str, line: usize) -> Result<(u32, u32)> {
    let (start, len) = match s.split_once(',') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let start = start
        .parse::<u32>()
        .map_err(|_| parse_err(line, format!("bad hunk range `{s}`")))?;
    let len = match len {
        Some(l) => l
            .parse::<u32>()
            .map_err(|_| parse_err(line, format!("bad hunk range `{s}`")))?,
        None => 1,
    };
    Ok((start, len))
}

fn parse_hunk_header(line: &str, lineno: usize) -> Result<(u32, u32, u32, u32)> {
    // @@ -old_start[,old_len] +new_start[,new_len] @@ [section]
    let rest = line
        .strip_prefix("@@ ")
        .ok_or_else(|| parse_err(lineno, "malformed hunk header"))?;
    let end = rest
        .find(" @@")
        .ok_or_else(|| parse_err(lineno, "unterminated hunk header"))?;
    let mut parts = rest[..end].split_whitespace();
    let old = parts
        .next()
        .and_then(|p| p.strip_prefix('-'))
        .ok_or_else(|| parse_err(lineno, "hunk header missing old range"))?;
    let new = parts
        .next()
        .and_then(|p| p.strip_prefix('+'))
        .ok_or_else(|| parse_err(lineno, "hunk header missing new range"))?;
    let (os, ol) = parse_range(old, lineno)?;
    let (ns, nl) = parse_range(new, lineno)?;
    Ok((os, ol, ns, nl))
}

/// Parses a unified diff (plain or git-flavoured).
///
/// Text before the first `---`/`+++` pair is ignored. Hunk bodies are read
/// according to their `@@` counts; a body that ends early, or runs past its
/// counts, is a parse error at the offending line.
pub fn parse_unified_diff(text: &str) -> Result<PatchModel> {
    let lines: Vec<&str> = text.lines().collect();
    let mut files: Vec<FileDiff> = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let line = lines[i];
        if line.starts_with("--- ") && i + 1 < lines.len() && lines[i + 1].starts_with("+++ ") {
            files.push(FileDiff {
                old_path: strip_path(&line[4..]),
                new_path: strip_path(&lines[i + 1][4..]),
                hunks: Vec::new(),
            });
            i += 2;
            continue;
        }
        if line.starts_with("@@ ") {
            let lineno = i + 1;
            let Some(file) = files.last_mut() else {
                return Err(parse_err(lineno, "hunk before any file header"));
            };
            let (old_start, old_len, new_start, new_len) = parse_hunk_header(line, lineno)?;
            if let Some(prev) = file.hunks.last() {
                if old_start <= prev.old_start {
                    return Err(parse_err(lineno, "hunk old_start values must increase"));
                }
            }
            let (mut old_left, mut new_left) = (old_len, new_len);
            let mut body = Vec::new();
            i += 1;
            while old_left > 0 || new_left > 0 {
                let Some(raw) = lines.get(i) else {
                    return Err(parse_err(
                        i + 1,
                        format!("hunk at line {lineno} ends before its declared counts"),
                    ));
                };
                let (tag, content) = match raw.as_bytes().first() {
                    Some(b' ') => (LineTag::Context, &raw[1..]),
                    // some tools strip the single space of empty context lines
                    None => (LineTag::Context, ""),
                    Some(b'-') => (LineTag::Del, &raw[1..]),
                    Some(b'+') => (LineTag::Add, &raw[1..]),
                    Some(b'\\') => {
                        i += 1;
                        continue;
                    }
                    _ => {
                        return Err(parse_err(
                            i + 1,
                            format!("hunk at line {lineno} ends before its declared counts"),
                        ))
                    }
                };
                match tag {
                    LineTag::Context if old_left > 0 && new_left > 0 => {
                        old_left -= 1;
                        new_left -= 1;
                    }
                    LineTag::Del if old_left > 0 => old_left -= 1,
                    LineTag::Add if new_left > 0 => new_left -= 1,
                    _ => {
                        return Err(parse_err(
                            i + 1,
                            format!("hunk at line {lineno} body contradicts its header counts"),
                        ))
                    }
                }
                body.push(HunkLine {
                    tag,
                    text: content.to_string(),
                });
                i += 1;
            }
            while lines.get(i).is_some_and(|l| l.starts_with('\\')) {
                i += 1;
            }
            if let Some(next) = lines.get(i) {
                let overflow = (next.starts_with('+') && !next.starts_with("+++ "))
                    || (next.starts_with('-')
                        && !next.starts_with("--- ")
                        && *next != "-- "
                        && *next != "--")
                    || (next.starts_with(' ') && !next.trim().is_empty());
                if overflow {
                    return Err(parse_err(
                        i + 1,
                        format!("hunk at line {lineno} has more lines than its header declares"),
                    ));
                }
            }
            file.hunks.push(HunkDiff {
                old_start,
                old_len,
                new_start,
                new_len,
                lines: body,
            });
            continue;
        }
        i += 1;
    }
    Ok(PatchModel { files })
}

// ---------------------------------------------------------------------------
// Index
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Deleted,
    InsertAnchor,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineEntry {
    pub roles: Vec<Role>,
    pub matched: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileIndex {
    pub anchors_old: Vec<u32>,
    pub insert_points: Vec<u32>,
    pub per_line: BTreeMap<u32, LineEntry>,
}

/// Per-file OLD-coordinate index, keyed by repository-relative path.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiffIndex {
    pub files: BTreeMap<String, FileIndex>,
}

impl DiffIndex {
    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    /// Sets `matched` on an indexed line. Flags are never cleared.
    pub fn mark_matched(&mut self, file: &str, line: u32) -> bool {
        match self
            .files
            .get_mut(file)
            .and_then(|f| f.per_line.get_mut(&line))
        {
            Some(entry) => {
                entry.matched = true;
                true
            }
            None => false,
        }
    }
}

pub fn build_diff_index(patch: &PatchModel) -> DiffIndex {
    let mut files: BTreeMap<String, (BTreeSet<u32>, BTreeSet<u32>)> = BTreeMap::new();
    for file in &patch.files {
        let (anchors, inserts) = files.entry(file.index_path().to_string()).or_default();
        for hunk in &file.hunks {
            // `-N,0` means the hunk inserts after OLD line N
            let mut cursor = if hunk.old_len == 0 {
                hunk.old_start + 1
            } else {
                hunk.old_start
            };
            let tags: Vec<LineTag> = hunk.lines.iter().map(|l| l.tag).collect();
            let mut k = 0;
            while k < tags.len() {
                match tags[k] {
                    LineTag::Context => {
                        cursor += 1;
                        k += 1;
                    }
                    LineTag::Del => {
                        anchors.insert(cursor);
                        cursor += 1;
                        k += 1;
                    }
                    LineTag::Add => {
                        let run_start = k;
                        while k < tags.len() && tags[k] == LineTag::Add {
                            k += 1;
                        }
                        let after_del = run_start > 0 && tags[run_start - 1] == LineTag::Del;
                        let before_del = k < tags.len() && tags[k] == LineTag::Del;
                        if !after_del && !before_del {
                            inserts.insert(cursor - 1);
                        }
                    }
                }
            }
        }
    }

    let files = files
        .into_iter()
        .map(|(path, (anchors, inserts))| {
            let mut per_line: BTreeMap<u32, LineEntry> = BTreeMap::new();
            for &l in &anchors {
                per_line.entry(l).or_default().roles.push(Role::Deleted);
            }
            for &l in &inserts {
                per_line.entry(l).or_default().roles.push(Role::InsertAnchor);
            }
            (
                path,
                FileIndex {
                    anchors_old: anchors.into_iter().collect(),
                    insert_points: inserts.into_iter().collect(),
                    per_line,
                },
            )
        })
        .collect();
    DiffIndex { files }
}

/// Ground-truth lines and their maximal consecutive runs, per file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub files: BTreeMap<String, FileTruth>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileTruth {
    pub gt_lines: BTreeSet<u32>,
    pub gt_intervals: Vec<(u32, u32)>,
}

impl GroundTruth {
    pub fn from_index(index: &DiffIndex) -> Self {
        let files = index
            .files
            .iter()
            .filter_map(|(path, fi)| {
                let gt_lines: BTreeSet<u32> = fi
                    .anchors_old
                    .iter()
                    .chain(&fi.insert_points)
                    .copied()
                    .collect();
                if gt_lines.is_empty() {
                    return None;
                }
                let gt_intervals = runs(&gt_lines);
                Some((path.clone(), FileTruth { gt_lines, gt_intervals }))
            })
            .collect();
        GroundTruth { files }
    }

    pub fn line_count(&self) -> usize {
        self.files.values().map(|f| f.gt_lines.len()).sum()
    }

    pub fn interval_count(&self) -> usize {
        self.files.values().map(|f| f.gt_intervals.len()).sum()
    }

    pub fn lines(&self) -> impl Iterator<Item = (&str, u32)> {
        self.files
            .iter()
            .flat_map(|(f, t)| t.gt_lines.iter().map(move |l| (f.as_str(), *l)))
    }

    pub fn intervals(&self) -> impl Iterator<Item = (&str, u32, u32)> {
        self.files
            .iter()
            .flat_map(|(f, t)| t.gt_intervals.iter().map(move |(s, e)| (f.as_str(), *s, *e)))
    }
}

fn runs(lines: &BTreeSet<u32>) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for &l in lines {
        match out.last_mut() {
            Some((_, end)) if *end + 1 == l => *end = l,
            _ => out.push((l, l)),
        }
    }
    out
}

/// Flattened ground-truth lines sorted by (file, line).
pub fn extract_modified_lines(patch: &PatchModel) -> Vec<(String, u32)> {
    GroundTruth::from_index(&build_diff_index(patch))
        .lines()
        .map(|(f, l)| (f.to_string(), l))
        .collect()
}

/// Result of [`mark_diff`].
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MarkReport {
    pub chunks: ChunkSet,
    /// Ground-truth lines not inside any chunk.
    pub uncovered: Vec<(String, u32)>,
    /// Indexed files that match no chunked file (warning only).
    pub path_mismatches: Vec<String>,
}

/// Flags chunks whose span contains ground-truth lines.
pub fn mark_diff(chunks: &ChunkSet, index: &DiffIndex) -> MarkReport {
    let gt = GroundTruth::from_index(index);
    let mut out = chunks.clone();
    let mut covered: BTreeSet<(String, u32)> = BTreeSet::new();
    for chunk in out.iter_mut() {
        let Some(truth) = gt.files.get(&chunk.file_path) else {
            continue;
        };
        let hits: Vec<u32> = truth
            .gt_lines
            .range(chunk.start_line..=chunk.end_line)
            .copied()
            .collect();
        if hits.is_empty() {
            continue;
        }
        for &l in &hits {
            covered.insert((chunk.file_path.clone(), l));
        }
        chunk.diff = true;
        chunk.diff_hit_lines = hits;
    }
    let chunk_files: BTreeSet<&str> = chunks.iter().map(|c| c.file_path.as_str()).collect();
    let path_mismatches: Vec<String> = index
        .files
        .keys()
        .filter(|f| !chunk_files.contains(f.as_str()))
        .cloned()
        .collect();
    for f in &path_mismatches {
        log::warn!("diff index file `{f}` matches no chunked file");
    }
    let uncovered = gt
        .lines()
        .filter(|(f, l)| !covered.contains(&(f.to_string(), *l)))
        .map(|(f, l)| (f.to_string(), l))
        .collect();
    MarkReport {
        chunks: out,
        uncovered,
        path_mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chunker::{Chunk, ChunkKind};

    const REPLACE: &str = "\
diff --git a/src/parse.c b/src/parse.c
index 1111111..2222222 100644
--- a/src/parse.c
+++ b/src/parse.c
@@ -3,7 +3,6 @@ int parse(void)
 a
 b
-c
-d
-e
+C
+D
 f
 g
";

    const INSERT: &str = "\
--- a/f.c
+++ b/f.c
@@ -10,2 +10,4 @@
 line10
+new1
+new2
 line11
";

    #[test]
    fn parses_replacement_hunk() {
        let patch = parse_unified_diff(REPLACE).unwrap();
        assert_eq!(patch.files.len(), 1);
        let f = &patch.files[0];
        assert_eq!(f.old_path, "src/parse.c");
        assert_eq!(f.new_path, "src/parse.c");
        let h = &f.hunks[0];
        assert_eq!((h.old_start, h.old_len, h.new_start, h.new_len), (3, 7, 3, 6));
        let dels = h.lines.iter().filter(|l| l.tag == LineTag::Del).count();
        let ctx = h.lines.iter().filter(|l| l.tag == LineTag::Context).count();
        assert_eq!((dels, ctx), (3, 4));
    }

    #[test]
    fn replacement_index_and_lines() {
        let patch = parse_unified_diff(REPLACE).unwrap();
        let idx = build_diff_index(&patch);
        let fi = &idx.files["src/parse.c"];
        assert_eq!(fi.anchors_old, vec![5, 6, 7]);
        assert!(fi.insert_points.is_empty());
        assert!(fi.per_line.values().all(|e| !e.matched));
        assert_eq!(
            extract_modified_lines(&patch),
            vec![
                ("src/parse.c".to_string(), 5),
                ("src/parse.c".to_string(), 6),
                ("src/parse.c".to_string(), 7)
            ]
        );
    }

    #[test]
    fn pure_insertion_anchors_at_preceding_old_line() {
        let patch = parse_unified_diff(INSERT).unwrap();
        let idx = build_diff_index(&patch);
        let fi = &idx.files["f.c"];
        assert!(fi.anchors_old.is_empty());
        assert_eq!(fi.insert_points, vec![10]);
        assert_eq!(fi.per_line[&10].roles, vec![Role::InsertAnchor]);
        assert_eq!(extract_modified_lines(&patch), vec![("f.c".to_string(), 10)]);
    }

    #[test]
    fn zero_length_old_range_inserts_after_start() {
        let text = "--- a/x.c\n+++ b/x.c\n@@ -10,0 +11,2 @@\n+a\n+b\n";
        let idx = build_diff_index(&parse_unified_diff(text).unwrap());
        assert_eq!(idx.files["x.c"].insert_points, vec![10]);
    }

    #[test]
    fn new_and_deleted_files() {
        let text = "\
--- /dev/null
+++ b/new.c
@@ -0,0 +1,2 @@
+int x;
+int y;
--- a/gone.c
+++ /dev/null
@@ -1,2 +0,0 @@
-int a;
-int b;
";
        let patch = parse_unified_diff(text).unwrap();
        assert!(patch.files[0].is_addition());
        assert!(patch.files[1].is_deletion());
        let idx = build_diff_index(&patch);
        assert_eq!(idx.files["new.c"].insert_points, vec![0]);
        assert_eq!(idx.files["gone.c"].anchors_old, vec![1, 2]);
    }

    #[test]
    fn empty_and_malformed_input() {
        assert_eq!(parse_unified_diff("").unwrap(), PatchModel::default());
        assert!(build_diff_index(&PatchModel::default()).is_empty());
        assert!(extract_modified_lines(&PatchModel::default()).is_empty());

        // header claims 3 old lines, body has 2
        let short = "--- a/f.c\n+++ b/f.c\n@@ -1,3 +1,3 @@\n a\n-b\n+B\n";
        assert!(matches!(parse_unified_diff(short), Err(Error::Parse { .. })));
        let long = "--- a/f.c\n+++ b/f.c\n@@ -1,1 +1,1 @@\n-a\n+b\n+c\n";
        assert!(matches!(
            parse_unified_diff(long),
            Err(Error::Parse { line: 6, .. })
        ));
        let bad = "--- a/f.c\n+++ b/f.c\n@@ -x +1 @@\n";
        assert!(matches!(
            parse_unified_diff(bad),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn tolerates_no_newline_marker_and_trailing_signature() {
        let text = "--- a/f.c\n+++ b/f.c\n@@ -1 +1 @@\n-a\n\\ No newline at end of file\n+b\n\\ No newline at end of file\n-- \n2.40.0\n";
        let patch = parse_unified_diff(text).unwrap();
        assert_eq!(patch.files[0].hunks[0].lines.len(), 2);
    }

    #[test]
    fn old_coordinates_survive_diverging_offsets() {
        // first hunk adds 5 lines so NEW coordinates of the second hunk are +5
        let text = "\
--- a/f.c
+++ b/f.c
@@ -2,1 +2,6 @@
 x
+1
+2
+3
+4
+5
@@ -40,3 +45,2 @@
 y
-z
 w
";
        let lines = extract_modified_lines(&parse_unified_diff(text).unwrap());
        assert_eq!(lines, vec![("f.c".to_string(), 2), ("f.c".to_string(), 41)]);
    }

    fn chunk(idx: usize, file: &str, s: u32, e: u32) -> Chunk {
        Chunk {
            index: idx,
            file_path: file.into(),
            chunk_kind: ChunkKind::Function,
            symbol: format!("f{idx}"),
            start_line: s,
            end_line: e,
            source: String::new(),
            ast_type: "function_definition".into(),
            imports: vec![],
            diff: false,
            diff_hit_lines: vec![],
        }
    }

    #[test]
    fn marks_chunks_containing_gt_lines() {
        let patch = parse_unified_diff(REPLACE).unwrap();
        let idx = build_diff_index(&patch);
        let chunks = ChunkSet::from_chunks(vec![
            chunk(0, "src/parse.c", 3, 10),
            chunk(1, "src/parse.c", 12, 20),
        ]);
        let report = mark_diff(&chunks, &idx);
        let c = &report.chunks.as_slice()[0];
        assert!(c.diff);
        assert_eq!(c.diff_hit_lines, vec![5, 6, 7]);
        assert!(!report.chunks.as_slice()[1].diff);
        assert!(report.uncovered.is_empty());
        // idempotent
        assert_eq!(mark_diff(&report.chunks, &idx).chunks, report.chunks);
    }

    #[test]
    fn uncovered_and_mismatched_paths_are_reported() {
        let text = "--- a/src/parse.c\n+++ b/src/parse.c\n@@ -1 +1 @@\n-x\n+y\n--- a/other.c\n+++ b/other.c\n@@ -1 +1 @@\n-x\n+y\n";
        let idx = build_diff_index(&parse_unified_diff(text).unwrap());
        let chunks = ChunkSet::from_chunks(vec![chunk(0, "src/parse.c", 3, 10)]);
        let report = mark_diff(&chunks, &idx);
        assert!(!report.chunks.as_slice()[0].diff);
        assert_eq!(
            report.uncovered,
            vec![("other.c".to_string(), 1), ("src/parse.c".to_string(), 1)]
        );
        assert_eq!(report.path_mismatches, vec!["other.c".to_string()]);
    }

    #[test]
    fn index_serializes_with_tool_field_names() {
        let idx = build_diff_index(&parse_unified_diff(INSERT).unwrap());
        let json = serde_json::to_value(&idx).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "f.c": {
                    "anchors_old": [],
                    "insert_points": [10],
                    "per_line": {"10": {"roles": ["insert_anchor"], "matched": false}}
                }
            })
        );
    }

    #[test]
    fn ground_truth_intervals_are_maximal_runs() {
        let mut idx = DiffIndex::default();
        idx.files.insert(
            "a.c".into(),
            FileIndex {
                anchors_old: vec![3, 4, 5, 9],
                insert_points: vec![6, 20],
                per_line: BTreeMap::new(),
            },
        );
        let gt = GroundTruth::from_index(&idx);
        assert_eq!(gt.files["a.c"].gt_intervals, vec![(3, 6), (9, 9), (20, 20)]);
        assert_eq!(gt.line_count(), 6);
        assert_eq!(gt.interval_count(), 3);
    }
}
