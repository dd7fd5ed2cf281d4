//! Benchmark case manifests, the crash-family taxonomy and diff-based
//! difficulty scoring.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Deserializer, Serialize};

use crate::diffindex::{parse_unified_diff, PatchModel};
use crate::error::{read_to_string, Error, Result};

/// The five crash families every sanitizer crash type is grouped into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CrashFamily {
    BufferOverflow,
    UninitializedAccess,
    MemoryLifecycle,
    TypeSafety,
    SystemRuntime,
}

impl CrashFamily {
    pub const ALL: [CrashFamily; 5] = [
        CrashFamily::BufferOverflow,
        CrashFamily::UninitializedAccess,
        CrashFamily::MemoryLifecycle,
        CrashFamily::TypeSafety,
        CrashFamily::SystemRuntime,
    ];

    /// Short column label used in benchmark tables.
    pub fn column_label(self) -> &'static str {
        match self {
            CrashFamily::BufferOverflow => "Buffer",
            CrashFamily::UninitializedAccess => "Initialize",
            CrashFamily::MemoryLifecycle => "Memory",
            CrashFamily::TypeSafety => "Parameter",
            CrashFamily::SystemRuntime => "Runtime",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            CrashFamily::BufferOverflow => "Buffer Overflow",
            CrashFamily::UninitializedAccess => "Uninitialized Access & Unknown States",
            CrashFamily::MemoryLifecycle => "Memory Lifecycle Errors",
            CrashFamily::TypeSafety => "Type Safety & Parameter Validation",
            CrashFamily::SystemRuntime => "System & Runtime Errors",
        }
    }
}

impl fmt::Display for CrashFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

/// Subtype table of the reference crash corpus: (subtype, family, count).
///
/// The counts are the observed frequencies over 4,993 reproducible OSS-Fuzz
/// crashes and double as the default input of `profile`.
pub const REFERENCE_SUBTYPES: [(&str, CrashFamily, u64); 33] = [
    ("Heap-buffer-overflow", CrashFamily::BufferOverflow, 1802),
    ("Stack-buffer-overflow", CrashFamily::BufferOverflow, 308),
    ("Index-out-of-bounds", CrashFamily::BufferOverflow, 165),
    ("Global-buffer-overflow", CrashFamily::BufferOverflow, 160),
    ("Container-overflow", CrashFamily::BufferOverflow, 33),
    ("Stack-buffer-underflow", CrashFamily::BufferOverflow, 13),
    ("Dynamic-stack-buffer-overflow", CrashFamily::BufferOverflow, 9),
    ("Use-of-uninitialized-value", CrashFamily::UninitializedAccess, 1015),
    ("UNKNOWN READ", CrashFamily::UninitializedAccess, 462),
    ("Segv on unknown address", CrashFamily::UninitializedAccess, 134),
    ("UNKNOWN WRITE", CrashFamily::UninitializedAccess, 123),
    ("Null-dereference READ", CrashFamily::UninitializedAccess, 25),
    ("UNKNOWN", CrashFamily::UninitializedAccess, 8),
    ("Unknown-crash", CrashFamily::UninitializedAccess, 1),
    ("Heap-use-after-free", CrashFamily::MemoryLifecycle, 389),
    ("Heap-double-free", CrashFamily::MemoryLifecycle, 63),
    ("Use-after-poison", CrashFamily::MemoryLifecycle, 48),
    ("Invalid-free", CrashFamily::MemoryLifecycle, 29),
    ("Stack-use-after-return", CrashFamily::MemoryLifecycle, 26),
    ("Stack-use-after-scope", CrashFamily::MemoryLifecycle, 13),
    ("Bad-free", CrashFamily::MemoryLifecycle, 5),
    ("Bad-cast", CrashFamily::TypeSafety, 65),
    ("Negative-size-param", CrashFamily::TypeSafety, 42),
    ("Memcpy-param-overlap", CrashFamily::TypeSafety, 20),
    ("Object-size", CrashFamily::TypeSafety, 9),
    ("Incorrect-function-pointer-type", CrashFamily::TypeSafety, 6),
    ("Non-positive-vla-bound-value", CrashFamily::TypeSafety, 3),
    ("Strcpy-param-overlap", CrashFamily::TypeSafety, 1),
    ("Strncpy-param-overlap", CrashFamily::TypeSafety, 1),
    ("Check failed", CrashFamily::SystemRuntime, 6),
    ("Unknown signal", CrashFamily::SystemRuntime, 6),
    (
        "Bad parameters to --sanitizer-annotate-contiguous-container",
        CrashFamily::SystemRuntime,
        2,
    ),
    ("Nested bug in the same thread, aborting.", CrashFamily::SystemRuntime, 1),
];

/// Spellings that show up in manifests and raw sanitizer banners but are not
/// rows of the reference table.
const SUBTYPE_ALIASES: &[(&str, CrashFamily)] = &[
    ("double-free", CrashFamily::MemoryLifecycle),
    ("attempting double-free", CrashFamily::MemoryLifecycle),
    ("alloc-dealloc-mismatch", CrashFamily::MemoryLifecycle),
    ("new-delete-type-mismatch", CrashFamily::MemoryLifecycle),
    ("Null-dereference", CrashFamily::UninitializedAccess),
    ("Null-dereference WRITE", CrashFamily::UninitializedAccess),
    ("SEGV", CrashFamily::UninitializedAccess),
    ("Bad parameters to sanitizer", CrashFamily::SystemRuntime),
    ("bad-parameters-to-sanitizer-annotate-contiguous-container", CrashFamily::SystemRuntime),
    ("deadly signal", CrashFamily::SystemRuntime),
    ("stack-overflow", CrashFamily::SystemRuntime),
    ("allocation-size-too-big", CrashFamily::SystemRuntime),
    ("out-of-memory", CrashFamily::SystemRuntime),
    ("calloc-overflow", CrashFamily::SystemRuntime),
];

/// Lowercases and collapses every run of non-alphanumeric characters to a
/// single space, so `Heap-buffer-overflow`, `heap buffer overflow` and
/// `HEAP_BUFFER_OVERFLOW` compare equal.
pub fn normalize_crash_type(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for ch in raw.chars() {
        if ch.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.extend(ch.to_lowercase());
        } else {
            pending_space = true;
        }
    }
    out
}

static SUBTYPE_LOOKUP: LazyLock<HashMap<String, CrashFamily>> = LazyLock::new(|| {
    REFERENCE_SUBTYPES
        .iter()
        .map(|(name, family, _)| (normalize_crash_type(name), *family))
        .chain(
            SUBTYPE_ALIASES
                .iter()
                .map(|(name, family)| (normalize_crash_type(name), *family)),
        )
        .collect()
});

/// Maps a crash-type string to its family.
///
/// Exact normalized match first; failing that, a trailing access descriptor
/// such as `READ 4` or `WRITE {*}` is stripped and the lookup retried.
pub fn classify_crash(crash_type: &str) -> Result<CrashFamily> {
    let norm = normalize_crash_type(crash_type);
    if let Some(family) = SUBTYPE_LOOKUP.get(&norm) {
        return Ok(*family);
    }
    let mut words: Vec<&str> = norm.split(' ').collect();
    while let Some(last) = words.last() {
        if last.chars().all(|c| c.is_ascii_digit()) || *last == "read" || *last == "write" {
            words.pop();
            let shorter = words.join(" ");
            if let Some(family) = SUBTYPE_LOOKUP.get(&shorter) {
                return Ok(*family);
            }
        } else {
            break;
        }
    }
    Err(Error::UnknownCrashType(crash_type.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyShare {
    pub count: u64,
    /// Percent of the total, rounded to one decimal.
    pub percent: f64,
}

/// Partitions subtype counts by family and reports per-family percentages.
pub fn family_distribution(
    crash_types: &[(String, u64)],
) -> Result<BTreeMap<CrashFamily, FamilyShare>> {
    let mut counts: BTreeMap<CrashFamily, u64> = BTreeMap::new();
    for (name, count) in crash_types {
        *counts.entry(classify_crash(name)?).or_default() += count;
    }
    let total: u64 = counts.values().sum();
    Ok(counts
        .into_iter()
        .map(|(family, count)| {
            let percent = if total == 0 {
                0.0
            } else {
                round1(count as f64 * 100.0 / total as f64)
            };
            (family, FamilyShare { count, percent })
        })
        .collect())
}

/// Reads `subtype,count` lines (CSV or tab separated; `#` comments allowed)
/// or a JSON object `{subtype: count}`.
pub fn parse_subtype_counts(text: &str) -> Result<Vec<(String, u64)>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let map: serde_json::Map<String, serde_json::Value> = serde_json::from_str(text)?;
        return map
            .into_iter()
            .map(|(k, v)| {
                v.as_u64().map(|n| (k.clone(), n)).ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("count for `{k}` is not a non-negative integer"),
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, count) = line
            .rsplit_once(['\t', ','])
            .ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected `subtype,count`".into(),
            })?;
        let count = count.trim();
        if i == 0 && count.parse::<u64>().is_err() {
            // header row
            continue;
        }
        let count = count.parse::<u64>().map_err(|_| Error::Parse {
            line: i + 1,
            message: format!("invalid count `{count}`"),
        })?;
        out.push((name.trim().trim_matches('"').to_string(), count));
    }
    Ok(out)
}

/// The reference subtype table as `(subtype, count)` pairs.
pub fn reference_subtype_counts() -> Vec<(String, u64)> {
    REFERENCE_SUBTYPES
        .iter()
        .map(|(name, _, count)| (name.to_string(), *count))
        .collect()
}

pub(crate) fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

// ---------------------------------------------------------------------------
// Case manifests
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fuzzer {
    Libfuzzer,
    Afl,
    Honggfuzz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sanitizer {
    Asan,
    Msan,
    Ubsan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    High,
    Medium,
    Unknown,
}

macro_rules! lenient_enum {
    ($ty:ty, $what:literal, { $($($pat:literal)|+ => $val:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($($pat)|+ => Ok($val),)+
                    other => Err(format!(concat!("unknown ", $what, " `{}`"), other)),
                }
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

lenient_enum!(Fuzzer, "fuzzer", {
    "libfuzzer" => Fuzzer::Libfuzzer,
    "afl" => Fuzzer::Afl,
    "honggfuzz" => Fuzzer::Honggfuzz,
});

lenient_enum!(Sanitizer, "sanitizer", {
    "asan" => Sanitizer::Asan,
    "msan" => Sanitizer::Msan,
    "ubsan" => Sanitizer::Ubsan,
});

lenient_enum!(Severity, "severity", {
    "high" => Severity::High,
    "medium" | "med" => Severity::Medium,
    "unknown" | "-" | "" => Severity::Unknown,
});

/// One benchmark case. Path-valued fields are resolved against the manifest
/// directory on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseEntry {
    pub id: String,
    pub fuzzer: Fuzzer,
    pub sanitizer: Sanitizer,
    pub project: String,
    pub crash_type: String,
    #[serde(default = "unknown_severity")]
    pub severity: Severity,
    /// Local binary path or container image reference.
    pub vulnerable_ref: String,
    pub patched_ref: String,
    pub ground_truth_diff: PathBuf,
    pub reproducer: PathBuf,
    pub source_root: PathBuf,
}

fn unknown_severity() -> Severity {
    Severity::Unknown
}

impl CaseEntry {
    pub fn family(&self) -> Result<CrashFamily> {
        classify_crash(&self.crash_type)
    }

    pub fn load_patch(&self) -> Result<PatchModel> {
        parse_unified_diff(&read_to_string(&self.ground_truth_diff)?)
    }
}

#[derive(Debug, Default, Deserialize)]
struct ManifestDoc {
    #[serde(default)]
    case: Vec<CaseEntry>,
}

/// Loads and validates a manifest (`.json`, otherwise TOML).
pub fn load_manifest(path: &Path) -> Result<Vec<CaseEntry>> {
    let text = read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    parse_manifest(&text, base, is_json)
}

pub fn parse_manifest(text: &str, base: &Path, json: bool) -> Result<Vec<CaseEntry>> {
    let doc: ManifestDoc = if text.trim().is_empty() {
        ManifestDoc::default()
    } else if json {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?
    } else {
        toml::from_str(text).map_err(|e| Error::Parse {
            line: e
                .span()
                .map(|s| text[..s.start].lines().count().max(1))
                .unwrap_or(0),
            message: e.message().to_string(),
        })?
    };

    let mut seen = HashSet::new();
    let mut cases = Vec::with_capacity(doc.case.len());
    for mut case in doc.case {
        if !seen.insert(case.id.clone()) {
            return Err(Error::Validation {
                id: case.id,
                message: "duplicate id".into(),
            });
        }
        if let Err(e) = classify_crash(&case.crash_type) {
            return Err(Error::Validation {
                id: case.id,
                message: e.to_string(),
            });
        }
        case.ground_truth_diff = base.join(&case.ground_truth_diff);
        case.reproducer = base.join(&case.reproducer);
        case.source_root = base.join(&case.source_root);
        for r in [&mut case.vulnerable_ref, &mut case.patched_ref] {
            let local = base.join(r.as_str());
            if !Path::new(r.as_str()).is_absolute() && looks_like_path(r) {
                *r = local.to_string_lossy().into_owned();
            }
        }
        let patch = match read_to_string(&case.ground_truth_diff) {
            Ok(text) => parse_unified_diff(&text),
            Err(e) => Err(e),
        };
        match patch {
            Ok(p) if p.hunk_count() > 0 => {}
            Ok(_) => {
                return Err(Error::Validation {
                    id: case.id,
                    message: "ground-truth diff has no hunks".into(),
                })
            }
            Err(e) => {
                return Err(Error::Validation {
                    id: case.id,
                    message: format!("ground-truth diff: {e}"),
                })
            }
        }
        cases.push(case);
    }
    Ok(cases)
}

/// Image references look like `name:tag` or `registry/name@sha256:..`; local
/// refs start with `.`/`/` or contain no colon.
fn looks_like_path(r: &str) -> bool {
    r.starts_with("./") || r.starts_with("../") || !r.contains(':')
}

// ---------------------------------------------------------------------------
// Difficulty
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffSummary {
    pub files_changed: u32,
    pub hunks: u32,
    pub lines_changed: u32,
    pub max_directory_depth: u32,
    pub top_level_dirs_touched: u32,
}

impl DiffSummary {
    pub fn from_patch(patch: &PatchModel) -> Self {
        let mut top_dirs = BTreeSet::new();
        let mut summary = DiffSummary::default();
        for file in &patch.files {
            summary.files_changed += 1;
            summary.hunks += file.hunks.len() as u32;
            summary.lines_changed += file
                .hunks
                .iter()
                .flat_map(|h| &h.lines)
                .filter(|l| !l.tag.is_context())
                .count() as u32;
            let path = file.index_path();
            let dirs: Vec<&str> = path.split('/').filter(|c| !c.is_empty()).collect();
            let depth = dirs.len().saturating_sub(1) as u32;
            summary.max_directory_depth = summary.max_directory_depth.max(depth);
            top_dirs.insert(if depth == 0 { "." } else { dirs[0] }.to_string());
        }
        summary.top_level_dirs_touched = top_dirs.len() as u32;
        summary
    }
}

/// Weights and saturation caps of the structural difficulty score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifficultyWeights {
    pub files: f64,
    pub lines: f64,
    pub dirs: f64,
    pub depth: f64,
    pub files_cap: u32,
    pub lines_cap: u32,
    pub dirs_cap: u32,
    pub depth_cap: u32,
}

impl Default for DifficultyWeights {
    fn default() -> Self {
        Self {
            files: 0.35,
            lines: 0.25,
            dirs: 0.20,
            depth: 0.20,
            files_cap: 5,
            lines_cap: 200,
            dirs_cap: 3,
            depth_cap: 6,
        }
    }
}

pub fn score_case_difficulty(summary: &DiffSummary) -> f64 {
    score_case_difficulty_with(summary, &DifficultyWeights::default())
}

pub fn score_case_difficulty_with(summary: &DiffSummary, w: &DifficultyWeights) -> f64 {
    fn sat(v: u32, cap: u32) -> f64 {
        if cap == 0 {
            return 0.0;
        }
        v.min(cap) as f64 / cap as f64
    }
    let score = w.files * sat(summary.files_changed, w.files_cap)
        + w.lines * sat(summary.lines_changed, w.lines_cap)
        + w.dirs * sat(summary.top_level_dirs_touched, w.dirs_cap)
        + w.depth * sat(summary.max_directory_depth, w.depth_cap);
    score.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn classifies_reference_examples() {
        assert_eq!(
            classify_crash("Heap-buffer-overflow").unwrap(),
            CrashFamily::BufferOverflow
        );
        assert_eq!(
            classify_crash("Use-of-uninitialized-value").unwrap(),
            CrashFamily::UninitializedAccess
        );
        assert_eq!(
            classify_crash("Heap-use-after-free").unwrap(),
            CrashFamily::MemoryLifecycle
        );
    }

    #[test]
    fn classification_normalizes_case_and_separators() {
        assert_eq!(
            classify_crash("HEAP_BUFFER_OVERFLOW").unwrap(),
            CrashFamily::BufferOverflow
        );
        assert_eq!(
            classify_crash("SEGV on unknown address").unwrap(),
            CrashFamily::UninitializedAccess
        );
        assert_eq!(
            classify_crash("segv-on-unknown-address").unwrap(),
            CrashFamily::UninitializedAccess
        );
        assert_eq!(
            classify_crash("Heap-buffer-overflow READ 4").unwrap(),
            CrashFamily::BufferOverflow
        );
        assert_eq!(
            classify_crash("UNKNOWN WRITE").unwrap(),
            CrashFamily::UninitializedAccess
        );
    }

    #[test]
    fn every_reference_row_classifies_to_its_family() {
        assert_eq!(REFERENCE_SUBTYPES.len(), 33);
        for (name, family, _) in REFERENCE_SUBTYPES {
            assert_eq!(classify_crash(name).unwrap(), family, "{name}");
        }
    }

    #[test]
    fn unknown_types_are_rejected() {
        assert!(matches!(
            classify_crash("totally-new-crash"),
            Err(Error::UnknownCrashType(s)) if s == "totally-new-crash"
        ));
        assert!(classify_crash("").is_err());
    }

    #[test]
    fn distribution_of_reference_counts() {
        let dist = family_distribution(&reference_subtype_counts()).unwrap();
        let pct: Vec<f64> = CrashFamily::ALL.iter().map(|f| dist[f].percent).collect();
        assert_eq!(pct, vec![49.9, 35.4, 11.5, 2.9, 0.3]);
        let counts: Vec<u64> = CrashFamily::ALL.iter().map(|f| dist[f].count).collect();
        assert_eq!(counts, vec![2490, 1768, 573, 147, 15]);
        assert_eq!(counts.iter().sum::<u64>(), 4993);
    }

    #[test]
    fn distribution_edge_cases() {
        let single = family_distribution(&[("bad-cast".into(), 10)]).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(
            single[&CrashFamily::TypeSafety],
            FamilyShare {
                count: 10,
                percent: 100.0
            }
        );
        assert!(family_distribution(&[]).unwrap().is_empty());
        assert!(matches!(
            family_distribution(&[("nope".into(), 1)]),
            Err(Error::UnknownCrashType(s)) if s == "nope"
        ));
    }

    #[test]
    fn parses_subtype_count_files() {
        let csv = "subtype,count\nHeap-buffer-overflow,3\n# comment\nBad-cast\t2\n";
        assert_eq!(
            parse_subtype_counts(csv).unwrap(),
            vec![
                ("Heap-buffer-overflow".to_string(), 3),
                ("Bad-cast".to_string(), 2)
            ]
        );
        let json = r#"{"Heap-use-after-free": 4}"#;
        assert_eq!(
            parse_subtype_counts(json).unwrap(),
            vec![("Heap-use-after-free".to_string(), 4)]
        );
        assert!(parse_subtype_counts("a,b\nc,x\n").is_err());
    }

    #[test]
    fn difficulty_examples() {
        assert_eq!(score_case_difficulty(&DiffSummary::default()), 0.0);
        let full = DiffSummary {
            files_changed: 5,
            hunks: 9,
            lines_changed: 200,
            max_directory_depth: 6,
            top_level_dirs_touched: 3,
        };
        assert!((score_case_difficulty(&full) - 1.0).abs() < 1e-12);
        let small = DiffSummary {
            files_changed: 1,
            hunks: 1,
            lines_changed: 20,
            max_directory_depth: 2,
            top_level_dirs_touched: 1,
        };
        // 0.35*0.2 + 0.25*0.1 + 0.20/3 + 0.20*(2/6)
        assert!((score_case_difficulty(&small) - 0.228_333_333).abs() < 1e-6);
    }

    fn arb_summary() -> impl Strategy<Value = DiffSummary> {
        (0u32..10, 0u32..10, 0u32..400, 0u32..10, 0u32..6).prop_map(|(f, h, l, d, t)| {
            DiffSummary {
                files_changed: f,
                hunks: h,
                lines_changed: l,
                max_directory_depth: d,
                top_level_dirs_touched: t,
            }
        })
    }

    proptest! {
        #[test]
        fn difficulty_is_monotone(a in arb_summary(), b in arb_summary()) {
            let hi = DiffSummary {
                files_changed: a.files_changed.max(b.files_changed),
                hunks: a.hunks.max(b.hunks),
                lines_changed: a.lines_changed.max(b.lines_changed),
                max_directory_depth: a.max_directory_depth.max(b.max_directory_depth),
                top_level_dirs_touched: a.top_level_dirs_touched.max(b.top_level_dirs_touched),
            };
            prop_assert!(score_case_difficulty(&hi) >= score_case_difficulty(&a));
            prop_assert!(score_case_difficulty(&hi) >= score_case_difficulty(&b));
            let s = score_case_difficulty(&a);
            prop_assert!((0.0..=1.0).contains(&s));
        }

        #[test]
        fn distribution_matches_bruteforce_partition(
            picks in proptest::collection::vec((0usize..33, 0u64..500), 0..40)
        ) {
            let input: Vec<(String, u64)> = picks
                .iter()
                .map(|(i, c)| (REFERENCE_SUBTYPES[*i].0.to_uppercase(), *c))
                .collect();
            let dist = family_distribution(&input).unwrap();
            for family in CrashFamily::ALL {
                let expected: u64 = picks
                    .iter()
                    .filter(|(i, _)| REFERENCE_SUBTYPES[*i].1 == family)
                    .map(|(_, c)| c)
                    .sum();
                let present = picks.iter().any(|(i, _)| REFERENCE_SUBTYPES[*i].1 == family);
                prop_assert_eq!(dist.get(&family).map(|s| s.count), present.then_some(expected));
            }
            let total: u64 = picks.iter().map(|(_, c)| c).sum();
            if total > 0 {
                let sum: f64 = dist.values().map(|s| s.percent).sum();
                prop_assert!((sum - 100.0).abs() <= 0.2 + 1e-9, "sum {}", sum);
            }
        }
    }
}
