use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use proptest::prelude::*;
use serde_json::json;

use tracelocate::ata::{
    correlate_evidence, parse_backtrace, parse_sanitizer_report, run_sanitized_ref, ReplayBackend,
    Revision,
};
use tracelocate::chunker::{chunk_file, chunk_source_tree, ChunkSet, ChunkerConfig};
use tracelocate::corpus::{classify_crash, load_manifest, CaseEntry};
use tracelocate::diffindex::{
    build_diff_index, mark_diff, DiffIndex, FileIndex, GroundTruth, LineEntry, Role,
};
use tracelocate::llm::extract_candidates;
use tracelocate::metrics::compare_case;
use tracelocate::orchestrator::{run_case, RunConfig};
use tracelocate::verifier::{reverify, verify_candidates, AnchoredBy};
use tracelocate::{Candidate, Error};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn toy_cases() -> Vec<CaseEntry> {
    load_manifest(&fixtures().join("toyproj/manifest.toml")).unwrap()
}

struct Truth {
    chunks: ChunkSet,
    marked: ChunkSet,
    index: DiffIndex,
    gt: GroundTruth,
}

fn truth(case: &CaseEntry) -> Truth {
    let chunks = chunk_source_tree(&case.source_root).unwrap();
    let index = build_diff_index(&case.load_patch().unwrap());
    let marked = mark_diff(&chunks, &index).chunks;
    let gt = GroundTruth::from_index(&index);
    Truth { chunks, marked, index, gt }
}

// ---- chunker ----

fn c_program() -> impl Strategy<Value = String> {
    let gap = prop_oneof![
        Just(String::new()),
        Just("\n".to_string()),
        Just("/* { not a body } */\n".to_string()),
        Just("// trailing }\n\n".to_string()),
        Just("static int g_counter;\n".to_string()),
        Just("#define LIMIT 8\n".to_string()),
        Just("static const char *banner = \"{ }\";\n\n".to_string()),
    ];
    let body = prop::collection::vec(
        prop_oneof![
            Just("    x += 1;\n"),
            Just("    if (x > 3) {\n        x = 0;\n    }\n"),
            Just("    /* } */\n"),
            Just("    const char *s = \"}{\";\n    (void)s;\n"),
            Just("\n"),
        ],
        0..5,
    );
    let func = (any::<bool>(), any::<bool>(), body);
    prop::collection::vec((gap, func), 1..8).prop_map(|parts| {
        let mut out = String::from("#include <stdio.h>\n\n");
        for (i, (gap, (is_static, split_sig, body))) in parts.into_iter().enumerate() {
            out.push_str(&gap);
            if is_static {
                out.push_str("static ");
            }
            if split_sig {
                out.push_str(&format!("int\nfn_{i}(int x,\n      int y)\n{{\n"));
            } else {
                out.push_str(&format!("int fn_{i}(int x, int y) {{\n"));
            }
            for line in body {
                out.push_str(line);
            }
            out.push_str("    return x + y;\n}\n");
        }
        out
    })
}

fn reassemble(text: &str, chunks: &[tracelocate::chunker::Chunk]) -> String {
    let lines: Vec<&str> = text.split_inclusive('\n').collect();
    let mut out = String::new();
    let mut next = 1u32;
    for c in chunks {
        assert!(c.start_line >= next, "chunks overlap at {}", c.start_line);
        for l in next..c.start_line {
            out.push_str(lines[l as usize - 1]);
        }
        out.push_str(&c.source);
        next = c.end_line + 1;
    }
    for l in next as usize..=lines.len() {
        out.push_str(lines[l - 1]);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chunks_reassemble_to_the_file(text in c_program()) {
        let cfg = ChunkerConfig::default();
        let chunks = chunk_file("gen.c", &text, &cfg);
        prop_assert_eq!(reassemble(&text, &chunks), text.clone());
        prop_assert_eq!(chunk_file("gen.c", &text, &cfg), chunks.clone());
        let n = text.matches("int fn_").count() + text.matches("int\nfn_").count();
        prop_assert_eq!(chunks.iter().filter(|c| c.is_function()).count(), n);
    }
}

// ---- diff marking ----

fn random_index(chunks: &ChunkSet) -> impl Strategy<Value = DiffIndex> {
    let spans: Vec<(String, u32)> = chunks
        .files()
        .into_iter()
        .map(|f| {
            let last = chunks.in_file(f).iter().map(|c| c.end_line).max().unwrap_or(1);
            (f.to_string(), last + 3)
        })
        .collect();
    let picks = spans
        .into_iter()
        .map(|(f, max)| prop::collection::btree_set(1..=max, 0..6).prop_map(move |s| (f.clone(), s)))
        .collect::<Vec<_>>();
    picks.prop_map(|per_file| {
        let mut index = DiffIndex::default();
        for (f, lines) in per_file {
            if lines.is_empty() {
                continue;
            }
            let mut fi = FileIndex::default();
            for l in lines {
                fi.per_line.insert(l, LineEntry { roles: vec![Role::Deleted], matched: false });
            }
            index.files.insert(f, fi);
        }
        index
    })
}

#[test]
fn mark_diff_is_idempotent_on_fixture_patches() {
    for case in toy_cases() {
        let t = truth(&case);
        let again = mark_diff(&t.marked, &t.index);
        assert_eq!(again.chunks, t.marked, "{}", case.id);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mark_diff_is_idempotent(index in random_index(&chunk_source_tree(&fixtures().join("chunk_corpus")).unwrap())) {
        let chunks = chunk_source_tree(&fixtures().join("chunk_corpus")).unwrap();
        let once = mark_diff(&chunks, &index);
        let twice = mark_diff(&once.chunks, &index);
        prop_assert_eq!(&twice.chunks, &once.chunks);
        prop_assert_eq!(twice.uncovered, once.uncovered);
        let gt = GroundTruth::from_index(&index);
        for c in once.chunks.iter() {
            let hit = gt.lines().any(|(f, l)| f == c.file_path && c.contains(l));
            prop_assert_eq!(c.diff, hit);
        }
    }
}

// ---- crash traces ----

fn logs() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(fixtures().join("sanitizer_logs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "log"))
        .collect();
    for case in ["toy-hbo", "toy-uaf"] {
        for suffix in ["san.log", "gdb.log"] {
            out.push(fixtures().join(format!("toyproj/replay-exec/{case}.{suffix}")));
        }
    }
    out.sort();
    out
}

#[test]
fn frame_indices_are_dense() {
    let mut checked = 0;
    for p in logs() {
        let text = std::fs::read_to_string(&p).unwrap();
        let name = p.file_name().unwrap().to_string_lossy().into_owned();
        let mut traces = Vec::new();
        if name.contains("gdb") {
            traces.push(parse_backtrace(&text));
        } else {
            match parse_sanitizer_report(&text, None) {
                Ok(r) => {
                    traces.push(r.frames);
                    traces.extend(r.alloc_frames);
                    traces.extend(r.free_frames);
                }
                Err(Error::NoCrashDetected) => continue,
                Err(e) => panic!("{name}: {e}"),
            }
        }
        for frames in traces {
            assert!(!frames.is_empty(), "{name}");
            for (k, f) in frames.iter().enumerate() {
                assert_eq!(f.index as usize, k, "{name}");
            }
            checked += 1;
        }
    }
    assert!(checked >= 10, "only {checked} traces");
}

#[test]
fn evidence_weight_falls_with_frame_depth() {
    for case in toy_cases() {
        let t = truth(&case);
        let text = std::fs::read_to_string(
            fixtures().join(format!("toyproj/replay-exec/{}.san.log", case.id)),
        )
        .unwrap();
        let mut report = parse_sanitizer_report(&text, None).unwrap();
        report.resolve_paths(&case.source_root);
        let g = correlate_evidence(&report, &t.chunks);
        assert!(!g.edges.is_empty(), "{}", case.id);
        let mut by_source: BTreeMap<String, Vec<(u32, f64)>> = BTreeMap::new();
        for e in &g.edges {
            assert!(e.weight > 0.0);
            by_source
                .entry(format!("{:?}", e.frame.source))
                .or_default()
                .push((e.frame.index, e.weight));
        }
        for (src, mut edges) in by_source {
            edges.sort_by_key(|e| e.0);
            for w in edges.windows(2) {
                if w[0].0 < w[1].0 {
                    assert!(w[0].1 > w[1].1, "{} {src}: {w:?}", case.id);
                }
            }
        }
    }
}

#[test]
fn replayed_revisions_classify_as_recorded() {
    for case in toy_cases() {
        let mut backend = ReplayBackend::new(fixtures().join("toyproj/replay-exec"), &case.id);
        let patched = run_sanitized_ref(&mut backend, &case, Revision::Patched).unwrap();
        assert!(
            matches!(parse_sanitizer_report(&patched, None), Err(Error::NoCrashDetected)),
            "{} patched still crashes",
            case.id
        );
        let vuln = run_sanitized_ref(&mut backend, &case, Revision::Vulnerable).unwrap();
        let report = parse_sanitizer_report(&vuln, None).unwrap();
        assert_eq!(report.family, classify_crash(&case.crash_type).unwrap(), "{}", case.id);
    }
}

// ---- extraction ----

#[derive(Debug, Clone)]
struct Rec {
    file: String,
    symbol: Option<String>,
    start: u32,
    len: u32,
    confidence: f64,
    rationale: String,
}

fn rec() -> impl Strategy<Value = Rec> {
    (
        prop::sample::select(vec!["src/a.c", "lib/b.cc", "c.h", "deep/x/y.cpp"]),
        prop::option::of("[a-z_]{1,10}"),
        1u32..500,
        0u32..20,
        0.0f64..=1.0,
        "[ -~]{0,40}",
    )
        .prop_map(|(file, symbol, start, len, confidence, rationale)| Rec {
            file: file.to_string(),
            symbol,
            start,
            len,
            confidence,
            rationale,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn extraction_never_fabricates(
        recs in prop::collection::vec(rec(), 0..6),
        before in prop::sample::select(vec!["", "Here is my answer:\n", "Frame [0] points at it (see [note]).\n```json\n"]),
        after in prop::sample::select(vec!["", "\n```", "\nHope [this] helps."]),
    ) {
        let arr: Vec<serde_json::Value> = recs
            .iter()
            .map(|r| json!({
                "file": r.file,
                "symbol": r.symbol,
                "start_line": r.start,
                "end_line": r.start + r.len,
                "confidence": r.confidence,
                "rationale": r.rationale,
            }))
            .collect();
        let raw = format!("{before}{}{after}", serde_json::to_string(&arr).unwrap());
        let got = extract_candidates(&raw, None).unwrap();
        prop_assert_eq!(got.len(), recs.len());
        for (c, r) in got.iter().zip(&recs) {
            prop_assert_eq!(&c.file, &r.file);
            prop_assert_eq!(&c.symbol, &r.symbol);
            prop_assert_eq!(c.interval(), (r.start, r.start + r.len));
            prop_assert_eq!(c.confidence, r.confidence);
            prop_assert_eq!(&c.rationale, &r.rationale);
            prop_assert!(!c.verified);
        }
    }
}

// ---- verifier and metrics ----

fn toy_candidate() -> impl Strategy<Value = Candidate> {
    (
        prop::sample::select(vec!["src/parse.c", "parse.c", "src/main.c", "src/util.c", "src/ghost.c"]),
        prop::option::of(prop::sample::select(vec!["parse_hdr", "main", "read_file", "nosuch"])),
        1u32..40,
        0u32..4,
        0.0f64..=1.0,
        prop::sample::select(vec![
            "",
            "`memcpy(out, buf + 4, len);`",
            "`return 0;` is never reached",
            "`parse_hdr`",
            "see `free(s);`",
        ]),
    )
        .prop_map(|(file, sym, start, len, conf, why)| {
            let mut c = Candidate::new(file, start, start + len, conf).with_rationale(why);
            if let Some(s) = sym {
                c = c.with_symbol(s);
            }
            c
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn verification_keeps_order_and_is_stable(cands in prop::collection::vec(toy_candidate(), 0..12)) {
        let case = &toy_cases()[0];
        let t = truth(case);
        let v = verify_candidates(&cands, &t.chunks);
        prop_assert_eq!(v.len(), cands.len());
        for (out, orig) in v.iter().zip(&cands) {
            prop_assert_eq!(&out.candidate.rationale, &orig.rationale);
            prop_assert_eq!(out.candidate.confidence, orig.confidence);
            match out.anchored_by {
                AnchoredBy::SymbolSnippet => prop_assert_eq!(out.candidate.line_count(), orig.line_count()),
                AnchoredBy::FallbackOriginal => {
                    prop_assert!(!out.candidate.verified);
                    prop_assert_eq!(out.candidate.interval(), orig.interval());
                }
                AnchoredBy::SymbolOnly => prop_assert!(out.candidate.verified),
            }
            if out.candidate.verified {
                let (s, e) = out.candidate.interval();
                let chunk = t.chunks.lookup(&out.candidate.file, s).unwrap();
                prop_assert!(chunk.contains(e));
            }
        }
        prop_assert_eq!(reverify(&v, &t.chunks), v);
    }

    #[test]
    fn metrics_are_order_and_duplicate_blind(
        cands in prop::collection::vec(toy_candidate(), 0..10),
        seed in any::<u64>(),
        pre in prop::collection::vec(any::<bool>(), 0..8),
    ) {
        use rand::{seq::SliceRandom, SeedableRng};
        let case = &toy_cases()[0];
        let t = truth(case);
        let v = verify_candidates(&cands, &t.chunks);

        let mut shuffled = v.clone();
        shuffled.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        let mut doubled = v.clone();
        doubled.extend(v.iter().cloned());

        let (m, idx) = compare_case(&v, &t.marked, &t.gt, &t.index, 0.5).unwrap();
        let (ms, _) = compare_case(&shuffled, &t.marked, &t.gt, &t.index, 0.5).unwrap();
        let (md, _) = compare_case(&doubled, &t.marked, &t.gt, &t.index, 0.5).unwrap();
        prop_assert_eq!(&m, &ms);
        prop_assert_eq!(&m, &md);
        if m.strict == 1.0 {
            prop_assert_eq!(m.localization, 1.0);
        }
        prop_assert!(m.localization <= 1.0 && m.detection <= 1.0);

        // flags set beforehand survive scoring
        let mut seeded = t.index.clone();
        let lines: Vec<(String, u32)> = t.gt.lines().map(|(f, l)| (f.to_string(), l)).collect();
        for ((f, l), on) in lines.iter().zip(pre) {
            if on {
                seeded.mark_matched(f, *l);
            }
        }
        let (_, after) = compare_case(&v, &t.marked, &t.gt, &seeded, 0.5).unwrap();
        for (f, fi) in &seeded.files {
            for (l, e) in &fi.per_line {
                let a = &after.files[f].per_line[l];
                prop_assert!(!e.matched || a.matched);
                prop_assert!(!idx.files[f].per_line[l].matched || a.matched);
            }
        }
    }
}

// ---- rounds ----

#[test]
fn later_rounds_contain_earlier_candidates() {
    let cfg = RunConfig::default();
    let provider = tracelocate::llm::ReplayProvider::new(fixtures().join("toyproj/replay-llm"), "replay");
    for case in toy_cases() {
        let dir = tempfile::tempdir().unwrap();
        let mut backend = ReplayBackend::new(fixtures().join("toyproj/replay-exec"), &case.id);
        let run = run_case(&case, &cfg, &mut backend, &provider, Some(dir.path()));
        assert!(!run.summaries.is_empty(), "{}", case.id);
        let mut rounds: Vec<Vec<Candidate>> = Vec::new();
        for r in 1..=run.summaries.len() {
            let p = dir.path().join(&case.id).join(r.to_string()).join("candidates.json");
            rounds.push(serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap());
        }
        for pair in rounds.windows(2) {
            for c in &pair[0] {
                assert!(
                    pair[1].iter().any(|d| d.file == c.file
                        && d.start_line <= c.start_line
                        && c.end_line <= d.end_line),
                    "{}: {c:?} dropped",
                    case.id
                );
            }
        }
        for w in run.summaries.windows(2) {
            assert!(w[0].verified_count <= w[1].verified_count);
            assert!(w[0].budget_spent <= w[1].budget_spent);
        }
    }
}
