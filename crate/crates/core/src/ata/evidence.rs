//! Evidence graph linking stack frames to chunks, and seed ranking.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CrashReport, Frame};
use crate::candidate::{Candidate, CandidateSource};
use crate::chunker::ChunkSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceSource {
    CrashTrace,
    AllocTrace,
    FreeTrace,
    Debugger,
}

impl EvidenceSource {
    fn scale(self) -> f64 {
        match self {
            EvidenceSource::AllocTrace | EvidenceSource::FreeTrace => 0.5,
            _ => 1.0,
        }
    }
}

/// A frame identified by its trace and its index after runtime frames are
/// removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FrameRef {
    pub source: EvidenceSource,
    pub index: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceEdge {
    pub frame: FrameRef,
    pub function: String,
    pub file: String,
    pub line: u32,
    pub chunk_index: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvidenceGraph {
    pub edges: Vec<EvidenceEdge>,
    pub unattached_frames: Vec<FrameRef>,
}

impl EvidenceGraph {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn merge(&mut self, other: EvidenceGraph) {
        self.edges.extend(other.edges);
        self.unattached_frames.extend(other.unattached_frames);
    }

    fn add_trace(&mut self, source: EvidenceSource, frames: &[Frame], chunks: &ChunkSet) {
        let kept = frames.iter().filter(|f| !f.is_sanitizer_runtime());
        for (i, frame) in kept.enumerate() {
            if !frame.in_project {
                continue;
            }
            let fref = FrameRef {
                source,
                index: i as u32,
            };
            let (Some(file), Some(line)) = (frame.file.as_deref(), frame.line) else {
                self.unattached_frames.push(fref);
                continue;
            };
            match chunks.lookup(file, line) {
                Some(chunk) => self.edges.push(EvidenceEdge {
                    frame: fref,
                    function: frame.function.clone(),
                    file: file.to_string(),
                    line,
                    chunk_index: chunk.index,
                    weight: source.scale() / (1.0 + i as f64),
                }),
                None => self.unattached_frames.push(fref),
            }
        }
    }
}

/// Links the crash, allocation and free traces of `report` to chunks.
///
/// Frames must already carry root-relative paths and `in_project` flags
/// (see [`CrashReport::resolve_paths`]).
pub fn correlate_evidence(report: &CrashReport, chunks: &ChunkSet) -> EvidenceGraph {
    let mut g = EvidenceGraph::default();
    g.add_trace(EvidenceSource::CrashTrace, &report.frames, chunks);
    if let Some(f) = &report.alloc_frames {
        g.add_trace(EvidenceSource::AllocTrace, f, chunks);
    }
    if let Some(f) = &report.free_frames {
        g.add_trace(EvidenceSource::FreeTrace, f, chunks);
    }
    g
}

/// Links debugger backtrace frames to chunks.
pub fn correlate_backtrace(frames: &[Frame], chunks: &ChunkSet) -> EvidenceGraph {
    let mut g = EvidenceGraph::default();
    g.add_trace(EvidenceSource::Debugger, frames, chunks);
    g
}

/// One candidate per chunk with evidence, spanning the chunk, scored by its
/// summed edge weight relative to the best chunk.
pub fn seed_candidates(
    graph: &EvidenceGraph,
    chunks: &ChunkSet,
    top_n: usize,
) -> Result<Vec<Candidate>> {
    if top_n == 0 {
        return Err(Error::ContractViolation("top_n must be at least 1".into()));
    }
    if graph.edges.is_empty() {
        return Err(Error::EmptyEvidence);
    }
    let mut sums: BTreeMap<usize, (f64, Vec<&EvidenceEdge>)> = BTreeMap::new();
    for e in &graph.edges {
        let slot = sums.entry(e.chunk_index).or_default();
        slot.0 += e.weight;
        slot.1.push(e);
    }
    let max = sums.values().map(|(s, _)| *s).fold(0.0, f64::max);
    let mut out: Vec<Candidate> = sums
        .into_iter()
        .filter_map(|(idx, (sum, edges))| {
            let chunk = chunks.get(idx)?;
            let rationale = edges
                .iter()
                .map(|e| format!("{:?}#{} {} at {}:{}", e.frame.source, e.frame.index, e.function, e.file, e.line))
                .collect::<Vec<_>>()
                .join("; ");
            Some(
                Candidate::new(&chunk.file_path, chunk.start_line, chunk.end_line, sum / max)
                    .with_symbol(&chunk.symbol)
                    .with_rationale(rationale)
                    .with_source(CandidateSource::AtaSeed),
            )
        })
        .collect();
    out.sort_by(|a, b| {
        b.confidence
            .total_cmp(&a.confidence)
            .then_with(|| a.file.cmp(&b.file))
            .then_with(|| a.start_line.cmp(&b.start_line))
    });
    out.truncate(top_n);
    Ok(out)
}
