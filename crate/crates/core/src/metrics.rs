//! Detection, localization and strict-localization scoring, and benchmark
//! aggregation by crash family.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::candidate::Candidate;
use crate::chunker::ChunkSet;
use crate::corpus::{round1, CaseEntry, CrashFamily};
use crate::diffindex::{DiffIndex, GroundTruth};
use crate::error::{Error, Result};

pub const DEFAULT_TAU: f64 = 0.5;

/// `hit / total` kept as integers so callers can compare exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub hit: usize,
    pub total: usize,
}

impl Ratio {
    pub fn value(&self) -> f64 {
        self.hit as f64 / self.total as f64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub diff_chunks: usize,
    pub hit_chunks: usize,
    pub gt_lines: usize,
    pub covered_lines: usize,
    pub gt_intervals: usize,
    pub exact_intervals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseMetrics {
    pub detection: f64,
    pub localization: f64,
    pub strict: f64,
    pub solved: bool,
    pub counts: Counts,
}

/// Share of diff chunks overlapped (by at least one line) by a candidate in
/// the same file.
pub fn detection_rate<C: AsRef<Candidate>>(cands: &[C], marked: &ChunkSet) -> Result<Ratio> {
    let diff: Vec<_> = marked.diff_chunks().collect();
    if diff.is_empty() {
        return Err(Error::NoGroundTruth);
    }
    let hit = diff
        .iter()
        .filter(|ch| {
            cands
                .iter()
                .any(|c| c.as_ref().overlaps(&ch.file_path, ch.start_line, ch.end_line))
        })
        .count();
    Ok(Ratio {
        hit,
        total: diff.len(),
    })
}

/// Lines of `gt` covered by some candidate interval in the same file.
pub fn covered_lines<'g, C: AsRef<Candidate>>(
    cands: &[C],
    gt: &'g GroundTruth,
) -> BTreeSet<(&'g str, u32)> {
    gt.lines()
        .filter(|(f, l)| cands.iter().any(|c| c.as_ref().covers(f, *l)))
        .collect()
}

pub fn localization_rate<C: AsRef<Candidate>>(cands: &[C], gt: &GroundTruth) -> Result<Ratio> {
    let total = gt.line_count();
    if total == 0 {
        return Err(Error::NoGroundTruth);
    }
    Ok(Ratio {
        hit: covered_lines(cands, gt).len(),
        total,
    })
}

/// Ground-truth intervals matched exactly by some candidate.
pub fn strict_localization<C: AsRef<Candidate>>(cands: &[C], gt: &GroundTruth) -> Result<Ratio> {
    let total = gt.interval_count();
    if total == 0 {
        return Err(Error::NoGroundTruth);
    }
    let hit = gt
        .intervals()
        .filter(|(f, s, e)| {
            cands.iter().any(|c| {
                let c = c.as_ref();
                c.file == *f && c.start_line == *s && c.end_line == *e
            })
        })
        .count();
    Ok(Ratio { hit, total })
}

/// Scores one case. The returned index has `matched` set for every covered
/// ground-truth line; flags already set stay set.
pub fn compare_case<C: AsRef<Candidate>>(
    cands: &[C],
    marked: &ChunkSet,
    gt: &GroundTruth,
    index: &DiffIndex,
    tau: f64,
) -> Result<(CaseMetrics, DiffIndex)> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::ContractViolation(format!("tau {tau} outside [0,1]")));
    }
    let det = detection_rate(cands, marked)?;
    let loc = localization_rate(cands, gt)?;
    let strict = strict_localization(cands, gt)?;
    let mut updated = index.clone();
    for (f, l) in covered_lines(cands, gt) {
        updated.mark_matched(f, l);
    }
    let localization = loc.value();
    Ok((
        CaseMetrics {
            detection: det.value(),
            localization,
            strict: strict.value(),
            solved: localization >= tau,
            counts: Counts {
                diff_chunks: det.total,
                hit_chunks: det.hit,
                gt_lines: loc.total,
                covered_lines: loc.hit,
                gt_intervals: strict.total,
                exact_intervals: strict.hit,
            },
        },
        updated,
    ))
}

/// One case's scores with the identity needed to aggregate them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRow {
    pub case_id: String,
    pub crash_type: String,
    pub family: CrashFamily,
    pub metrics: CaseMetrics,
}

impl CaseRow {
    pub fn new(case: &CaseEntry, metrics: CaseMetrics) -> Result<Self> {
        Ok(CaseRow {
            case_id: case.id.clone(),
            crash_type: case.crash_type.clone(),
            family: case.family()?,
            metrics,
        })
    }
}

/// Mean scores in percent, rounded to 0.1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub cases: usize,
    pub detection: f64,
    pub localization: f64,
    pub strict: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaCell {
    pub detection: f64,
    pub localization: f64,
    pub strict: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deltas {
    pub families: BTreeMap<CrashFamily, DeltaCell>,
    pub overall: DeltaCell,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub families: BTreeMap<CrashFamily, Cell>,
    pub overall: Cell,
    pub rows: Vec<CaseRow>,
    pub deltas: Option<Deltas>,
}

fn mean_cell<'a>(rows: impl Iterator<Item = &'a CaseRow>) -> Cell {
    let (mut n, mut d, mut l, mut s) = (0usize, 0.0, 0.0, 0.0);
    for r in rows {
        n += 1;
        d += r.metrics.detection;
        l += r.metrics.localization;
        s += r.metrics.strict;
    }
    let pct = |x: f64| if n == 0 { 0.0 } else { round1(100.0 * x / n as f64) };
    Cell {
        cases: n,
        detection: pct(d),
        localization: pct(l),
        strict: pct(s),
    }
}

fn delta(a: &Cell, b: &Cell) -> DeltaCell {
    DeltaCell {
        detection: round1(a.detection - b.detection),
        localization: round1(a.localization - b.localization),
        strict: round1(a.strict - b.strict),
    }
}

pub fn aggregate_report(rows: &[CaseRow], baseline: Option<&BenchmarkReport>) -> BenchmarkReport {
    let mut rows = rows.to_vec();
    rows.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    let families: BTreeMap<CrashFamily, Cell> = CrashFamily::ALL
        .iter()
        .filter_map(|fam| {
            let cell = mean_cell(rows.iter().filter(|r| r.family == *fam));
            (cell.cases > 0).then_some((*fam, cell))
        })
        .collect();
    let overall = mean_cell(rows.iter());
    let deltas = baseline.map(|b| Deltas {
        families: families
            .iter()
            .filter_map(|(fam, cell)| Some((*fam, delta(cell, b.families.get(fam)?))))
            .collect(),
        overall: delta(&overall, &b.overall),
    });
    BenchmarkReport {
        families,
        overall,
        rows,
        deltas,
    }
}

/// Convenience over [`aggregate_report`] for in-memory case entries.
pub fn aggregate_cases(
    results: &[(CaseEntry, CaseMetrics)],
    baseline: Option<&BenchmarkReport>,
) -> Result<BenchmarkReport> {
    let rows = results
        .iter()
        .map(|(c, m)| CaseRow::new(c, *m))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate_report(&rows, baseline))
}

impl BenchmarkReport {
    /// Aligned text table: one Det/Loc column pair per family plus overall,
    /// a delta line when a baseline was given, then per-case rows.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let mut head1 = format!("{:<12}", "");
        let mut head2 = format!("{:<12}", "");
        let mut line = format!("{:<12}", "mean %");
        let mut dline = format!("{:<12}", "delta");
        let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.1}"));
        let fmt_d = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:+.1}"));
        for fam in CrashFamily::ALL {
            let _ = write!(head1, "{:<14}", fam.column_label());
            let _ = write!(head2, "{:<7}{:<7}", "Det", "Loc");
            let c = self.families.get(&fam);
            let _ = write!(
                line,
                "{:<7}{:<7}",
                fmt(c.map(|c| c.detection)),
                fmt(c.map(|c| c.localization))
            );
            let d = self.deltas.as_ref().and_then(|d| d.families.get(&fam));
            let _ = write!(
                dline,
                "{:<7}{:<7}",
                fmt_d(d.map(|d| d.detection)),
                fmt_d(d.map(|d| d.localization))
            );
        }
        let _ = write!(head1, "{:<14}", "Overall");
        let _ = write!(head2, "{:<7}{:<7}", "Det", "Loc");
        let _ = write!(
            line,
            "{:<7}{:<7}",
            fmt(Some(self.overall.detection)),
            fmt(Some(self.overall.localization))
        );
        if let Some(d) = &self.deltas {
            let _ = write!(
                dline,
                "{:<7}{:<7}",
                fmt_d(Some(d.overall.detection)),
                fmt_d(Some(d.overall.localization))
            );
        }
        for l in [head1, head2, line] {
            out.push_str(l.trim_end());
            out.push('\n');
        }
        if self.deltas.is_some() {
            out.push_str(dline.trim_end());
            out.push('\n');
        }
        if !self.rows.is_empty() {
            out.push('\n');
            let _ = writeln!(
                out,
                "{:<24}{:<12}{:>8}{:>8}{:>8}  solved",
                "case", "family", "det", "loc", "strict"
            );
            for r in &self.rows {
                let _ = writeln!(
                    out,
                    "{:<24}{:<12}{:>8.3}{:>8.3}{:>8.3}  {}",
                    r.case_id,
                    r.family.column_label(),
                    r.metrics.detection,
                    r.metrics.localization,
                    r.metrics.strict,
                    if r.metrics.solved { "yes" } else { "no" }
                );
            }
        }
        out
    }
}
