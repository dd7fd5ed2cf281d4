//! The planner-executor loop that runs one case end to end.
//!
//! A run collects runtime evidence, asks the model for candidate locations
//! (optionally several samples merged), verifies them against the source,
//! scores them, and keeps refining while the planner sees progress and the
//! budget allows. Every failure is folded into a [`RunOutcome`].

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ata::{
    self, correlate_backtrace, correlate_evidence, parse_backtrace, parse_sanitizer_report,
    run_debugger_script, run_sanitized, seed_candidates, AnalyzerCommand, CrashReport,
    EvidenceGraph, ExecBackend, Finding, Frame, SourceResolver,
};
use crate::candidate::Candidate;
use crate::chunker::{chunk_source_tree_with, numbered_snapshot, ChunkSet, ChunkerConfig, SourceSlice};
use crate::corpus::CaseEntry;
use crate::diffindex::{build_diff_index, mark_diff, DiffIndex, GroundTruth};
use crate::error::{Error, Result};
use crate::llm::{
    build_prompt, diverge, merge_all, BudgetLedger, CompletionParams, Divergence, LlmProvider,
    Price, Prompt, PromptInputs, PromptMode,
};
use crate::metrics::{compare_case, CaseMetrics, CaseRow, Counts, DEFAULT_TAU};
use crate::verifier::{snapshot_index, verify_candidates, VerifiedCandidate};

/// Smallest best-confidence gain that counts as progress.
pub const CONFIDENCE_EPSILON: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReasoningEffort {
    Low,
    Medium,
    High,
}

impl ReasoningEffort {
    pub fn as_str(self) -> &'static str {
        match self {
            ReasoningEffort::Low => "low",
            ReasoningEffort::Medium => "medium",
            ReasoningEffort::High => "high",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: String,
    pub temperature: f64,
    pub top_p: f64,
    pub seed: u64,
    pub reasoning_effort: Option<ReasoningEffort>,
    pub k_divergence: usize,
    pub max_rounds: u32,
    pub tau_solved: f64,
    pub budget_usd: f64,
    pub ata_enabled: bool,
    pub refinement_enabled: bool,
    pub divergence_enabled: bool,
    pub static_findings_enabled: bool,
    pub debugger_enabled: bool,
    pub top_n_seeds: usize,
    pub slice_context: u32,
    pub refine_top_m: usize,
    /// USD per 1K prompt / completion tokens, by model name.
    pub prices: BTreeMap<String, Price>,
    pub analyzers: Vec<AnalyzerCommand>,
    pub chunker: ChunkerConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mut prices = BTreeMap::new();
        prices.insert("replay".to_string(), Price::new(0.0, 0.0));
        RunConfig {
            model: "replay".to_string(),
            temperature: 0.2,
            top_p: 1.0,
            seed: 0,
            reasoning_effort: None,
            k_divergence: 3,
            max_rounds: 3,
            tau_solved: DEFAULT_TAU,
            budget_usd: 1.0,
            ata_enabled: true,
            refinement_enabled: true,
            divergence_enabled: true,
            static_findings_enabled: false,
            debugger_enabled: true,
            top_n_seeds: 10,
            slice_context: 10,
            refine_top_m: 5,
            prices,
            analyzers: Vec::new(),
            chunker: ChunkerConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::ContractViolation(m.to_string()));
        if self.max_rounds < 1 {
            return bad("max_rounds must be at least 1");
        }
        if self.k_divergence < 1 {
            return bad("k_divergence must be at least 1");
        }
        if self.budget_usd.is_nan() || self.budget_usd <= 0.0 {
            return bad("budget_usd must be positive");
        }
        if !(0.0..=1.0).contains(&self.tau_solved) {
            return bad("tau_solved must be in [0,1]");
        }
        if self.top_n_seeds < 1 || self.refine_top_m < 1 {
            return bad("top_n_seeds and refine_top_m must be at least 1");
        }
        Ok(())
    }

    fn params(&self) -> CompletionParams {
        CompletionParams {
            temperature: self.temperature,
            top_p: self.top_p,
            seed: self.seed,
            reasoning_effort: self.reasoning_effort.map(|e| e.as_str().to_string()),
        }
    }

    fn samples(&self) -> usize {
        if self.divergence_enabled {
            self.k_divergence
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Continue,
    Stop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundSummary {
    pub round: u32,
    /// Raw candidates added to the pool this round.
    pub new_candidates: usize,
    /// Verified locations that did not exist before this round.
    pub new_verified: usize,
    pub verified_count: usize,
    pub best_confidence: f64,
    pub budget_spent: f64,
    pub decision: Decision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RunOutcome {
    Success,
    BudgetExceeded,
    ExecutionError,
    NoActionableCandidates,
    DataOperationFailure,
}

impl RunOutcome {
    pub fn is_success(self) -> bool {
        self == RunOutcome::Success
    }
}

/// Continue while rounds remain, the budget holds, and the last round made
/// progress (a new verified location or a confidence gain of at least
/// [`CONFIDENCE_EPSILON`]).
pub fn planner_decide(summaries: &[RoundSummary], cfg: &RunConfig) -> Decision {
    let Some(last) = summaries.last() else {
        return Decision::Stop;
    };
    let prev_best = summaries
        .len()
        .checked_sub(2)
        .map_or(0.0, |i| summaries[i].best_confidence);
    let progressed = last.new_verified >= 1
        || last.best_confidence - prev_best >= CONFIDENCE_EPSILON - 1e-12;
    if last.round < cfg.max_rounds && last.budget_spent <= cfg.budget_usd && progressed {
        Decision::Continue
    } else {
        Decision::Stop
    }
}

/// Failure flags gathered during a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunFlags {
    pub budget_exceeded: bool,
    pub execution_error: Option<String>,
    pub data_failure: Option<String>,
    /// Candidates decoded from model output, across all rounds.
    pub decoded_candidates: usize,
    pub verified_candidates: usize,
    pub metrics_computed: bool,
}

/// Precedence: BudgetExceeded, ExecutionError, DataOperationFailure,
/// NoActionableCandidates, Success.
pub fn classify_outcome(flags: &RunFlags) -> RunOutcome {
    if flags.budget_exceeded {
        RunOutcome::BudgetExceeded
    } else if flags.execution_error.is_some() {
        RunOutcome::ExecutionError
    } else if flags.data_failure.is_some() {
        RunOutcome::DataOperationFailure
    } else if flags.decoded_candidates == 0
        || flags.verified_candidates == 0
        || !flags.metrics_computed
    {
        RunOutcome::NoActionableCandidates
    } else {
        RunOutcome::Success
    }
}

/// Everything a finished case run reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRun {
    pub case_id: String,
    pub outcome: RunOutcome,
    pub metrics: CaseMetrics,
    pub summaries: Vec<RoundSummary>,
    pub flags: RunFlags,
    pub notices: Vec<String>,
    pub spent_usd: f64,
    pub llm_calls: u64,
    pub candidates: Vec<VerifiedCandidate>,
}

/// Ground truth and the marked chunk set for a case. Never shown to the
/// model.
struct Truth {
    marked: ChunkSet,
    gt: GroundTruth,
    index: DiffIndex,
}

struct Evidence {
    report: Option<CrashReport>,
    backtrace: Vec<Frame>,
    findings: Vec<Finding>,
    seeds: Vec<Candidate>,
    graph: EvidenceGraph,
}

struct State<'a> {
    case: &'a CaseEntry,
    cfg: &'a RunConfig,
    truth: Truth,
    evidence: Evidence,
    pool: Vec<Candidate>,
    verified: Vec<VerifiedCandidate>,
    metrics: Option<CaseMetrics>,
    summaries: Vec<RoundSummary>,
    flags: RunFlags,
    notices: Vec<String>,
    ledger: Mutex<BudgetLedger>,
    artifacts: Option<Artifacts>,
}

fn zero_metrics() -> CaseMetrics {
    CaseMetrics {
        detection: 0.0,
        localization: 0.0,
        strict: 0.0,
        solved: false,
        counts: Counts::default(),
    }
}

fn load_truth(case: &CaseEntry, cfg: &RunConfig) -> Result<Truth> {
    let chunks = chunk_source_tree_with(&case.source_root, &cfg.chunker)?;
    let patch = case.load_patch()?;
    let index = build_diff_index(&patch);
    let marked = mark_diff(&chunks, &index).chunks;
    let gt = GroundTruth::from_index(&index);
    if gt.line_count() == 0 || marked.diff_chunks().next().is_none() {
        return Err(Error::NoGroundTruth);
    }
    Ok(Truth { marked, gt, index })
}

/// Where per-round files go: `<root>/<case_id>/...`.
#[derive(Debug, Clone)]
pub struct Artifacts {
    dir: PathBuf,
}

impl Artifacts {
    /// Clears any earlier output for the case.
    pub fn create(root: &Path, case_id: &str) -> Result<Self> {
        let dir = root.join(case_id);
        if dir.exists() {
            std::fs::remove_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Artifacts { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn write_text(&self, rel: &str, text: &str) -> Result<()> {
        let p = self.dir.join(rel);
        if let Some(parent) = p.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        std::fs::write(&p, text).map_err(|e| Error::io(&p, e))
    }

    fn write_json<T: Serialize>(&self, rel: &str, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.write_text(rel, &s)
    }
}

impl State<'_> {
    fn spent(&self) -> (f64, u64) {
        let l = self.ledger.lock().expect("ledger lock");
        (l.spent_usd, l.calls)
    }

    fn save<T: Serialize>(&mut self, rel: &str, value: &T) {
        if let Some(a) = &self.artifacts {
            if let Err(e) = a.write_json(rel, value) {
                self.notices.push(format!("artifact {rel}: {e}"));
            }
        }
    }

    fn save_text(&mut self, rel: &str, text: &str) {
        if let Some(a) = &self.artifacts {
            if let Err(e) = a.write_text(rel, text) {
                self.notices.push(format!("artifact {rel}: {e}"));
            }
        }
    }

    fn collect_evidence(&mut self, backend: &mut dyn ExecBackend) {
        let case = self.case;
        let root = case.source_root.as_path();
        let log = match run_sanitized(backend, case) {
            Ok(log) => log,
            Err(e) => {
                self.flags.execution_error = Some(format!("sanitizer run: {e}"));
                return;
            }
        };
        let report = match parse_sanitizer_report(&log, Some(root)) {
            Ok(r) => r,
            Err(e) => {
                self.flags.data_failure = Some(format!("sanitizer report: {e}"));
                return;
            }
        };
        let mut graph = correlate_evidence(&report, &self.truth.marked);

        if self.cfg.debugger_enabled {
            let binary = Path::new(&case.vulnerable_ref);
            let commands = ata::backend::default_debugger_commands();
            match run_debugger_script(backend, binary, &case.reproducer, &commands) {
                Ok(transcript) => {
                    let mut frames = parse_backtrace(&transcript);
                    SourceResolver::new(root).resolve_all(&mut frames);
                    graph.merge(correlate_backtrace(&frames, &self.truth.marked));
                    self.evidence.backtrace = frames
                        .into_iter()
                        .filter(|f| f.in_project)
                        .collect();
                }
                Err(e) => self.notices.push(format!("debugger skipped: {e}")),
            }
        }

        let static_report = ata::collect_static_findings(
            backend,
            root,
            self.cfg.static_findings_enabled,
            &self.cfg.analyzers,
        );
        self.notices.extend(static_report.notices);
        self.evidence.findings = static_report.findings;

        match seed_candidates(&graph, &self.truth.marked, self.cfg.top_n_seeds) {
            Ok(seeds) => self.evidence.seeds = seeds,
            Err(e) => self.notices.push(format!("no seeds: {e}")),
        }
        self.evidence.graph = graph;
        self.evidence.report = Some(report);
    }

    fn file_listing(&self) -> Vec<String> {
        self.truth
            .marked
            .files()
            .into_iter()
            .map(str::to_string)
            .collect()
    }

    fn initial_prompt(&self) -> Result<Prompt> {
        if self.cfg.ata_enabled {
            build_prompt(
                PromptMode::Initial,
                &PromptInputs {
                    report: self.evidence.report.as_ref(),
                    backtrace: &self.evidence.backtrace,
                    findings: &self.evidence.findings,
                    seeds: &self.evidence.seeds,
                    ..Default::default()
                },
            )
        } else {
            let files = self.file_listing();
            build_prompt(
                PromptMode::Baseline,
                &PromptInputs {
                    file_listing: &files,
                    ..Default::default()
                },
            )
        }
    }

    fn ranked(&self) -> Vec<Candidate> {
        merge_all([self.pool.clone()])
    }

    /// Slices around the chunks of the top candidates, deduplicated.
    fn refine_slices(&self) -> (Vec<SourceSlice>, Vec<Candidate>) {
        let top: Vec<Candidate> = self
            .verified
            .iter()
            .filter(|v| v.candidate.verified)
            .take(self.cfg.refine_top_m)
            .map(|v| v.candidate.clone())
            .collect();
        let mut spans: BTreeSet<(String, u32, u32)> = BTreeSet::new();
        for c in &top {
            let chunk = self
                .truth
                .marked
                .lookup(&c.file, c.start_line)
                .or_else(|| self.truth.marked.lookup(&c.file, c.end_line));
            let (s, e) = chunk.map_or((c.start_line, c.end_line), |k| (k.start_line, k.end_line));
            spans.insert((
                c.file.clone(),
                s.saturating_sub(self.cfg.slice_context).max(1),
                e.saturating_add(self.cfg.slice_context),
            ));
        }
        let mut slices = Vec::new();
        let mut snapshots = BTreeMap::new();
        for (file, s, e) in spans {
            let snap = match snapshots.get(&file) {
                Some(s) => s,
                None => match numbered_snapshot(&self.case.source_root, &file) {
                    Ok(snap) => snapshots.entry(file.clone()).or_insert(snap),
                    Err(_) => continue,
                },
            };
            let slice = snap.slice(s, e);
            if !slice.is_empty() {
                slices.push(slice);
            }
        }
        (slices, top)
    }

    /// One analysis round. Returns false when the round could not run.
    fn round(&mut self, provider: &dyn LlmProvider, round: u32, prompt: Prompt) -> bool {
        let dir = round.to_string();
        self.save_text(&format!("{dir}/prompt.txt"), &prompt.canonical());
        let before: BTreeSet<(String, u32, u32)> = self.verified_sites();
        let prev_pool = self.pool.len();
        let result = diverge(
            provider,
            &prompt,
            self.cfg.samples(),
            &self.cfg.params(),
            Some(&self.ledger),
        );
        let divergence: Option<Divergence> = match result {
            Ok(d) => Some(d),
            Err(Error::BudgetExceeded { .. }) => {
                self.flags.budget_exceeded = true;
                return false;
            }
            Err(Error::AllSamplesFailed(n)) => {
                self.notices.push(format!("round {round}: all {n} samples undecodable"));
                None
            }
            Err(e) => {
                self.flags.execution_error = Some(format!("model call: {e}"));
                return false;
            }
        };
        if let Some(d) = &divergence {
            for (i, s) in d.samples.iter().enumerate() {
                if let Some(text) = &s.text {
                    self.save_text(&format!("{dir}/response_{i}.txt"), text);
                }
            }
            if d.skipped_for_budget() {
                self.flags.budget_exceeded = true;
            }
            self.flags.decoded_candidates += d.candidates.len();
            self.pool.extend(d.candidates.iter().cloned());
        }
        if self.ledger.lock().expect("ledger lock").exceeded() {
            self.flags.budget_exceeded = true;
        }

        let ranked = self.ranked();
        self.verified = verify_candidates(&ranked, &self.truth.marked);
        self.flags.verified_candidates = self.verified.iter().filter(|v| v.candidate.verified).count();
        match compare_case(
            &self.verified,
            &self.truth.marked,
            &self.truth.gt,
            &self.truth.index,
            self.cfg.tau_solved,
        ) {
            Ok((m, idx)) => {
                self.metrics = Some(m);
                self.truth.index = idx;
                self.flags.metrics_computed = true;
            }
            Err(e) => self.flags.data_failure = Some(format!("scoring: {e}")),
        }

        let after = self.verified_sites();
        let (spent, _) = self.spent();
        let mut summary = RoundSummary {
            round,
            new_candidates: self.pool.len() - prev_pool,
            new_verified: after.difference(&before).count(),
            verified_count: self.flags.verified_candidates,
            best_confidence: self
                .verified
                .iter()
                .map(|v| v.candidate.confidence)
                .fold(0.0, f64::max),
            budget_spent: spent,
            decision: Decision::Stop,
        };
        self.summaries.push(summary.clone());
        let decision = if self.cfg.refinement_enabled && !self.flags.budget_exceeded {
            planner_decide(&self.summaries, self.cfg)
        } else {
            Decision::Stop
        };
        summary.decision = decision;
        *self.summaries.last_mut().expect("summary") = summary.clone();

        self.save(&format!("{dir}/candidates.json"), &ranked);
        let verified = self.verified.clone();
        self.save(&format!("{dir}/verified_locations.json"), &verified);
        self.save(&format!("{dir}/summary.json"), &summary);
        true
    }

    fn verified_sites(&self) -> BTreeSet<(String, u32, u32)> {
        self.verified
            .iter()
            .filter(|v| v.candidate.verified)
            .map(|v| (v.candidate.file.clone(), v.candidate.start_line, v.candidate.end_line))
            .collect()
    }

    fn finish(mut self) -> CaseRun {
        let outcome = classify_outcome(&self.flags);
        let metrics = self.metrics.unwrap_or_else(zero_metrics);
        let (spent, calls) = self.spent();
        let run = CaseRun {
            case_id: self.case.id.clone(),
            outcome,
            metrics,
            summaries: self.summaries.clone(),
            flags: self.flags.clone(),
            notices: self.notices.clone(),
            spent_usd: spent,
            llm_calls: calls,
            candidates: self.verified.clone(),
        };
        if let Ok(row) = CaseRow::new(self.case, metrics) {
            self.save("metrics.json", &row);
        }
        self.save("outcome.json", &OutcomeRecord::from(&run));
        run
    }
}

/// Contents of `outcome.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub case_id: String,
    pub outcome: RunOutcome,
    pub rounds: Vec<RoundSummary>,
    pub flags: RunFlags,
    pub notices: Vec<String>,
    pub spent_usd: f64,
    pub llm_calls: u64,
}

impl From<&CaseRun> for OutcomeRecord {
    fn from(r: &CaseRun) -> Self {
        OutcomeRecord {
            case_id: r.case_id.clone(),
            outcome: r.outcome,
            rounds: r.summaries.clone(),
            flags: r.flags.clone(),
            notices: r.notices.clone(),
            spent_usd: r.spent_usd,
            llm_calls: r.llm_calls,
        }
    }
}

fn new_state<'a>(
    case: &'a CaseEntry,
    cfg: &'a RunConfig,
    artifacts_root: Option<&Path>,
) -> std::result::Result<State<'a>, Box<CaseRun>> {
    let mut notices = Vec::new();
    let artifacts = match artifacts_root.map(|r| Artifacts::create(r, &case.id)) {
        Some(Ok(a)) => Some(a),
        Some(Err(e)) => {
            notices.push(format!("artifacts disabled: {e}"));
            None
        }
        None => None,
    };
    let mut flags = RunFlags::default();
    let truth = match cfg.validate().and_then(|_| load_truth(case, cfg)) {
        Ok(t) => t,
        Err(e) => {
            flags.data_failure = Some(e.to_string());
            Truth {
                marked: ChunkSet::default(),
                gt: GroundTruth::default(),
                index: DiffIndex::default(),
            }
        }
    };
    let ledger = BudgetLedger::new(cfg.budget_usd, cfg.prices.clone());
    if let Err(e) = ledger.price(&cfg.model) {
        flags.execution_error = Some(e.to_string());
    }
    let state = State {
        case,
        cfg,
        truth,
        evidence: Evidence {
            report: None,
            backtrace: Vec::new(),
            findings: Vec::new(),
            seeds: Vec::new(),
            graph: EvidenceGraph::default(),
        },
        pool: Vec::new(),
        verified: Vec::new(),
        metrics: None,
        summaries: Vec::new(),
        flags,
        notices,
        ledger: Mutex::new(ledger),
        artifacts,
    };
    if state.flags.data_failure.is_some() || state.flags.execution_error.is_some() {
        return Err(Box::new(state.finish()));
    }
    Ok(state)
}

/// Runs one case end to end. Failures are reported through the outcome,
/// never as an `Err`.
pub fn run_case(
    case: &CaseEntry,
    cfg: &RunConfig,
    backend: &mut dyn ExecBackend,
    provider: &dyn LlmProvider,
    artifacts_root: Option<&Path>,
) -> CaseRun {
    let mut st = match new_state(case, cfg, artifacts_root) {
        Ok(s) => s,
        Err(done) => return *done,
    };

    if cfg.ata_enabled {
        st.collect_evidence(backend);
        if st.flags.execution_error.is_some() || st.flags.data_failure.is_some() {
            return st.finish();
        }
        st.pool.extend(st.evidence.seeds.iter().cloned());
        let evidence = (st.evidence.seeds.clone(), st.evidence.graph.clone());
        st.save("evidence.json", &evidence);
    }
    let snapshot = snapshot_index(&st.truth.marked, &case.source_root);
    match snapshot {
        Ok(idx) => st.save("snapshot_index.json", &idx),
        Err(e) => st.notices.push(format!("snapshot index: {e}")),
    }

    let prompt = match st.initial_prompt() {
        Ok(p) => p,
        Err(e) => {
            st.flags.data_failure = Some(e.to_string());
            return st.finish();
        }
    };
    if !st.round(provider, 1, prompt) {
        return st.finish();
    }

    let mut round = 1;
    while st.summaries.last().map(|s| s.decision) == Some(Decision::Continue) {
        round += 1;
        if !refine_round(&mut st, provider, round) {
            break;
        }
    }
    st.finish()
}

fn refine_round(st: &mut State<'_>, provider: &dyn LlmProvider, round: u32) -> bool {
    if st.ledger.lock().expect("ledger lock").exceeded() {
        st.flags.budget_exceeded = true;
        return false;
    }
    let (slices, current) = st.refine_slices();
    if slices.is_empty() {
        if let Some(last) = st.summaries.last_mut() {
            last.decision = Decision::Stop;
        }
        return false;
    }
    let prompt = build_prompt(
        PromptMode::Refine,
        &PromptInputs {
            seeds: &current,
            slices: &slices,
            ..Default::default()
        },
    );
    match prompt {
        Ok(p) => st.round(provider, round, p),
        Err(e) => {
            st.flags.data_failure = Some(e.to_string());
            false
        }
    }
}

/// One guess from a baseline prompt: no runtime evidence, no verification,
/// no refinement. Success needs at least one decoded candidate and scores.
pub fn baseline_run(
    case: &CaseEntry,
    cfg: &RunConfig,
    provider: &dyn LlmProvider,
    artifacts_root: Option<&Path>,
) -> CaseRun {
    let mut st = match new_state(case, cfg, artifacts_root) {
        Ok(s) => s,
        Err(done) => return *done,
    };
    let files = st.file_listing();
    let prompt = match build_prompt(
        PromptMode::Baseline,
        &PromptInputs {
            file_listing: &files,
            ..Default::default()
        },
    ) {
        Ok(p) => p,
        Err(e) => {
            st.flags.data_failure = Some(e.to_string());
            return st.finish();
        }
    };
    st.save_text("1/prompt.txt", &prompt.canonical());
    match diverge(provider, &prompt, 1, &cfg.params(), Some(&st.ledger)) {
        Ok(d) => {
            if let Some(text) = &d.samples[0].text {
                st.save_text("1/response_0.txt", text);
            }
            st.flags.decoded_candidates = d.candidates.len();
            st.pool = d.candidates;
        }
        Err(Error::BudgetExceeded { .. }) => st.flags.budget_exceeded = true,
        Err(Error::AllSamplesFailed(_)) => {}
        Err(e) => st.flags.execution_error = Some(format!("model call: {e}")),
    }
    if st.ledger.lock().expect("ledger lock").exceeded() {
        st.flags.budget_exceeded = true;
    }
    let unverified: Vec<VerifiedCandidate> = st
        .pool
        .iter()
        .map(|c| VerifiedCandidate {
            candidate: c.clone(),
            anchored_by: crate::verifier::AnchoredBy::FallbackOriginal,
            original_interval: None,
        })
        .collect();
    match compare_case(
        &unverified,
        &st.truth.marked,
        &st.truth.gt,
        &st.truth.index,
        cfg.tau_solved,
    ) {
        Ok((m, idx)) => {
            st.metrics = Some(m);
            st.truth.index = idx;
            st.flags.metrics_computed = true;
        }
        Err(e) => st.flags.data_failure = Some(format!("scoring: {e}")),
    }
    // nothing is verified in a baseline run; a decoded guess stands in
    st.flags.verified_candidates = st.flags.decoded_candidates;
    st.verified = unverified;
    let ranked = st.pool.clone();
    st.save("1/candidates.json", &ranked);
    st.finish()
}

/// Runs `cases` on `jobs` worker threads, each case with its own backend.
/// Results come back in input order.
pub fn run_bench<F>(
    cases: &[CaseEntry],
    cfg: &RunConfig,
    make_backend: F,
    provider: &dyn LlmProvider,
    artifacts_root: Option<&Path>,
    jobs: usize,
) -> Result<Vec<CaseRun>>
where
    F: Fn(&CaseEntry) -> Result<Box<dyn ExecBackend>> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::ContractViolation(e.to_string()))?;
    Ok(pool.install(|| {
        cases
            .par_iter()
            .map(|case| {
                let backend = if cfg.ata_enabled {
                    make_backend(case)
                } else {
                    Ok(Box::new(NoBackend) as Box<dyn ExecBackend>)
                };
                match backend {
                    Ok(mut b) => run_case(case, cfg, b.as_mut(), provider, artifacts_root),
                    Err(e) => failed_run(case, cfg, e, artifacts_root),
                }
            })
            .collect()
    }))
}

fn failed_run(case: &CaseEntry, cfg: &RunConfig, e: Error, root: Option<&Path>) -> CaseRun {
    match new_state(case, cfg, root) {
        Ok(mut st) => {
            st.flags.execution_error = Some(format!("backend: {e}"));
            st.finish()
        }
        Err(done) => *done,
    }
}

/// A backend that refuses everything; used when runtime evidence is off.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoBackend;

impl ExecBackend for NoBackend {
    fn name(&self) -> &'static str {
        "none"
    }

    fn exec(&mut self, _: &[String], _: std::time::Duration) -> Result<ata::ExecResult> {
        Err(Error::BackendUnavailable("no backend configured".into()))
    }

    fn reproduce(
        &mut self,
        _: &CaseEntry,
        _: ata::Revision,
        _: std::time::Duration,
    ) -> Result<ata::ExecResult> {
        Err(Error::BackendUnavailable("no backend configured".into()))
    }

    fn debug(
        &mut self,
        _: &Path,
        _: &Path,
        _: &[String],
        _: std::time::Duration,
    ) -> Result<String> {
        Err(Error::BackendUnavailable("no backend configured".into()))
    }
}
