//! Command-line front end: `run`, `bench`, `report`, `chunk`, `diff-index`,
//! `profile` and `replay-record`.
//!
//! Exit codes: 0 on success, 1 when a case ends in a failure outcome or a
//! command fails, 2 on usage errors (bad flags, unknown case, unreadable
//! inputs).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Serialize;

use crate::ata::{ContainerBackend, ExecBackend, LocalBackend, ReplayBackend};
use crate::chunker::chunk_source_tree_with;
use crate::corpus::{
    family_distribution, load_manifest, parse_subtype_counts, reference_subtype_counts, CaseEntry,
    CrashFamily,
};
use crate::diffindex::{build_diff_index, parse_unified_diff, GroundTruth};
use crate::error::Error;
use crate::llm::{
    HttpProvider, LlmProvider, RecordingProvider, ReplayProvider, ScriptRule, ScriptedProvider,
};
use crate::metrics::{aggregate_report, BenchmarkReport, CaseRow};
use crate::orchestrator::{
    baseline_run, run_bench, run_case, CaseRun, ReasoningEffort, RunConfig,
};

#[derive(Debug, Parser)]
#[command(name = "tracelocate", version, about = "Localize crashing bugs in C/C++ sources")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one case from a manifest.
    Run(RunArgs),
    /// Run every case in a manifest and write report.json.
    Bench(BenchArgs),
    /// Re-aggregate the metrics.json files of an earlier bench.
    Report(ReportArgs),
    /// Print the chunks of a source tree.
    Chunk(ChunkArgs),
    /// Print the OLD-coordinate index of a unified diff.
    DiffIndex(DiffIndexArgs),
    /// Crash family distribution of a subtype count table.
    Profile(ProfileArgs),
    /// Run one case and store every model response as a replay recording.
    ReplayRecord(RecordArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// TOML file with RunConfig fields.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub top_p: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// low, medium or high.
    #[arg(long, value_parser = parse_effort)]
    pub reasoning_effort: Option<ReasoningEffort>,
    /// Samples per round for divergence tracing.
    #[arg(long)]
    pub k: Option<usize>,
    /// Maximum analysis rounds.
    #[arg(long)]
    pub rounds: Option<u32>,
    /// Spend limit in USD.
    #[arg(long)]
    pub budget: Option<f64>,
    /// Localization threshold for counting a case as solved.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Skip sanitizer, debugger and static evidence.
    #[arg(long)]
    pub no_ata: bool,
    #[arg(long)]
    pub no_refine: bool,
    #[arg(long)]
    pub no_diverge: bool,
    #[arg(long)]
    pub no_debugger: bool,
    #[arg(long)]
    pub static_findings: bool,
}

fn parse_effort(s: &str) -> std::result::Result<ReasoningEffort, String> {
    match s {
        "low" => Ok(ReasoningEffort::Low),
        "medium" => Ok(ReasoningEffort::Medium),
        "high" => Ok(ReasoningEffort::High),
        _ => Err(format!("expected low, medium or high, got `{s}`")),
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ExecArgs {
    /// Serve sanitizer and debugger output from `<case_id>.san.log` /
    /// `<case_id>.gdb.log` files in this directory.
    #[arg(long, value_name = "DIR")]
    pub replay_exec: Option<PathBuf>,
    /// Reproduce inside a container (runtime from T2L_CONTAINER_RUNTIME).
    #[arg(long, conflicts_with = "replay_exec")]
    pub container: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct LlmArgs {
    /// Answer model calls from recordings in this directory.
    #[arg(long, value_name = "DIR")]
    pub replay_llm: Option<PathBuf>,
    /// Answer model calls from a JSON list of scripted rules.
    #[arg(long, value_name = "PATH", conflicts_with = "replay_llm")]
    pub script: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_name = "PATH")]
    pub manifest: PathBuf,
    #[arg(long, value_name = "ID")]
    pub case: String,
    /// Artifact directory.
    #[arg(long, value_name = "DIR", default_value = "runs")]
    pub runs: PathBuf,
    /// One unverified guess from the file listing only.
    #[arg(long)]
    pub baseline_mode: bool,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub exec: ExecArgs,
    #[command(flatten)]
    pub llm: LlmArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, value_name = "PATH")]
    pub manifest: PathBuf,
    #[arg(long, value_name = "DIR", default_value = "runs")]
    pub runs: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Earlier report.json to compute deltas against.
    #[arg(long, value_name = "PATH")]
    pub baseline: Option<PathBuf>,
    #[arg(long)]
    pub baseline_mode: bool,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub exec: ExecArgs,
    #[command(flatten)]
    pub llm: LlmArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[arg(long, value_name = "DIR")]
    pub runs: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub baseline: Option<PathBuf>,
    /// Print the family table instead of JSON.
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ChunkArgs {
    #[arg(long, value_name = "DIR")]
    pub root: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DiffIndexArgs {
    #[arg(long, value_name = "PATH")]
    pub patch: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    /// `subtype,count` table; the built-in reference table when omitted.
    #[arg(long, value_name = "PATH")]
    pub taxonomy: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RecordArgs {
    #[arg(long, value_name = "PATH")]
    pub manifest: PathBuf,
    #[arg(long, value_name = "ID")]
    pub case: String,
    /// Where recordings are written.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, value_name = "DIR", default_value = "runs")]
    pub runs: PathBuf,
    /// Record scripted replies instead of calling the HTTP endpoint.
    #[arg(long, value_name = "PATH")]
    pub script: Option<PathBuf>,
    #[arg(long)]
    pub baseline_mode: bool,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub exec: ExecArgs,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Environment lookup, injectable for tests.
pub type Env<'a> = &'a dyn Fn(&str) -> Option<String>;

/// Builds the run configuration: defaults, then `T2L_MODEL` /
/// `T2L_BUDGET_USD`, then the config file, then flags.
pub fn layered_config(args: &ConfigArgs, env: Env<'_>) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(m) = env("T2L_MODEL") {
        cfg.model = m;
    }
    if let Some(b) = env("T2L_BUDGET_USD") {
        cfg.budget_usd = b
            .parse()
            .map_err(|_| format!("T2L_BUDGET_USD: not a number: `{b}`"))?;
    }
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        cfg = overlay_config(&cfg, &text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let a = args;
    if let Some(v) = &a.model {
        cfg.model = v.clone();
    }
    if let Some(v) = a.temperature {
        cfg.temperature = v;
    }
    if let Some(v) = a.top_p {
        cfg.top_p = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.reasoning_effort {
        cfg.reasoning_effort = Some(v);
    }
    if let Some(v) = a.k {
        cfg.k_divergence = v;
    }
    if let Some(v) = a.rounds {
        cfg.max_rounds = v;
    }
    if let Some(v) = a.budget {
        cfg.budget_usd = v;
    }
    if let Some(v) = a.tau {
        cfg.tau_solved = v;
    }
    if a.no_ata {
        cfg.ata_enabled = false;
    }
    if a.no_refine {
        cfg.refinement_enabled = false;
    }
    if a.no_diverge {
        cfg.divergence_enabled = false;
    }
    if a.no_debugger {
        cfg.debugger_enabled = false;
    }
    if a.static_findings {
        cfg.static_findings_enabled = true;
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

/// Applies the keys present in a TOML document on top of `base`. Price
/// tables are merged per model; every other key replaces the base value.
pub fn overlay_config(base: &RunConfig, text: &str) -> Result<RunConfig, String> {
    let overlay: toml::Table = toml::from_str(text).map_err(|e| e.to_string())?;
    let mut merged = toml::Table::try_from(base).map_err(|e| e.to_string())?;
    for (key, value) in overlay {
        match (key.as_str(), merged.get_mut(&key), value) {
            ("prices", Some(toml::Value::Table(old)), toml::Value::Table(new)) => old.extend(new),
            (_, _, value) => {
                merged.insert(key, value);
            }
        }
    }
    toml::Value::Table(merged)
        .try_into()
        .map_err(|e: toml::de::Error| e.to_string())
}

fn find_case(manifest: &Path, id: &str) -> CliResult<(Vec<CaseEntry>, CaseEntry)> {
    let cases = load_manifest(manifest).map_err(|e| CliError::Usage(e.to_string()))?;
    let case = cases
        .iter()
        .find(|c| c.id == id)
        .cloned()
        .ok_or_else(|| {
            CliError::Usage(format!("no case `{id}` in {}", manifest.display()))
        })?;
    Ok((cases, case))
}

fn make_backend(exec: &ExecArgs, case: &CaseEntry) -> crate::Result<Box<dyn ExecBackend>> {
    if let Some(dir) = &exec.replay_exec {
        Ok(Box::new(ReplayBackend::new(dir, &case.id)))
    } else if exec.container {
        Ok(Box::new(ContainerBackend::from_env(&case.id)?))
    } else {
        Ok(Box::new(LocalBackend::new(&case.source_root)))
    }
}

fn load_script(path: &Path) -> CliResult<Vec<ScriptRule>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn make_provider(llm: &LlmArgs, model: &str) -> CliResult<Box<dyn LlmProvider>> {
    if let Some(dir) = &llm.replay_llm {
        if !dir.is_dir() {
            return Err(CliError::Usage(format!("{}: not a directory", dir.display())));
        }
        Ok(Box::new(ReplayProvider::new(dir, model)))
    } else if let Some(path) = &llm.script {
        Ok(Box::new(ScriptedProvider::new(model, load_script(path)?)))
    } else {
        Ok(Box::new(HttpProvider::from_env(model)?))
    }
}

fn json_text<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Failed(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Failed(format!("write: {e}")))
}

fn summary_line(run: &CaseRun) -> String {
    format!(
        "{}: {:?} detection={:.3} localization={:.3} strict={:.3} rounds={} calls={} spent=${:.4}\n",
        run.case_id,
        run.outcome,
        run.metrics.detection,
        run.metrics.localization,
        run.metrics.strict,
        run.summaries.len(),
        run.llm_calls,
        run.spent_usd,
    )
}

fn one_case(
    case: &CaseEntry,
    cfg: &RunConfig,
    exec: &ExecArgs,
    provider: &dyn LlmProvider,
    runs: &Path,
    baseline_mode: bool,
) -> CaseRun {
    if baseline_mode {
        return baseline_run(case, cfg, provider, Some(runs));
    }
    if !cfg.ata_enabled {
        return run_case(case, cfg, &mut crate::orchestrator::NoBackend, provider, Some(runs));
    }
    match make_backend(exec, case) {
        Ok(mut b) => run_case(case, cfg, b.as_mut(), provider, Some(runs)),
        Err(e) => {
            // surfaced through the outcome like any other execution failure
            let mut failing = FailingBackend(e.to_string());
            run_case(case, cfg, &mut failing, provider, Some(runs))
        }
    }
}

struct FailingBackend(String);

impl ExecBackend for FailingBackend {
    fn name(&self) -> &'static str {
        "unavailable"
    }

    fn exec(&mut self, _: &[String], _: std::time::Duration) -> crate::Result<crate::ata::ExecResult> {
        Err(Error::BackendUnavailable(self.0.clone()))
    }

    fn reproduce(
        &mut self,
        _: &CaseEntry,
        _: crate::ata::Revision,
        _: std::time::Duration,
    ) -> crate::Result<crate::ata::ExecResult> {
        Err(Error::BackendUnavailable(self.0.clone()))
    }

    fn debug(
        &mut self,
        _: &Path,
        _: &Path,
        _: &[String],
        _: std::time::Duration,
    ) -> crate::Result<String> {
        Err(Error::BackendUnavailable(self.0.clone()))
    }
}

fn config_for(args: &ConfigArgs, env: Env<'_>) -> CliResult<RunConfig> {
    layered_config(args, env).map_err(CliError::Usage)
}

fn cmd_run(a: &RunArgs, env: Env<'_>, out: &mut dyn Write) -> CliResult<bool> {
    let cfg = config_for(&a.config, env)?;
    let (_, case) = find_case(&a.manifest, &a.case)?;
    let provider = make_provider(&a.llm, &cfg.model)?;
    let run = one_case(&case, &cfg, &a.exec, provider.as_ref(), &a.runs, a.baseline_mode);
    emit(out, &summary_line(&run))?;
    Ok(run.outcome.is_success())
}

fn cmd_record(a: &RecordArgs, env: Env<'_>, out: &mut dyn Write) -> CliResult<bool> {
    let cfg = config_for(&a.config, env)?;
    let (_, case) = find_case(&a.manifest, &a.case)?;
    let inner: Box<dyn LlmProvider> = match &a.script {
        Some(p) => Box::new(ScriptedProvider::new(&cfg.model, load_script(p)?)),
        None => Box::new(HttpProvider::from_env(&cfg.model)?),
    };
    let provider = RecordingProvider::new(inner, &a.out)?;
    let run = one_case(&case, &cfg, &a.exec, &provider, &a.runs, a.baseline_mode);
    emit(out, &summary_line(&run))?;
    Ok(run.outcome.is_success())
}

fn read_report(path: &Path) -> CliResult<BenchmarkReport> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn cmd_bench(a: &BenchArgs, env: Env<'_>, out: &mut dyn Write) -> CliResult<bool> {
    let cfg = config_for(&a.config, env)?;
    let cases = load_manifest(&a.manifest).map_err(|e| CliError::Usage(e.to_string()))?;
    let baseline = a.baseline.as_deref().map(read_report).transpose()?;
    let provider = make_provider(&a.llm, &cfg.model)?;
    let runs: Vec<CaseRun> = if a.baseline_mode {
        cases
            .iter()
            .map(|c| baseline_run(c, &cfg, provider.as_ref(), Some(&a.runs)))
            .collect()
    } else {
        run_bench(
            &cases,
            &cfg,
            |c| make_backend(&a.exec, c),
            provider.as_ref(),
            Some(&a.runs),
            a.jobs,
        )?
    };
    let rows = cases
        .iter()
        .zip(&runs)
        .map(|(c, r)| CaseRow::new(c, r.metrics))
        .collect::<crate::Result<Vec<_>>>()?;
    let report = aggregate_report(&rows, baseline.as_ref());
    let path = a.runs.join("report.json");
    std::fs::write(&path, json_text(&report)?)
        .map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
    for r in &runs {
        emit(out, &summary_line(r))?;
    }
    emit(out, &report.render_table())?;
    Ok(true)
}

/// Reads `<runs>/<case>/metrics.json` for every case directory.
pub fn collect_rows(runs: &Path) -> crate::Result<Vec<CaseRow>> {
    let mut rows = Vec::new();
    let entries = std::fs::read_dir(runs).map_err(|e| Error::io(runs, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(runs, e))?;
        let metrics = entry.path().join("metrics.json");
        if metrics.is_file() {
            let text = crate::error::read_to_string(&metrics)?;
            rows.push(serde_json::from_str(&text)?);
        }
    }
    Ok(rows)
}

fn cmd_report(a: &ReportArgs, out: &mut dyn Write) -> CliResult<bool> {
    if !a.runs.is_dir() {
        return Err(CliError::Usage(format!("{}: not a directory", a.runs.display())));
    }
    let rows = collect_rows(&a.runs)?;
    let baseline = a.baseline.as_deref().map(read_report).transpose()?;
    let report = aggregate_report(&rows, baseline.as_ref());
    if a.table {
        emit(out, &report.render_table())?;
    } else {
        emit(out, &json_text(&report)?)?;
    }
    Ok(true)
}

fn cmd_chunk(a: &ChunkArgs, out: &mut dyn Write) -> CliResult<bool> {
    if !a.root.is_dir() {
        return Err(CliError::Usage(format!("{}: not a directory", a.root.display())));
    }
    let chunks = chunk_source_tree_with(&a.root, &Default::default())?;
    if a.json {
        return emit(out, &json_text(&chunks.as_slice())?).map(|_| true);
    }
    for c in chunks.iter() {
        emit(
            out,
            &format!(
                "{}\t{}:{}-{}\t{:?}\t{}\n",
                c.index, c.file_path, c.start_line, c.end_line, c.chunk_kind, c.symbol
            ),
        )?;
    }
    Ok(true)
}

#[derive(Serialize)]
struct DiffIndexOutput {
    index: crate::diffindex::DiffIndex,
    ground_truth: GroundTruth,
}

fn cmd_diff_index(a: &DiffIndexArgs, out: &mut dyn Write) -> CliResult<bool> {
    let text = std::fs::read_to_string(&a.patch)
        .map_err(|e| CliError::Usage(format!("{}: {e}", a.patch.display())))?;
    let patch = parse_unified_diff(&text)?;
    let index = build_diff_index(&patch);
    let ground_truth = GroundTruth::from_index(&index);
    emit(out, &json_text(&DiffIndexOutput { index, ground_truth })?)?;
    Ok(true)
}

fn cmd_profile(a: &ProfileArgs, out: &mut dyn Write) -> CliResult<bool> {
    let counts = match &a.taxonomy {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            parse_subtype_counts(&text)?
        }
        None => reference_subtype_counts(),
    };
    let dist = family_distribution(&counts)?;
    if a.json {
        let named: std::collections::BTreeMap<&str, _> =
            dist.iter().map(|(f, s)| (f.display_name(), s)).collect();
        return emit(out, &json_text(&named)?).map(|_| true);
    }
    emit(out, &format!("{:<38} {:>6} {:>7}\n", "family", "count", "percent"))?;
    for fam in CrashFamily::ALL {
        if let Some(s) = dist.get(&fam) {
            emit(
                out,
                &format!("{:<38} {:>6} {:>6.1}%\n", fam.display_name(), s.count, s.percent),
            )?;
        }
    }
    Ok(true)
}

fn usage_for(command: &Command) -> String {
    let name = match command {
        Command::Run(_) => "run",
        Command::Bench(_) => "bench",
        Command::Report(_) => "report",
        Command::Chunk(_) => "chunk",
        Command::DiffIndex(_) => "diff-index",
        Command::Profile(_) => "profile",
        Command::ReplayRecord(_) => "replay-record",
    };
    let mut cmd = Cli::command();
    let usage = match cmd.find_subcommand_mut(name) {
        Some(sub) => sub.render_usage().to_string(),
        None => cmd.render_usage().to_string(),
    };
    usage.replacen("Usage: ", "Usage: tracelocate ", 1)
}

/// Parses `args` and runs the command, writing results to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn dispatch<I, T>(args: I, env: Env<'_>, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
                return 0;
            }
            let _ = err.write_all(rendered.as_bytes());
            return 2;
        }
    };
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a, env, out),
        Command::Bench(a) => cmd_bench(a, env, out),
        Command::Report(a) => cmd_report(a, out),
        Command::Chunk(a) => cmd_chunk(a, out),
        Command::DiffIndex(a) => cmd_diff_index(a, out),
        Command::Profile(a) => cmd_profile(a, out),
        Command::ReplayRecord(a) => cmd_record(a, env, out),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\n{}", usage_for(&cli.command));
            2
        }
        Err(CliError::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

/// Entry point used by the `tracelocate` binary.
pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let env = |k: &str| std::env::var(k).ok();
    let code = dispatch(
        std::env::args_os(),
        &env,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_env(_: &str) -> Option<String> {
        None
    }

    #[test]
    fn precedence_flags_over_file_over_env() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "model = \"from-file\"\nk_divergence = 5\n[prices.from-file]\nprompt_per_1k = 1.0\ncompletion_per_1k = 2.0\n").unwrap();
        let env = |k: &str| match k {
            "T2L_MODEL" => Some("from-env".to_string()),
            "T2L_BUDGET_USD" => Some("2.5".to_string()),
            _ => None,
        };
        let args = ConfigArgs {
            config: Some(path.clone()),
            ..Default::default()
        };
        let cfg = layered_config(&args, &env).unwrap();
        assert_eq!(cfg.model, "from-file");
        assert_eq!(cfg.k_divergence, 5);
        assert_eq!(cfg.budget_usd, 2.5);
        assert!(cfg.prices.contains_key("replay"));
        assert!(cfg.prices.contains_key("from-file"));

        let args = ConfigArgs {
            config: Some(path),
            model: Some("from-flag".into()),
            k: Some(2),
            ..Default::default()
        };
        let cfg = layered_config(&args, &env).unwrap();
        assert_eq!((cfg.model.as_str(), cfg.k_divergence), ("from-flag", 2));

        let cfg = layered_config(&ConfigArgs::default(), &no_env).unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        assert!(overlay_config(&RunConfig::default(), "max_round = 2\n").is_err());
        assert!(overlay_config(&RunConfig::default(), "max_rounds = 2\n").is_ok());
    }

    #[test]
    fn usage_errors_exit_2() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(dispatch(["tracelocate", "chunk", "--bogus"], &no_env, &mut o, &mut e), 2);
        assert_eq!(dispatch(["tracelocate"], &no_env, &mut o, &mut e), 2);
        assert_eq!(
            dispatch(["tracelocate", "report", "--runs", "/nonexistent/x"], &no_env, &mut o, &mut e),
            2
        );
        assert_eq!(dispatch(["tracelocate", "--help"], &no_env, &mut o, &mut e), 0);
    }
}
