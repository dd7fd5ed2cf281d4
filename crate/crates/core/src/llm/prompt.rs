//! Prompt assembly.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ata::{CrashReport, Finding, Frame};
use crate::candidate::Candidate;
use crate::chunker::SourceSlice;
use crate::error::{Error, Result};

/// Bumped whenever the wording below changes; it is part of every digest.
pub const PROMPT_TEMPLATE_VERSION: &str = "locate-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptMode {
    Initial,
    Refine,
    Baseline,
}

impl PromptMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PromptMode::Initial => "initial",
            PromptMode::Refine => "refine",
            PromptMode::Baseline => "baseline",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttachmentKind {
    CrashLog,
    Backtrace,
    Findings,
    Seeds,
    FileListing,
    SourceSlice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attachment {
    pub kind: AttachmentKind,
    pub label: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prompt {
    pub system: String,
    pub user: String,
    pub mode: PromptMode,
    pub attachments: Vec<Attachment>,
}

/// Everything a prompt may carry. Ground-truth data has no slot here.
#[derive(Debug, Clone, Default)]
pub struct PromptInputs<'a> {
    pub report: Option<&'a CrashReport>,
    pub backtrace: &'a [Frame],
    pub findings: &'a [Finding],
    pub seeds: &'a [Candidate],
    pub file_listing: &'a [String],
    pub slices: &'a [SourceSlice],
}

const SYSTEM: &str = "You are a vulnerability localization assistant for C and C++ code. \
You read crash evidence and source code and name the exact source lines that must change \
to fix the underlying bug. You answer with JSON only.";

const SCHEMA: &str = r#"Return a JSON array of candidate records, most likely first, with exactly these fields:
[{"file": str, "symbol": str|null, "start_line": int, "end_line": int, "confidence": float, "rationale": str}]
file is relative to the project root. Lines are 1-based and inclusive. confidence is in [0,1].
Quote the most suspicious code line in backticks inside rationale."#;

fn task_text(mode: PromptMode) -> &'static str {
    match mode {
        PromptMode::Initial => {
            "A program crashed under a sanitizer. Using the crash report and any supporting \
evidence below, identify the root-cause lines: the lines a correct patch would modify, \
which are often upstream of the faulting line."
        }
        PromptMode::Refine => {
            "Re-read the numbered source slices below. Confirm or correct the earlier candidates, \
and report any additional lines a correct patch would modify that were missed."
        }
        PromptMode::Baseline => {
            "The project below contains a memory-safety vulnerability. Guess the source lines a \
correct patch would modify."
        }
    }
}

fn render_frames(frames: &[Frame]) -> String {
    frames
        .iter()
        .map(|f| {
            let loc = match (&f.file, f.line) {
                (Some(file), Some(line)) => format!("{file}:{line}"),
                (Some(file), None) => file.clone(),
                _ => "?".to_string(),
            };
            format!("#{} {} {}", f.index, f.function, loc)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn render_seeds(seeds: &[Candidate]) -> String {
    seeds
        .iter()
        .map(|c| {
            format!(
                "{}:{}-{} {} (evidence score {:.2})",
                c.file,
                c.start_line,
                c.end_line,
                c.symbol.as_deref().unwrap_or("-"),
                c.confidence
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Builds a prompt for `mode`.
///
/// Initial mode needs a crash report, refine mode needs at least one slice,
/// and baseline mode accepts no runtime evidence at all.
pub fn build_prompt(mode: PromptMode, inputs: &PromptInputs<'_>) -> Result<Prompt> {
    match mode {
        PromptMode::Initial if inputs.report.is_none() => {
            return Err(Error::ContractViolation(
                "initial prompt requires a crash report".into(),
            ))
        }
        PromptMode::Refine if inputs.slices.iter().all(SourceSlice::is_empty) => {
            return Err(Error::ContractViolation(
                "refine prompt requires at least one source slice".into(),
            ))
        }
        PromptMode::Baseline
            if inputs.report.is_some()
                || !inputs.backtrace.is_empty()
                || !inputs.seeds.is_empty()
                || !inputs.findings.is_empty() =>
        {
            return Err(Error::ContractViolation(
                "baseline prompt must not carry runtime evidence".into(),
            ))
        }
        _ => {}
    }

    let mut attachments = Vec::new();
    if let Some(r) = inputs.report {
        attachments.push(Attachment {
            kind: AttachmentKind::CrashLog,
            label: format!("crash log ({})", r.crash_type),
            text: r.raw.trim_end().to_string(),
        });
    }
    if !inputs.backtrace.is_empty() {
        attachments.push(Attachment {
            kind: AttachmentKind::Backtrace,
            label: "debugger backtrace".into(),
            text: render_frames(inputs.backtrace),
        });
    }
    if !inputs.findings.is_empty() {
        attachments.push(Attachment {
            kind: AttachmentKind::Findings,
            label: "static analysis findings".into(),
            text: inputs
                .findings
                .iter()
                .map(|f| format!("{}:{}: {}", f.file, f.line, f.message))
                .collect::<Vec<_>>()
                .join("\n"),
        });
    }
    if !inputs.seeds.is_empty() {
        let label = match mode {
            PromptMode::Refine => "current candidates",
            _ => "functions on the crash path",
        };
        attachments.push(Attachment {
            kind: AttachmentKind::Seeds,
            label: label.into(),
            text: render_seeds(inputs.seeds),
        });
    }
    if !inputs.file_listing.is_empty() {
        attachments.push(Attachment {
            kind: AttachmentKind::FileListing,
            label: "project files".into(),
            text: inputs.file_listing.join("\n"),
        });
    }
    for s in inputs.slices.iter().filter(|s| !s.is_empty()) {
        let (a, b) = s.span().unwrap_or((0, 0));
        attachments.push(Attachment {
            kind: AttachmentKind::SourceSlice,
            label: format!("{} lines {a}-{b}", s.file_path),
            text: s.render().trim_end().to_string(),
        });
    }

    Ok(Prompt {
        system: SYSTEM.to_string(),
        user: format!("{}\n\n{}", task_text(mode), SCHEMA),
        mode,
        attachments,
    })
}

impl Prompt {
    /// The user message with attachments appended as labeled blocks.
    pub fn render_user(&self) -> String {
        let mut out = self.user.clone();
        for a in &self.attachments {
            out.push_str(&format!("\n\n### {}\n```\n{}\n```", a.label, a.text));
        }
        out
    }

    /// Stable text form used for digests and artifacts.
    pub fn canonical(&self) -> String {
        format!(
            "template: {PROMPT_TEMPLATE_VERSION}\nmode: {}\n\n[system]\n{}\n\n[user]\n{}\n",
            self.mode.as_str(),
            self.system,
            self.render_user()
        )
    }

    /// Replay key: the canonical prompt plus the sampling seed, so that the
    /// samples of one divergence step have distinct recordings.
    pub fn digest(&self, seed: u64) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical().as_bytes());
        h.update(format!("\nseed: {seed}\n").as_bytes());
        hex::encode(&h.finalize()[..12])
    }

    pub fn has(&self, kind: AttachmentKind) -> bool {
        self.attachments.iter().any(|a| a.kind == kind)
    }

    /// Rough token count (four characters per token).
    pub fn estimated_tokens(&self) -> u64 {
        ((self.system.len() + self.render_user().len()) as u64).div_ceil(4)
    }
}
