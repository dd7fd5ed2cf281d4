//! The candidate location record shared by evidence seeding, the LLM bridge,
//! verification and scoring.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSource {
    AtaSeed,
    Llm,
}

/// A proposed vulnerable `(file, line interval)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub file: String,
    pub symbol: Option<String>,
    pub start_line: u32,
    pub end_line: u32,
    pub confidence: f64,
    pub rationale: String,
    pub votes: u32,
    pub verified: bool,
    pub source: CandidateSource,
}

impl Candidate {
    pub fn new(file: impl Into<String>, start_line: u32, end_line: u32, confidence: f64) -> Self {
        let (start_line, end_line) = if start_line <= end_line {
            (start_line, end_line)
        } else {
            (end_line, start_line)
        };
        Candidate {
            file: file.into(),
            symbol: None,
            start_line,
            end_line,
            confidence: confidence.clamp(0.0, 1.0),
            rationale: String::new(),
            votes: 1,
            verified: false,
            source: CandidateSource::Llm,
        }
    }

    pub fn with_symbol(mut self, symbol: impl Into<String>) -> Self {
        self.symbol = Some(symbol.into());
        self
    }

    pub fn with_rationale(mut self, rationale: impl Into<String>) -> Self {
        self.rationale = rationale.into();
        self
    }

    pub fn with_source(mut self, source: CandidateSource) -> Self {
        self.source = source;
        self
    }

    pub fn line_count(&self) -> u32 {
        self.end_line - self.start_line + 1
    }

    pub fn covers(&self, file: &str, line: u32) -> bool {
        self.file == file && self.start_line <= line && line <= self.end_line
    }

    pub fn overlaps(&self, file: &str, start: u32, end: u32) -> bool {
        self.file == file && self.start_line <= end && start <= self.end_line
    }

    pub fn interval(&self) -> (u32, u32) {
        (self.start_line, self.end_line)
    }
}

impl AsRef<Candidate> for Candidate {
    fn as_ref(&self) -> &Candidate {
        self
    }
}
