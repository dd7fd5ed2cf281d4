//! Provider-agnostic model access: prompts, completions, candidate
//! extraction, divergence sampling and spend accounting.

pub mod budget;
pub mod extract;
pub mod merge;
pub mod prompt;
pub mod provider;

use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::candidate::Candidate;
use crate::error::{Error, Result};

pub use budget::{BudgetLedger, Charge, Price};
pub use extract::{extract_candidates, extract_detailed, Extraction};
pub use merge::{merge_all, merge_candidates, same_site};
pub use prompt::{build_prompt, Attachment, AttachmentKind, Prompt, PromptInputs, PromptMode};
pub use provider::{
    complete, complete_with_retry, HttpProvider, LlmProvider, RecordingProvider, ReplayProvider,
    RetryPolicy, ScriptReply, ScriptRule, ScriptedProvider,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Usage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

impl Usage {
    /// Four characters per token, for providers that report no usage.
    pub fn estimate(prompt: &Prompt, text: &str) -> Self {
        Usage {
            prompt_tokens: prompt.estimated_tokens(),
            completion_tokens: (text.len() as u64).div_ceil(4),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Completion {
    pub text: String,
    pub usage: Usage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionParams {
    pub temperature: f64,
    pub top_p: f64,
    pub seed: u64,
    /// Passed through untouched to providers that accept it.
    pub reasoning_effort: Option<String>,
}

impl Default for CompletionParams {
    fn default() -> Self {
        CompletionParams {
            temperature: 0.2,
            top_p: 1.0,
            seed: 0,
            reasoning_effort: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum SampleStatus {
    Decoded { candidates: usize, dropped: usize },
    Undecodable { reason: String },
    ProviderFailed { reason: String },
    SkippedForBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub seed: u64,
    pub text: Option<String>,
    pub usage: Option<Usage>,
    pub cost_usd: f64,
    pub status: SampleStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    pub candidates: Vec<Candidate>,
    pub samples: Vec<Sample>,
}

impl Divergence {
    pub fn skipped_for_budget(&self) -> bool {
        self.samples
            .iter()
            .any(|s| s.status == SampleStatus::SkippedForBudget)
    }
}

/// Issues `k` completions with seeds `seed, seed+1, ...` and merges every
/// decoded list in one pass.
///
/// With a ledger, each call is admitted only while the spend plus the
/// estimated cost of the calls already admitted stays under the limit; when
/// no call has been observed yet, the first sample runs alone so later
/// admissions can use its real cost. Charges are applied in seed order.
pub fn diverge(
    provider: &dyn LlmProvider,
    prompt: &Prompt,
    k: usize,
    params: &CompletionParams,
    ledger: Option<&Mutex<BudgetLedger>>,
) -> Result<Divergence> {
    if k == 0 {
        return Err(Error::ContractViolation("k must be at least 1".into()));
    }
    let seeds: Vec<u64> = (0..k as u64).map(|i| params.seed.wrapping_add(i)).collect();
    let mut samples: Vec<Sample> = Vec::with_capacity(k);
    let mut next = 0usize;
    while next < k {
        let batch = match ledger {
            None => k - next,
            Some(l) => {
                let l = l.lock().expect("ledger lock");
                let est = l.estimate_call(provider.model(), prompt.estimated_tokens())?;
                let admitted = l.permitted_calls(k - next, est);
                if l.calls == 0 && admitted > 1 {
                    1
                } else {
                    admitted
                }
            }
        };
        if batch == 0 {
            break;
        }
        let results = run_batch(provider, prompt, params, &seeds[next..next + batch]);
        for (seed, result) in seeds[next..next + batch].iter().zip(results) {
            samples.push(settle(*seed, result, provider.model(), ledger)?);
        }
        next += batch;
    }
    if samples.is_empty() {
        let (spent, limit) = ledger
            .map(|l| {
                let l = l.lock().expect("ledger lock");
                (l.spent_usd, l.limit_usd)
            })
            .unwrap_or((0.0, 0.0));
        return Err(Error::BudgetExceeded { spent, limit });
    }
    for seed in &seeds[next..] {
        samples.push(Sample {
            seed: *seed,
            text: None,
            usage: None,
            cost_usd: 0.0,
            status: SampleStatus::SkippedForBudget,
        });
    }

    let mut lists = Vec::new();
    for s in &samples {
        if let (Some(text), SampleStatus::Decoded { .. }) = (&s.text, &s.status) {
            lists.push(extract_detailed(text)?.candidates);
        }
    }
    if lists.is_empty() {
        if let Some(reason) = samples.iter().find_map(|s| match &s.status {
            SampleStatus::ProviderFailed { reason } => Some(reason.clone()),
            _ => None,
        }) {
            return Err(Error::Provider(reason));
        }
        return Err(Error::AllSamplesFailed(samples.len()));
    }
    Ok(Divergence {
        candidates: merge_all(lists),
        samples,
    })
}

fn run_batch(
    provider: &dyn LlmProvider,
    prompt: &Prompt,
    params: &CompletionParams,
    seeds: &[u64],
) -> Vec<Result<Completion>> {
    let call = |seed: u64| {
        let p = CompletionParams {
            seed,
            ..params.clone()
        };
        complete(provider, prompt, &p)
    };
    if seeds.len() == 1 {
        return vec![call(seeds[0])];
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = seeds.iter().map(|&seed| s.spawn(move || call(seed))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Provider("worker panicked".into()))))
            .collect()
    })
}

fn settle(
    seed: u64,
    result: Result<Completion>,
    model: &str,
    ledger: Option<&Mutex<BudgetLedger>>,
) -> Result<Sample> {
    let c = match result {
        Ok(c) => c,
        Err(e @ (Error::Auth(_) | Error::UnknownModelPrice(_) | Error::ReplayMiss(_))) => {
            return Err(e)
        }
        Err(e) => {
            return Ok(Sample {
                seed,
                text: None,
                usage: None,
                cost_usd: 0.0,
                status: SampleStatus::ProviderFailed {
                    reason: e.to_string(),
                },
            })
        }
    };
    let cost_usd = match ledger {
        Some(l) => l.lock().expect("ledger lock").charge(model, &c.usage)?.cost,
        None => 0.0,
    };
    let status = match extract_detailed(&c.text) {
        Ok(x) => SampleStatus::Decoded {
            candidates: x.candidates.len(),
            dropped: x.dropped.len(),
        },
        Err(e) => SampleStatus::Undecodable {
            reason: e.to_string(),
        },
    };
    Ok(Sample {
        seed,
        text: Some(c.text),
        usage: Some(c.usage),
        cost_usd,
        status,
    })
}
