//! Completion providers: HTTP chat-completions, replay, recording, scripted.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::prompt::{Prompt, PromptMode};
use super::{Completion, CompletionParams, Usage};
use crate::error::{Error, Result};

pub trait LlmProvider: Send + Sync {
    fn model(&self) -> &str;

    /// A single attempt; transport hiccups are reported as `Error::Transient`.
    fn complete_once(&self, prompt: &Prompt, params: &CompletionParams) -> Result<Completion>;
}

impl<P: LlmProvider + ?Sized> LlmProvider for Box<P> {
    fn model(&self) -> &str {
        (**self).model()
    }

    fn complete_once(&self, prompt: &Prompt, params: &CompletionParams) -> Result<Completion> {
        (**self).complete_once(prompt, params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            attempts: 3,
            base_delay: Duration::from_millis(500),
        }
    }
}

pub fn complete(
    provider: &dyn LlmProvider,
    prompt: &Prompt,
    params: &CompletionParams,
) -> Result<Completion> {
    complete_with_retry(provider, prompt, params, &RetryPolicy::default())
}

/// Retries transient failures with exponential backoff; after the last
/// attempt the failure becomes `Error::Provider`.
pub fn complete_with_retry(
    provider: &dyn LlmProvider,
    prompt: &Prompt,
    params: &CompletionParams,
    policy: &RetryPolicy,
) -> Result<Completion> {
    let attempts = policy.attempts.max(1);
    let mut last = String::new();
    for attempt in 0..attempts {
        match provider.complete_once(prompt, params) {
            Err(Error::Transient(msg)) => {
                log::warn!("attempt {} of {attempts} failed: {msg}", attempt + 1);
                last = msg;
                if attempt + 1 < attempts {
                    std::thread::sleep(policy.base_delay * 2u32.pow(attempt));
                }
            }
            other => return other,
        }
    }
    Err(Error::Provider(format!(
        "gave up after {attempts} attempts: {last}"
    )))
}

/// OpenAI-style `/chat/completions` endpoint.
pub struct HttpProvider {
    client: reqwest::blocking::Client,
    base: String,
    api_key: Option<String>,
    model: String,
}

impl HttpProvider {
    pub fn new(base: impl Into<String>, api_key: Option<String>, model: impl Into<String>) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(300))
            .build()
            .map_err(|e| Error::Provider(e.to_string()))?;
        Ok(HttpProvider {
            client,
            base: base.into().trim_end_matches('/').to_string(),
            api_key,
            model: model.into(),
        })
    }

    /// Endpoint from `T2L_API_BASE`, key from `T2L_API_KEY`.
    pub fn from_env(model: impl Into<String>) -> Result<Self> {
        let base = std::env::var("T2L_API_BASE")
            .unwrap_or_else(|_| "https://api.openai.com/v1".to_string());
        Self::new(base, std::env::var("T2L_API_KEY").ok(), model)
    }

    fn request_body(&self, prompt: &Prompt, params: &CompletionParams) -> serde_json::Value {
        let mut body = json!({
            "model": self.model,
            "messages": [
                {"role": "system", "content": prompt.system},
                {"role": "user", "content": prompt.render_user()},
            ],
            "temperature": params.temperature,
            "top_p": params.top_p,
            "seed": params.seed,
        });
        if let Some(effort) = &params.reasoning_effort {
            body["reasoning_effort"] = json!(effort);
        }
        body
    }
}

#[derive(Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
    #[serde(default)]
    usage: Option<Usage>,
}

#[derive(Deserialize)]
struct WireChoice {
    message: WireMessage,
}

#[derive(Deserialize)]
struct WireMessage {
    #[serde(default)]
    content: Option<String>,
}

impl LlmProvider for HttpProvider {
    fn model(&self) -> &str {
        &self.model
    }

    fn complete_once(&self, prompt: &Prompt, params: &CompletionParams) -> Result<Completion> {
        let mut req = self
            .client
            .post(format!("{}/chat/completions", self.base))
            .json(&self.request_body(prompt, params));
        if let Some(key) = &self.api_key {
            req = req.bearer_auth(key);
        }
        let resp = req.send().map_err(|e| Error::Transient(e.to_string()))?;
        let status = resp.status();
        if status.as_u16() == 401 || status.as_u16() == 403 {
            return Err(Error::Auth(format!("HTTP {status}")));
        }
        if status.as_u16() == 429 || status.is_server_error() {
            return Err(Error::Transient(format!("HTTP {status}")));
        }
        if !status.is_success() {
            let body = resp.text().unwrap_or_default();
            return Err(Error::Provider(format!("HTTP {status}: {body}")));
        }
        let wire: WireResponse = resp
            .json()
            .map_err(|e| Error::Provider(format!("bad response body: {e}")))?;
        let text = wire
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| Error::Provider("response has no choices".into()))?;
        let usage = wire.usage.unwrap_or_else(|| Usage::estimate(prompt, &text));
        Ok(Completion { text, usage })
    }
}

/// Serves `<digest>.response.txt` recordings; an unknown digest is an error.
pub struct ReplayProvider {
    dir: PathBuf,
    model: String,
}

impl ReplayProvider {
    pub fn new(dir: impl Into<PathBuf>, model: impl Into<String>) -> Self {
        ReplayProvider {
            dir: dir.into(),
            model: model.into(),
        }
    }
}

impl LlmProvider for ReplayProvider {
    fn model(&self) -> &str {
        &self.model
    }

    fn complete_once(&self, prompt: &Prompt, params: &CompletionParams) -> Result<Completion> {
        let digest = prompt.digest(params.seed);
        let path = self.dir.join(format!("{digest}.response.txt"));
        if !path.is_file() {
            return Err(Error::ReplayMiss(format!(
                "{} (mode {}, seed {})",
                path.display(),
                prompt.mode.as_str(),
                params.seed
            )));
        }
        let text = crate::error::read_to_string(&path)?;
        let usage_path = self.dir.join(format!("{digest}.usage.json"));
        let usage = if usage_path.is_file() {
            serde_json::from_str(&crate::error::read_to_string(&usage_path)?)?
        } else {
            Usage::estimate(prompt, &text)
        };
        Ok(Completion { text, usage })
    }
}

/// Passes calls through to `inner` and writes each response as a replay
/// recording.
pub struct RecordingProvider<P> {
    inner: P,
    dir: PathBuf,
}

impl<P: LlmProvider> RecordingProvider<P> {
    pub fn new(inner: P, dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(RecordingProvider { inner, dir })
    }
}

impl<P: LlmProvider> LlmProvider for RecordingProvider<P> {
    fn model(&self) -> &str {
        self.inner.model()
    }

    fn complete_once(&self, prompt: &Prompt, params: &CompletionParams) -> Result<Completion> {
        let c = self.inner.complete_once(prompt, params)?;
        let digest = prompt.digest(params.seed);
        let write = |name: String, body: &str| {
            let p = self.dir.join(name);
            std::fs::write(&p, body).map_err(|e| Error::io(&p, e))
        };
        write(format!("{digest}.response.txt"), &c.text)?;
        write(
            format!("{digest}.usage.json"),
            &serde_json::to_string(&c.usage)?,
        )?;
        write(format!("{digest}.prompt.txt"), &prompt.canonical())?;
        Ok(c)
    }
}

/// What a scripted rule answers with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScriptReply {
    Text(String),
    Transient(String),
    Fail(String),
}

/// The first rule whose filters all match the prompt answers it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScriptRule {
    #[serde(default)]
    pub mode: Option<PromptMode>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Substring of the rendered user message.
    #[serde(default)]
    pub contains: Option<String>,
    pub reply: ScriptReply,
    #[serde(default)]
    pub usage: Option<Usage>,
}

impl ScriptRule {
    pub fn text(reply: impl Into<String>) -> Self {
        ScriptRule {
            mode: None,
            seed: None,
            contains: None,
            reply: ScriptReply::Text(reply.into()),
            usage: None,
        }
    }

    pub fn in_mode(mut self, mode: PromptMode) -> Self {
        self.mode = Some(mode);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn containing(mut self, needle: impl Into<String>) -> Self {
        self.contains = Some(needle.into());
        self
    }

    pub fn with_usage(mut self, prompt_tokens: u64, completion_tokens: u64) -> Self {
        self.usage = Some(Usage {
            prompt_tokens,
            completion_tokens,
        });
        self
    }

    fn matches(&self, prompt: &Prompt, seed: u64, rendered: &str) -> bool {
        self.mode.is_none_or(|m| m == prompt.mode)
            && self.seed.is_none_or(|s| s == seed)
            && self.contains.as_deref().is_none_or(|n| rendered.contains(n))
    }
}

/// Deterministic in-process provider driven by rules.
pub struct ScriptedProvider {
    model: String,
    rules: Vec<ScriptRule>,
    calls: AtomicUsize,
    log: Mutex<Vec<(PromptMode, u64)>>,
}

impl ScriptedProvider {
    pub fn new(model: impl Into<String>, rules: Vec<ScriptRule>) -> Self {
        ScriptedProvider {
            model: model.into(),
            rules,
            calls: AtomicUsize::new(0),
            log: Mutex::new(Vec::new()),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    /// `(mode, seed)` of every call, in arrival order.
    pub fn call_log(&self) -> Vec<(PromptMode, u64)> {
        self.log.lock().expect("log lock").clone()
    }
}

impl LlmProvider for ScriptedProvider {
    fn model(&self) -> &str {
        &self.model
    }

    fn complete_once(&self, prompt: &Prompt, params: &CompletionParams) -> Result<Completion> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.log
            .lock()
            .expect("log lock")
            .push((prompt.mode, params.seed));
        let rendered = prompt.render_user();
        let rule = self
            .rules
            .iter()
            .find(|r| r.matches(prompt, params.seed, &rendered))
            .ok_or_else(|| {
                Error::Provider(format!(
                    "no scripted reply for {} prompt, seed {}",
                    prompt.mode.as_str(),
                    params.seed
                ))
            })?;
        match &rule.reply {
            ScriptReply::Text(t) => Ok(Completion {
                text: t.clone(),
                usage: rule.usage.unwrap_or_else(|| Usage::estimate(prompt, t)),
            }),
            ScriptReply::Transient(m) => Err(Error::Transient(m.clone())),
            ScriptReply::Fail(m) => Err(Error::Provider(m.clone())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::prompt::{build_prompt, PromptInputs};

    fn prompt() -> Prompt {
        let files = vec!["a.c".to_string()];
        build_prompt(
            PromptMode::Baseline,
            &PromptInputs {
                file_listing: &files,
                ..Default::default()
            },
        )
        .unwrap()
    }

    fn fast() -> RetryPolicy {
        RetryPolicy {
            attempts: 3,
            base_delay: Duration::ZERO,
        }
    }

    #[test]
    fn transient_failures_exhaust_after_three_attempts() {
        let p = ScriptedProvider::new("m", vec![ScriptRule {
            reply: ScriptReply::Transient("connection refused".into()),
            ..ScriptRule::text("")
        }]);
        let e = complete_with_retry(&p, &prompt(), &CompletionParams::default(), &fast());
        assert!(matches!(e, Err(Error::Provider(_))));
        assert_eq!(p.calls(), 3);
    }

    #[test]
    fn unreachable_endpoint_is_a_provider_error() {
        let p = HttpProvider::new("http://127.0.0.1:9", None, "m").unwrap();
        let e = complete_with_retry(&p, &prompt(), &CompletionParams::default(), &fast());
        assert!(matches!(e, Err(Error::Provider(_))));
    }

    #[test]
    fn record_then_replay() {
        let dir = tempfile::tempdir().unwrap();
        let scripted = ScriptedProvider::new("m", vec![ScriptRule::text("[]").with_usage(10, 2)]);
        let rec = RecordingProvider::new(scripted, dir.path()).unwrap();
        let params = CompletionParams::default();
        let a = complete(&rec, &prompt(), &params).unwrap();
        let replay = ReplayProvider::new(dir.path(), "m");
        let b = complete(&replay, &prompt(), &params).unwrap();
        assert_eq!(a, b);
        let other = CompletionParams {
            seed: 99,
            ..params
        };
        assert!(matches!(
            complete(&replay, &prompt(), &other),
            Err(Error::ReplayMiss(_))
        ));
    }

    #[test]
    fn rules_filter_by_mode_and_seed() {
        let p = ScriptedProvider::new(
            "m",
            vec![
                ScriptRule::text("seed7").with_seed(7),
                ScriptRule::text("refine").in_mode(PromptMode::Refine),
                ScriptRule::text("files").containing("a.c"),
            ],
        );
        let mut params = CompletionParams::default();
        assert_eq!(p.complete_once(&prompt(), &params).unwrap().text, "files");
        params.seed = 7;
        assert_eq!(p.complete_once(&prompt(), &params).unwrap().text, "seed7");
    }
}
