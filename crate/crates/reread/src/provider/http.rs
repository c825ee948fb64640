//! OpenAI-compatible chat-completions client with retry and backoff.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::analysis::Usage;
use crate::error::{Error, Result};

use super::{CompletionRequest, CompletionResponse, Provider};

const COMPLETIONS_PATH: &str = "/v1/chat/completions";
const MAX_BACKOFF: Duration = Duration::from_secs(8);

/// Delay before retry number `retry_index` (0-based): doubles from `base`,
/// capped, so the schedule is nondecreasing.
pub fn backoff_delay(base: Duration, retry_index: u32) -> Duration {
    base.saturating_mul(2u32.saturating_pow(retry_index)).min(MAX_BACKOFF)
}

/// API key from the environment: `REREAD_API_KEY`, else `OPENAI_API_KEY`.
pub fn api_key_from_env() -> Option<String> {
    std::env::var("REREAD_API_KEY")
        .or_else(|_| std::env::var("OPENAI_API_KEY"))
        .ok()
        .filter(|k| !k.is_empty())
}

pub struct HttpProvider {
    base_url: String,
    api_key: Option<String>,
    client: reqwest::blocking::Client,
    max_retries: u32,
    backoff_base: Duration,
}

#[derive(Serialize)]
struct WireRequest<'a> {
    model: &'a str,
    messages: Vec<WireMessage<'a>>,
    temperature: f64,
    n: u32,
    max_tokens: u32,
}

#[derive(Serialize)]
struct WireMessage<'a> {
    role: &'static str,
    content: &'a str,
}

#[derive(Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
    #[serde(default)]
    usage: Option<WireUsage>,
}

#[derive(Deserialize)]
struct WireChoice {
    #[serde(default)]
    index: Option<u32>,
    message: WireChoiceMessage,
}

#[derive(Deserialize)]
struct WireChoiceMessage {
    content: String,
}

#[derive(Deserialize)]
struct WireUsage {
    #[serde(default)]
    prompt_tokens: u64,
    #[serde(default)]
    completion_tokens: u64,
    #[serde(default)]
    total_tokens: u64,
}

enum Attempt {
    Success(WireResponse),
    Transient(String),
}

impl HttpProvider {
    /// `max_retries` counts additional attempts after the first.
    pub fn new(
        base_url: impl Into<String>,
        api_key: Option<String>,
        timeout: Duration,
        max_retries: u32,
    ) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| Error::Provider { provider: "http".into(), message: e.to_string() })?;
        Ok(HttpProvider {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            api_key,
            client,
            max_retries,
            backoff_base: Duration::from_millis(500),
        })
    }

    /// Shrink the backoff base, for tests against local servers.
    pub fn with_backoff_base(mut self, base: Duration) -> Self {
        self.backoff_base = base;
        self
    }

    fn send_once(&self, request: &CompletionRequest, n: u32) -> Result<Attempt> {
        let body = WireRequest {
            model: &request.model,
            messages: vec![WireMessage { role: "user", content: &request.prompt.text }],
            temperature: request.temperature,
            n,
            max_tokens: request.max_tokens,
        };
        let url = format!("{}{}", self.base_url, COMPLETIONS_PATH);
        let mut builder = self.client.post(&url).json(&body);
        if let Some(key) = &self.api_key {
            builder = builder.bearer_auth(key);
        }
        let response = match builder.send() {
            Ok(r) => r,
            Err(e) => return Ok(Attempt::Transient(format!("transport: {e}"))),
        };
        let status = response.status();
        if status.as_u16() == 401 || status.as_u16() == 403 {
            return Err(Error::Auth(format!("{status} from {url}")));
        }
        if status.as_u16() == 429 || status.is_server_error() {
            return Ok(Attempt::Transient(format!("status {status}")));
        }
        if !status.is_success() {
            return Err(Error::Provider {
                provider: "http".into(),
                message: format!("unexpected status {status}"),
            });
        }
        let parsed: WireResponse = response.json().map_err(|e| Error::Provider {
            provider: "http".into(),
            message: format!("malformed response body: {e}"),
        })?;
        Ok(Attempt::Success(parsed))
    }

    fn send_with_retry(&self, request: &CompletionRequest, n: u32) -> Result<WireResponse> {
        let mut last_error = String::new();
        for attempt in 0..=self.max_retries {
            match self.send_once(request, n)? {
                Attempt::Success(parsed) => return Ok(parsed),
                Attempt::Transient(message) => last_error = message,
            }
            if attempt < self.max_retries {
                std::thread::sleep(backoff_delay(self.backoff_base, attempt));
            }
        }
        Err(Error::RetriesExhausted { attempts: self.max_retries + 1, last_error })
    }

    fn samples_of(mut parsed: WireResponse) -> (Vec<String>, Option<Usage>) {
        parsed
            .choices
            .sort_by_key(|c| c.index.unwrap_or(u32::MAX));
        let samples = parsed.choices.into_iter().map(|c| c.message.content).collect();
        let usage = parsed.usage.map(|u| Usage {
            prompt_tokens: u.prompt_tokens,
            completion_tokens: u.completion_tokens,
            total_tokens: u.total_tokens,
        });
        (samples, usage)
    }
}

impl Provider for HttpProvider {
    fn name(&self) -> &str {
        "http"
    }

    /// One call asks for all samples via `n`; servers that return fewer
    /// choices are topped up with single-sample calls.
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse> {
        request.validate()?;
        let parsed = self.send_with_retry(request, request.sample_count)?;
        let (mut samples, mut usage) = Self::samples_of(parsed);
        if samples.is_empty() {
            return Err(Error::Provider {
                provider: self.name().into(),
                message: "response contained no choices".into(),
            });
        }
        while samples.len() < request.sample_count as usize {
            let extra = self.send_with_retry(request, 1)?;
            let (mut more, extra_usage) = Self::samples_of(extra);
            if more.is_empty() {
                return Err(Error::Provider {
                    provider: self.name().into(),
                    message: "top-up response contained no choices".into(),
                });
            }
            samples.push(more.remove(0));
            usage = merge_usage(usage, extra_usage);
        }
        samples.truncate(request.sample_count as usize);
        Ok(CompletionResponse {
            samples,
            usage,
            provider: self.name().to_string(),
            cached: false,
        })
    }
}

fn merge_usage(a: Option<Usage>, b: Option<Usage>) -> Option<Usage> {
    match (a, b) {
        (Some(x), Some(y)) => Some(Usage {
            prompt_tokens: x.prompt_tokens + y.prompt_tokens,
            completion_tokens: x.completion_tokens + y.completion_tokens,
            total_tokens: x.total_tokens + y.total_tokens,
        }),
        (x, None) => x,
        (None, y) => y,
    }
}
