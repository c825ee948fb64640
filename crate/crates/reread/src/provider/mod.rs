//! Text-generation backends: HTTP, scripted mock, and the caching wrapper.

mod cache;
mod http;
mod mock;

pub use cache::{CacheKey, ResponseCache};
pub use http::{api_key_from_env, backoff_delay, HttpProvider};
pub use mock::{prompt_digest, MockProvider};

use crate::analysis::Usage;
use crate::error::{Error, Result};
use crate::prompts::PromptRender;

/// One generation request against a provider.
#[derive(Debug, Clone)]
pub struct CompletionRequest {
    pub model: String,
    pub prompt: PromptRender,
    pub temperature: f64,
    pub sample_count: u32,
    pub max_tokens: u32,
    /// Run id, item id, and batch index, for logs.
    pub request_tag: String,
}

impl CompletionRequest {
    /// Greedy decoding admits exactly one sample path.
    pub fn validate(&self) -> Result<()> {
        if self.sample_count == 0 {
            return Err(Error::Config("sample_count must be positive".into()));
        }
        if self.max_tokens == 0 {
            return Err(Error::Config("max_tokens must be positive".into()));
        }
        if !self.temperature.is_finite() || self.temperature < 0.0 {
            return Err(Error::Config("temperature must be non-negative".into()));
        }
        if self.temperature == 0.0 && self.sample_count > 1 {
            return Err(Error::Config(
                "temperature 0 requires sample_count 1".into(),
            ));
        }
        Ok(())
    }
}

/// Ordered generations for one request.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionResponse {
    pub samples: Vec<String>,
    pub usage: Option<Usage>,
    pub provider: String,
    pub cached: bool,
}

/// A text-generation backend usable from multiple worker threads.
pub trait Provider: Send + Sync {
    fn name(&self) -> &str;
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse>;
}

/// Wraps a provider with the persistent per-sample response cache.
///
/// Without an inner provider the wrapper is fully offline and any cache miss
/// is a hard error.
pub struct CachingProvider {
    cache: ResponseCache,
    inner: Option<Box<dyn Provider>>,
}

impl CachingProvider {
    pub fn new(cache: ResponseCache, inner: Box<dyn Provider>) -> Self {
        CachingProvider { cache, inner: Some(inner) }
    }

    pub fn offline(cache: ResponseCache) -> Self {
        CachingProvider { cache, inner: None }
    }

    pub fn is_offline(&self) -> bool {
        self.inner.is_none()
    }

    fn keys(&self, request: &CompletionRequest) -> Vec<CacheKey> {
        (0..request.sample_count)
            .map(|i| CacheKey::new(&request.model, &request.prompt.text, request.temperature, i))
            .collect()
    }
}

impl Provider for CachingProvider {
    fn name(&self) -> &str {
        "cache"
    }

    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse> {
        request.validate()?;
        let keys = self.keys(request);
        let mut hits = Vec::with_capacity(keys.len());
        for key in &keys {
            match self.cache.get(&request.model, key)? {
                Some(text) => hits.push(text),
                None => {
                    hits.clear();
                    break;
                }
            }
        }
        if hits.len() == keys.len() {
            return Ok(CompletionResponse {
                samples: hits,
                usage: None,
                provider: self.name().to_string(),
                cached: true,
            });
        }
        let Some(inner) = self.inner.as_ref() else {
            return Err(Error::OfflineCacheMiss(format!(
                "no cached samples for request {} (model {}, digest {})",
                request.request_tag,
                request.model,
                keys[0].digest()
            )));
        };
        let response = inner.complete(request)?;
        if response.samples.len() != request.sample_count as usize {
            return Err(Error::Provider {
                provider: inner.name().to_string(),
                message: format!(
                    "expected {} samples, got {}",
                    request.sample_count,
                    response.samples.len()
                ),
            });
        }
        for (key, text) in keys.iter().zip(&response.samples) {
            self.cache.put(&request.model, key, text)?;
        }
        Ok(CompletionResponse {
            samples: response.samples,
            usage: response.usage,
            provider: response.provider,
            cached: false,
        })
    }
}
