//! Deterministic scripted provider for offline tests.

use std::collections::HashMap;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

use super::{CompletionRequest, CompletionResponse, Provider};

/// Hex digest identifying a prompt text in mock scripts.
pub fn prompt_digest(prompt_text: &str) -> String {
    hex::encode(Sha256::digest(prompt_text.as_bytes()))
}

/// Replays scripted generations keyed by (prompt digest, sample index).
pub struct MockProvider {
    script: HashMap<(String, u32), String>,
}

impl MockProvider {
    /// Build from (prompt text, sample index, generation) triples.
    pub fn new<I, P, T>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (P, u32, T)>,
        P: AsRef<str>,
        T: Into<String>,
    {
        let script: HashMap<(String, u32), String> = entries
            .into_iter()
            .map(|(prompt, index, text)| ((prompt_digest(prompt.as_ref()), index), text.into()))
            .collect();
        if script.is_empty() {
            return Err(Error::Config("mock script must not be empty".into()));
        }
        Ok(MockProvider { script })
    }

    /// Script a single greedy reply for a prompt.
    pub fn single(prompt_text: &str, generation: &str) -> Result<Self> {
        MockProvider::new([(prompt_text, 0, generation)])
    }
}

impl Provider for MockProvider {
    fn name(&self) -> &str {
        "mock"
    }

    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse> {
        request.validate()?;
        let digest = prompt_digest(&request.prompt.text);
        let mut samples = Vec::with_capacity(request.sample_count as usize);
        for index in 0..request.sample_count {
            let text = self.script.get(&(digest.clone(), index)).ok_or_else(|| {
                Error::MockMiss { digest: digest.clone(), sample_index: index }
            })?;
            samples.push(text.clone());
        }
        Ok(CompletionResponse {
            samples,
            usage: None,
            provider: self.name().to_string(),
            cached: false,
        })
    }
}
