//! Append-safe on-disk response cache keyed by request digests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Digest identifying one (model, prompt, temperature, sample index) cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CacheKey {
    digest: String,
}

impl CacheKey {
    pub fn new(model: &str, prompt_text: &str, temperature: f64, sample_index: u32) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(model.as_bytes());
        hasher.update([0x1f]);
        hasher.update(prompt_text.as_bytes());
        hasher.update([0x1f]);
        hasher.update(format!("{temperature}").as_bytes());
        hasher.update([0x1f]);
        hasher.update(sample_index.to_string().as_bytes());
        CacheKey { digest: hex::encode(hasher.finalize()) }
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    text: String,
}

/// One JSONL file per key under `cache/<model>/<digest-prefix>/`.
///
/// Writers append whole lines under a lock; readers take the last line that
/// parses, so a torn trailing write never poisons earlier entries.
pub struct ResponseCache {
    root: PathBuf,
    write_lock: Mutex<()>,
}

impl ResponseCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        ResponseCache { root: root.into(), write_lock: Mutex::new(()) }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn file_path(&self, model: &str, key: &CacheKey) -> PathBuf {
        let model_dir: String = model
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' })
            .collect();
        self.root
            .join(model_dir)
            .join(&key.digest()[..2])
            .join(format!("{}.jsonl", key.digest()))
    }

    /// Last valid value stored for the key, if any.
    pub fn get(&self, model: &str, key: &CacheKey) -> Result<Option<String>> {
        let path = self.file_path(model, key);
        let content = match fs::read_to_string(&path) {
            Ok(c) => c,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        Ok(content
            .lines()
            .filter_map(|line| serde_json::from_str::<CacheLine>(line).ok())
            .map(|entry| entry.text)
            .next_back())
    }

    /// Append a value for the key.
    pub fn put(&self, model: &str, key: &CacheKey, text: &str) -> Result<()> {
        let path = self.file_path(model, key);
        let _guard = self.write_lock.lock().expect("cache lock poisoned");
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut file = fs::OpenOptions::new().create(true).append(true).open(&path)?;
        let line = serde_json::to_string(&CacheLine { text: text.to_string() })?;
        writeln!(file, "{line}")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::new(dir.path());
        let key = CacheKey::new("m", "prompt", 0.0, 0);
        assert_eq!(cache.get("m", &key).unwrap(), None);
        cache.put("m", &key, "hello\nworld").unwrap();
        assert_eq!(cache.get("m", &key).unwrap().as_deref(), Some("hello\nworld"));
    }

    #[test]
    fn test_last_valid_line_wins() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::new(dir.path());
        let key = CacheKey::new("m", "p", 0.7, 2);
        cache.put("m", &key, "first").unwrap();
        cache.put("m", &key, "second").unwrap();
        assert_eq!(cache.get("m", &key).unwrap().as_deref(), Some("second"));
    }

    #[test]
    fn test_torn_trailing_write_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::new(dir.path());
        let key = CacheKey::new("m", "p", 0.0, 0);
        cache.put("m", &key, "good").unwrap();
        let path = cache.file_path("m", &key);
        let mut file = fs::OpenOptions::new().append(true).open(path).unwrap();
        write!(file, "{{\"text\":\"trunc").unwrap();
        assert_eq!(cache.get("m", &key).unwrap().as_deref(), Some("good"));
    }

    #[test]
    fn test_key_sensitivity() {
        let base = CacheKey::new("m", "prompt", 0.7, 0);
        assert_ne!(base, CacheKey::new("m", "prompt!", 0.7, 0));
        assert_ne!(base, CacheKey::new("m2", "prompt", 0.7, 0));
        assert_ne!(base, CacheKey::new("m", "prompt", 0.0, 0));
        assert_ne!(base, CacheKey::new("m", "prompt", 0.7, 1));
        assert_eq!(base, CacheKey::new("m", "prompt", 0.7, 0));
    }

    #[test]
    fn test_field_boundaries_unambiguous() {
        // Moving a byte across the model/prompt boundary changes the digest.
        let a = CacheKey::new("ab", "c", 0.0, 0);
        let b = CacheKey::new("a", "bc", 0.0, 0);
        assert_ne!(a, b);
    }

    #[test]
    fn test_model_name_sanitized_into_path() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::new(dir.path());
        let key = CacheKey::new("org/model:v1", "p", 0.0, 0);
        cache.put("org/model:v1", &key, "v").unwrap();
        assert_eq!(cache.get("org/model:v1", &key).unwrap().as_deref(), Some("v"));
        assert!(dir.path().join("org_model_v1").is_dir());
    }

    #[test]
    fn test_concurrent_writers_keep_lines_whole() {
        use std::sync::Arc;
        let dir = tempfile::tempdir().unwrap();
        let cache = Arc::new(ResponseCache::new(dir.path()));
        let key = CacheKey::new("m", "p", 0.7, 0);
        let mut handles = Vec::new();
        for worker in 0..8 {
            let cache = cache.clone();
            let key = key.clone();
            handles.push(std::thread::spawn(move || {
                for i in 0..20 {
                    cache.put("m", &key, &format!("worker-{worker}-{i}")).unwrap();
                }
            }));
        }
        for h in handles {
            h.join().unwrap();
        }
        let path = cache.file_path("m", &key);
        let content = fs::read_to_string(path).unwrap();
        assert_eq!(content.lines().count(), 160);
        for line in content.lines() {
            serde_json::from_str::<CacheLine>(line).unwrap();
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn prop_round_trip_arbitrary_text(text in ".{0,200}") {
                let dir = tempfile::tempdir().unwrap();
                let cache = ResponseCache::new(dir.path());
                let key = CacheKey::new("m", "p", 0.7, 0);
                cache.put("m", &key, &text).unwrap();
                let stored = cache.get("m", &key).unwrap();
                prop_assert_eq!(stored.as_deref(), Some(text.as_str()));
            }
        }
    }
}
