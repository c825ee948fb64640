//! Declarative run configuration loaded from a TOML file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::prompts::StrategyConfig;
use crate::tasks::{task, TaskSpec};

/// Provider and decoding settings shared by every request in a run.
#[derive(Debug, Clone)]
pub struct ProviderSettings {
    pub model: String,
    pub base_url: String,
    pub temperature: f64,
    pub sample_count: u32,
    pub max_tokens: u32,
    pub timeout_seconds: u64,
    pub max_retries: u32,
    pub parallelism: usize,
    pub offline: bool,
    pub cache_dir: PathBuf,
}

/// A validated experiment description.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub run_id: String,
    pub output_dir: PathBuf,
    pub tasks: Vec<&'static TaskSpec>,
    pub strategies: Vec<StrategyConfig>,
    pub provider: ProviderSettings,
    datasets: BTreeMap<String, PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    run_id: String,
    #[serde(default = "default_output_dir")]
    output_dir: PathBuf,
    tasks: Vec<String>,
    strategies: Vec<String>,
    provider: RawProvider,
    datasets: BTreeMap<String, PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProvider {
    model: String,
    #[serde(default = "default_base_url")]
    base_url: String,
    #[serde(default)]
    temperature: f64,
    #[serde(default = "default_sample_count")]
    sample_count: u32,
    #[serde(default = "default_max_tokens")]
    max_tokens: u32,
    #[serde(default = "default_timeout_seconds")]
    timeout_seconds: u64,
    #[serde(default = "default_max_retries")]
    max_retries: u32,
    #[serde(default = "default_parallelism")]
    parallelism: usize,
    #[serde(default)]
    offline: bool,
    #[serde(default = "default_cache_dir")]
    cache_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("runs")
}

fn default_base_url() -> String {
    "https://api.openai.com".to_string()
}

fn default_sample_count() -> u32 {
    1
}

fn default_max_tokens() -> u32 {
    512
}

fn default_timeout_seconds() -> u64 {
    60
}

fn default_max_retries() -> u32 {
    3
}

fn default_parallelism() -> usize {
    4
}

fn default_cache_dir() -> PathBuf {
    PathBuf::from("cache")
}

fn resolve(base: &Path, path: PathBuf) -> PathBuf {
    if path.is_absolute() {
        path
    } else {
        base.join(path)
    }
}

impl RunConfig {
    /// Parse and validate a TOML config file; relative paths are resolved
    /// against the file's directory.
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        RunConfig::from_toml_str(&text, base)
    }

    /// Parse and validate config text; `base` anchors relative paths.
    pub fn from_toml_str(text: &str, base: &Path) -> Result<RunConfig> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if raw.run_id.is_empty() || raw.run_id.contains(['/', '\\']) {
            return Err(Error::Config(format!(
                "run_id {:?} must be a non-empty directory name",
                raw.run_id
            )));
        }
        if raw.tasks.is_empty() {
            return Err(Error::Config("tasks list is empty".into()));
        }
        let mut tasks = Vec::new();
        for name in &raw.tasks {
            let spec = task(name)?;
            if tasks.iter().any(|t: &&TaskSpec| t.name == spec.name) {
                return Err(Error::Config(format!("task {name:?} listed twice")));
            }
            tasks.push(spec);
        }
        if raw.strategies.is_empty() {
            return Err(Error::Config("strategies list is empty".into()));
        }
        let mut strategies: Vec<StrategyConfig> = Vec::new();
        for descriptor in &raw.strategies {
            let parsed: StrategyConfig = descriptor.parse()?;
            if strategies.contains(&parsed) {
                return Err(Error::Config(format!(
                    "strategy {descriptor:?} listed twice"
                )));
            }
            strategies.push(parsed);
        }
        let p = &raw.provider;
        if p.model.is_empty() {
            return Err(Error::Config("provider.model is empty".into()));
        }
        if !p.temperature.is_finite() || p.temperature < 0.0 {
            return Err(Error::Config(format!(
                "provider.temperature {} must be a number >= 0",
                p.temperature
            )));
        }
        if p.sample_count == 0 {
            return Err(Error::Config("provider.sample_count must be >= 1".into()));
        }
        if p.sample_count > 1 && p.temperature <= 0.0 {
            return Err(Error::Config(
                "provider.sample_count > 1 requires provider.temperature > 0".into(),
            ));
        }
        if p.max_tokens == 0 {
            return Err(Error::Config("provider.max_tokens must be >= 1".into()));
        }
        if p.parallelism == 0 {
            return Err(Error::Config("provider.parallelism must be >= 1".into()));
        }
        let mut datasets = BTreeMap::new();
        for (name, path) in raw.datasets {
            task(&name)?;
            datasets.insert(name, resolve(base, path));
        }
        for spec in &tasks {
            if !datasets.contains_key(spec.name) {
                return Err(Error::Config(format!(
                    "no dataset path for task {:?}",
                    spec.name
                )));
            }
        }
        Ok(RunConfig {
            run_id: raw.run_id,
            output_dir: resolve(base, raw.output_dir),
            tasks,
            strategies,
            provider: ProviderSettings {
                model: p.model.clone(),
                base_url: p.base_url.clone(),
                temperature: p.temperature,
                sample_count: p.sample_count,
                max_tokens: p.max_tokens,
                timeout_seconds: p.timeout_seconds,
                max_retries: p.max_retries,
                parallelism: p.parallelism,
                offline: p.offline,
                cache_dir: resolve(base, p.cache_dir.clone()),
            },
            datasets,
        })
    }

    /// Directory holding this run's records and reports.
    pub fn run_dir(&self) -> PathBuf {
        self.output_dir.join(&self.run_id)
    }

    pub fn dataset_path(&self, task_name: &str) -> Result<&Path> {
        self.datasets
            .get(task_name)
            .map(PathBuf::as_path)
            .ok_or_else(|| Error::Config(format!("no dataset path for task {task_name:?}")))
    }

    /// Apply command-line overrides on top of the file values.
    pub fn apply_overrides(&mut self, offline: bool, parallelism: Option<usize>) {
        if offline {
            self.provider.offline = true;
        }
        if let Some(p) = parallelism {
            self.provider.parallelism = p.max(1);
        }
    }
}
