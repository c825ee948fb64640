//! Grid execution over datasets and strategy configurations.

use std::collections::{BTreeMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;

use crate::analysis::{
    accuracy, accuracy_csv, comparison_table, complexity_csv, group_records, markdown_table,
    recall_csv, repeat_sweep_table, EvalRecord,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::prompts::{compose, PromptRender, Re2Config, StrategyConfig};
use crate::provider::{CompletionRequest, Provider};
use crate::tasks::{load_dataset, BenchmarkItem, TaskSpec};

/// Accuracy line for one (task, config) cell of a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub task: String,
    pub config: String,
    pub accuracy_percent: Option<f64>,
    pub n_scored: usize,
    pub n_errored: usize,
}

/// What a run did and where it wrote.
#[derive(Debug)]
pub struct RunSummary {
    pub run_dir: PathBuf,
    pub records_path: PathBuf,
    pub grid_size: usize,
    pub written: usize,
    pub skipped: usize,
    pub errored: usize,
    pub rows: Vec<SummaryRow>,
}

struct WorkUnit {
    task: &'static TaskSpec,
    config: StrategyConfig,
    item: BenchmarkItem,
    render: PromptRender,
}

fn records_path(run_dir: &Path) -> PathBuf {
    run_dir.join("records.jsonl")
}

/// Load every record of a run; lines must all parse.
pub fn load_records(run_dir: &Path) -> Result<Vec<EvalRecord>> {
    let path = records_path(run_dir);
    let file = File::open(&path)
        .map_err(|e| Error::Records(format!("{}: {e}", path.display())))?;
    let mut records = Vec::new();
    for (number, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: EvalRecord = serde_json::from_str(&line).map_err(|e| {
            Error::Records(format!("{}:{}: {e}", path.display(), number + 1))
        })?;
        records.push(record);
    }
    Ok(records)
}

fn existing_keys(run_dir: &Path) -> Result<HashSet<(String, String, String)>> {
    if !records_path(run_dir).exists() {
        return Ok(HashSet::new());
    }
    Ok(load_records(run_dir)?
        .into_iter()
        .map(|r| (r.task_name.clone(), r.config().to_string(), r.item_id))
        .collect())
}

fn build_grid(config: &RunConfig) -> Result<(usize, Vec<WorkUnit>, usize)> {
    let done = existing_keys(&config.run_dir())?;
    let mut datasets = Vec::new();
    for task in &config.tasks {
        datasets.push(load_dataset(config.dataset_path(task.name)?, task)?);
    }
    let mut grid_size = 0;
    let mut skipped = 0;
    let mut units = Vec::new();
    for dataset in &datasets {
        for strategy in &config.strategies {
            for item in &dataset.items {
                grid_size += 1;
                let key = (
                    dataset.task.name.to_string(),
                    strategy.to_string(),
                    item.id.clone(),
                );
                if done.contains(&key) {
                    skipped += 1;
                    continue;
                }
                let mut render =
                    compose(strategy.strategy, dataset.task, &item.question, strategy.re2)?;
                render.item_id = item.id.clone();
                units.push(WorkUnit {
                    task: dataset.task,
                    config: *strategy,
                    item: item.clone(),
                    render,
                });
            }
        }
    }
    Ok((grid_size, units, skipped))
}

/// Run the full item-by-strategy grid against a provider.
///
/// Records append to `<run dir>/records.jsonl` in grid order regardless of
/// worker scheduling; completion times go to a sidecar so record bytes stay
/// deterministic. Items already recorded are skipped. Without `strict`,
/// provider failures become errored records; with it, the first failure
/// aborts the run.
pub fn run(config: &RunConfig, provider: &dyn Provider, strict: bool) -> Result<RunSummary> {
    let run_dir = config.run_dir();
    std::fs::create_dir_all(&run_dir)?;
    let (grid_size, units, skipped) = build_grid(config)?;
    let records_path = records_path(&run_dir);
    let mut records_file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&records_path)?;
    let mut timestamps_file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(run_dir.join("timestamps.jsonl"))?;

    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(usize, Result<EvalRecord>)>();
    let mut written = 0;
    let mut errored = 0;
    let mut fatals: Vec<(usize, Error)> = Vec::new();

    let worker_count = config.provider.parallelism.min(units.len().max(1));
    let units_ref = &units;
    let next_ref = &next;
    let abort_ref = &abort;
    let settings = &config.provider;
    std::thread::scope(|scope| -> Result<()> {
        for _ in 0..worker_count {
            let tx = tx.clone();
            scope.spawn(move || loop {
                if abort_ref.load(Ordering::Relaxed) {
                    break;
                }
                let index = next_ref.fetch_add(1, Ordering::Relaxed);
                if index >= units_ref.len() {
                    break;
                }
                let unit = &units_ref[index];
                let request = CompletionRequest {
                    model: settings.model.clone(),
                    prompt: unit.render.clone(),
                    temperature: settings.temperature,
                    sample_count: settings.sample_count,
                    max_tokens: settings.max_tokens,
                    request_tag: format!("{}/{}/{}", unit.task.name, unit.config, unit.item.id),
                };
                let outcome = provider.complete(&request).and_then(|response| {
                    EvalRecord::from_samples(
                        &unit.item,
                        unit.task,
                        unit.config,
                        unit.render.text.clone(),
                        response.samples,
                        response.usage,
                    )
                });
                match outcome {
                    Ok(record) => {
                        if tx.send((index, Ok(record))).is_err() {
                            break;
                        }
                    }
                    Err(e) if strict => {
                        abort_ref.store(true, Ordering::Relaxed);
                        let _ = tx.send((index, Err(e)));
                        break;
                    }
                    Err(e) => {
                        let record = EvalRecord::errored(
                            &unit.item,
                            unit.task,
                            unit.config,
                            unit.render.text.clone(),
                            e.to_string(),
                        );
                        if tx.send((index, Ok(record))).is_err() {
                            break;
                        }
                    }
                }
            });
        }
        drop(tx);

        let mut pending: BTreeMap<usize, Option<EvalRecord>> = BTreeMap::new();
        let mut next_write = 0;
        while let Ok((index, outcome)) = rx.recv() {
            match outcome {
                Ok(record) => {
                    pending.insert(index, Some(record));
                }
                Err(e) => {
                    fatals.push((index, e));
                    pending.insert(index, None);
                }
            }
            while let Some(slot) = pending.remove(&next_write) {
                next_write += 1;
                let Some(record) = slot else { continue };
                if record.error.is_some() {
                    errored += 1;
                }
                writeln!(records_file, "{}", serde_json::to_string(&record)?)?;
                let stamp = serde_json::json!({
                    "item_id": record.item_id,
                    "task": record.task_name,
                    "config": record.config().to_string(),
                    "unix_ms": chrono::Utc::now().timestamp_millis(),
                });
                writeln!(timestamps_file, "{stamp}")?;
                written += 1;
            }
        }
        Ok(())
    })?;

    if let Some(first) = fatals
        .into_iter()
        .min_by_key(|(index, _)| *index)
        .map(|(_, e)| e)
    {
        return Err(first);
    }

    let rows = summarize(&load_records(&run_dir)?);
    Ok(RunSummary {
        run_dir,
        records_path,
        grid_size,
        written,
        skipped,
        errored,
        rows,
    })
}

/// Per-(task, config) accuracy rows; cells with no scored records report no
/// accuracy.
pub fn summarize(records: &[EvalRecord]) -> Vec<SummaryRow> {
    group_records(records)
        .into_iter()
        .map(|((task, config), group)| {
            let owned: Vec<EvalRecord> = group.iter().map(|r| (*r).clone()).collect();
            let n_errored = owned.iter().filter(|r| r.error.is_some()).count();
            SummaryRow {
                task,
                config,
                accuracy_percent: accuracy(&owned).ok(),
                n_scored: owned.len() - n_errored,
                n_errored,
            }
        })
        .collect()
}

/// The files `write_reports` produced.
#[derive(Debug)]
pub struct ReportBundle {
    pub report_path: PathBuf,
    pub accuracy_csv_path: PathBuf,
    pub figure_paths: Vec<PathBuf>,
    pub markdown: String,
}

fn file_slug(task: &str, config: &str) -> String {
    format!("{task}_{config}")
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Render the comparison report and plot CSVs for a finished run.
pub fn write_reports(run_dir: &Path, baseline: StrategyConfig) -> Result<ReportBundle> {
    let records = load_records(run_dir)?;
    let table = comparison_table(&records, baseline)?;
    let mut markdown = markdown_table(&table);
    if let Some(sweep) = repeat_sweep_table(&records) {
        markdown.push('\n');
        markdown.push_str(&sweep);
    }
    let report_path = run_dir.join("report.md");
    std::fs::write(&report_path, format!("{markdown}\n"))?;

    let accuracy_csv_path = run_dir.join("accuracy.csv");
    std::fs::write(&accuracy_csv_path, accuracy_csv(&records)?)?;

    let mut figure_paths = Vec::new();
    for ((task, config), group) in group_records(&records) {
        let owned: Vec<EvalRecord> = group.iter().map(|r| (*r).clone()).collect();
        let slug = file_slug(&task, &config);
        if let Ok(csv) = complexity_csv(&owned) {
            let path = run_dir.join(format!("figure1_{slug}.csv"));
            std::fs::write(&path, csv)?;
            figure_paths.push(path);
        }
        if let Ok(csv) = recall_csv(&owned) {
            let path = run_dir.join(format!("figure2_{slug}.csv"));
            std::fs::write(&path, csv)?;
            figure_paths.push(path);
        }
    }
    Ok(ReportBundle {
        report_path,
        accuracy_csv_path,
        figure_paths,
        markdown,
    })
}

/// Expand strategies into a repeat-count sweep from `min` to `max`.
pub fn sweep_strategies(
    base: &[StrategyConfig],
    min: u32,
    max: u32,
) -> Result<Vec<StrategyConfig>> {
    if min == 0 || min > max {
        return Err(Error::Config(format!(
            "sweep range {min}..={max} must satisfy 1 <= min <= max"
        )));
    }
    let mut out = Vec::new();
    for config in base {
        for repeats in min..=max {
            let candidate = StrategyConfig::new(
                config.strategy,
                Re2Config {
                    repeats,
                    variant: config.re2.variant,
                },
            );
            if !out.contains(&candidate) {
                out.push(candidate);
            }
        }
    }
    Ok(out)
}
