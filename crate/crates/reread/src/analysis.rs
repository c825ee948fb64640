//! Result aggregation: accuracy tables, complexity buckets, and
//! question-to-generation n-gram recall.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::consensus::majority_vote;
use crate::error::{Error, Result};
use crate::extract::{extract_answer, is_correct};
use crate::prompts::{Re2Config, Strategy, StrategyConfig};
use crate::tasks::{AnswerKind, BenchmarkItem, TaskSpec};

/// Token usage reported by a provider.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Usage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub total_tokens: u64,
}

/// One evaluated (item, strategy configuration) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub item_id: String,
    pub task_name: String,
    pub question: String,
    pub strategy: Strategy,
    pub re2: Re2Config,
    pub prompt_text: String,
    pub samples: Vec<String>,
    pub extracted: Vec<Option<String>>,
    pub voted: Option<String>,
    pub gold: String,
    pub correct: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complexity: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub usage: Option<Usage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl EvalRecord {
    /// Evaluate raw samples into a record: extract per sample, vote, judge.
    pub fn from_samples(
        item: &BenchmarkItem,
        task: &TaskSpec,
        config: StrategyConfig,
        prompt_text: String,
        samples: Vec<String>,
        usage: Option<Usage>,
    ) -> Result<EvalRecord> {
        let extracted: Vec<Option<String>> = samples
            .iter()
            .map(|s| extract_answer(s, task.answer_kind))
            .collect();
        let voted = majority_vote(&extracted, task.answer_kind)?;
        let correct = voted
            .as_deref()
            .map(|v| is_correct(v, &item.gold_answer, task.answer_kind))
            .unwrap_or(false);
        Ok(EvalRecord {
            item_id: item.id.clone(),
            task_name: task.name.to_string(),
            question: item.question.clone(),
            strategy: config.strategy,
            re2: config.re2,
            prompt_text,
            samples,
            extracted,
            voted,
            gold: item.gold_answer.clone(),
            correct,
            complexity: item.complexity,
            usage,
            error: None,
        })
    }

    /// Record a provider failure for the cell; excluded from accuracy.
    pub fn errored(
        item: &BenchmarkItem,
        task: &TaskSpec,
        config: StrategyConfig,
        prompt_text: String,
        message: String,
    ) -> EvalRecord {
        EvalRecord {
            item_id: item.id.clone(),
            task_name: task.name.to_string(),
            question: item.question.clone(),
            strategy: config.strategy,
            re2: config.re2,
            prompt_text,
            samples: Vec::new(),
            extracted: Vec::new(),
            voted: None,
            gold: item.gold_answer.clone(),
            correct: false,
            complexity: item.complexity,
            usage: None,
            error: Some(message),
        }
    }

    pub fn config(&self) -> StrategyConfig {
        StrategyConfig::new(self.strategy, self.re2)
    }

    pub fn answer_kind(&self) -> AnswerKind {
        crate::tasks::task(&self.task_name)
            .map(|t| t.answer_kind)
            .unwrap_or(AnswerKind::Number)
    }
}

/// Accuracy over a homogeneous record slice, in percent.
///
/// Errored records are excluded from the denominator; a slice with nothing
/// but errors is treated as empty.
pub fn accuracy(records: &[EvalRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let key = (&records[0].task_name, records[0].config());
    for r in records {
        if (&r.task_name, r.config()) != key {
            return Err(Error::Heterogeneous(format!(
                "mixed ({}, {}) and ({}, {})",
                key.0,
                key.1,
                r.task_name,
                r.config()
            )));
        }
    }
    let scored: Vec<&EvalRecord> = records.iter().filter(|r| r.error.is_none()).collect();
    if scored.is_empty() {
        return Err(Error::EmptyInput);
    }
    let correct = scored.iter().filter(|r| r.correct).count();
    Ok(100.0 * correct as f64 / scored.len() as f64)
}

/// Lowercased tokens split on Unicode whitespace, with leading and trailing
/// punctuation stripped from each token.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| t.trim_matches(|c: char| !c.is_alphanumeric()))
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

/// Fraction of the question's distinct n-grams present in the generation.
///
/// Questions shorter than `n` tokens have no n-grams and yield nothing.
pub fn ngram_recall(question: &str, generation: &str, n: usize) -> Option<f64> {
    assert!(n >= 1, "n-gram order must be positive");
    let q_tokens = tokenize(question);
    if q_tokens.len() < n {
        return None;
    }
    let g_tokens = tokenize(generation);
    let q_grams: BTreeSet<&[String]> = q_tokens.windows(n).collect();
    let g_grams: BTreeSet<&[String]> = g_tokens.windows(n).collect();
    let hits = q_grams.intersection(&g_grams).count();
    Some(hits as f64 / q_grams.len() as f64)
}

/// Per-complexity (accuracy, case count) over annotated records.
pub fn bucket_by_complexity(records: &[EvalRecord]) -> Result<BTreeMap<u32, (f64, usize)>> {
    let mut buckets: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.error.is_none()) {
        let Some(c) = r.complexity else { continue };
        let entry = buckets.entry(c).or_insert((0, 0));
        entry.1 += 1;
        if r.correct {
            entry.0 += 1;
        }
    }
    if buckets.is_empty() {
        return Err(Error::NoAnnotatedRecords);
    }
    Ok(buckets
        .into_iter()
        .map(|(c, (correct, total))| (c, (100.0 * correct as f64 / total as f64, total)))
        .collect())
}

/// One rendered report row.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub task: String,
    pub config: StrategyConfig,
    pub accuracy_percent: f64,
    pub n_items: usize,
    pub n_errored: usize,
    pub delta_vs_baseline: Option<f64>,
}

/// Accuracy table keyed by (task, strategy configuration).
#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    pub baseline: StrategyConfig,
    pub rows: Vec<ReportRow>,
}

/// Group records by (task name, canonical config descriptor).
pub fn group_records(records: &[EvalRecord]) -> BTreeMap<(String, String), Vec<&EvalRecord>> {
    let mut groups: BTreeMap<(String, String), Vec<&EvalRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.task_name.clone(), r.config().to_string()))
            .or_default()
            .push(r);
    }
    groups
}

/// Build the per-(task, config) accuracy table with deltas against a
/// baseline configuration, which must be present for every task.
pub fn comparison_table(records: &[EvalRecord], baseline: StrategyConfig) -> Result<ReportTable> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let groups = group_records(records);
    let mut baseline_accuracy: BTreeMap<String, f64> = BTreeMap::new();
    for ((task, config), group) in &groups {
        if *config == baseline.to_string() && group.iter().any(|r| r.error.is_none()) {
            baseline_accuracy.insert(task.clone(), accuracy(&cloned(group))?);
        }
    }
    let mut rows = Vec::new();
    for ((task, config), group) in &groups {
        let base = baseline_accuracy
            .get(task)
            .copied()
            .ok_or_else(|| Error::MissingBaseline {
                baseline: baseline.to_string(),
                task: task.clone(),
            })?;
        let n_errored = group.iter().filter(|r| r.error.is_some()).count();
        if n_errored == group.len() {
            continue;
        }
        let acc = accuracy(&cloned(group))?;
        rows.push(ReportRow {
            task: task.clone(),
            config: config.parse()?,
            accuracy_percent: acc,
            n_items: group.len() - n_errored,
            n_errored,
            delta_vs_baseline: Some(acc - base),
        });
    }
    Ok(ReportTable { baseline, rows })
}

fn cloned(group: &[&EvalRecord]) -> Vec<EvalRecord> {
    group.iter().map(|r| (*r).clone()).collect()
}

/// Render the comparison table as Markdown.
pub fn markdown_table(table: &ReportTable) -> String {
    let mut out = String::new();
    out.push_str(&format!("Baseline: `{}`\n\n", table.baseline));
    out.push_str("| Task | Config | Accuracy | Delta | N | Errors |\n");
    out.push_str("|------|--------|----------|-------|---|--------|\n");
    for row in &table.rows {
        let delta = row
            .delta_vs_baseline
            .map(|d| format!("{d:+.2}"))
            .unwrap_or_else(|| "-".to_string());
        out.push_str(&format!(
            "| {} | {} | {:.2} | {} | {} | {} |\n",
            row.task, row.config, row.accuracy_percent, delta, row.n_items, row.n_errored
        ));
    }
    out
}

/// Pivot accuracy by repeat count, one row per (task, strategy, variant).
///
/// Returns nothing when the records cover a single repeat count.
pub fn repeat_sweep_table(records: &[EvalRecord]) -> Option<String> {
    let ms: BTreeSet<u32> = records.iter().map(|r| r.re2.repeats).collect();
    if ms.len() < 2 {
        return None;
    }
    let mut cells: BTreeMap<(String, String), BTreeMap<u32, f64>> = BTreeMap::new();
    for ((task, _), group) in group_records(records) {
        let r0 = group[0];
        let label = format!("{}+{}", r0.strategy, r0.re2.variant);
        let acc = accuracy(&cloned(&group)).ok()?;
        cells
            .entry((task, label))
            .or_default()
            .insert(r0.re2.repeats, acc);
    }
    let mut out = String::new();
    out.push_str("| Task | Strategy |");
    for m in &ms {
        out.push_str(&format!(" m={m} |"));
    }
    out.push('\n');
    out.push_str("|------|----------|");
    for _ in &ms {
        out.push_str("------|");
    }
    out.push('\n');
    for ((task, label), row) in &cells {
        out.push_str(&format!("| {task} | {label} |"));
        for m in &ms {
            match row.get(m) {
                Some(acc) => out.push_str(&format!(" {acc:.2} |")),
                None => out.push_str(" - |"),
            }
        }
        out.push('\n');
    }
    Some(out)
}

/// CSV rows `task,strategy,re2,m,accuracy,n` for the whole record set.
pub fn accuracy_csv(records: &[EvalRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out = String::from("task,strategy,re2,m,accuracy,n\n");
    for ((task, _), group) in group_records(records) {
        let r0 = group[0];
        let re2 = if r0.re2.is_baseline() {
            "-".to_string()
        } else {
            r0.re2.variant.to_string()
        };
        let acc = accuracy(&cloned(&group))?;
        let n = group.iter().filter(|r| r.error.is_none()).count();
        out.push_str(&format!(
            "{task},{},{re2},{},{acc:.2},{n}\n",
            r0.strategy, r0.re2.repeats
        ));
    }
    Ok(out)
}

/// CSV rows `complexity,accuracy,count` for annotated records.
pub fn complexity_csv(records: &[EvalRecord]) -> Result<String> {
    let buckets = bucket_by_complexity(records)?;
    let mut out = String::from("complexity,accuracy,count\n");
    for (c, (acc, count)) in buckets {
        out.push_str(&format!("{c},{acc:.2},{count}\n"));
    }
    Ok(out)
}

/// CSV rows `n,recall_mean` over every (record, sample) pair, n in 1..=4.
pub fn recall_csv(records: &[EvalRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out = String::from("n,recall_mean\n");
    for n in 1..=4usize {
        let recalls: Vec<f64> = records
            .iter()
            .filter(|r| r.error.is_none())
            .flat_map(|r| {
                r.samples
                    .iter()
                    .filter_map(move |s| ngram_recall(&r.question, s, n))
            })
            .collect();
        if recalls.is_empty() {
            continue;
        }
        let mean = recalls.iter().sum::<f64>() / recalls.len() as f64;
        out.push_str(&format!("{n},{mean:.6}\n"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tasks::task;

    fn record(task_name: &str, config: &str, correct: bool, complexity: Option<u32>) -> EvalRecord {
        let config: StrategyConfig = config.parse().unwrap();
        EvalRecord {
            item_id: format!("{task_name}-{correct}-{complexity:?}"),
            task_name: task_name.to_string(),
            question: "how many marbles does zoe hold".to_string(),
            strategy: config.strategy,
            re2: config.re2,
            prompt_text: String::new(),
            samples: vec!["she holds \\boxed{3} marbles".to_string()],
            extracted: vec![Some("3".to_string())],
            voted: Some("3".to_string()),
            gold: if correct { "3" } else { "4" }.to_string(),
            correct,
            complexity,
            usage: None,
            error: None,
        }
    }

    #[test]
    fn test_accuracy_all_correct() {
        let records = vec![record("gsm", "cot", true, None), record("gsm", "cot", true, None)];
        assert_eq!(accuracy(&records).unwrap(), 100.0);
    }

    #[test]
    fn test_accuracy_none_correct() {
        let records: Vec<EvalRecord> =
            (0..7).map(|_| record("gsm", "cot", false, None)).collect();
        assert_eq!(accuracy(&records).unwrap(), 0.0);
    }

    #[test]
    fn test_accuracy_duplication_invariance() {
        let mut records = vec![
            record("gsm", "cot", true, None),
            record("gsm", "cot", false, None),
            record("gsm", "cot", false, None),
        ];
        let once = accuracy(&records).unwrap();
        let doubled: Vec<EvalRecord> = records.iter().chain(records.iter()).cloned().collect();
        assert_eq!(accuracy(&doubled).unwrap(), once);
        records.extend(records.clone());
        assert_eq!(accuracy(&records).unwrap(), once);
    }

    #[test]
    fn test_accuracy_rejects_heterogeneous() {
        let records = vec![record("gsm", "cot", true, None), record("svamp", "cot", true, None)];
        assert!(matches!(accuracy(&records), Err(Error::Heterogeneous(_))));
        let records = vec![record("gsm", "cot", true, None), record("gsm", "cot+re2", true, None)];
        assert!(matches!(accuracy(&records), Err(Error::Heterogeneous(_))));
    }

    #[test]
    fn test_accuracy_empty_rejected() {
        assert!(matches!(accuracy(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn test_accuracy_excludes_errored() {
        let mut errored = record("gsm", "cot", false, None);
        errored.error = Some("timeout".to_string());
        let records = vec![record("gsm", "cot", true, None), errored];
        assert_eq!(accuracy(&records).unwrap(), 100.0);
    }

    #[test]
    fn test_tokenize_strips_punctuation_and_lowercases() {
        assert_eq!(tokenize("Hello,  World!"), vec!["hello", "world"]);
        assert_eq!(tokenize("(cats) don't fly."), vec!["cats", "don't", "fly"]);
        assert_eq!(tokenize("  "), Vec::<String>::new());
    }

    #[test]
    fn test_ngram_recall_oracle_pairs() {
        let close = |a: Option<f64>, b: f64| (a.unwrap() - b).abs() < 1e-9;
        // Hand-enumerated distinct n-gram sets for each pair.
        assert!(close(ngram_recall("a b c d", "a b x d", 1), 0.75));
        assert!(close(ngram_recall("a b c d", "a b x d", 2), 1.0 / 3.0));
        assert!(close(ngram_recall("a b c d", "a b c d", 3), 1.0));
        assert!(close(ngram_recall("red green", "blue yellow", 1), 0.0));
        assert!(close(ngram_recall("a b", "a b a b", 2), 1.0));
        assert!(close(ngram_recall("Hello World", "hello world", 1), 1.0));
        assert!(close(ngram_recall("cats, dogs!", "cats dogs", 2), 1.0));
        assert!(close(ngram_recall("a b c", "c b a", 2), 0.0));
        assert!(close(ngram_recall("x y z w", "y z", 2), 1.0 / 3.0));
        assert!(close(ngram_recall("p q p q", "p q", 2), 0.5));
        assert_eq!(ngram_recall("single", "anything at all", 2), None);
    }

    #[test]
    fn test_ngram_recall_verbatim_containment() {
        let q = "every day wendi feeds her chickens three cups";
        let g = format!("Question restated: {q}. Now the answer follows.");
        for n in 1..=4 {
            assert_eq!(ngram_recall(q, &g, n), Some(1.0), "n={n}");
        }
    }

    #[test]
    fn test_ngram_recall_generation_duplication_invariant() {
        let q = "a b c d e";
        let g = "a b c q r";
        let doubled = format!("{g} {g}");
        for n in 1..=3 {
            let base = ngram_recall(q, g, n);
            let dup = ngram_recall(q, &doubled, n);
            // Doubling may only add n-grams spanning the seam; recall never drops.
            assert!(dup.unwrap() >= base.unwrap(), "n={n}");
        }
    }

    #[test]
    fn test_ngram_recall_monotone_in_generation() {
        let q = "one two three four five";
        let mut g = String::from("zero");
        let mut last = 0.0;
        for token in ["one", "junk", "two", "three", "more", "four", "five"] {
            g.push(' ');
            g.push_str(token);
            let r = ngram_recall(q, &g, 1).unwrap();
            assert!(r >= last, "recall dropped after appending {token}");
            last = r;
        }
    }

    /// Index-based oracle: no sets, quadratic containment scans.
    fn brute_force_recall(question: &str, generation: &str, n: usize) -> Option<f64> {
        let q = tokenize(question);
        let g = tokenize(generation);
        if q.len() < n {
            return None;
        }
        let mut distinct: Vec<&[String]> = Vec::new();
        for i in 0..=(q.len() - n) {
            let gram = &q[i..i + n];
            if !distinct.contains(&gram) {
                distinct.push(gram);
            }
        }
        let mut hits = 0;
        for gram in &distinct {
            let mut found = false;
            if g.len() >= n {
                for j in 0..=(g.len() - n) {
                    if &g[j..j + n] == *gram {
                        found = true;
                        break;
                    }
                }
            }
            if found {
                hits += 1;
            }
        }
        Some(hits as f64 / distinct.len() as f64)
    }

    #[test]
    fn test_ngram_recall_matches_brute_force_on_short_texts() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let vocab = ["a", "b", "c"];
        for _ in 0..500 {
            let q_len = rng.random_range(1..=6);
            let g_len = rng.random_range(0..=6);
            let q: Vec<&str> = (0..q_len).map(|_| vocab[rng.random_range(0..3)]).collect();
            let g: Vec<&str> = (0..g_len).map(|_| vocab[rng.random_range(0..3)]).collect();
            let (q, g) = (q.join(" "), g.join(" "));
            for n in 1..=4 {
                assert_eq!(
                    ngram_recall(&q, &g, n),
                    brute_force_recall(&q, &g, n),
                    "q={q:?} g={g:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn test_bucket_by_complexity() {
        let records = vec![
            record("gsm", "cot", true, Some(3)),
            record("gsm", "cot", false, Some(3)),
            record("gsm", "cot", true, Some(6)),
            record("gsm", "cot", false, None),
        ];
        let buckets = bucket_by_complexity(&records).unwrap();
        assert_eq!(buckets[&3], (50.0, 2));
        assert_eq!(buckets[&6], (100.0, 1));
        let total: usize = buckets.values().map(|(_, c)| c).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn test_bucket_requires_annotations() {
        let records = vec![record("gsm", "cot", true, None)];
        assert!(matches!(
            bucket_by_complexity(&records),
            Err(Error::NoAnnotatedRecords)
        ));
    }

    #[test]
    fn test_comparison_table_delta() {
        let mut records = Vec::new();
        for _ in 0..7 {
            records.push(record("gsm", "cot", false, None));
            records.push(record("gsm", "cot+re2", true, None));
        }
        let table = comparison_table(&records, "cot".parse().unwrap()).unwrap();
        assert_eq!(table.rows.len(), 2);
        let re2_row = table
            .rows
            .iter()
            .find(|r| r.config.to_string() == "cot+re2")
            .unwrap();
        assert_eq!(re2_row.accuracy_percent, 100.0);
        assert_eq!(re2_row.delta_vs_baseline, Some(100.0));
        let base_row = table.rows.iter().find(|r| r.config.to_string() == "cot").unwrap();
        assert_eq!(base_row.delta_vs_baseline, Some(0.0));
    }

    #[test]
    fn test_comparison_table_missing_baseline() {
        let records = vec![record("gsm", "cot+re2", true, None)];
        let err = comparison_table(&records, "cot".parse().unwrap()).unwrap_err();
        assert!(matches!(err, Error::MissingBaseline { .. }));
    }

    #[test]
    fn test_markdown_table_formatting() {
        let mut records = Vec::new();
        for _ in 0..7 {
            records.push(record("gsm", "cot", false, None));
            records.push(record("gsm", "cot+re2", true, None));
        }
        let table = comparison_table(&records, "cot".parse().unwrap()).unwrap();
        let md = markdown_table(&table);
        assert!(md.contains("| gsm | cot+re2 | 100.00 | +100.00 | 7 | 0 |"), "{md}");
        assert!(md.contains("| gsm | cot | 0.00 | +0.00 | 7 | 0 |"), "{md}");
    }

    #[test]
    fn test_accuracy_csv_schema() {
        let records = vec![record("gsm", "cot", true, None), record("gsm", "cot+re2:m3", true, None)];
        let csv = accuracy_csv(&records).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("task,strategy,re2,m,accuracy,n"));
        assert!(csv.contains("gsm,cot,-,1,100.00,1"), "{csv}");
        assert!(csv.contains("gsm,cot,p1,3,100.00,1"), "{csv}");
    }

    #[test]
    fn test_complexity_csv_schema() {
        let records = vec![record("gsm", "cot", true, Some(3)), record("gsm", "cot", false, Some(3))];
        let csv = complexity_csv(&records).unwrap();
        assert_eq!(csv, "complexity,accuracy,count\n3,50.00,2\n");
    }

    #[test]
    fn test_recall_csv_schema() {
        let records = vec![record("gsm", "cot", true, None)];
        let csv = recall_csv(&records).unwrap();
        assert!(csv.starts_with("n,recall_mean\n1,"), "{csv}");
    }

    #[test]
    fn test_repeat_sweep_table() {
        let mut records = Vec::new();
        for m in 1..=3u32 {
            let config = if m == 1 { "cot".to_string() } else { format!("cot+re2:m{m}") };
            for _ in 0..4 {
                records.push(record("gsm", &config, m >= 2, None));
            }
        }
        let table = repeat_sweep_table(&records).unwrap();
        assert!(table.contains("m=1"), "{table}");
        assert!(table.contains("m=3"), "{table}");
        assert!(table.contains("| gsm | cot+p1 |"), "{table}");
        assert!(repeat_sweep_table(&records[0..4]).is_none());
    }

    #[test]
    fn test_from_samples_extract_and_vote() {
        let item = BenchmarkItem {
            id: "gsm-x".to_string(),
            question: "How many?".to_string(),
            gold_answer: "3".to_string(),
            gold_rationale: None,
            complexity: None,
        };
        let samples = vec![
            "I think \\boxed{3}".to_string(),
            "maybe \\boxed{4}".to_string(),
            "surely \\boxed{3.0}".to_string(),
        ];
        let r = EvalRecord::from_samples(
            &item,
            task("gsm").unwrap(),
            "cot+re2".parse().unwrap(),
            "prompt".to_string(),
            samples,
            None,
        )
        .unwrap();
        assert_eq!(r.extracted.len(), r.samples.len());
        assert_eq!(r.voted.as_deref(), Some("3"));
        assert!(r.correct);
    }

    #[test]
    fn test_record_json_round_trip() {
        let r = record("gsm", "cot+re2:p3:m4", true, Some(5));
        let json = serde_json::to_string(&r).unwrap();
        let back: EvalRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.answer_kind(), AnswerKind::Number);
    }
}
