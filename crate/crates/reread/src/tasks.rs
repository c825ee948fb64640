//! Benchmark taxonomy: task registry, answer kinds, dataset loading, and
//! complexity annotation.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::normalize;

/// Shape of the final answer a task expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerKind {
    Number,
    MultipleChoice,
    YesNo,
    Date,
}

/// Benchmark category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Arithmetic,
    Commonsense,
    Symbolic,
}

/// One registered benchmark task.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskSpec {
    pub name: &'static str,
    pub category: Category,
    pub answer_kind: AnswerKind,
    pub answer_format_instruction: &'static str,
}

const NUMBER_INSTRUCTION: &str = "Your final answer should be a single numerical number, in the form \\boxed{answer}, at the end of your response.";
const CHOICE_INSTRUCTION: &str =
    "Your answer should be in the form \\boxed{choice}. There is only one correct choice.";
const YES_NO_INSTRUCTION: &str =
    "Your answer should be either \\boxed{yes} or \\boxed{no}, in the form \\boxed{answer}.";
const DATE_INSTRUCTION: &str = "Your answer should be a date, in the format of \\boxed{MM/DD/YYYY}, e.g. \\boxed{05/01/2022}.";

/// The fourteen registered benchmarks.
const REGISTRY: &[TaskSpec] = &[
    TaskSpec {
        name: "gsm",
        category: Category::Arithmetic,
        answer_kind: AnswerKind::Number,
        answer_format_instruction: NUMBER_INSTRUCTION,
    },
    TaskSpec {
        name: "svamp",
        category: Category::Arithmetic,
        answer_kind: AnswerKind::Number,
        answer_format_instruction: NUMBER_INSTRUCTION,
    },
    TaskSpec {
        name: "asdiv",
        category: Category::Arithmetic,
        answer_kind: AnswerKind::Number,
        answer_format_instruction: NUMBER_INSTRUCTION,
    },
    TaskSpec {
        name: "aqua",
        category: Category::Arithmetic,
        answer_kind: AnswerKind::MultipleChoice,
        answer_format_instruction: CHOICE_INSTRUCTION,
    },
    TaskSpec {
        name: "multiarith",
        category: Category::Arithmetic,
        answer_kind: AnswerKind::Number,
        answer_format_instruction: NUMBER_INSTRUCTION,
    },
    TaskSpec {
        name: "singleeq",
        category: Category::Arithmetic,
        answer_kind: AnswerKind::Number,
        answer_format_instruction: NUMBER_INSTRUCTION,
    },
    TaskSpec {
        name: "addsub",
        category: Category::Arithmetic,
        answer_kind: AnswerKind::Number,
        answer_format_instruction: NUMBER_INSTRUCTION,
    },
    TaskSpec {
        name: "commonsenseqa",
        category: Category::Commonsense,
        answer_kind: AnswerKind::MultipleChoice,
        answer_format_instruction: CHOICE_INSTRUCTION,
    },
    TaskSpec {
        name: "strategyqa",
        category: Category::Commonsense,
        answer_kind: AnswerKind::YesNo,
        answer_format_instruction: YES_NO_INSTRUCTION,
    },
    TaskSpec {
        name: "arc-e",
        category: Category::Commonsense,
        answer_kind: AnswerKind::MultipleChoice,
        answer_format_instruction: CHOICE_INSTRUCTION,
    },
    TaskSpec {
        name: "arc-c",
        category: Category::Commonsense,
        answer_kind: AnswerKind::MultipleChoice,
        answer_format_instruction: CHOICE_INSTRUCTION,
    },
    TaskSpec {
        name: "arc-t",
        category: Category::Commonsense,
        answer_kind: AnswerKind::MultipleChoice,
        answer_format_instruction: CHOICE_INSTRUCTION,
    },
    TaskSpec {
        name: "date",
        category: Category::Symbolic,
        answer_kind: AnswerKind::Date,
        answer_format_instruction: DATE_INSTRUCTION,
    },
    TaskSpec {
        name: "coinflip",
        category: Category::Symbolic,
        answer_kind: AnswerKind::YesNo,
        answer_format_instruction: YES_NO_INSTRUCTION,
    },
];

/// Look up a task by name. Unknown names are rejected.
pub fn task(name: &str) -> Result<&'static TaskSpec> {
    REGISTRY
        .iter()
        .find(|t| t.name == name)
        .ok_or_else(|| Error::UnknownTask(name.to_string()))
}

/// All registered tasks, in registry order.
pub fn all_tasks() -> &'static [TaskSpec] {
    REGISTRY
}

/// The per-task answer-format instruction.
pub fn answer_format_instruction(task: &TaskSpec) -> &'static str {
    task.answer_format_instruction
}

impl fmt::Display for AnswerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AnswerKind::Number => "number",
            AnswerKind::MultipleChoice => "multiple_choice",
            AnswerKind::YesNo => "yes_no",
            AnswerKind::Date => "date",
        };
        f.write_str(s)
    }
}

/// One benchmark question with its gold answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkItem {
    pub id: String,
    pub question: String,
    /// Canonical form for the task's answer kind.
    pub gold_answer: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_rationale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complexity: Option<u32>,
}

/// An ordered, loaded benchmark.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub task: &'static TaskSpec,
    pub items: Vec<BenchmarkItem>,
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    id: String,
    question: String,
    answer: String,
    #[serde(default)]
    rationale: Option<String>,
}

/// Parse one JSONL record into a [`BenchmarkItem`], normalizing the gold
/// answer for the task's answer kind.
pub fn parse_dataset_line(line: &str, task: &TaskSpec) -> std::result::Result<BenchmarkItem, String> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
    if raw.question.trim().is_empty() {
        return Err(format!("item `{}` has an empty question", raw.id));
    }
    let gold = normalize(&raw.answer, task.answer_kind).ok_or_else(|| {
        format!(
            "item `{}`: gold answer {:?} does not normalize as {}",
            raw.id, raw.answer, task.answer_kind
        )
    })?;
    Ok(BenchmarkItem {
        id: raw.id,
        question: raw.question,
        gold_answer: gold,
        gold_rationale: raw.rationale,
        complexity: None,
    })
}

/// Load a JSONL dataset, preserving file order.
///
/// Each line is `{"id": ..., "question": ..., "answer": ..., "rationale": ...?}`.
/// Gold answers are stored post-normalization so correctness checks compare
/// canonical forms. GSM items with a `####`-delimited rationale are annotated
/// with their reasoning-step count.
pub fn load_dataset(path: &Path, task: &'static TaskSpec) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| Error::Dataset {
        path: path.display().to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    let reader = BufReader::new(file);
    let mut items = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Dataset {
            path: path.display().to_string(),
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let mut item = parse_dataset_line(&line, task).map_err(|message| Error::Dataset {
            path: path.display().to_string(),
            line: line_no,
            message,
        })?;
        if !seen.insert(item.id.clone()) {
            return Err(Error::Dataset {
                path: path.display().to_string(),
                line: line_no,
                message: format!("duplicate id `{}`", item.id),
            });
        }
        if task.name == "gsm" {
            item = annotate_complexity(item);
        }
        items.push(item);
    }
    Ok(Dataset { task, items })
}

/// Delimiter line introducing the final answer in a GSM-convention rationale.
const FINAL_ANSWER_DELIMITER: &str = "####";

/// Annotate an item's complexity as the number of non-empty rationale lines
/// before the `####` final-answer delimiter.
///
/// Items without a rationale, without the delimiter, or with no step lines
/// before it come back unchanged.
pub fn annotate_complexity(item: BenchmarkItem) -> BenchmarkItem {
    let Some(rationale) = item.gold_rationale.as_deref() else {
        return item;
    };
    let mut steps = 0u32;
    let mut saw_delimiter = false;
    for line in rationale.lines() {
        let trimmed = line.trim();
        if trimmed.starts_with(FINAL_ANSWER_DELIMITER) {
            saw_delimiter = true;
            break;
        }
        if !trimmed.is_empty() {
            steps += 1;
        }
    }
    if !saw_delimiter || steps == 0 {
        return item;
    }
    BenchmarkItem {
        complexity: Some(steps),
        ..item
    }
}
