//! Prompt composition for the four thought-eliciting strategies and their
//! question re-reading overlays.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tasks::{Category, TaskSpec};

/// Baseline prompting strategy the re-reading overlay composes with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Vanilla,
    Cot,
    PlanAndSolve,
    ProgramAided,
}

impl Strategy {
    pub fn all() -> [Strategy; 4] {
        [
            Strategy::Vanilla,
            Strategy::Cot,
            Strategy::PlanAndSolve,
            Strategy::ProgramAided,
        ]
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Strategy::Vanilla => "vanilla",
            Strategy::Cot => "cot",
            Strategy::PlanAndSolve => "ps",
            Strategy::ProgramAided => "pal",
        };
        f.write_str(s)
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vanilla" => Ok(Strategy::Vanilla),
            "cot" => Ok(Strategy::Cot),
            "ps" => Ok(Strategy::PlanAndSolve),
            "pal" => Ok(Strategy::ProgramAided),
            other => Err(Error::Descriptor(format!("unknown strategy `{other}`"))),
        }
    }
}

/// Layout of the repeated question block.
///
/// P1 prefixes each repeat with "Read the question again: ", P2 repeats the
/// bare Q line, and P3/P4 interleave the step-by-step line before each repeat
/// (so they only make sense for [`Strategy::Cot`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Re2Variant {
    P1,
    P2,
    P3,
    P4,
}

impl fmt::Display for Re2Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Re2Variant::P1 => "p1",
            Re2Variant::P2 => "p2",
            Re2Variant::P3 => "p3",
            Re2Variant::P4 => "p4",
        };
        f.write_str(s)
    }
}

impl FromStr for Re2Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p1" => Ok(Re2Variant::P1),
            "p2" => Ok(Re2Variant::P2),
            "p3" => Ok(Re2Variant::P3),
            "p4" => Ok(Re2Variant::P4),
            other => Err(Error::Descriptor(format!("unknown re-read variant `{other}`"))),
        }
    }
}

/// Question re-reading configuration.
///
/// `repeats` counts total question occurrences in the composed prompt: 1 is
/// the plain baseline, 2 is the re-reading default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Re2Config {
    pub repeats: u32,
    pub variant: Re2Variant,
}

impl Re2Config {
    /// Plain strategy prompt, question stated once.
    pub fn baseline() -> Self {
        Re2Config {
            repeats: 1,
            variant: Re2Variant::P1,
        }
    }

    /// Default re-reading: question stated twice with the P1 phrasing.
    pub fn default_re2() -> Self {
        Re2Config {
            repeats: 2,
            variant: Re2Variant::P1,
        }
    }

    pub fn is_baseline(&self) -> bool {
        self.repeats == 1
    }
}

/// A (strategy, re-read) pair, parsed from and displayed as a descriptor.
///
/// Grammar: `<strategy>[+re2[:pN][:mN]]`, e.g. `cot`, `cot+re2`,
/// `cot+re2:p3`, `cot+re2:m4`, `cot+re2:p2:m3`. Bare `<strategy>` means one
/// question occurrence; `+re2` defaults to p1 with two occurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub strategy: Strategy,
    pub re2: Re2Config,
}

impl StrategyConfig {
    pub fn new(strategy: Strategy, re2: Re2Config) -> Self {
        StrategyConfig { strategy, re2 }
    }
}

impl fmt::Display for StrategyConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.strategy)?;
        if self.re2.is_baseline() {
            return Ok(());
        }
        write!(f, "+re2")?;
        if self.re2.variant != Re2Variant::P1 {
            write!(f, ":{}", self.re2.variant)?;
        }
        if self.re2.repeats != 2 {
            write!(f, ":m{}", self.re2.repeats)?;
        }
        Ok(())
    }
}

impl FromStr for StrategyConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = match s.split_once('+') {
            Some((head, tail)) => (head, Some(tail)),
            None => (s, None),
        };
        let strategy = head.parse::<Strategy>()?;
        let Some(tail) = tail else {
            return Ok(StrategyConfig::new(strategy, Re2Config::baseline()));
        };
        let mut parts = tail.split(':');
        if parts.next() != Some("re2") {
            return Err(Error::Descriptor(format!("expected `re2` after `+` in `{s}`")));
        }
        let mut re2 = Re2Config::default_re2();
        for part in parts {
            if let Some(m) = part.strip_prefix('m') {
                let repeats: u32 = m
                    .parse()
                    .map_err(|_| Error::Descriptor(format!("bad repeat count `{part}` in `{s}`")))?;
                if repeats == 0 {
                    return Err(Error::Descriptor(format!("repeat count must be positive in `{s}`")));
                }
                re2.repeats = repeats;
            } else {
                re2.variant = part.parse()?;
            }
        }
        Ok(StrategyConfig::new(strategy, re2))
    }
}

/// A fully composed prompt, ready to send.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptRender {
    pub text: String,
    pub strategy: Strategy,
    pub re2: Re2Config,
    pub task_name: String,
    pub item_id: String,
}

const REREAD_PREFIX: &str = "Read the question again: ";
const COT_ANSWER_LINE: &str = "A: Let's think step by step.";
const VANILLA_ANSWER_LINE: &str = "A: ";
const PS_ANSWER_LINE: &str = "A: Let's first understand the problem and devise a plan to solve the problem. Then, let's carry out the plan, solve the problem step by step, and give the ultimate answer. Please explicitly generate the mentioned process: [Problem Understanding], [Plan], [Solving/Calculations], [Answer]. in your response.";

const PAL_PREAMBLE: &[&str] = &[
    "#!/bin/python3",
    "import math",
    "import numpy as np",
    "import statistics",
    "import sympy as sp",
    "########### Task Instruction ##############",
    "# You will write python program to solve math problems.",
    "# You will only write code blocks.",
    "# Please generate your code block in `def solution()` function, and thus it can be executed by python interpreter. You don't need to call `solution()` function because it will be called by the system.",
    "# The concrete format of `solution()` is as follows:",
    "# def solution():",
    "#   \"\"\"<question>\"\"\"",
    "#   <your code>",
    "#   result = <your result>",
    "#   return result",
    "#########################################",
];

const PAL_REQUEST_LINE: &str = "# Your defined \"solution()\" function with comments here.";

fn validate(strategy: Strategy, question: &str, re2: Re2Config) -> Result<()> {
    if question.trim().is_empty() {
        return Err(Error::EmptyQuestion);
    }
    if re2.repeats == 0 {
        return Err(Error::Config("re-read repeat count must be at least 1".into()));
    }
    if strategy != Strategy::Cot && re2.variant != Re2Variant::P1 {
        return Err(Error::InvalidCombination {
            strategy: strategy.to_string(),
            variant: re2.variant.to_string(),
        });
    }
    Ok(())
}

/// The lines repeated once per re-read for a variant.
fn reread_block(variant: Re2Variant, question: &str) -> Vec<String> {
    match variant {
        Re2Variant::P1 => vec![format!("{REREAD_PREFIX}{question}")],
        Re2Variant::P2 => vec![format!("Q: {question}")],
        Re2Variant::P3 => vec![
            COT_ANSWER_LINE.to_string(),
            format!("{REREAD_PREFIX}{question}"),
        ],
        Re2Variant::P4 => vec![COT_ANSWER_LINE.to_string(), format!("Q: {question}")],
    }
}

/// Compose the prompt for any registered strategy.
///
/// The question block is stated `re2.repeats` times in total; with one repeat
/// the output is the plain strategy template.
pub fn compose(
    strategy: Strategy,
    task: &TaskSpec,
    question: &str,
    re2: Re2Config,
) -> Result<PromptRender> {
    match strategy {
        Strategy::PlanAndSolve => return compose_ps(task, question, re2),
        Strategy::ProgramAided => return compose_pal(task, question, re2),
        Strategy::Vanilla | Strategy::Cot => {}
    }
    validate(strategy, question, re2)?;
    let answer_line = match strategy {
        Strategy::Vanilla => VANILLA_ANSWER_LINE,
        _ => COT_ANSWER_LINE,
    };
    let mut lines = vec![format!("Q: {question}")];
    for _ in 1..re2.repeats {
        lines.extend(reread_block(re2.variant, question));
    }
    lines.push(task.answer_format_instruction.to_string());
    lines.push(answer_line.to_string());
    Ok(PromptRender {
        text: lines.join("\n"),
        strategy,
        re2,
        task_name: task.name.to_string(),
        item_id: String::new(),
    })
}

/// Compose the plan-and-solve prompt.
pub fn compose_ps(task: &TaskSpec, question: &str, re2: Re2Config) -> Result<PromptRender> {
    validate(Strategy::PlanAndSolve, question, re2)?;
    let mut lines = vec![format!("Q: {question}")];
    for _ in 1..re2.repeats {
        lines.extend(reread_block(re2.variant, question));
    }
    lines.push(task.answer_format_instruction.to_string());
    lines.push(PS_ANSWER_LINE.to_string());
    Ok(PromptRender {
        text: lines.join("\n"),
        strategy: Strategy::PlanAndSolve,
        re2,
        task_name: task.name.to_string(),
        item_id: String::new(),
    })
}

/// Compose the program-aided prompt. Only arithmetic tasks are supported.
pub fn compose_pal(task: &TaskSpec, question: &str, re2: Re2Config) -> Result<PromptRender> {
    if task.category != Category::Arithmetic {
        return Err(Error::NonArithmeticTask(task.name.to_string()));
    }
    validate(Strategy::ProgramAided, question, re2)?;
    let mut lines: Vec<String> = PAL_PREAMBLE.iter().map(|s| s.to_string()).collect();
    lines.push(format!("# Q: {question}"));
    for _ in 1..re2.repeats {
        lines.push(format!("# {REREAD_PREFIX}{question}"));
    }
    lines.push(PAL_REQUEST_LINE.to_string());
    Ok(PromptRender {
        text: lines.join("\n"),
        strategy: Strategy::ProgramAided,
        re2,
        task_name: task.name.to_string(),
        item_id: String::new(),
    })
}

/// Question used by every checked-in golden prompt file.
pub const GOLDEN_QUESTION: &str = "Every day, Wendi feeds each of her chickens three cups of mixed chicken feed, containing seeds, mealworms and vegetables to help keep them healthy.  She gives the chickens their feed in three separate meals. In the morning, she gives her flock of chickens 15 cups of feed.  In the afternoon, she gives her chickens another 25 cups of feed.  How many cups of feed does she need to give her chickens in the final meal of the day if the size of Wendi's flock is 20 chickens?";

/// The (strategy, variant, repeats) triples with checked-in golden prompts.
pub fn golden_combinations() -> Vec<StrategyConfig> {
    let mut out = Vec::new();
    for strategy in Strategy::all() {
        out.push(StrategyConfig::new(strategy, Re2Config::baseline()));
        out.push(StrategyConfig::new(strategy, Re2Config::default_re2()));
    }
    for variant in [Re2Variant::P2, Re2Variant::P3, Re2Variant::P4] {
        out.push(StrategyConfig::new(
            Strategy::Cot,
            Re2Config { repeats: 2, variant },
        ));
    }
    out
}

/// Golden-file name for a combination: `<strategy>_<variant>_<m>.txt`.
pub fn golden_file_name(config: StrategyConfig) -> String {
    format!(
        "{}_{}_{}.txt",
        config.strategy, config.re2.variant, config.re2.repeats
    )
}
