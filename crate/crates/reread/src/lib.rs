//! Benchmark harness for question re-reading prompts across arithmetic,
//! commonsense, and symbolic reasoning tasks.

pub mod analysis;
pub mod casebook;
pub mod config;
pub mod consensus;
pub mod error;
pub mod extract;
pub mod prompts;
pub mod provider;
pub mod runner;
pub mod tasks;

pub use error::{Error, Result};
pub use prompts::{compose, Re2Config, Re2Variant, Strategy, StrategyConfig};
pub use tasks::{AnswerKind, BenchmarkItem, Category, Dataset, TaskSpec};
