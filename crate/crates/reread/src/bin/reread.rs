//! Command-line driver: run grids, render reports, verify prompt fixtures.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};

use reread::analysis::repeat_sweep_table;
use reread::config::RunConfig;
use reread::prompts::{compose, golden_combinations, golden_file_name, GOLDEN_QUESTION};
use reread::provider::{api_key_from_env, CachingProvider, HttpProvider, ResponseCache};
use reread::runner::{self, RunSummary};
use reread::tasks::task;
use reread::{Error, StrategyConfig};

#[derive(Parser)]
#[command(name = "reread", version, about = "Benchmark harness for question re-reading prompts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the dataset-by-strategy grid from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Serve every request from the response cache; misses fail.
        #[arg(long)]
        offline: bool,
        /// Abort on the first provider failure instead of recording it.
        #[arg(long)]
        strict: bool,
        /// Worker count override.
        #[arg(long)]
        parallelism: Option<usize>,
    },
    /// Render the comparison report and plot CSVs for a finished run.
    Report {
        #[arg(long)]
        run: PathBuf,
        /// Strategy descriptor the delta column compares against.
        #[arg(long)]
        baseline: String,
    },
    /// Run the grid with each strategy expanded over a repeat-count range.
    SweepM {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        min: u32,
        #[arg(long, default_value_t = 5)]
        max: u32,
        #[arg(long)]
        offline: bool,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        parallelism: Option<usize>,
    },
    /// Fixture maintenance.
    Fixtures {
        #[command(subcommand)]
        command: FixturesCommand,
    },
}

#[derive(Subcommand)]
enum FixturesCommand {
    /// Check every golden prompt file against freshly composed output.
    Verify {
        #[arg(long, default_value = "fixtures/prompts")]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_class(&err))
        }
    }
}

fn exit_class(err: &Error) -> u8 {
    match err {
        Error::Provider { .. }
        | Error::Auth(_)
        | Error::RetriesExhausted { .. }
        | Error::MockMiss { .. }
        | Error::OfflineCacheMiss(_) => 2,
        _ => 1,
    }
}

fn dispatch(command: Command) -> Result<u8, Error> {
    match command {
        Command::Run { config, offline, strict, parallelism } => {
            cmd_run(&config, offline, strict, parallelism)
        }
        Command::Report { run, baseline } => cmd_report(&run, &baseline),
        Command::SweepM { config, min, max, offline, strict, parallelism } => {
            cmd_sweep(&config, min, max, offline, strict, parallelism)
        }
        Command::Fixtures { command: FixturesCommand::Verify { dir } } => cmd_verify(&dir),
    }
}

fn build_provider(config: &RunConfig) -> Result<CachingProvider, Error> {
    let cache = ResponseCache::new(&config.provider.cache_dir);
    if config.provider.offline {
        return Ok(CachingProvider::offline(cache));
    }
    let http = HttpProvider::new(
        &config.provider.base_url,
        api_key_from_env(),
        Duration::from_secs(config.provider.timeout_seconds),
        config.provider.max_retries,
    )?;
    Ok(CachingProvider::new(cache, Box::new(http)))
}

fn print_summary(summary: &RunSummary) {
    println!(
        "run {}: {} cells ({} written, {} skipped, {} errored)",
        summary.run_dir.display(),
        summary.grid_size,
        summary.written,
        summary.skipped,
        summary.errored,
    );
    for row in &summary.rows {
        let accuracy = row
            .accuracy_percent
            .map(|a| format!("{a:.2}%"))
            .unwrap_or_else(|| "-".to_string());
        println!(
            "  {} {} {} ({} scored, {} errored)",
            row.task, row.config, accuracy, row.n_scored, row.n_errored
        );
    }
}

fn cmd_run(
    config_path: &Path,
    offline: bool,
    strict: bool,
    parallelism: Option<usize>,
) -> Result<u8, Error> {
    let mut config = RunConfig::from_file(config_path)?;
    config.apply_overrides(offline, parallelism);
    let provider = build_provider(&config)?;
    let summary = runner::run(&config, &provider, strict)?;
    print_summary(&summary);
    Ok(0)
}

fn cmd_report(run_dir: &Path, baseline: &str) -> Result<u8, Error> {
    let baseline: StrategyConfig = baseline.parse()?;
    let bundle = runner::write_reports(run_dir, baseline)?;
    println!("{}", bundle.markdown);
    println!();
    println!("wrote {}", bundle.report_path.display());
    println!("wrote {}", bundle.accuracy_csv_path.display());
    for path in &bundle.figure_paths {
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn cmd_sweep(
    config_path: &Path,
    min: u32,
    max: u32,
    offline: bool,
    strict: bool,
    parallelism: Option<usize>,
) -> Result<u8, Error> {
    let mut config = RunConfig::from_file(config_path)?;
    config.apply_overrides(offline, parallelism);
    config.strategies = runner::sweep_strategies(&config.strategies, min, max)?;
    config.run_id = format!("{}-sweep-m{min}-{max}", config.run_id);
    let provider = build_provider(&config)?;
    let summary = runner::run(&config, &provider, strict)?;
    print_summary(&summary);
    let records = runner::load_records(&summary.run_dir)?;
    if let Some(table) = repeat_sweep_table(&records) {
        let path = summary.run_dir.join("sweep.md");
        std::fs::write(&path, format!("{table}\n"))?;
        println!("\n{table}");
        println!("\nwrote {}", path.display());
    }
    Ok(0)
}

fn cmd_verify(dir: &Path) -> Result<u8, Error> {
    let gsm = task("gsm")?;
    let combinations = golden_combinations();
    let mut mismatched = 0;
    for combination in &combinations {
        let name = golden_file_name(*combination);
        let expected = compose(combination.strategy, gsm, GOLDEN_QUESTION, combination.re2)?;
        match std::fs::read_to_string(dir.join(&name)) {
            Ok(text) if text == expected.text => println!("ok {name}"),
            Ok(_) => {
                println!("mismatch {name}");
                mismatched += 1;
            }
            Err(e) => {
                println!("missing {name} ({e})");
                mismatched += 1;
            }
        }
    }
    if mismatched == 0 {
        println!("all {} golden prompts match", combinations.len());
        Ok(0)
    } else {
        println!("{mismatched} of {} golden prompts failed", combinations.len());
        Ok(3)
    }
}
