//! Answer parsing: boxed extraction, canonical normalization, fallback
//! scanning, and correctness judgment.

use once_cell::sync::Lazy;
use regex::Regex;

use crate::tasks::AnswerKind;

const BOXED_OPEN: &str = "\\boxed{";

/// How an answer left a generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractionRoute {
    /// Parsed from the last balanced `\boxed{...}`.
    Boxed,
    /// Recovered by the kind-specific fallback scan.
    Fallback,
    /// Nothing extractable.
    Missing,
}

/// Contents of the last `\boxed{...}` occurrence with balanced braces.
pub fn extract_boxed(generation: &str) -> Option<String> {
    let mut last = None;
    let mut search_from = 0;
    while let Some(rel) = generation[search_from..].find(BOXED_OPEN) {
        let start = search_from + rel + BOXED_OPEN.len();
        if let Some(content) = balanced_content(&generation[start..]) {
            last = Some(content);
        }
        search_from = search_from + rel + BOXED_OPEN.len();
    }
    last
}

/// Text up to the brace matching an already-consumed `{`, if braces balance.
fn balanced_content(rest: &str) -> Option<String> {
    let mut depth = 1usize;
    for (i, c) in rest.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(rest[..i].to_string());
                }
            }
            _ => {}
        }
    }
    None
}

static NUMBER_TOKEN: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"[-+]?\d[\d,]*(?:\.\d+)?|[-+]?\.\d+").unwrap());
static YES_NO_TOKEN: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?i)\b(yes|no)\b").unwrap());
static CHOICE_TOKEN: Lazy<Regex> = Lazy::new(|| Regex::new(r"\b[A-E]\b").unwrap());
static DATE_TOKEN: Lazy<Regex> = Lazy::new(|| Regex::new(r"\b(\d{1,2})/(\d{1,2})/(\d{4})\b").unwrap());

/// Normalize a raw answer to its canonical form for the kind.
///
/// Canonical forms: shortest decimal rendering for numbers, a single
/// uppercase letter for choices, lowercase `yes`/`no`, zero-padded
/// `MM/DD/YYYY` for dates. Unparseable input yields nothing.
pub fn normalize(raw: &str, kind: AnswerKind) -> Option<String> {
    match kind {
        AnswerKind::Number => normalize_number(raw),
        AnswerKind::MultipleChoice => normalize_choice(raw),
        AnswerKind::YesNo => normalize_yes_no(raw),
        AnswerKind::Date => normalize_date(raw),
    }
}

fn normalize_number(raw: &str) -> Option<String> {
    let cleaned: String = raw
        .trim()
        .chars()
        .filter(|c| !matches!(c, '$' | '€' | '£' | ',' | ' '))
        .collect();
    let cleaned = cleaned.trim_end_matches('.');
    let value: f64 = cleaned.parse().ok()?;
    if !value.is_finite() {
        return None;
    }
    Some(render_number(value))
}

/// Shortest decimal rendering; integral values print without a fraction.
pub fn render_number(value: f64) -> String {
    let value = if value == 0.0 { 0.0 } else { value };
    format!("{value}")
}

fn normalize_choice(raw: &str) -> Option<String> {
    let letters: Vec<char> = raw.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
    match letters.as_slice() {
        [c] if c.is_ascii_alphabetic() => {
            let upper = c.to_ascii_uppercase();
            ('A'..='E').contains(&upper).then(|| upper.to_string())
        }
        _ => None,
    }
}

fn normalize_yes_no(raw: &str) -> Option<String> {
    let word = raw.trim_matches(|c: char| !c.is_ascii_alphanumeric());
    match word.to_ascii_lowercase().as_str() {
        "yes" => Some("yes".to_string()),
        "no" => Some("no".to_string()),
        _ => None,
    }
}

fn normalize_date(raw: &str) -> Option<String> {
    let trimmed = raw.trim().trim_end_matches('.');
    let caps = DATE_TOKEN.captures(trimmed)?;
    if caps.get(0)?.as_str() != trimmed {
        return None;
    }
    canonical_date(&caps)
}

fn canonical_date(caps: &regex::Captures<'_>) -> Option<String> {
    let month: u32 = caps[1].parse().ok()?;
    let day: u32 = caps[2].parse().ok()?;
    let year: i32 = caps[3].parse().ok()?;
    chrono::NaiveDate::from_ymd_opt(year, month, day)?;
    Some(format!("{month:02}/{day:02}/{year:04}"))
}

/// Extract the canonical final answer from a generation.
///
/// The last balanced boxed occurrence wins when its contents normalize;
/// otherwise the kind-specific fallback scans the whole generation.
pub fn extract_answer(generation: &str, kind: AnswerKind) -> Option<String> {
    extract_answer_with_route(generation, kind).0
}

/// [`extract_answer`] plus which route produced the result.
pub fn extract_answer_with_route(
    generation: &str,
    kind: AnswerKind,
) -> (Option<String>, ExtractionRoute) {
    if let Some(content) = extract_boxed(generation) {
        if let Some(canonical) = normalize(&content, kind) {
            return (Some(canonical), ExtractionRoute::Boxed);
        }
    }
    match fallback_scan(generation, kind) {
        Some(canonical) => (Some(canonical), ExtractionRoute::Fallback),
        None => (None, ExtractionRoute::Missing),
    }
}

fn fallback_scan(generation: &str, kind: AnswerKind) -> Option<String> {
    match kind {
        AnswerKind::Number => NUMBER_TOKEN
            .find_iter(generation)
            .filter_map(|m| normalize_number(m.as_str()))
            .last(),
        AnswerKind::YesNo => YES_NO_TOKEN
            .find_iter(generation)
            .last()
            .map(|m| m.as_str().to_ascii_lowercase()),
        AnswerKind::MultipleChoice => CHOICE_TOKEN
            .find_iter(generation)
            .last()
            .map(|m| m.as_str().to_string()),
        AnswerKind::Date => DATE_TOKEN
            .captures_iter(generation)
            .filter_map(|caps| canonical_date(&caps))
            .last(),
    }
}

/// Numeric equality under relative tolerance 1e-6 with an absolute floor of
/// 1e-9 near zero.
pub fn numeric_eq(a: f64, b: f64) -> bool {
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= f64::max(1e-9, 1e-6 * scale)
}

/// Judge a canonical prediction against the canonical gold answer.
pub fn is_correct(predicted: &str, gold: &str, kind: AnswerKind) -> bool {
    if kind == AnswerKind::Number {
        if let (Ok(p), Ok(g)) = (predicted.parse::<f64>(), gold.parse::<f64>()) {
            return numeric_eq(p, g);
        }
    }
    predicted == gold
}
