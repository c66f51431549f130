//! Parsing free-form model output into structured task answers.
//!
//! Extraction order: strict whole-text JSON, then a fenced code block, then
//! the first well-formed bracketed list (or bare number for task 1). Every
//! input yields a strict/lenient/failed classification and never a panic;
//! failed parses are scored downstream as empty predictions.

use super::Task;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Coordinate bound beyond which a parsed value is considered garbage, mm.
const MAX_ABS_MM: f64 = 1e6;
/// Upper bound accepted for a pin count answer.
const MAX_COUNT: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParseOutcome {
    Strict,
    Lenient,
    Failed,
}

/// A structured answer for one task.
#[derive(Debug, Clone, PartialEq)]
pub enum TaskAnswer {
    Count(u32),
    /// Centers or dims, depending on the task.
    Pairs(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedPrediction {
    pub outcome: ParseOutcome,
    pub answer: Option<TaskAnswer>,
}

impl ParsedPrediction {
    fn failed() -> Self {
        Self { outcome: ParseOutcome::Failed, answer: None }
    }
}

/// Parses arbitrary model output for the given task.
pub fn parse_prediction(text: &str, task: Task) -> ParsedPrediction {
    let trimmed = text.trim();
    if let Ok(v) = serde_json::from_str::<Value>(trimmed) {
        if let Some(answer) = answer_from_value(&v, task) {
            return ParsedPrediction { outcome: ParseOutcome::Strict, answer: Some(answer) };
        }
    }
    if let Some(block) = fenced_block(trimmed) {
        if let Ok(v) = serde_json::from_str::<Value>(block.trim()) {
            if let Some(answer) = answer_from_value(&v, task) {
                return ParsedPrediction { outcome: ParseOutcome::Lenient, answer: Some(answer) };
            }
        }
    }
    let scavenged = match task {
        Task::PinCount => first_integer(trimmed).map(TaskAnswer::Count),
        Task::PinCenters | Task::PinDims => {
            first_pair_list(trimmed).map(TaskAnswer::Pairs)
        }
    };
    match scavenged {
        Some(answer) => ParsedPrediction { outcome: ParseOutcome::Lenient, answer: Some(answer) },
        None => ParsedPrediction::failed(),
    }
}

fn expected_key(task: Task) -> &'static str {
    match task {
        Task::PinCount => "count",
        Task::PinCenters => "centers",
        Task::PinDims => "dims",
    }
}

fn answer_from_value(v: &Value, task: Task) -> Option<TaskAnswer> {
    let inner = match v {
        Value::Object(map) => map.get(expected_key(task))?,
        other => other,
    };
    match task {
        Task::PinCount => count_from_value(inner).map(TaskAnswer::Count),
        Task::PinCenters | Task::PinDims => pairs_from_value(inner).map(TaskAnswer::Pairs),
    }
}

fn count_from_value(v: &Value) -> Option<u32> {
    let n = v.as_u64().or_else(|| {
        let f = v.as_f64()?;
        if f.is_finite() && f >= 0.0 && f.fract() == 0.0 {
            Some(f as u64)
        } else {
            None
        }
    })?;
    (n <= MAX_COUNT).then_some(n as u32)
}

fn pairs_from_value(v: &Value) -> Option<Vec<[f64; 2]>> {
    let items = v.as_array()?;
    let mut out = Vec::with_capacity(items.len());
    for item in items {
        let pair = item.as_array()?;
        if pair.len() < 2 {
            return None;
        }
        let a = pair[0].as_f64()?;
        let b = pair[1].as_f64()?;
        if !(a.is_finite() && b.is_finite() && a.abs() <= MAX_ABS_MM && b.abs() <= MAX_ABS_MM) {
            return None;
        }
        out.push([a, b]);
    }
    Some(out)
}

/// Content of the first ``` fenced block, language tag stripped.
fn fenced_block(text: &str) -> Option<&str> {
    let start = text.find("```")?;
    let rest = &text[start + 3..];
    let end = rest.find("```")?;
    let block = &rest[..end];
    // Drop a leading language word like `json`.
    match block.split_once('\n') {
        Some((first, body)) if !first.trim().is_empty() && !first.contains(['{', '[']) => {
            Some(body)
        }
        _ => Some(block),
    }
}

/// First non-negative integer token in the text.
fn first_integer(text: &str) -> Option<u32> {
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            // Skip decimals like "8.5": take the integer part only when the
            // token is a plain integer.
            if i < bytes.len() && bytes[i] == b'.' {
                while i < bytes.len() && (bytes[i] == b'.' || bytes[i].is_ascii_digit()) {
                    i += 1;
                }
                continue;
            }
            if let Ok(n) = text[start..i].parse::<u64>() {
                if n <= MAX_COUNT {
                    return Some(n as u32);
                }
            }
        } else {
            i += 1;
        }
    }
    None
}

/// First balanced bracketed substring that parses as a list of numeric pairs.
fn first_pair_list(text: &str) -> Option<Vec<[f64; 2]>> {
    let bytes = text.as_bytes();
    let mut attempts = 0;
    let mut i = 0;
    while i < bytes.len() && attempts < 64 {
        if bytes[i] == b'[' {
            let mut depth = 0usize;
            let mut j = i;
            let mut end = None;
            while j < bytes.len() {
                match bytes[j] {
                    b'[' => depth += 1,
                    b']' => {
                        depth -= 1;
                        if depth == 0 {
                            end = Some(j);
                            break;
                        }
                    }
                    _ => {}
                }
                j += 1;
            }
            let Some(end) = end else {
                return None;
            };
            attempts += 1;
            if let Ok(v) = serde_json::from_str::<Value>(&text[i..=end]) {
                if let Some(pairs) = pairs_from_value(&v) {
                    if !pairs.is_empty() {
                        return Some(pairs);
                    }
                }
            }
            i += 1;
        } else {
            i += 1;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_json_object() {
        let p = parse_prediction(r#"{"centers": [[-1.5, 0], [1.5, 0]]}"#, Task::PinCenters);
        assert_eq!(p.outcome, ParseOutcome::Strict);
        assert_eq!(p.answer, Some(TaskAnswer::Pairs(vec![[-1.5, 0.0], [1.5, 0.0]])));
    }

    #[test]
    fn strict_bare_values() {
        let p = parse_prediction("8", Task::PinCount);
        assert_eq!(p.outcome, ParseOutcome::Strict);
        assert_eq!(p.answer, Some(TaskAnswer::Count(8)));
        let p = parse_prediction("[[0.5, 0.5]]", Task::PinDims);
        assert_eq!(p.outcome, ParseOutcome::Strict);
    }

    #[test]
    fn lenient_prose_integer() {
        let p = parse_prediction("The diagram has 8 pins.", Task::PinCount);
        assert_eq!(p.outcome, ParseOutcome::Lenient);
        assert_eq!(p.answer, Some(TaskAnswer::Count(8)));
    }

    #[test]
    fn lenient_fenced_block() {
        let text = "Here you go:\n```json\n{\"dims\": [[0.6, 1.5]]}\n```\nDone.";
        let p = parse_prediction(text, Task::PinDims);
        assert_eq!(p.outcome, ParseOutcome::Lenient);
        assert_eq!(p.answer, Some(TaskAnswer::Pairs(vec![[0.6, 1.5]])));
    }

    #[test]
    fn lenient_embedded_list() {
        let text = "The centers are [[-1.27, 0.0], [1.27, 0.0]] in mm.";
        let p = parse_prediction(text, Task::PinCenters);
        assert_eq!(p.outcome, ParseOutcome::Lenient);
        assert_eq!(p.answer, Some(TaskAnswer::Pairs(vec![[-1.27, 0.0], [1.27, 0.0]])));
    }

    #[test]
    fn failure_paths() {
        let p = parse_prediction("I cannot determine this.", Task::PinCenters);
        assert_eq!(p.outcome, ParseOutcome::Failed);
        assert!(p.answer.is_none());
        let p = parse_prediction("", Task::PinCount);
        assert_eq!(p.outcome, ParseOutcome::Failed);
        let p = parse_prediction("[[1e999, 0]]", Task::PinCenters);
        assert_eq!(p.outcome, ParseOutcome::Failed);
    }

    #[test]
    fn garbage_never_panics() {
        let garbage = [
            "[[[[[[",
            "]]]]",
            "{\"count\": -3}",
            "{\"count\": 1e300}",
            "\u{0000}\u{ffff}",
            "```unterminated",
            "[[1,2,[3]]]",
            "[1, 2, 3]",
        ];
        for g in garbage {
            for task in [Task::PinCount, Task::PinCenters, Task::PinDims] {
                let _ = parse_prediction(g, task);
            }
        }
    }
}
