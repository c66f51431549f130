//! Chain-of-thought QA dataset construction.
//!
//! Every footprint yields three progressive questions: pin count, pin center
//! coordinates relative to the diagram center, and pin dimensions in mm.
//! Dialogue strategies S1-S5 control how the three tasks are split across
//! conversation samples and training rounds; dataset strategies T1-T4 order
//! synthetic and real-world data across training stages.

mod manifest;
mod parse;

pub use manifest::{build_manifest, DatasetStrategy, Stage, StageManifest};
pub use parse::{parse_prediction, ParseOutcome, ParsedPrediction, TaskAnswer};

use crate::fmt::trimmed;
use crate::geom::FootprintGeometry;
use crate::Coord;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QaError {
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error("strategy {strategy} requires a non-empty {which} corpus")]
    EmptyCorpus { strategy: &'static str, which: &'static str },
    #[error("sample {id:?} appears twice within one stage")]
    DuplicateSample { id: String },
}

/// The three sub-tasks of footprint geometry labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Task {
    PinCount,
    PinCenters,
    PinDims,
}

impl Task {
    pub fn index(&self) -> u8 {
        match self {
            Task::PinCount => 1,
            Task::PinCenters => 2,
            Task::PinDims => 3,
        }
    }

    pub fn from_index(i: u8) -> Option<Task> {
        match i {
            1 => Some(Task::PinCount),
            2 => Some(Task::PinCenters),
            3 => Some(Task::PinDims),
            _ => None,
        }
    }

    /// The canonical question wording for this task.
    pub fn question(&self) -> &'static str {
        match self {
            Task::PinCount => "What is the number of pins in the IC footprint diagram?",
            Task::PinCenters => {
                "What are the coordinates of each pin relative to the center of the diagram?"
            }
            Task::PinDims => "What are the dimensions of each pin in millimeters?",
        }
    }
}

/// Ground-truth answers for one footprint, ordered by pin ordinal.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalAnswers {
    pub count: u32,
    pub centers: Vec<[f64; 2]>,
    pub dims: Vec<[f64; 2]>,
}

impl CanonicalAnswers {
    /// JSON answer fragment for one task. Numbers carry at most 4 decimals.
    pub fn answer_text(&self, task: Task) -> String {
        match task {
            Task::PinCount => format!("{{\"count\": {}}}", self.count),
            Task::PinCenters => format!("{{\"centers\": {}}}", pairs_json(&self.centers)),
            Task::PinDims => format!("{{\"dims\": {}}}", pairs_json(&self.dims)),
        }
    }
}

fn pairs_json(pairs: &[[f64; 2]]) -> String {
    let body: Vec<String> = pairs
        .iter()
        .map(|p| format!("[{}, {}]", trimmed(p[0], 4), trimmed(p[1], 4)))
        .collect();
    format!("[{}]", body.join(", "))
}

/// Reads the answers off a (recentered) geometry: count, centers and dims by
/// ordinal; circles report `[d, d]`.
pub fn canonical_answers(geometry: &FootprintGeometry<Coord>) -> CanonicalAnswers {
    let mut order: Vec<usize> = (0..geometry.pins.len()).collect();
    order.sort_by_key(|&i| geometry.pins[i].ordinal);
    let centers = order
        .iter()
        .map(|&i| [geometry.pins[i].cx, geometry.pins[i].cy])
        .collect();
    let dims = order
        .iter()
        .map(|&i| [geometry.pins[i].w, geometry.pins[i].h])
        .collect();
    CanonicalAnswers { count: geometry.pins.len() as u32, centers, dims }
}

/// Dialogue strategy: how the three tasks split into samples and rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DialogueStrategy {
    S1,
    S2,
    S3,
    S4,
    S5,
}

impl DialogueStrategy {
    pub const ALL: [DialogueStrategy; 5] = [
        DialogueStrategy::S1,
        DialogueStrategy::S2,
        DialogueStrategy::S3,
        DialogueStrategy::S4,
        DialogueStrategy::S5,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DialogueStrategy::S1 => "S1",
            DialogueStrategy::S2 => "S2",
            DialogueStrategy::S3 => "S3",
            DialogueStrategy::S4 => "S4",
            DialogueStrategy::S5 => "S5",
        }
    }

    pub fn parse(s: &str) -> Result<Self, QaError> {
        match s {
            "S1" | "s1" => Ok(DialogueStrategy::S1),
            "S2" | "s2" => Ok(DialogueStrategy::S2),
            "S3" | "s3" => Ok(DialogueStrategy::S3),
            "S4" | "s4" => Ok(DialogueStrategy::S4),
            "S5" | "s5" => Ok(DialogueStrategy::S5),
            other => Err(QaError::UnknownStrategy(other.to_string())),
        }
    }

    /// The sample partition: one `(round, tasks)` entry per sample.
    /// S1 {123}; S2 {1,2,3}; S3 {1}{23}; S4 {12}{13}; S5 {1}{2}{3}.
    pub fn partition(&self) -> Vec<(u32, Vec<Task>)> {
        use Task::*;
        match self {
            DialogueStrategy::S1 => vec![(1, vec![PinCount, PinCenters, PinDims])],
            DialogueStrategy::S2 => {
                vec![(1, vec![PinCount]), (1, vec![PinCenters]), (1, vec![PinDims])]
            }
            DialogueStrategy::S3 => vec![(1, vec![PinCount]), (2, vec![PinCenters, PinDims])],
            DialogueStrategy::S4 => {
                vec![(1, vec![PinCount, PinCenters]), (2, vec![PinCount, PinDims])]
            }
            DialogueStrategy::S5 => {
                vec![(1, vec![PinCount]), (2, vec![PinCenters]), (3, vec![PinDims])]
            }
        }
    }

    /// Number of training rounds the strategy spans.
    pub fn rounds(&self) -> u32 {
        self.partition().iter().map(|(r, _)| *r).max().unwrap_or(1)
    }
}

/// Where a sample's diagram came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleSource {
    #[serde(rename = "synthetic")]
    Synthetic,
    #[serde(rename = "real-world")]
    RealWorld,
}

/// One question/answer turn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Turn {
    #[serde(rename = "q")]
    pub question: String,
    #[serde(rename = "a")]
    pub answer: String,
}

/// One conversation sample: an image reference plus ordered QA turns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConversationSample {
    #[serde(rename = "image")]
    pub image_ref: String,
    pub strategy: DialogueStrategy,
    /// Training round this sample belongs to (1-based).
    pub round: u32,
    /// Id of the footprint all sibling samples were split from.
    pub group_id: String,
    pub sample_id: String,
    pub source: SampleSource,
    pub turns: Vec<Turn>,
}

impl ConversationSample {
    /// Task indices covered by this sample, in turn order.
    pub fn tasks(&self) -> Vec<u8> {
        self.turns
            .iter()
            .filter_map(|t| {
                [Task::PinCount, Task::PinCenters, Task::PinDims]
                    .into_iter()
                    .find(|task| task.question() == t.question)
                    .map(|task| task.index())
            })
            .collect()
    }
}

/// Builds the conversation samples for one footprint under a dialogue
/// strategy. Question texts are the fixed canonical strings; answers come
/// from `canonical_answers`.
pub fn build_conversation(
    geometry: &FootprintGeometry<Coord>,
    image_ref: &str,
    strategy: DialogueStrategy,
    source: SampleSource,
) -> Vec<ConversationSample> {
    let answers = canonical_answers(geometry);
    let group = geometry.source_id.clone();
    strategy
        .partition()
        .into_iter()
        .map(|(round, tasks)| {
            let task_tag: String = tasks.iter().map(|t| t.index().to_string()).collect();
            let turns = tasks
                .iter()
                .map(|task| Turn {
                    question: task.question().to_string(),
                    answer: answers.answer_text(*task),
                })
                .collect();
            ConversationSample {
                image_ref: image_ref.to_string(),
                strategy,
                round,
                group_id: group.clone(),
                sample_id: format!("{group}.{}.r{round}.t{task_tag}", strategy.as_str()),
                source,
                turns,
            }
        })
        .collect()
}

/// Structural validation of one serialized conversation JSONL line against
/// the shipped schema (`docs/conversation.schema.json`).
pub fn validate_sample_line(line: &str) -> Result<(), String> {
    let v: serde_json::Value =
        serde_json::from_str(line).map_err(|e| format!("not JSON: {e}"))?;
    let obj = v.as_object().ok_or("not an object")?;
    for key in ["image", "strategy", "round", "group_id", "sample_id", "source", "turns"] {
        if !obj.contains_key(key) {
            return Err(format!("missing key {key:?}"));
        }
    }
    let strategy = obj["strategy"].as_str().ok_or("strategy must be a string")?;
    DialogueStrategy::parse(strategy).map_err(|e| e.to_string())?;
    let round = obj["round"].as_u64().ok_or("round must be a positive integer")?;
    if round == 0 {
        return Err("round must be >= 1".to_string());
    }
    match obj["source"].as_str() {
        Some("synthetic") | Some("real-world") => {}
        other => return Err(format!("bad source {other:?}")),
    }
    let turns = obj["turns"].as_array().ok_or("turns must be an array")?;
    if turns.is_empty() {
        return Err("turns must be non-empty".to_string());
    }
    for (i, t) in turns.iter().enumerate() {
        let t = t.as_object().ok_or(format!("turn {i} not an object"))?;
        let q = t.get("q").and_then(|q| q.as_str()).ok_or(format!("turn {i} missing q"))?;
        if Task::ALL_QUESTIONS.iter().all(|&known| known != q) {
            return Err(format!("turn {i} has unknown question"));
        }
        let a = t.get("a").and_then(|a| a.as_str()).ok_or(format!("turn {i} missing a"))?;
        serde_json::from_str::<serde_json::Value>(a)
            .map_err(|e| format!("turn {i} answer is not a JSON fragment: {e}"))?;
    }
    Ok(())
}

impl Task {
    pub const ALL_QUESTIONS: [&'static str; 3] = [
        "What is the number of pins in the IC footprint diagram?",
        "What are the coordinates of each pin relative to the center of the diagram?",
        "What are the dimensions of each pin in millimeters?",
    ];
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Origin, PackageClass, PadShape, Pin, PinTopology};

    fn chip() -> FootprintGeometry<Coord> {
        FootprintGeometry::new(
            PackageClass::new("CHIP2", PinTopology::TwoPad),
            vec![
                Pin::new("1", 1, -1.5, 0.0, PadShape::Rectangle, 0.9, 1.6),
                Pin::new("2", 2, 1.5, 0.0, PadShape::Rectangle, 0.9, 1.6),
            ],
            Origin::LayoutCenter,
            "chip-1",
        )
    }

    #[test]
    fn canonical_answers_read_off_geometry() {
        let a = canonical_answers(&chip());
        assert_eq!(a.count, 2);
        assert_eq!(a.centers, vec![[-1.5, 0.0], [1.5, 0.0]]);
        assert_eq!(a.dims, vec![[0.9, 1.6], [0.9, 1.6]]);
        assert_eq!(a.answer_text(Task::PinCount), "{\"count\": 2}");
        assert_eq!(
            a.answer_text(Task::PinCenters),
            "{\"centers\": [[-1.5, 0], [1.5, 0]]}"
        );
    }

    #[test]
    fn circle_dims_report_diameter_twice() {
        let g = FootprintGeometry::new(
            PackageClass::new("BGA", PinTopology::FullGrid),
            vec![Pin::new("A1", 1, 0.0, 0.0, PadShape::Circle, 1.0, 1.0)],
            Origin::LayoutCenter,
            "ball",
        );
        let a = canonical_answers(&g);
        assert_eq!(a.count, 1);
        assert_eq!(a.centers, vec![[0.0, 0.0]]);
        assert_eq!(a.dims, vec![[1.0, 1.0]]);
    }

    #[test]
    fn strategy_partitions_match_table() {
        let counts: Vec<(DialogueStrategy, usize, u32)> = vec![
            (DialogueStrategy::S1, 1, 1),
            (DialogueStrategy::S2, 3, 1),
            (DialogueStrategy::S3, 2, 2),
            (DialogueStrategy::S4, 2, 2),
            (DialogueStrategy::S5, 3, 3),
        ];
        for (s, samples, rounds) in counts {
            assert_eq!(s.partition().len(), samples, "{s:?}");
            assert_eq!(s.rounds(), rounds, "{s:?}");
        }
    }

    #[test]
    fn s1_builds_one_sample_with_three_turns() {
        let samples = build_conversation(&chip(), "img/chip-1.svg", DialogueStrategy::S1, SampleSource::Synthetic);
        assert_eq!(samples.len(), 1);
        assert_eq!(samples[0].turns.len(), 3);
        assert_eq!(samples[0].round, 1);
        assert_eq!(samples[0].turns[0].question, Task::PinCount.question());
    }

    #[test]
    fn s5_builds_three_single_turn_samples() {
        let samples = build_conversation(&chip(), "img", DialogueStrategy::S5, SampleSource::Synthetic);
        assert_eq!(samples.len(), 3);
        assert!(samples.iter().all(|s| s.turns.len() == 1));
        assert_eq!(samples.iter().map(|s| s.round).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn s4_repeats_task_one_in_both_samples() {
        let samples = build_conversation(&chip(), "img", DialogueStrategy::S4, SampleSource::Synthetic);
        assert_eq!(samples.len(), 2);
        for s in &samples {
            assert_eq!(s.turns[0].question, Task::PinCount.question());
        }
        assert_eq!(samples[0].turns[1].question, Task::PinCenters.question());
        assert_eq!(samples[1].turns[1].question, Task::PinDims.question());
    }

    #[test]
    fn serialized_samples_validate_against_schema() {
        for strategy in DialogueStrategy::ALL {
            for s in build_conversation(&chip(), "img.svg", strategy, SampleSource::RealWorld) {
                let line = serde_json::to_string(&s).unwrap();
                validate_sample_line(&line).unwrap_or_else(|e| panic!("{strategy:?}: {e}\n{line}"));
            }
        }
        assert!(validate_sample_line("{}").is_err());
        assert!(validate_sample_line("not json").is_err());
    }
}
