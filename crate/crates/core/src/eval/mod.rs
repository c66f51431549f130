//! Per-sample metric computation and benchmark aggregation.
//!
//! Four metrics: layout IoU (IoU_IC), pin-count MAE/RMSE, mean pin-center
//! distance (d_pin), and mean per-pin outline IoU (IoU_pin). Pins are matched
//! by ordinal; count mismatches are penalized by the count metrics and the
//! layout IoU, not by d_pin. Failed parses score as empty predictions.

mod report;

pub use report::{render_csv, render_table, BenchmarkReport, MetricBlock, MetricSummary};

use crate::geom::{layout_iou, pad_iou, FootprintGeometry, Origin, PadShape, Pin};
use crate::qa::{ParseOutcome, ParsedPrediction, TaskAnswer};
use crate::Coord;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("cannot aggregate an empty report list")]
    EmptyInput,
}

/// Pin-count error metrics over (predicted, truth) pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountErrors {
    pub mae: f64,
    pub rmse: f64,
}

/// MAE and RMSE of pin counts. Errors on an empty list.
pub fn count_errors(pairs: &[(u32, u32)]) -> Result<CountErrors, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let n = pairs.len() as f64;
    let mut abs_sum = 0.0;
    let mut sq_sum = 0.0;
    for &(pred, truth) in pairs {
        let d = pred as f64 - truth as f64;
        abs_sum += d.abs();
        sq_sum += d * d;
    }
    Ok(CountErrors { mae: abs_sum / n, rmse: (sq_sum / n).sqrt() })
}

/// Mean Euclidean distance between index-matched pin centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinDistance {
    /// `None` when no index-matched pair exists.
    pub value: Option<f64>,
    /// True when the two geometries have different pin counts.
    pub count_mismatch: bool,
}

fn by_ordinal(g: &FootprintGeometry<Coord>) -> Vec<&Pin<Coord>> {
    let mut pins: Vec<&Pin<Coord>> = g.pins.iter().collect();
    pins.sort_by_key(|p| p.ordinal);
    pins
}

/// d_pin: pairs are matched by ordinal over the first `min(Np, Nt)` pins.
/// Count mismatch is flagged here and penalized by the count metrics and
/// IoU_IC, not by the distance.
pub fn pin_distance(
    pred: &FootprintGeometry<Coord>,
    truth: &FootprintGeometry<Coord>,
) -> PinDistance {
    let p = by_ordinal(pred);
    let t = by_ordinal(truth);
    let matched = p.len().min(t.len());
    let count_mismatch = p.len() != t.len();
    if matched == 0 {
        return PinDistance { value: None, count_mismatch };
    }
    let mut sum = 0.0;
    for i in 0..matched {
        let dx = p[i].cx - t[i].cx;
        let dy = p[i].cy - t[i].cy;
        let d = (dx * dx + dy * dy).sqrt();
        if !d.is_finite() {
            return PinDistance { value: None, count_mismatch };
        }
        sum += d;
    }
    PinDistance { value: Some(sum / matched as f64), count_mismatch }
}

/// IoU_pin: for each ground-truth pin, the outline IoU against the
/// prediction with the same ordinal (0 when missing), averaged over all
/// truth pins. Outlines are compared at their stated positions.
pub fn pin_dim_iou(
    pred: &FootprintGeometry<Coord>,
    truth: &FootprintGeometry<Coord>,
) -> f64 {
    let t = by_ordinal(truth);
    if t.is_empty() {
        return 0.0;
    }
    let p = by_ordinal(pred);
    let mut sum = 0.0;
    for (i, truth_pin) in t.iter().enumerate() {
        if let Some(pred_pin) = p.get(i) {
            sum += pad_iou(pred_pin, truth_pin);
        }
    }
    sum / t.len() as f64
}

/// Per-task parse outcomes attached to a report when the prediction came
/// from model text.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParseFlags {
    pub count: ParseOutcome,
    pub centers: ParseOutcome,
    pub dims: ParseOutcome,
}

impl ParseFlags {
    pub fn all_failed() -> Self {
        Self {
            count: ParseOutcome::Failed,
            centers: ParseOutcome::Failed,
            dims: ParseOutcome::Failed,
        }
    }
}

/// Metric results for one sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub sample_id: String,
    pub package_class: String,
    pub iou_ic: f64,
    pub count_pred: u32,
    pub count_truth: u32,
    /// `None` when no index-matched pin pair exists.
    pub d_pin: Option<f64>,
    pub count_mismatch: bool,
    pub iou_pin: f64,
    pub pred_empty: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parse_flags: Option<ParseFlags>,
}

/// Scores a predicted geometry against ground truth. The truth is recentered
/// (idempotent for canonical inputs); the prediction is taken exactly as
/// stated, since its coordinates are already relative to the diagram center.
pub fn score_sample(
    pred: &FootprintGeometry<Coord>,
    truth: &FootprintGeometry<Coord>,
) -> SampleReport {
    let truth = truth.recenter().unwrap_or_else(|_| truth.clone());
    let distance = pin_distance(pred, &truth);
    SampleReport {
        sample_id: truth.source_id.clone(),
        package_class: truth.package_class.name.clone(),
        iou_ic: layout_iou(pred, &truth),
        count_pred: pred.pin_count() as u32,
        count_truth: truth.pin_count() as u32,
        d_pin: distance.value,
        count_mismatch: distance.count_mismatch,
        iou_pin: pin_dim_iou(pred, &truth),
        pred_empty: pred.is_empty(),
        parse_flags: None,
    }
}

/// Parsed model answers for the three tasks of one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet {
    pub count: ParsedPrediction,
    pub centers: ParsedPrediction,
    pub dims: ParsedPrediction,
}

impl PredictionSet {
    pub fn empty() -> Self {
        let failed = ParsedPrediction { outcome: ParseOutcome::Failed, answer: None };
        Self { count: failed.clone(), centers: failed.clone(), dims: failed }
    }

    fn flags(&self) -> ParseFlags {
        ParseFlags {
            count: self.count.outcome,
            centers: self.centers.outcome,
            dims: self.dims.outcome,
        }
    }

    fn count_value(&self) -> u32 {
        match self.count.answer {
            Some(TaskAnswer::Count(n)) => n,
            _ => 0,
        }
    }

    fn pairs(p: &ParsedPrediction) -> &[[f64; 2]] {
        match &p.answer {
            Some(TaskAnswer::Pairs(v)) => v,
            _ => &[],
        }
    }
}

/// Builds the predicted geometry from parsed answers: pin `i` pairs the
/// i-th center with the i-th dimension entry. Predictions carry no shape, so
/// each pin borrows the outline shape of the ground-truth pin with the same
/// ordinal (rectangle beyond the truth's count).
pub fn assemble_prediction(
    set: &PredictionSet,
    truth: &FootprintGeometry<Coord>,
) -> FootprintGeometry<Coord> {
    let centers = PredictionSet::pairs(&set.centers);
    let dims = PredictionSet::pairs(&set.dims);
    let truth_pins = by_ordinal(truth);
    let n = centers.len().min(dims.len());
    let pins = (0..n)
        .map(|i| {
            let shape = truth_pins.get(i).map(|p| p.shape).unwrap_or(PadShape::Rectangle);
            Pin::new(
                (i + 1).to_string(),
                i as u32 + 1,
                centers[i][0],
                centers[i][1],
                shape,
                dims[i][0],
                dims[i][1],
            )
        })
        .collect();
    FootprintGeometry::new(
        truth.package_class.clone(),
        pins,
        Origin::LayoutCenter,
        format!("{}-pred", truth.source_id),
    )
}

/// Scores parsed model answers against ground truth. The task-1 answer is
/// the reported count (0 on failed parse); tasks 2 and 3 form the predicted
/// layout.
pub fn score_prediction_set(
    set: &PredictionSet,
    truth: &FootprintGeometry<Coord>,
) -> SampleReport {
    let pred = assemble_prediction(set, truth);
    let mut report = score_sample(&pred, truth);
    report.count_pred = set.count_value();
    report.count_mismatch = report.count_pred != report.count_truth
        || pred.pin_count() != truth.pin_count();
    report.parse_flags = Some(set.flags());
    report
}

pub use report::{aggregate, aggregate_runs};
