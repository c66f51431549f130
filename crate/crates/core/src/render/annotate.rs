//! Annotation planning and its inverse.
//!
//! The planner decides which dimension labels a diagram carries: one pitch
//! label per distinct row/column pitch value, one width and one height label
//! per distinct pad size, one span label per opposing row/column pair, and
//! both grid-pitch leaders for grids. Labels are placed on dedicated lanes
//! (vertical measures left of the layout, horizontal measures below it) so no
//! two label boxes can overlap.
//!
//! `reconstruct_from_plan` rebuilds the full geometry from the label texts
//! plus the package topology, which is the check that the rendered labels are
//! sufficient to recover every pad size and spacing.

use super::{RenderError, RenderSpec};
use crate::fmt::trimmed;
use crate::geom::{detect_layout, Axis, DetectedLayout, FootprintGeometry, Rect};
use crate::scalar::round_decimals;
use crate::synthgen::{build_footprint, FootprintParams};
use crate::{Coord, PackageClass, PinTopology};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnotationKind {
    Pitch,
    PadWidth,
    PadHeight,
    RowSpan,
    GridPitch,
}

impl AnnotationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AnnotationKind::Pitch => "pitch",
            AnnotationKind::PadWidth => "pad-width",
            AnnotationKind::PadHeight => "pad-height",
            AnnotationKind::RowSpan => "row-span",
            AnnotationKind::GridPitch => "grid-pitch",
        }
    }
}

/// Dimension-line geometry for one annotation, in mm coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Leader {
    /// The dimension line itself, between the two measured positions.
    pub line: ((f64, f64), (f64, f64)),
    /// Extension lines from the measured features out to the dimension line.
    pub extensions: Vec<((f64, f64), (f64, f64))>,
    /// Label anchor (center of the text box).
    pub label_pos: (f64, f64),
    /// Vertical text (rotated 90 degrees) for vertical measures.
    pub rotated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Annotation {
    pub kind: AnnotationKind,
    /// Measured value in mm.
    pub value: f64,
    /// Ordinals of the pads this annotation is anchored to.
    pub anchors: Vec<u32>,
    /// Label text: the value formatted to 2 decimals with trailing zeros
    /// trimmed.
    pub label: String,
    pub leader: Leader,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationPlan {
    pub annotations: Vec<Annotation>,
    /// Label text boxes in mm, parallel to `annotations`.
    pub label_boxes: Vec<Rect<f64>>,
}

impl AnnotationPlan {
    pub fn labels(&self) -> Vec<&str> {
        self.annotations.iter().map(|a| a.label.as_str()).collect()
    }

    /// True when no two label boxes overlap with positive area.
    pub fn labels_disjoint(&self) -> bool {
        for (i, a) in self.label_boxes.iter().enumerate() {
            for b in &self.label_boxes[i + 1..] {
                if a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1 {
                    return false;
                }
            }
        }
        true
    }
}

/// A measure waiting for lane assignment.
struct Measure {
    kind: AnnotationKind,
    value: f64,
    anchors: Vec<u32>,
    /// Measured extent endpoints along the measure axis.
    from: f64,
    to: f64,
    /// Feature coordinate on the other axis (where extension lines start).
    feature: f64,
    vertical: bool,
}

fn q6(v: f64) -> f64 {
    round_decimals(v, 6)
}

/// Plans the dimension annotations for a footprint diagram.
pub fn plan_annotations(
    geometry: &FootprintGeometry<Coord>,
    spec: &RenderSpec,
) -> Result<AnnotationPlan, RenderError> {
    spec.check()?;
    if geometry.is_empty() {
        return Err(RenderError::EmptyGeometry);
    }
    let bbox = geometry.bounding_box().expect("non-empty geometry");
    let pins = &geometry.pins;
    let layout = detect_layout(pins);

    let mut measures: Vec<Measure> = Vec::new();

    // One pitch measure per distinct adjacent-gap value across all runs.
    let mut seen_pitches: Vec<f64> = Vec::new();
    for run in layout.runs() {
        for pitch in run.pitches(pins) {
            if seen_pitches.iter().any(|&p| (p - pitch).abs() < 1e-9) {
                continue;
            }
            seen_pitches.push(pitch);
            // Anchor on the first adjacent pair with this gap.
            let pair = run
                .members
                .windows(2)
                .find(|w| {
                    let (a, b) = (&pins[w[0]], &pins[w[1]]);
                    let gap = match run.axis {
                        Axis::Horizontal => b.cx - a.cx,
                        Axis::Vertical => b.cy - a.cy,
                    };
                    (q6(gap) - pitch).abs() < 1e-9
                })
                .expect("pitch value came from this run");
            let (a, b) = (&pins[pair[0]], &pins[pair[1]]);
            match run.axis {
                Axis::Vertical => measures.push(Measure {
                    kind: AnnotationKind::Pitch,
                    value: pitch,
                    anchors: vec![a.ordinal.min(b.ordinal), a.ordinal.max(b.ordinal)],
                    from: a.cy.min(b.cy),
                    to: a.cy.max(b.cy),
                    feature: a.cx,
                    vertical: true,
                }),
                Axis::Horizontal => measures.push(Measure {
                    kind: AnnotationKind::Pitch,
                    value: pitch,
                    anchors: vec![a.ordinal.min(b.ordinal), a.ordinal.max(b.ordinal)],
                    from: a.cx.min(b.cx),
                    to: a.cx.max(b.cx),
                    feature: a.cy,
                    vertical: false,
                }),
            }
        }
    }

    // Span measures and grid pitches.
    match &layout {
        DetectedLayout::DualRow { runs, span } => {
            let first = &pins[runs[0].members[0]];
            let last_run_first = &pins[runs[1].members[0]];
            match runs[0].axis {
                Axis::Vertical => measures.push(Measure {
                    kind: AnnotationKind::RowSpan,
                    value: span.abs(),
                    anchors: vec![first.ordinal, last_run_first.ordinal],
                    from: runs[0].fixed.min(runs[1].fixed),
                    to: runs[0].fixed.max(runs[1].fixed),
                    feature: bbox.y0,
                    vertical: false,
                }),
                Axis::Horizontal => measures.push(Measure {
                    kind: AnnotationKind::RowSpan,
                    value: span.abs(),
                    anchors: vec![first.ordinal, last_run_first.ordinal],
                    from: runs[0].fixed.min(runs[1].fixed),
                    to: runs[0].fixed.max(runs[1].fixed),
                    feature: bbox.x0,
                    vertical: true,
                }),
            }
        }
        DetectedLayout::Quad { runs, span_x, span_y } => {
            let left_first = &pins[runs[0].members[0]];
            let right_first = &pins[runs[2].members[0]];
            measures.push(Measure {
                kind: AnnotationKind::RowSpan,
                value: span_x.abs(),
                anchors: vec![left_first.ordinal, right_first.ordinal],
                from: runs[0].fixed.min(runs[2].fixed),
                to: runs[0].fixed.max(runs[2].fixed),
                feature: bbox.y0,
                vertical: false,
            });
            let bottom_first = &pins[runs[1].members[0]];
            let top_first = &pins[runs[3].members[0]];
            measures.push(Measure {
                kind: AnnotationKind::RowSpan,
                value: span_y.abs(),
                anchors: vec![bottom_first.ordinal, top_first.ordinal],
                from: runs[1].fixed.min(runs[3].fixed),
                to: runs[1].fixed.max(runs[3].fixed),
                feature: bbox.x0,
                vertical: true,
            });
        }
        DetectedLayout::Grid { cols, pitch_x, pitch_y, .. } => {
            let a1 = &pins[0];
            let a2 = &pins[1];
            measures.push(Measure {
                kind: AnnotationKind::GridPitch,
                value: *pitch_x,
                anchors: vec![a1.ordinal, a2.ordinal],
                from: a1.cx.min(a2.cx),
                to: a1.cx.max(a2.cx),
                feature: a1.cy,
                vertical: false,
            });
            let b1 = &pins[*cols];
            measures.push(Measure {
                kind: AnnotationKind::GridPitch,
                value: *pitch_y,
                anchors: vec![a1.ordinal, b1.ordinal],
                from: a1.cy.min(b1.cy),
                to: a1.cy.max(b1.cy),
                feature: a1.cx,
                vertical: true,
            });
        }
        _ => {}
    }

    // One pad-width and one pad-height measure per distinct pad size.
    let mut seen_sizes: Vec<(f64, f64)> = Vec::new();
    for pin in pins {
        if seen_sizes
            .iter()
            .any(|&(w, h)| (w - pin.w).abs() < 1e-9 && (h - pin.h).abs() < 1e-9)
        {
            continue;
        }
        seen_sizes.push((pin.w, pin.h));
        measures.push(Measure {
            kind: AnnotationKind::PadWidth,
            value: pin.w,
            anchors: vec![pin.ordinal],
            from: pin.cx - pin.w / 2.0,
            to: pin.cx + pin.w / 2.0,
            feature: pin.cy,
            vertical: false,
        });
        measures.push(Measure {
            kind: AnnotationKind::PadHeight,
            value: pin.h,
            anchors: vec![pin.ordinal],
            from: pin.cy - pin.h / 2.0,
            to: pin.cy + pin.h / 2.0,
            feature: pin.cx,
            vertical: true,
        });
    }

    Ok(place_measures(measures, &bbox, spec))
}

/// Assigns one lane per measure: vertical measures stack leftward, horizontal
/// measures stack below everything placed so far. Disjoint by construction.
fn place_measures(measures: Vec<Measure>, bbox: &Rect<f64>, spec: &RenderSpec) -> AnnotationPlan {
    let font = spec.font_mm();
    let char_w = spec.char_mm();
    let lane_gap = font + 0.8;
    let lead = 1.6;

    let mut annotations = Vec::with_capacity(measures.len());
    let mut label_boxes = Vec::with_capacity(measures.len());

    let mut left_lane = 0usize;
    let mut lowest_left = bbox.y0;
    // Vertical measures first: the bottom zone starts below their labels.
    let (vertical, horizontal): (Vec<Measure>, Vec<Measure>) =
        measures.into_iter().partition(|m| m.vertical);

    for m in vertical {
        let lane_x = bbox.x0 - lead - left_lane as f64 * lane_gap;
        left_lane += 1;
        let label = trimmed(m.value, 2);
        let mid = (m.from + m.to) / 2.0;
        let half_len = label.chars().count() as f64 * char_w / 2.0;
        let bx = Rect {
            x0: lane_x - font / 2.0,
            y0: mid - half_len,
            x1: lane_x + font / 2.0,
            y1: mid + half_len,
        };
        lowest_left = lowest_left.min(bx.y0);
        annotations.push(Annotation {
            kind: m.kind,
            value: m.value,
            anchors: m.anchors,
            label,
            leader: Leader {
                line: ((lane_x, m.from), (lane_x, m.to)),
                extensions: vec![
                    ((m.feature, m.from), (lane_x, m.from)),
                    ((m.feature, m.to), (lane_x, m.to)),
                ],
                label_pos: (lane_x, mid),
                rotated: true,
            },
        });
        label_boxes.push(bx);
    }

    let bottom_base = lowest_left - 0.8;
    for (k, m) in horizontal.into_iter().enumerate() {
        let lane_y = bottom_base - font / 2.0 - k as f64 * lane_gap;
        let label = trimmed(m.value, 2);
        let mid = (m.from + m.to) / 2.0;
        let half_len = label.chars().count() as f64 * char_w / 2.0;
        let bx = Rect {
            x0: mid - half_len,
            y0: lane_y - font / 2.0,
            x1: mid + half_len,
            y1: lane_y + font / 2.0,
        };
        annotations.push(Annotation {
            kind: m.kind,
            value: m.value,
            anchors: m.anchors,
            label,
            leader: Leader {
                line: ((m.from, lane_y), (m.to, lane_y)),
                extensions: vec![
                    ((m.from, m.feature), (m.from, lane_y)),
                    ((m.to, m.feature), (m.to, lane_y)),
                ],
                label_pos: (mid, lane_y),
                rotated: false,
            },
        });
        label_boxes.push(bx);
    }

    AnnotationPlan { annotations, label_boxes }
}

/// Package topology needed to invert an annotation plan.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub class: PackageClass,
    pub pin_count: u32,
    /// (rows, cols) for full-grid packages.
    pub grid: Option<(u32, u32)>,
}

impl Topology {
    pub fn of(geometry: &FootprintGeometry<Coord>) -> Self {
        let grid = match detect_layout(&geometry.pins) {
            DetectedLayout::Grid { rows, cols, .. } => Some((rows as u32, cols as u32)),
            _ => None,
        };
        Self {
            class: geometry.package_class.clone(),
            pin_count: geometry.pin_count() as u32,
            grid,
        }
    }
}

fn label_value(a: &Annotation) -> Result<f64, RenderError> {
    a.label
        .parse::<f64>()
        .map_err(|_| RenderError::BadLabel { label: a.label.clone() })
}

/// Rebuilds the geometry from an annotation plan plus topology, reading only
/// the label texts (not the stored float values).
pub fn reconstruct_from_plan(
    plan: &AnnotationPlan,
    topo: &Topology,
) -> Result<FootprintGeometry<Coord>, RenderError> {
    let find = |kind: AnnotationKind, anchor1: bool| -> Option<&Annotation> {
        plan.annotations
            .iter()
            .find(|a| a.kind == kind && (!anchor1 || a.anchors.contains(&1)))
    };

    let pitch = match find(AnnotationKind::Pitch, false)
        .or_else(|| find(AnnotationKind::GridPitch, false))
    {
        Some(a) => label_value(a)?,
        // Single-pad and other pitch-less layouts: any positive placeholder.
        None if topo.pin_count == 1 => 1.0,
        None => {
            return Err(RenderError::ReconstructMissing { what: "pitch annotation".to_string() })
        }
    };

    let width = find(AnnotationKind::PadWidth, true)
        .or_else(|| find(AnnotationKind::PadWidth, false))
        .ok_or_else(|| RenderError::ReconstructMissing { what: "pad-width annotation".to_string() })?;
    let height = find(AnnotationKind::PadHeight, true)
        .or_else(|| find(AnnotationKind::PadHeight, false))
        .ok_or_else(|| RenderError::ReconstructMissing {
            what: "pad-height annotation".to_string(),
        })?;
    let w1 = label_value(width)?;
    let h1 = label_value(height)?;

    // Pin 1 sits in a vertical run for dual and quad packages, so its pad is
    // (across x along); row-major layouts read directly.
    let (pad_along, pad_across) = match topo.class.topology {
        PinTopology::DualRow | PinTopology::QuadPerimeter => (h1, w1),
        PinTopology::SingleRow | PinTopology::TwoPad => (w1, h1),
        PinTopology::FullGrid => (w1, w1),
    };

    let span = match topo.class.topology {
        PinTopology::DualRow | PinTopology::QuadPerimeter => {
            let a = find(AnnotationKind::RowSpan, false).ok_or_else(|| {
                RenderError::ReconstructMissing { what: "row-span annotation".to_string() }
            })?;
            label_value(a)?
        }
        _ => 0.0,
    };

    let params = FootprintParams {
        pin_count: topo.pin_count,
        grid: topo.grid,
        pitch,
        pad_along,
        pad_across,
        span,
    };
    Ok(build_footprint(&topo.class, &params)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PackageRegistry;

    fn spec() -> RenderSpec {
        RenderSpec::default()
    }

    fn build(class: &str, params: &FootprintParams) -> FootprintGeometry<Coord> {
        let reg = PackageRegistry::default();
        build_footprint(reg.get(class).unwrap(), params).unwrap()
    }

    #[test]
    fn soic8_plan_labels() {
        let g = build(
            "SOIC",
            &FootprintParams {
                pin_count: 8,
                grid: None,
                pitch: 1.27,
                pad_along: 0.6,
                pad_across: 1.5,
                span: 5.4,
            },
        );
        let plan = plan_annotations(&g, &spec()).unwrap();
        assert_eq!(plan.annotations.len(), 4);
        let mut labels = plan.labels().into_iter().map(str::to_string).collect::<Vec<_>>();
        labels.sort();
        assert_eq!(labels, vec!["0.6", "1.27", "1.5", "5.4"]);
        assert!(plan.labels_disjoint());
    }

    #[test]
    fn single_pad_gets_only_dims() {
        let g = build(
            "SIP",
            &FootprintParams {
                pin_count: 1,
                grid: None,
                pitch: 2.0,
                pad_along: 2.0,
                pad_across: 2.0,
                span: 0.0,
            },
        );
        let plan = plan_annotations(&g, &spec()).unwrap();
        let mut labels = plan.labels();
        labels.sort();
        assert_eq!(labels, vec!["2", "2"]);
        assert!(plan
            .annotations
            .iter()
            .all(|a| matches!(a.kind, AnnotationKind::PadWidth | AnnotationKind::PadHeight)));
    }

    #[test]
    fn bga_plan_has_both_grid_pitch_leaders() {
        let g = build(
            "BGA",
            &FootprintParams {
                pin_count: 16,
                grid: Some((4, 4)),
                pitch: 1.0,
                pad_along: 0.5,
                pad_across: 0.5,
                span: 0.0,
            },
        );
        let plan = plan_annotations(&g, &spec()).unwrap();
        let grid_pitches: Vec<&Annotation> = plan
            .annotations
            .iter()
            .filter(|a| a.kind == AnnotationKind::GridPitch)
            .collect();
        assert_eq!(grid_pitches.len(), 2);
        assert!(grid_pitches.iter().all(|a| a.label == "1"));
        let mut labels: Vec<&str> = plan.labels();
        labels.sort();
        labels.dedup();
        assert_eq!(labels, vec!["0.5", "1"]);
    }

    #[test]
    fn anchors_reference_existing_ordinals() {
        let g = build(
            "QFP",
            &FootprintParams {
                pin_count: 32,
                grid: None,
                pitch: 0.8,
                pad_along: 0.4,
                pad_across: 1.5,
                span: 9.0,
            },
        );
        let plan = plan_annotations(&g, &spec()).unwrap();
        for a in &plan.annotations {
            for &ord in &a.anchors {
                assert!(ord >= 1 && ord as usize <= g.pin_count(), "{ord} out of range");
            }
            assert_eq!(a.label, trimmed(a.value, 2));
        }
        assert!(plan.labels_disjoint());
    }

    #[test]
    fn reconstruction_inverts_the_plan() {
        let params = FootprintParams {
            pin_count: 8,
            grid: None,
            pitch: 1.27,
            pad_along: 0.6,
            pad_across: 1.5,
            span: 5.4,
        };
        let g = build("SOIC", &params);
        let plan = plan_annotations(&g, &spec()).unwrap();
        let rebuilt = reconstruct_from_plan(&plan, &Topology::of(&g)).unwrap();
        assert_eq!(rebuilt.pin_count(), g.pin_count());
        for (a, b) in g.pins.iter().zip(rebuilt.pins.iter()) {
            assert!((a.cx - b.cx).abs() < 1e-6);
            assert!((a.cy - b.cy).abs() < 1e-6);
            assert!((a.w - b.w).abs() < 1e-6);
            assert!((a.h - b.h).abs() < 1e-6);
        }
    }
}
