//! SVG emission.
//!
//! Rendering is a pure function of (geometry, spec): identical inputs produce
//! byte-identical documents. All pixel coordinates are derived from mm values
//! through the spec scale and written with fixed 2-decimal formatting.

use super::annotate::{plan_annotations, AnnotationKind, AnnotationPlan};
use super::{RenderError, RenderSpec};
use crate::geom::{
    detect_layout, layout_iou, Axis, DetectedLayout, FootprintGeometry, PadShape, Pin, Rect,
};
use crate::Coord;
use std::fmt::Write;

struct Frame {
    view: Rect<f64>,
    scale: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        (x - self.view.x0) * self.scale
    }

    fn py(&self, y: f64) -> f64 {
        (self.view.y1 - y) * self.scale
    }

    fn width(&self) -> f64 {
        self.view.width() * self.scale
    }

    fn height(&self) -> f64 {
        self.view.height() * self.scale
    }
}

fn n(v: f64) -> String {
    format!("{v:.2}")
}

struct EllipsisMark {
    center: (f64, f64),
    vertical: bool,
    callout: String,
    callout_pos: (f64, f64),
}

struct Elision {
    hidden: Vec<bool>,
    marks: Vec<EllipsisMark>,
}

fn no_elision(count: usize) -> Elision {
    Elision { hidden: vec![false; count], marks: Vec::new() }
}

/// Hides the middle of any run longer than the threshold, keeping the first
/// and last `threshold/2` pins by ordinal and marking the gap with an
/// ellipsis plus a `first … last` callout.
fn compute_elision(
    geometry: &FootprintGeometry<Coord>,
    layout: &DetectedLayout<Coord>,
    spec: &RenderSpec,
) -> Elision {
    let pins = &geometry.pins;
    let Some(threshold) = spec.omission_threshold else {
        return no_elision(pins.len());
    };
    let threshold = threshold as usize;
    let mut out = no_elision(pins.len());

    if let DetectedLayout::Grid { rows, cols, .. } = layout {
        if *rows <= threshold && *cols <= threshold {
            return out;
        }
        let (row_of, col_of) = grid_indices(pins, *rows, *cols);
        let keep = |idx: usize, len: usize| -> bool {
            len <= threshold || idx < threshold.div_ceil(2) || idx >= len - threshold / 2
        };
        for i in 0..pins.len() {
            if !(keep(row_of[i], *rows) && keep(col_of[i], *cols)) {
                out.hidden[i] = true;
            }
        }
        let first = pins.iter().min_by_key(|p| p.ordinal).unwrap();
        let last = pins.iter().max_by_key(|p| p.ordinal).unwrap();
        let bbox = geometry.bounding_box().unwrap();
        let (cx, cy) = bbox.center();
        out.marks.push(EllipsisMark {
            center: (cx, cy),
            vertical: *rows > threshold,
            callout: format!("{} … {}", first.designator, last.designator),
            callout_pos: (cx, cy - spec.font_mm() * 1.2),
        });
        return out;
    }

    for run in layout.runs() {
        if run.members.len() <= threshold {
            continue;
        }
        let mut members = run.members.clone();
        members.sort_by_key(|&i| pins[i].ordinal);
        let head = threshold.div_ceil(2);
        let tail = threshold / 2;
        let hidden_slice = &members[head..members.len() - tail];
        for &i in hidden_slice {
            out.hidden[i] = true;
        }
        let before = &pins[members[head - 1]];
        let after = &pins[members[members.len() - tail]];
        let center = ((before.cx + after.cx) / 2.0, (before.cy + after.cy) / 2.0);
        let first = &pins[members[0]];
        let last = &pins[members[members.len() - 1]];
        let vertical = run.axis == Axis::Vertical;
        let offset = first.w.max(first.h) * 0.8 + spec.font_mm();
        let callout_pos = if vertical {
            (center.0 + offset, center.1)
        } else {
            (center.0, center.1 - offset)
        };
        out.marks.push(EllipsisMark {
            center,
            vertical,
            callout: format!("{} … {}", first.designator, last.designator),
            callout_pos,
        });
    }
    out
}

fn grid_indices(pins: &[Pin<Coord>], rows: usize, cols: usize) -> (Vec<usize>, Vec<usize>) {
    let mut ys: Vec<f64> = pins.iter().map(|p| p.cy).collect();
    ys.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ys.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    let mut xs: Vec<f64> = pins.iter().map(|p| p.cx).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    debug_assert_eq!(ys.len(), rows);
    debug_assert_eq!(xs.len(), cols);
    let row_of = pins
        .iter()
        .map(|p| ys.iter().position(|&y| (y - p.cy).abs() < 1e-6).unwrap())
        .collect();
    let col_of = pins
        .iter()
        .map(|p| xs.iter().position(|&x| (x - p.cx).abs() < 1e-6).unwrap())
        .collect();
    (row_of, col_of)
}

fn annotation_shown(kind: AnnotationKind, spec: &RenderSpec) -> bool {
    match kind {
        AnnotationKind::Pitch | AnnotationKind::GridPitch | AnnotationKind::RowSpan => {
            spec.show_pitch
        }
        AnnotationKind::PadWidth | AnnotationKind::PadHeight => spec.show_pad_dims,
    }
}

fn view_rect(
    geometry: &FootprintGeometry<Coord>,
    plan: &AnnotationPlan,
    elision: &Elision,
    spec: &RenderSpec,
) -> Rect<f64> {
    let mut view = geometry.bounding_box().expect("non-empty geometry");
    for (a, bx) in plan.annotations.iter().zip(&plan.label_boxes) {
        if !annotation_shown(a.kind, spec) {
            continue;
        }
        view = view.union(bx);
        let pts = [a.leader.line.0, a.leader.line.1];
        for (x, y) in pts {
            view = view.union(&Rect { x0: x, y0: y, x1: x, y1: y });
        }
    }
    for mark in &elision.marks {
        let half_w = mark.callout.chars().count() as f64 * spec.char_mm() / 2.0;
        let (x, y) = mark.callout_pos;
        view = view.union(&Rect {
            x0: x - half_w,
            y0: y - spec.font_mm() / 2.0,
            x1: x + half_w,
            y1: y + spec.font_mm() / 2.0,
        });
    }
    Rect {
        x0: view.x0 - spec.margin_mm,
        y0: view.y0 - spec.margin_mm,
        x1: view.x1 + spec.margin_mm,
        y1: view.y1 + spec.margin_mm,
    }
}

fn write_pad(out: &mut String, f: &Frame, pin: &Pin<Coord>, class: &str) {
    match pin.shape {
        PadShape::Rectangle => {
            let _ = writeln!(
                out,
                r#"  <rect class="{class}" x="{}" y="{}" width="{}" height="{}"/>"#,
                n(f.px(pin.cx - pin.w / 2.0)),
                n(f.py(pin.cy + pin.h / 2.0)),
                n(pin.w * f.scale),
                n(pin.h * f.scale),
            );
        }
        PadShape::Circle => {
            let _ = writeln!(
                out,
                r#"  <circle class="{class}" cx="{}" cy="{}" r="{}"/>"#,
                n(f.px(pin.cx)),
                n(f.py(pin.cy)),
                n(pin.w.min(pin.h) / 2.0 * f.scale),
            );
        }
        PadShape::Stadium => {
            let r = pin.w.min(pin.h) / 2.0 * f.scale;
            let _ = writeln!(
                out,
                r#"  <rect class="{class}" x="{}" y="{}" width="{}" height="{}" rx="{}" ry="{}"/>"#,
                n(f.px(pin.cx - pin.w / 2.0)),
                n(f.py(pin.cy + pin.h / 2.0)),
                n(pin.w * f.scale),
                n(pin.h * f.scale),
                n(r),
                n(r),
            );
        }
    }
}

fn write_line(out: &mut String, f: &Frame, class: &str, a: (f64, f64), b: (f64, f64)) {
    let _ = writeln!(
        out,
        r#"    <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
        n(f.px(a.0)),
        n(f.py(a.1)),
        n(f.px(b.0)),
        n(f.py(b.1)),
    );
}

fn write_arrow(out: &mut String, f: &Frame, tip: (f64, f64), direction: (f64, f64), size: f64) {
    // Small triangle pointing along `direction` with its apex at `tip`.
    let (dx, dy) = direction;
    let (bx, by) = (tip.0 - dx * size, tip.1 - dy * size);
    let (px, py) = (-dy * size * 0.35, dx * size * 0.35);
    let _ = writeln!(
        out,
        r#"    <path class="arrow" d="M {} {} L {} {} L {} {} Z"/>"#,
        n(f.px(tip.0)),
        n(f.py(tip.1)),
        n(f.px(bx + px)),
        n(f.py(by + py)),
        n(f.px(bx - px)),
        n(f.py(by - py)),
    );
}

fn svg_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders a footprint as an annotated datasheet-style SVG diagram.
pub fn render_svg(
    geometry: &FootprintGeometry<Coord>,
    spec: &RenderSpec,
) -> Result<String, RenderError> {
    spec.check()?;
    if geometry.is_empty() {
        return Err(RenderError::EmptyGeometry);
    }
    let plan = plan_annotations(geometry, spec)?;
    let layout = detect_layout(&geometry.pins);
    let elision = compute_elision(geometry, &layout, spec);
    let frame = Frame { view: view_rect(geometry, &plan, &elision, spec), scale: spec.px_per_mm };
    if frame.width() <= 0.0 || frame.height() <= 0.0 {
        return Err(RenderError::InvalidSpec("zero-area viewport".to_string()));
    }

    let font_px = spec.font_mm() * spec.px_per_mm;
    let small_font_px = font_px * 0.75;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        n(frame.width()),
        n(frame.height()),
        n(frame.width()),
        n(frame.height()),
    );
    let _ = writeln!(
        out,
        r##"  <rect class="background" x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##,
        n(frame.width()),
        n(frame.height()),
    );

    let _ = writeln!(
        out,
        r##"  <g class="pads" fill="#ececec" stroke="#000000" stroke-width="{}">"##,
        n(spec.pad_stroke_mm * spec.px_per_mm),
    );
    for (i, pin) in geometry.pins.iter().enumerate() {
        if !elision.hidden[i] {
            write_pad(&mut out, &frame, pin, "pad");
        }
    }
    let _ = writeln!(out, "  </g>");

    if spec.show_pin1_marker {
        if let Some(pin1) = geometry.pins.iter().find(|p| p.ordinal == 1) {
            let _ = writeln!(
                out,
                r##"  <circle class="pin1-marker" cx="{}" cy="{}" r="{}" fill="#000000"/>"##,
                n(frame.px(pin1.cx - pin1.w / 2.0 - 0.4)),
                n(frame.py(pin1.cy + pin1.h / 2.0 + 0.4)),
                n(0.15 * spec.px_per_mm),
            );
        }
    }

    if spec.show_pin_numbers {
        let _ = writeln!(
            out,
            r##"  <g class="pin-numbers" font-family="monospace" font-size="{}" text-anchor="middle" fill="#000000">"##,
            n(small_font_px),
        );
        for (i, pin) in geometry.pins.iter().enumerate() {
            if elision.hidden[i] {
                continue;
            }
            let _ = writeln!(
                out,
                r#"    <text class="pin-number" x="{}" y="{}" dominant-baseline="central">{}</text>"#,
                n(frame.px(pin.cx)),
                n(frame.py(pin.cy)),
                svg_escape(&pin.designator),
            );
        }
        let _ = writeln!(out, "  </g>");
    }

    let arrow_mm = 0.5;
    for (a, _bx) in plan.annotations.iter().zip(&plan.label_boxes) {
        if !annotation_shown(a.kind, spec) {
            continue;
        }
        let _ = writeln!(
            out,
            r##"  <g class="dim" data-kind="{}" stroke="#b00000" stroke-width="{}" fill="#b00000" font-family="monospace" font-size="{}">"##,
            a.kind.as_str(),
            n(spec.dim_stroke_mm * spec.px_per_mm),
            n(font_px),
        );
        if spec.dim_style.extension_lines {
            for ext in &a.leader.extensions {
                write_line(&mut out, &frame, "ext", ext.0, ext.1);
            }
        }
        write_line(&mut out, &frame, "dimline", a.leader.line.0, a.leader.line.1);
        if spec.dim_style.arrowheads {
            let (p0, p1) = a.leader.line;
            let len = ((p1.0 - p0.0).powi(2) + (p1.1 - p0.1).powi(2)).sqrt();
            if len > arrow_mm * 2.0 {
                let dir = ((p1.0 - p0.0) / len, (p1.1 - p0.1) / len);
                write_arrow(&mut out, &frame, p1, dir, arrow_mm);
                write_arrow(&mut out, &frame, p0, (-dir.0, -dir.1), arrow_mm);
            }
        }
        let (lx, ly) = a.leader.label_pos;
        let transform = if a.leader.rotated {
            format!(r#" transform="rotate(-90 {} {})""#, n(frame.px(lx)), n(frame.py(ly)))
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            r#"    <text class="dim-label" x="{}" y="{}" text-anchor="middle" stroke="none"{}>{}</text>"#,
            n(frame.px(lx)),
            n(frame.py(ly)),
            transform,
            svg_escape(&a.label),
        );
        let _ = writeln!(out, "  </g>");
    }

    for mark in &elision.marks {
        let _ = writeln!(out, r##"  <g class="ellipsis" fill="#000000">"##);
        let step = 0.45;
        for k in -1i32..=1 {
            let (dx, dy) = if mark.vertical {
                (0.0, -k as f64 * step)
            } else {
                (k as f64 * step, 0.0)
            };
            let _ = writeln!(
                out,
                r#"    <circle class="dot" cx="{}" cy="{}" r="{}"/>"#,
                n(frame.px(mark.center.0 + dx)),
                n(frame.py(mark.center.1 + dy)),
                n(0.09 * spec.px_per_mm),
            );
        }
        let _ = writeln!(
            out,
            r#"    <text class="callout" x="{}" y="{}" font-family="monospace" font-size="{}" text-anchor="middle">{}</text>"#,
            n(frame.px(mark.callout_pos.0)),
            n(frame.py(mark.callout_pos.1)),
            n(font_px),
            svg_escape(&mark.callout),
        );
        let _ = writeln!(out, "  </g>");
    }

    out.push_str("</svg>\n");
    Ok(out)
}

/// Renders prediction and ground truth in one shared coordinate frame: truth
/// pads red, predicted pads blue, both semi-transparent, with the layout IoU
/// printed in a legend.
pub fn render_overlay(
    pred: &FootprintGeometry<Coord>,
    truth: &FootprintGeometry<Coord>,
    spec: &RenderSpec,
) -> Result<String, RenderError> {
    spec.check()?;
    let view = match (truth.bounding_box(), pred.bounding_box()) {
        (Ok(a), Ok(b)) => a.union(&b),
        (Ok(a), Err(_)) => a,
        (Err(_), Ok(b)) => b,
        (Err(_), Err(_)) => return Err(RenderError::EmptyGeometry),
    };
    let legend_h = spec.font_mm() * 2.0;
    let view = Rect {
        x0: view.x0 - spec.margin_mm,
        y0: view.y0 - spec.margin_mm,
        x1: view.x1 + spec.margin_mm,
        y1: view.y1 + spec.margin_mm + legend_h,
    };
    let frame = Frame { view, scale: spec.px_per_mm };
    let iou = layout_iou(pred, truth);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        n(frame.width()),
        n(frame.height()),
        n(frame.width()),
        n(frame.height()),
    );
    let _ = writeln!(
        out,
        r##"  <rect class="background" x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##,
        n(frame.width()),
        n(frame.height()),
    );
    let _ = writeln!(
        out,
        r##"  <g class="truth-pads" fill="#d62728" fill-opacity="0.45" stroke="#d62728" stroke-width="{}">"##,
        n(spec.pad_stroke_mm * spec.px_per_mm),
    );
    for pin in &truth.pins {
        write_pad(&mut out, &frame, pin, "pad truth");
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(
        out,
        r##"  <g class="pred-pads" fill="#1f77b4" fill-opacity="0.45" stroke="#1f77b4" stroke-width="{}">"##,
        n(spec.pad_stroke_mm * spec.px_per_mm),
    );
    for pin in &pred.pins {
        write_pad(&mut out, &frame, pin, "pad pred");
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(
        out,
        r##"  <text class="legend" x="{}" y="{}" font-family="monospace" font-size="{}" fill="#000000">IoU={iou:.3}</text>"##,
        n(spec.font_mm() * spec.px_per_mm * 0.5),
        n(spec.font_mm() * spec.px_per_mm),
        n(spec.font_mm() * spec.px_per_mm),
    );
    out.push_str("</svg>\n");
    Ok(out)
}
