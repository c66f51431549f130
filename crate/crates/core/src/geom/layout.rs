//! Geometric layout detection: groups pins into rows, columns, grids, and
//! perimeter runs. Used to infer a topology for imported geometry and to
//! decide which dimension annotations a diagram needs.

use super::{PadShape, Pin, PinTopology};
use crate::scalar::{Scalar, GEOM_EPS_MM};

/// Direction pins are spaced along within a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// A linear run of pins sharing one coordinate.
#[derive(Debug, Clone)]
pub struct PinRun<T: Scalar> {
    pub axis: Axis,
    /// The shared coordinate: cy for horizontal runs, cx for vertical ones.
    pub fixed: T,
    /// Pin indices sorted by position along the run axis, ascending.
    pub members: Vec<usize>,
}

impl<T: Scalar> PinRun<T> {
    /// Distinct center-to-center gaps between adjacent members, snapped to
    /// the 1e-6 mm grid.
    pub fn pitches(&self, pins: &[Pin<T>]) -> Vec<T> {
        let pos = |i: usize| match self.axis {
            Axis::Horizontal => pins[i].cx,
            Axis::Vertical => pins[i].cy,
        };
        let mut out: Vec<T> = self
            .members
            .windows(2)
            .map(|w| crate::scalar::round_decimals(pos(w[1]) - pos(w[0]), 6))
            .collect();
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup();
        out
    }
}

/// Detected pin arrangement.
#[derive(Debug, Clone)]
pub enum DetectedLayout<T: Scalar> {
    TwoPad { run: PinRun<T> },
    SingleRow { run: PinRun<T> },
    /// Two parallel runs; `span` is the distance between their fixed
    /// coordinates.
    DualRow { runs: [PinRun<T>; 2], span: T },
    /// Four perimeter runs in order: left, bottom, right, top.
    Quad { runs: [PinRun<T>; 4], span_x: T, span_y: T },
    /// Complete rows x cols grid of circular pads with uniform pitch.
    Grid { rows: usize, cols: usize, pitch_x: T, pitch_y: T },
    Irregular,
}

impl<T: Scalar> DetectedLayout<T> {
    /// Linear runs present in this layout, for elision and pitch labeling.
    pub fn runs(&self) -> Vec<&PinRun<T>> {
        match self {
            DetectedLayout::TwoPad { run } | DetectedLayout::SingleRow { run } => vec![run],
            DetectedLayout::DualRow { runs, .. } => runs.iter().collect(),
            DetectedLayout::Quad { runs, .. } => runs.iter().collect(),
            DetectedLayout::Grid { .. } | DetectedLayout::Irregular => Vec::new(),
        }
    }

    pub fn topology(&self) -> PinTopology {
        match self {
            DetectedLayout::TwoPad { .. } => PinTopology::TwoPad,
            DetectedLayout::SingleRow { .. } => PinTopology::SingleRow,
            DetectedLayout::DualRow { .. } => PinTopology::DualRow,
            DetectedLayout::Quad { .. } => PinTopology::QuadPerimeter,
            DetectedLayout::Grid { .. } => PinTopology::FullGrid,
            DetectedLayout::Irregular => PinTopology::DualRow,
        }
    }
}

fn group_by<T: Scalar>(pins: &[Pin<T>], key: impl Fn(&Pin<T>) -> T) -> Vec<(T, Vec<usize>)> {
    let eps = T::from_f64_lossy(GEOM_EPS_MM);
    let mut order: Vec<usize> = (0..pins.len()).collect();
    order.sort_by(|&a, &b| key(&pins[a]).partial_cmp(&key(&pins[b])).unwrap());
    let mut groups: Vec<(T, Vec<usize>)> = Vec::new();
    for i in order {
        let v = key(&pins[i]);
        match groups.last_mut() {
            Some((g, members)) if (v - *g).abs() <= eps => members.push(i),
            _ => groups.push((v, vec![i])),
        }
    }
    groups
}

fn run<T: Scalar>(pins: &[Pin<T>], axis: Axis, fixed: T, mut members: Vec<usize>) -> PinRun<T> {
    members.sort_by(|&a, &b| {
        let pos = |i: usize| match axis {
            Axis::Horizontal => pins[i].cx,
            Axis::Vertical => pins[i].cy,
        };
        pos(a).partial_cmp(&pos(b)).unwrap()
    });
    PinRun { axis, fixed, members }
}

fn uniform_gap<T: Scalar>(values: &[T]) -> Option<T> {
    if values.len() < 2 {
        return None;
    }
    let eps = T::from_f64_lossy(GEOM_EPS_MM);
    let gap = values[1] - values[0];
    for w in values.windows(2) {
        if ((w[1] - w[0]) - gap).abs() > eps {
            return None;
        }
    }
    Some(crate::scalar::round_decimals(gap, 6))
}

/// Classifies the pin arrangement of a footprint.
pub fn detect_layout<T: Scalar>(pins: &[Pin<T>]) -> DetectedLayout<T> {
    if pins.is_empty() {
        return DetectedLayout::Irregular;
    }
    let xg = group_by(pins, |p| p.cx);
    let yg = group_by(pins, |p| p.cy);
    let n = pins.len();

    if n == 2 {
        let dx = (pins[0].cx - pins[1].cx).abs();
        let dy = (pins[0].cy - pins[1].cy).abs();
        let (axis, fixed) = if dx >= dy {
            (Axis::Horizontal, pins[0].cy)
        } else {
            (Axis::Vertical, pins[0].cx)
        };
        return DetectedLayout::TwoPad { run: run(pins, axis, fixed, vec![0, 1]) };
    }
    if yg.len() == 1 {
        let (fixed, members) = yg.into_iter().next().unwrap();
        return DetectedLayout::SingleRow { run: run(pins, Axis::Horizontal, fixed, members) };
    }
    if xg.len() == 1 {
        let (fixed, members) = xg.into_iter().next().unwrap();
        return DetectedLayout::SingleRow { run: run(pins, Axis::Vertical, fixed, members) };
    }

    // Complete grid of circles with uniform pitch on both axes.
    if pins.iter().all(|p| p.shape == PadShape::Circle)
        && xg.len() >= 2
        && yg.len() >= 2
        && xg.len() * yg.len() == n
        && xg.iter().all(|(_, m)| m.len() == yg.len())
        && yg.iter().all(|(_, m)| m.len() == xg.len())
    {
        let xs: Vec<T> = xg.iter().map(|(v, _)| *v).collect();
        let ys: Vec<T> = yg.iter().map(|(v, _)| *v).collect();
        if let (Some(px), Some(py)) = (uniform_gap(&xs), uniform_gap(&ys)) {
            return DetectedLayout::Grid {
                rows: yg.len(),
                cols: xg.len(),
                pitch_x: px,
                pitch_y: py,
            };
        }
    }

    if xg.len() == 2 && xg.iter().all(|(_, m)| m.len() == n / 2) {
        let span = crate::scalar::round_decimals(xg[1].0 - xg[0].0, 6);
        let left = run(pins, Axis::Vertical, xg[0].0, xg[0].1.clone());
        let right = run(pins, Axis::Vertical, xg[1].0, xg[1].1.clone());
        return DetectedLayout::DualRow { runs: [left, right], span };
    }
    if yg.len() == 2 && yg.iter().all(|(_, m)| m.len() == n / 2) {
        let span = crate::scalar::round_decimals(yg[1].0 - yg[0].0, 6);
        let bottom = run(pins, Axis::Horizontal, yg[0].0, yg[0].1.clone());
        let top = run(pins, Axis::Horizontal, yg[1].0, yg[1].1.clone());
        return DetectedLayout::DualRow { runs: [bottom, top], span };
    }

    // Quad perimeter: two large columns plus two large rows.
    let big_x: Vec<&(T, Vec<usize>)> = xg.iter().filter(|(_, m)| m.len() >= 3).collect();
    let big_y: Vec<&(T, Vec<usize>)> = yg.iter().filter(|(_, m)| m.len() >= 3).collect();
    if big_x.len() == 2 && big_y.len() == 2 {
        let total = big_x[0].1.len() + big_x[1].1.len() + big_y[0].1.len() + big_y[1].1.len();
        if total == n {
            let left = run(pins, Axis::Vertical, big_x[0].0, big_x[0].1.clone());
            let right = run(pins, Axis::Vertical, big_x[1].0, big_x[1].1.clone());
            let bottom = run(pins, Axis::Horizontal, big_y[0].0, big_y[0].1.clone());
            let top = run(pins, Axis::Horizontal, big_y[1].0, big_y[1].1.clone());
            let span_x = crate::scalar::round_decimals(big_x[1].0 - big_x[0].0, 6);
            let span_y = crate::scalar::round_decimals(big_y[1].0 - big_y[0].0, 6);
            return DetectedLayout::Quad { runs: [left, bottom, right, top], span_x, span_y };
        }
    }

    DetectedLayout::Irregular
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PackageRegistry;
    use crate::synthgen::{build_footprint, FootprintParams};

    fn params(pin_count: u32, grid: Option<(u32, u32)>) -> FootprintParams {
        FootprintParams {
            pin_count,
            grid,
            pitch: 1.0,
            pad_along: 0.5,
            pad_across: 1.2,
            span: 8.0,
        }
    }

    #[test]
    fn detects_generator_outputs() {
        let reg = PackageRegistry::default();
        let soic = build_footprint(reg.get("SOIC").unwrap(), &params(8, None)).unwrap();
        assert!(matches!(detect_layout(&soic.pins), DetectedLayout::DualRow { .. }));

        let qfp = build_footprint(reg.get("QFP").unwrap(), &params(16, None)).unwrap();
        assert!(matches!(detect_layout(&qfp.pins), DetectedLayout::Quad { .. }));

        let mut p = params(16, Some((4, 4)));
        p.pad_along = 0.5;
        let bga = build_footprint(reg.get("BGA").unwrap(), &p).unwrap();
        match detect_layout(&bga.pins) {
            DetectedLayout::Grid { rows, cols, pitch_x, pitch_y } => {
                assert_eq!((rows, cols), (4, 4));
                assert_eq!(pitch_x, 1.0);
                assert_eq!(pitch_y, 1.0);
            }
            other => panic!("expected grid, got {other:?}"),
        }

        let sip = build_footprint(reg.get("SIP").unwrap(), &params(5, None)).unwrap();
        assert!(matches!(detect_layout(&sip.pins), DetectedLayout::SingleRow { .. }));

        let chip = build_footprint(reg.get("CHIP2").unwrap(), &params(2, None)).unwrap();
        assert!(matches!(detect_layout(&chip.pins), DetectedLayout::TwoPad { .. }));
    }

    #[test]
    fn dip4_is_dual_row_not_grid() {
        let reg = PackageRegistry::default();
        let mut p = params(4, None);
        p.pitch = 2.54;
        p.span = 7.62;
        let dip = build_footprint(reg.get("DIP").unwrap(), &p).unwrap();
        match detect_layout(&dip.pins) {
            DetectedLayout::DualRow { span, .. } => assert!((span - 7.62).abs() < 1e-9),
            other => panic!("expected dual-row, got {other:?}"),
        }
    }

    #[test]
    fn run_pitch_values() {
        let reg = PackageRegistry::default();
        let mut p = params(8, None);
        p.pitch = 1.27;
        let soic = build_footprint(reg.get("SOIC").unwrap(), &p).unwrap();
        let layout = detect_layout(&soic.pins);
        let runs = layout.runs();
        assert_eq!(runs.len(), 2);
        for r in runs {
            assert_eq!(r.pitches(&soic.pins), vec![1.27]);
        }
    }
}
