//! Canonical footprint geometry: pins, footprints, package classes, and the
//! area/distance math used by every other module.
//!
//! Units are millimeters, +x right, +y up. The canonical origin convention is
//! the layout bounding-box center at (0,0). All types are immutable after
//! construction and every operation is a pure function.

mod area;
pub mod layout;

pub use area::{layout_iou, layout_union_area, pad_iou, rect_union_area, scanline_union_area};
pub use layout::{detect_layout, Axis, DetectedLayout, PinRun};

use crate::scalar::{round_decimals, Scalar, GEOM_EPS_MM};
use thiserror::Error;

/// Pad outline shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadShape {
    Rectangle,
    Circle,
    /// Rectangle with fully rounded short ends; corner radius `min(w, h) / 2`.
    Stadium,
}

impl PadShape {
    pub fn as_str(&self) -> &'static str {
        match self {
            PadShape::Rectangle => "rectangle",
            PadShape::Circle => "circle",
            PadShape::Stadium => "stadium",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rectangle" | "rect" => Some(PadShape::Rectangle),
            "circle" => Some(PadShape::Circle),
            "stadium" | "oval" => Some(PadShape::Stadium),
            _ => None,
        }
    }
}

/// One pad: designator, 1-based ordinal, center and dimensions in mm.
#[derive(Debug, Clone, PartialEq)]
pub struct Pin<T: Scalar> {
    pub designator: String,
    pub ordinal: u32,
    pub cx: T,
    pub cy: T,
    pub shape: PadShape,
    pub w: T,
    pub h: T,
}

impl<T: Scalar> Pin<T> {
    pub fn new(
        designator: impl Into<String>,
        ordinal: u32,
        cx: T,
        cy: T,
        shape: PadShape,
        w: T,
        h: T,
    ) -> Self {
        Self { designator: designator.into(), ordinal, cx, cy, shape, w, h }
    }

    /// Corner radius of the outline: 0 for rectangles, `min(w, h) / 2` for
    /// circles and stadiums.
    pub fn corner_radius(&self) -> T {
        match self.shape {
            PadShape::Rectangle => T::zero(),
            PadShape::Circle | PadShape::Stadium => {
                self.w.min(self.h) / T::from_f64_lossy(2.0)
            }
        }
    }

    /// Exact outline area. `w*h - (4 - pi) r^2` covers all three shapes.
    pub fn area(&self) -> T {
        let r = self.corner_radius();
        let four_minus_pi = T::from_f64_lossy(4.0 - std::f64::consts::PI);
        self.w * self.h - four_minus_pi * r * r
    }

    /// Axis-aligned bounding box of the outline.
    pub fn bbox(&self) -> Rect<T> {
        let half = T::from_f64_lossy(0.5);
        Rect {
            x0: self.cx - self.w * half,
            y0: self.cy - self.h * half,
            x1: self.cx + self.w * half,
            y1: self.cy + self.h * half,
        }
    }

    /// Half-width of the outline at vertical offset `dy` from the center, or
    /// `None` when the outline does not reach that height.
    pub fn half_width_at(&self, dy: T) -> Option<T> {
        let two = T::from_f64_lossy(2.0);
        let hh = self.h / two;
        let ady = dy.abs();
        if ady > hh {
            return None;
        }
        let r = self.corner_radius();
        let core = hh - r;
        if ady <= core {
            Some(self.w / two)
        } else {
            let t = ady - core;
            Some(self.w / two - r + (r * r - t * t).max(T::zero()).sqrt())
        }
    }

    /// True when both outlines are the same region.
    pub fn same_outline(&self, other: &Self) -> bool {
        self.shape == other.shape
            && self.cx == other.cx
            && self.cy == other.cy
            && self.w == other.w
            && self.h == other.h
    }

    fn is_finite(&self) -> bool {
        self.cx.is_finite() && self.cy.is_finite() && self.w.is_finite() && self.h.is_finite()
    }
}

/// Axis-aligned rectangle, `x0 <= x1`, `y0 <= y1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T: Scalar> {
    pub x0: T,
    pub y0: T,
    pub x1: T,
    pub y1: T,
}

impl<T: Scalar> Rect<T> {
    pub fn width(&self) -> T {
        self.x1 - self.x0
    }

    pub fn height(&self) -> T {
        self.y1 - self.y0
    }

    pub fn center(&self) -> (T, T) {
        let half = T::from_f64_lossy(0.5);
        ((self.x0 + self.x1) * half, (self.y0 + self.y1) * half)
    }

    pub fn union(&self, other: &Self) -> Self {
        Rect {
            x0: self.x0.min(other.x0),
            y0: self.y0.min(other.y0),
            x1: self.x1.max(other.x1),
            y1: self.y1.max(other.y1),
        }
    }
}

/// Pin placement pattern of a package family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PinTopology {
    DualRow,
    QuadPerimeter,
    FullGrid,
    SingleRow,
    TwoPad,
}

impl PinTopology {
    pub fn as_str(&self) -> &'static str {
        match self {
            PinTopology::DualRow => "dual-row",
            PinTopology::QuadPerimeter => "quad-perimeter",
            PinTopology::FullGrid => "full-grid",
            PinTopology::SingleRow => "single-row",
            PinTopology::TwoPad => "two-pad",
        }
    }
}

/// IC package family: a name plus its pin topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackageClass {
    pub name: String,
    pub topology: PinTopology,
}

impl PackageClass {
    pub fn new(name: impl Into<String>, topology: PinTopology) -> Self {
        Self { name: name.into(), topology }
    }

    /// Placeholder class for imported geometry with no declared family.
    pub fn unclassified(topology: PinTopology) -> Self {
        Self::new("UNCLASSIFIED", topology)
    }
}

/// Registry of known package classes. The default registry holds the ten
/// classes the toolkit generates.
#[derive(Debug, Clone)]
pub struct PackageRegistry {
    classes: Vec<PackageClass>,
}

#[derive(Debug, Error)]
#[error("duplicate package class name: {0}")]
pub struct DuplicateClassError(pub String);

impl PackageRegistry {
    pub fn new(classes: Vec<PackageClass>) -> Result<Self, DuplicateClassError> {
        for (i, c) in classes.iter().enumerate() {
            if classes[..i].iter().any(|p| p.name == c.name) {
                return Err(DuplicateClassError(c.name.clone()));
            }
        }
        Ok(Self { classes })
    }

    pub fn get(&self, name: &str) -> Option<&PackageClass> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn classes(&self) -> &[PackageClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

impl Default for PackageRegistry {
    fn default() -> Self {
        use PinTopology::*;
        Self::new(vec![
            PackageClass::new("SOIC", DualRow),
            PackageClass::new("QFP", QuadPerimeter),
            PackageClass::new("QFN", QuadPerimeter),
            PackageClass::new("BGA", FullGrid),
            PackageClass::new("DIP", DualRow),
            PackageClass::new("SOT", DualRow),
            PackageClass::new("SON", DualRow),
            PackageClass::new("PLCC", QuadPerimeter),
            PackageClass::new("CHIP2", TwoPad),
            PackageClass::new("SIP", SingleRow),
        ])
        .expect("default registry names are unique")
    }
}

/// Origin convention of a footprint's coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Layout bounding-box center at (0,0).
    LayoutCenter,
    /// Whatever origin the source file used.
    Source,
}

impl Origin {
    pub fn as_str(&self) -> &'static str {
        match self {
            Origin::LayoutCenter => "layout-center",
            Origin::Source => "source",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "layout-center" => Some(Origin::LayoutCenter),
            "source" => Some(Origin::Source),
            _ => None,
        }
    }
}

/// The canonical pin-layout model: package class, origin convention, and the
/// ordered pin list. Single source of truth for labels, rendering, and scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct FootprintGeometry<T: Scalar> {
    pub package_class: PackageClass,
    pub pins: Vec<Pin<T>>,
    pub origin: Origin,
    pub source_id: String,
}

/// Largest pin count the corpus constraints allow before `validate` warns.
pub const MAX_PIN_COUNT: usize = 800;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("empty geometry")]
    EmptyGeometry,
}

/// One `validate` finding. `TooManyPins` is a warning; everything else is an
/// error-severity violation.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyGeometry,
    TooManyPins { count: usize },
    DuplicateDesignator { designator: String },
    NonPositiveDimension { ordinal: u32 },
    NonFiniteValue { ordinal: u32 },
    CircleAspect { ordinal: u32 },
    OrdinalRange { detail: String },
    PadOverlap { a: u32, b: u32 },
    OffCenterOrigin { offset_mm: f64 },
}

impl Violation {
    pub fn is_warning(&self) -> bool {
        matches!(self, Violation::TooManyPins { .. })
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::EmptyGeometry => write!(f, "empty-geometry"),
            Violation::TooManyPins { count } => {
                write!(f, "too-many-pins: {count} exceeds {MAX_PIN_COUNT}")
            }
            Violation::DuplicateDesignator { designator } => {
                write!(f, "duplicate-designator: {designator:?}")
            }
            Violation::NonPositiveDimension { ordinal } => {
                write!(f, "non-positive-dimension: pin {ordinal}")
            }
            Violation::NonFiniteValue { ordinal } => write!(f, "non-finite-value: pin {ordinal}"),
            Violation::CircleAspect { ordinal } => {
                write!(f, "circle-aspect: pin {ordinal} has w != h")
            }
            Violation::OrdinalRange { detail } => write!(f, "ordinal-range: {detail}"),
            Violation::PadOverlap { a, b } => write!(f, "pad-overlap: pins {a} and {b}"),
            Violation::OffCenterOrigin { offset_mm } => {
                write!(f, "off-center-origin: bbox center {offset_mm} mm from (0,0)")
            }
        }
    }
}

impl<T: Scalar> FootprintGeometry<T> {
    pub fn new(
        package_class: PackageClass,
        pins: Vec<Pin<T>>,
        origin: Origin,
        source_id: impl Into<String>,
    ) -> Self {
        Self { package_class, pins, origin, source_id: source_id.into() }
    }

    pub fn pin_count(&self) -> usize {
        self.pins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pins.is_empty()
    }

    /// Smallest axis-aligned rectangle containing every pad outline.
    pub fn bounding_box(&self) -> Result<Rect<T>, GeometryError> {
        let mut iter = self.pins.iter();
        let first = iter.next().ok_or(GeometryError::EmptyGeometry)?;
        let mut bb = first.bbox();
        for pin in iter {
            bb = bb.union(&pin.bbox());
        }
        Ok(bb)
    }

    /// Translates all pins so the layout bounding box is centered at (0,0)
    /// and tags the origin as layout-center. Idempotent; coordinates are
    /// snapped to the 1e-6 mm grid so serialization stays lossless.
    pub fn recenter(&self) -> Result<Self, GeometryError> {
        let bb = self.bounding_box()?;
        let (cx, cy) = bb.center();
        let eps = T::from_f64_lossy(GEOM_EPS_MM);
        if cx.abs() < eps && cy.abs() < eps {
            let mut out = self.clone();
            out.origin = Origin::LayoutCenter;
            return Ok(out);
        }
        let sx = round_decimals(-cx, 6);
        let sy = round_decimals(-cy, 6);
        let pins = self
            .pins
            .iter()
            .map(|p| {
                let mut p = p.clone();
                p.cx = round_decimals(p.cx + sx, 6);
                p.cy = round_decimals(p.cy + sy, 6);
                p
            })
            .collect();
        Ok(Self {
            package_class: self.package_class.clone(),
            pins,
            origin: Origin::LayoutCenter,
            source_id: self.source_id.clone(),
        })
    }

    /// Checks every invariant and returns all violations; an empty list means
    /// the geometry is valid. Violations are data, not errors: metric
    /// computation proceeds on invalid inputs.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.pins.is_empty() {
            out.push(Violation::EmptyGeometry);
            return out;
        }
        if self.pins.len() > MAX_PIN_COUNT {
            out.push(Violation::TooManyPins { count: self.pins.len() });
        }

        for pin in &self.pins {
            if !pin.is_finite() {
                out.push(Violation::NonFiniteValue { ordinal: pin.ordinal });
                continue;
            }
            if pin.w <= T::zero() || pin.h <= T::zero() {
                out.push(Violation::NonPositiveDimension { ordinal: pin.ordinal });
            }
            if pin.shape == PadShape::Circle && pin.w != pin.h {
                out.push(Violation::CircleAspect { ordinal: pin.ordinal });
            }
        }

        let mut designators: Vec<&str> = Vec::with_capacity(self.pins.len());
        for pin in &self.pins {
            if designators.contains(&pin.designator.as_str()) {
                out.push(Violation::DuplicateDesignator { designator: pin.designator.clone() });
            } else {
                designators.push(&pin.designator);
            }
        }

        let mut ordinals: Vec<u32> = self.pins.iter().map(|p| p.ordinal).collect();
        ordinals.sort_unstable();
        let contiguous = ordinals
            .iter()
            .enumerate()
            .all(|(i, &o)| o == (i + 1) as u32);
        if !contiguous {
            out.push(Violation::OrdinalRange {
                detail: format!("expected 1..={}, got {:?}", self.pins.len(), compact(&ordinals)),
            });
        }

        self.collect_overlaps(&mut out);

        if self.origin == Origin::LayoutCenter {
            if let Ok(bb) = self.bounding_box() {
                let (cx, cy) = bb.center();
                let off = cx.abs().max(cy.abs()).to_f64_lossy();
                if off > GEOM_EPS_MM {
                    out.push(Violation::OffCenterOrigin { offset_mm: off });
                }
            }
        }
        out
    }

    /// True when `validate` reports no error-severity violations.
    pub fn is_valid(&self) -> bool {
        self.validate().iter().all(Violation::is_warning)
    }

    fn collect_overlaps(&self, out: &mut Vec<Violation>) {
        // Sort by bbox min-x so the inner loop can stop early.
        let mut order: Vec<usize> = (0..self.pins.len()).collect();
        order.retain(|&i| self.pins[i].is_finite() && self.pins[i].w > T::zero() && self.pins[i].h > T::zero());
        order.sort_by(|&a, &b| {
            self.pins[a].bbox().x0.partial_cmp(&self.pins[b].bbox().x0).unwrap()
        });
        for (k, &i) in order.iter().enumerate() {
            let bi = self.pins[i].bbox();
            for &j in &order[k + 1..] {
                let bj = self.pins[j].bbox();
                if bj.x0 >= bi.x1 {
                    break;
                }
                if pads_overlap(&self.pins[i], &self.pins[j]) {
                    let (a, b) = if self.pins[i].ordinal <= self.pins[j].ordinal {
                        (self.pins[i].ordinal, self.pins[j].ordinal)
                    } else {
                        (self.pins[j].ordinal, self.pins[i].ordinal)
                    };
                    out.push(Violation::PadOverlap { a, b });
                }
            }
        }
    }
}

/// True when the two outlines intersect with positive area by more than the
/// geometric tolerance; touching edges do not count. Exact for all shape
/// pairs: each outline is a core rectangle inflated by its corner radius, so
/// the interiors meet iff the core rectangles come closer than `r_a + r_b`.
pub fn pads_overlap<T: Scalar>(a: &Pin<T>, b: &Pin<T>) -> bool {
    let eps = T::from_f64_lossy(GEOM_EPS_MM);
    let two = T::from_f64_lossy(2.0);
    let ra = a.corner_radius();
    let rb = b.corner_radius();
    // Core rectangle half-extents after deflating by the corner radius.
    let ax = a.w / two - ra;
    let ay = a.h / two - ra;
    let bx = b.w / two - rb;
    let by = b.h / two - rb;
    let gx = (a.cx - b.cx).abs() - (ax + bx);
    let gy = (a.cy - b.cy).abs() - (ay + by);
    let rr = ra + rb;
    if rr == T::zero() {
        // Rectangle vs rectangle: strict overlap on both axes.
        gx < -eps && gy < -eps
    } else {
        let ux = gx.max(T::zero());
        let uy = gy.max(T::zero());
        (ux * ux + uy * uy).sqrt() < rr - eps
    }
}

fn compact(ordinals: &[u32]) -> Vec<u32> {
    ordinals.iter().copied().take(8).collect()
}
