//! Deterministic SVG rendering of footprint geometry as datasheet-style
//! annotated diagrams, plus the annotation planner and its inverse (geometry
//! reconstruction from labels).

mod annotate;
mod svg;

pub use annotate::{
    plan_annotations, reconstruct_from_plan, Annotation, AnnotationKind, AnnotationPlan, Leader,
    Topology,
};
pub use svg::{render_overlay, render_svg};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("invalid render spec: {0}")]
    InvalidSpec(String),
    #[error("cannot render empty geometry")]
    EmptyGeometry,
    #[error("annotation plan is missing {what}")]
    ReconstructMissing { what: String },
    #[error("annotation label {label:?} is not a number")]
    BadLabel { label: String },
    #[error("reconstruction failed: {0}")]
    ReconstructBuild(#[from] crate::synthgen::GenError),
}

/// Dimension-line styling switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimStyle {
    pub arrowheads: bool,
    pub extension_lines: bool,
}

impl Default for DimStyle {
    fn default() -> Self {
        Self { arrowheads: true, extension_lines: true }
    }
}

/// Deterministic rendering parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    /// Pixels per millimeter.
    pub px_per_mm: f64,
    /// Blank border around the drawing, in mm.
    pub margin_mm: f64,
    pub pad_stroke_mm: f64,
    pub dim_stroke_mm: f64,
    pub font_size_pt: f64,
    pub dim_style: DimStyle,
    /// Rows longer than this are elided with an ellipsis symbol; `None`
    /// disables elision. Must be >= 4 when set.
    pub omission_threshold: Option<u32>,
    pub show_pin_numbers: bool,
    pub show_pitch: bool,
    pub show_pad_dims: bool,
    pub show_pin1_marker: bool,
    /// Reserved for seeded style randomization; the v1 renderer has a single
    /// style and applies no jitter.
    pub seed: Option<u64>,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            px_per_mm: 20.0,
            margin_mm: 4.0,
            pad_stroke_mm: 0.08,
            dim_stroke_mm: 0.05,
            font_size_pt: 8.0,
            dim_style: DimStyle::default(),
            omission_threshold: Some(32),
            show_pin_numbers: true,
            show_pitch: true,
            show_pad_dims: true,
            show_pin1_marker: true,
            seed: None,
        }
    }
}

impl RenderSpec {
    /// Label text height in mm.
    pub fn font_mm(&self) -> f64 {
        self.font_size_pt * 25.4 / 72.0
    }

    /// Fixed per-character advance in mm, used for metrics-independent
    /// label-box layout.
    pub fn char_mm(&self) -> f64 {
        0.6 * self.font_mm()
    }

    pub fn check(&self) -> Result<(), RenderError> {
        if !(self.px_per_mm.is_finite() && self.px_per_mm > 0.0) {
            return Err(RenderError::InvalidSpec(format!(
                "px_per_mm must be positive, got {}",
                self.px_per_mm
            )));
        }
        if !(self.margin_mm.is_finite() && self.margin_mm >= 0.0) {
            return Err(RenderError::InvalidSpec("margin_mm must be >= 0".to_string()));
        }
        if !(self.font_size_pt.is_finite() && self.font_size_pt > 0.0) {
            return Err(RenderError::InvalidSpec("font_size_pt must be positive".to_string()));
        }
        if let Some(t) = self.omission_threshold {
            if t < 4 {
                return Err(RenderError::InvalidSpec(format!(
                    "omission_threshold must be >= 4 or disabled, got {t}"
                )));
            }
        }
        Ok(())
    }
}
