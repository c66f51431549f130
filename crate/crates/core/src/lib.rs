//! Footprint dataset forge and evaluation toolkit.
//!
//! Generates valid IC footprint geometries, renders them as datasheet-style
//! annotated SVG diagrams, builds chain-of-thought QA conversation samples,
//! parses free-form model answers back into structured geometry, and scores
//! predictions with layout IoU, count error, pin distance, and per-pin IoU.
//!
//! The geometry core is generic over the scalar type via `num-traits`; the
//! aliases below fix the default `f64` instantiation used by the rest of the
//! toolkit.

pub mod eval;
pub mod fmt;
pub mod geom;
pub mod interchange;
pub mod qa;
pub mod render;
pub mod rng;
pub mod scalar;
pub mod synthgen;

pub use geom::{Origin, PackageClass, PackageRegistry, PadShape, PinTopology, Violation};
pub use scalar::Scalar;

/// Default coordinate scalar for the toolkit.
pub type Coord = f64;
/// Pin at the default scalar.
pub type Pin = geom::Pin<Coord>;
/// Footprint geometry at the default scalar.
pub type FootprintGeometry = geom::FootprintGeometry<Coord>;
/// Axis-aligned rectangle at the default scalar.
pub type Rect = geom::Rect<Coord>;
