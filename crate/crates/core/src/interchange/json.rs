//! Canonical geometry JSON.
//!
//! Schema (version "1"):
//! `{schema_version, package_class, origin, source_id, provenance?, pins:[
//!   {designator, ordinal, cx, cy, shape, w, h}]}`
//!
//! Numbers are serialized with exactly 6 decimal places. Toolkit geometry
//! lives on the 1e-6 mm grid, so the round trip is lossless and the output is
//! byte-stable.

use super::InterchangeError;
use crate::geom::{detect_layout, FootprintGeometry, Origin, PackageClass, PadShape, Pin};
use crate::{Coord, PackageRegistry};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

/// Where a canonical document came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source_format: String,
    pub source_file: String,
}

/// A canonical geometry document: schema version, geometry, provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalGeometryDocument {
    pub schema_version: String,
    pub geometry: FootprintGeometry<Coord>,
    pub provenance: Option<Provenance>,
}

impl CanonicalGeometryDocument {
    pub fn new(geometry: FootprintGeometry<Coord>, provenance: Option<Provenance>) -> Self {
        Self { schema_version: SCHEMA_VERSION.to_string(), geometry, provenance }
    }
}

#[derive(Serialize, Deserialize)]
struct DocWire {
    schema_version: String,
    package_class: String,
    origin: String,
    source_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
    pins: Vec<PinWire>,
}

#[derive(Serialize, Deserialize)]
struct PinWire {
    designator: String,
    ordinal: u32,
    cx: f64,
    cy: f64,
    shape: String,
    w: f64,
    h: f64,
}

/// serde_json formatter writing every float with exactly 6 decimals.
struct SixDecimals;

impl serde_json::ser::Formatter for SixDecimals {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.6}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.6}")
    }
}

fn to_wire(doc: &CanonicalGeometryDocument) -> DocWire {
    DocWire {
        schema_version: doc.schema_version.clone(),
        package_class: doc.geometry.package_class.name.clone(),
        origin: doc.geometry.origin.as_str().to_string(),
        source_id: doc.geometry.source_id.clone(),
        provenance: doc.provenance.clone(),
        pins: doc
            .geometry
            .pins
            .iter()
            .map(|p| PinWire {
                designator: p.designator.clone(),
                ordinal: p.ordinal,
                cx: p.cx,
                cy: p.cy,
                shape: p.shape.as_str().to_string(),
                w: p.w,
                h: p.h,
            })
            .collect(),
    }
}

/// Serializes a full canonical document to bytes.
pub fn write_document_json(doc: &CanonicalGeometryDocument) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SixDecimals);
    to_wire(doc)
        .serialize(&mut ser)
        .expect("canonical document serializes");
    out
}

/// Serializes a geometry as a canonical document with no provenance.
pub fn write_geometry_json(geometry: &FootprintGeometry<Coord>) -> Vec<u8> {
    write_document_json(&CanonicalGeometryDocument::new(geometry.clone(), None))
}

/// Parses and checks a canonical document: supported schema version, finite
/// numbers, known shapes, and a geometry with no error-severity violations.
pub fn parse_document_json(bytes: &[u8]) -> Result<CanonicalGeometryDocument, InterchangeError> {
    let wire: DocWire =
        serde_json::from_slice(bytes).map_err(|e| InterchangeError::Json(e.to_string()))?;
    if wire.schema_version != SCHEMA_VERSION {
        return Err(InterchangeError::UnsupportedVersion {
            found: wire.schema_version,
            supported: SCHEMA_VERSION,
        });
    }
    let origin = Origin::parse(&wire.origin).ok_or(InterchangeError::BadValue {
        field: "origin",
        value: wire.origin.clone(),
    })?;

    let mut pins = Vec::with_capacity(wire.pins.len());
    for (i, p) in wire.pins.iter().enumerate() {
        for (name, v) in [("cx", p.cx), ("cy", p.cy), ("w", p.w), ("h", p.h)] {
            if !v.is_finite() {
                return Err(InterchangeError::NonFinite {
                    field: format!("pins[{i}].{name}"),
                });
            }
        }
        let shape = PadShape::parse(&p.shape).ok_or(InterchangeError::BadValue {
            field: "shape",
            value: p.shape.clone(),
        })?;
        pins.push(Pin::new(p.designator.clone(), p.ordinal, p.cx, p.cy, shape, p.w, p.h));
    }

    let registry = PackageRegistry::default();
    let package_class = match registry.get(&wire.package_class) {
        Some(c) => c.clone(),
        None => PackageClass::new(wire.package_class.clone(), detect_layout(&pins).topology()),
    };

    let geometry = FootprintGeometry::new(package_class, pins, origin, wire.source_id);
    let violations: Vec<_> = geometry
        .validate()
        .into_iter()
        .filter(|v| !v.is_warning())
        .collect();
    if !violations.is_empty() {
        return Err(InterchangeError::Validation(violations));
    }
    Ok(CanonicalGeometryDocument {
        schema_version: wire.schema_version,
        geometry,
        provenance: wire.provenance,
    })
}

/// Parses a canonical document and returns just the geometry.
pub fn parse_geometry_json(bytes: &[u8]) -> Result<FootprintGeometry<Coord>, InterchangeError> {
    parse_document_json(bytes).map(|d| d.geometry)
}
