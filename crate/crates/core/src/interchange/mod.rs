//! Geometry interchange: canonical JSON documents, the EDA XML pad-list
//! dialect, and KiCad footprint export.
//!
//! All interchange formats are millimeters only. The canonical JSON schema
//! and the XML dialect grammar are documented in `docs/` at the workspace
//! root, together with two golden XML files.

mod json;
mod kicad;
pub mod sexpr;
mod xml;

pub use json::{
    parse_document_json, parse_geometry_json, write_document_json, write_geometry_json,
    CanonicalGeometryDocument, Provenance, SCHEMA_VERSION,
};
pub use kicad::{export_kicad, import_kicad, KicadPad};
pub use xml::{parse_eda_xml, ParsedEda};

use crate::geom::Violation;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InterchangeError {
    #[error("xml syntax error at byte {offset}: {detail}")]
    XmlSyntax { offset: u64, detail: String },
    #[error("xml schema error: {detail}")]
    XmlSchema { detail: String },
    #[error("json error: {0}")]
    Json(String),
    #[error("unsupported schema_version {found:?} (supported: {supported})")]
    UnsupportedVersion { found: String, supported: &'static str },
    #[error("non-finite number in field {field}")]
    NonFinite { field: String },
    #[error("invalid value for {field}: {value:?}")]
    BadValue { field: &'static str, value: String },
    #[error("geometry fails validation: {}", format_violations(.0))]
    Validation(Vec<Violation>),
    #[error("s-expression error: {0}")]
    Sexpr(String),
    #[error("kicad structure error: {0}")]
    KicadStructure(String),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
