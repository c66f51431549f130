//! Parser for the toolkit's EDA XML pad-list dialect.
//!
//! Grammar (see `docs/eda-xml.md`):
//! - root `<footprint>` with optional `name` and `class` attributes;
//! - one `<pad>` element per pin with required `x`, `y`, `w`, `h` attributes
//!   and optional `shape` (rect | circle | oval | stadium, default rect),
//!   `designator`, and `index`;
//! - unknown elements are skipped and reported as warnings.
//!
//! Ordinals are assigned by document order and the geometry is recentered to
//! the layout-center convention.

use super::InterchangeError;
use crate::geom::{detect_layout, FootprintGeometry, Origin, PackageClass, PadShape, Pin};
use crate::scalar::round_decimals;
use crate::{Coord, PackageRegistry};
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

/// Result of parsing an EDA XML document.
#[derive(Debug, Clone)]
pub struct ParsedEda {
    pub geometry: FootprintGeometry<Coord>,
    /// Unknown elements and other non-fatal oddities, in document order.
    pub warnings: Vec<String>,
}

struct RawPad {
    designator: Option<String>,
    index: Option<String>,
    x: Option<f64>,
    y: Option<f64>,
    w: Option<f64>,
    h: Option<f64>,
    shape: PadShape,
}

/// Parses the pad-list dialect into a recentered footprint geometry.
pub fn parse_eda_xml(bytes: &[u8]) -> Result<ParsedEda, InterchangeError> {
    let mut reader = Reader::from_reader(bytes);
    reader.config_mut().trim_text(true);

    let mut warnings = Vec::new();
    let mut pads: Vec<RawPad> = Vec::new();
    let mut name: Option<String> = None;
    let mut class_attr: Option<String> = None;
    let mut saw_root = false;
    let mut depth = 0usize;
    let mut buf = Vec::new();

    loop {
        let event = reader.read_event_into(&mut buf).map_err(|e| {
            InterchangeError::XmlSyntax {
                offset: reader.buffer_position(),
                detail: e.to_string(),
            }
        })?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let is_empty = matches!(event, Event::Empty(_));
                let local = String::from_utf8_lossy(e.local_name().as_ref()).to_string();
                match (depth, local.as_str()) {
                    (0, "footprint") => {
                        saw_root = true;
                        name = attr_value(&reader, e, "name")?;
                        class_attr = attr_value(&reader, e, "class")?;
                    }
                    (0, other) => {
                        return Err(InterchangeError::XmlSchema {
                            detail: format!("expected root element 'footprint', found '{other}'"),
                        });
                    }
                    (1, "pad") => {
                        pads.push(parse_pad(&reader, e, pads.len() + 1)?);
                    }
                    (1, other) => {
                        warnings.push(format!("skipping unknown element '{other}'"));
                    }
                    _ => {}
                }
                if !is_empty {
                    depth += 1;
                }
            }
            Event::End(_) => {
                depth = depth.saturating_sub(1);
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }

    if !saw_root {
        return Err(InterchangeError::XmlSchema {
            detail: "no 'footprint' root element".to_string(),
        });
    }
    if pads.is_empty() {
        return Err(InterchangeError::XmlSchema { detail: "no pad elements".to_string() });
    }

    let pins: Vec<Pin<Coord>> = pads
        .into_iter()
        .enumerate()
        .map(|(i, raw)| {
            let ordinal = i as u32 + 1;
            let designator = raw
                .designator
                .or(raw.index)
                .unwrap_or_else(|| ordinal.to_string());
            Pin::new(
                designator,
                ordinal,
                round_decimals(raw.x.unwrap(), 6),
                round_decimals(raw.y.unwrap(), 6),
                raw.shape,
                round_decimals(raw.w.unwrap(), 6),
                round_decimals(raw.h.unwrap(), 6),
            )
        })
        .collect();

    let registry = PackageRegistry::default();
    let package_class = match class_attr.as_deref().and_then(|c| registry.get(c)) {
        Some(c) => c.clone(),
        None => {
            if let Some(c) = class_attr {
                warnings.push(format!("unknown package class '{c}', topology inferred"));
            }
            PackageClass::unclassified(detect_layout(&pins).topology())
        }
    };

    let source_id = name.unwrap_or_else(|| "eda-import".to_string());
    let geometry = FootprintGeometry::new(package_class, pins, Origin::Source, source_id);
    let violations: Vec<_> = geometry
        .validate()
        .into_iter()
        .filter(|v| !v.is_warning())
        .collect();
    if !violations.is_empty() {
        return Err(InterchangeError::Validation(violations));
    }
    let geometry = geometry
        .recenter()
        .expect("non-empty geometry recenters");
    Ok(ParsedEda { geometry, warnings })
}

fn attr_value(
    reader: &Reader<&[u8]>,
    e: &BytesStart,
    key: &str,
) -> Result<Option<String>, InterchangeError> {
    for attr in e.attributes() {
        let attr = attr.map_err(|err| InterchangeError::XmlSyntax {
            offset: reader.buffer_position(),
            detail: err.to_string(),
        })?;
        if attr.key.local_name().as_ref() == key.as_bytes() {
            let value = attr
                .decode_and_unescape_value(reader.decoder())
                .map_err(|err| InterchangeError::XmlSyntax {
                    offset: reader.buffer_position(),
                    detail: err.to_string(),
                })?;
            return Ok(Some(value.into_owned()));
        }
    }
    Ok(None)
}

fn parse_pad(
    reader: &Reader<&[u8]>,
    e: &BytesStart,
    position: usize,
) -> Result<RawPad, InterchangeError> {
    let number = |key: &str| -> Result<Option<f64>, InterchangeError> {
        match attr_value(reader, e, key)? {
            None => Ok(None),
            Some(text) => {
                let v: f64 = text.trim().parse().map_err(|_| InterchangeError::XmlSchema {
                    detail: format!("pad[{position}] attribute '{key}': invalid number {text:?}"),
                })?;
                if !v.is_finite() {
                    return Err(InterchangeError::XmlSchema {
                        detail: format!("pad[{position}] attribute '{key}': non-finite"),
                    });
                }
                Ok(Some(v))
            }
        }
    };

    let mut raw = RawPad {
        designator: attr_value(reader, e, "designator")?,
        index: attr_value(reader, e, "index")?,
        x: number("x")?,
        y: number("y")?,
        w: number("w")?,
        h: number("h")?,
        shape: PadShape::Rectangle,
    };
    for (key, value) in [("x", raw.x), ("y", raw.y), ("w", raw.w), ("h", raw.h)] {
        if value.is_none() {
            return Err(InterchangeError::XmlSchema {
                detail: format!("pad[{position}] missing '{key}'"),
            });
        }
    }
    if let Some(shape) = attr_value(reader, e, "shape")? {
        raw.shape = PadShape::parse(&shape).ok_or_else(|| InterchangeError::XmlSchema {
            detail: format!("pad[{position}] attribute 'shape': unknown shape {shape:?}"),
        })?;
    }
    Ok(raw)
}
