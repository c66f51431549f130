//! KiCad footprint export and re-import.
//!
//! Output format, one `pad` node per pin:
//! `(footprint "NAME" (layer "F.Cu")
//!    (pad "DES" smd SHAPE (at X Y) (size W H) (layers "F.Cu" "F.Paste" "F.Mask")) ...)`
//!
//! KiCad's +y axis points down, so `cy` is negated on export and negated back
//! on import. Shape mapping: rectangle -> rect, circle -> circle,
//! stadium -> oval.

use super::sexpr::{self, Sexpr};
use super::InterchangeError;
use crate::fmt::keep_one_decimal;
use crate::geom::{detect_layout, FootprintGeometry, Origin, PackageClass, PadShape, Pin};
use crate::Coord;
use std::fmt::Write;

fn kicad_shape(shape: PadShape) -> &'static str {
    match shape {
        PadShape::Rectangle => "rect",
        PadShape::Circle => "circle",
        PadShape::Stadium => "oval",
    }
}

fn shape_from_kicad(s: &str) -> Option<PadShape> {
    match s {
        "rect" => Some(PadShape::Rectangle),
        "circle" => Some(PadShape::Circle),
        "oval" => Some(PadShape::Stadium),
        _ => None,
    }
}

/// Renders a footprint as KiCad s-expression text. Output is byte-stable for
/// identical inputs.
pub fn export_kicad(geometry: &FootprintGeometry<Coord>, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(footprint {name:?}");
    let _ = writeln!(out, "  (layer \"F.Cu\")");
    for pin in &geometry.pins {
        let _ = writeln!(
            out,
            "  (pad {:?} smd {} (at {} {}) (size {} {}) (layers \"F.Cu\" \"F.Paste\" \"F.Mask\"))",
            pin.designator,
            kicad_shape(pin.shape),
            keep_one_decimal(pin.cx),
            keep_one_decimal(-pin.cy),
            keep_one_decimal(pin.w),
            keep_one_decimal(pin.h),
        );
    }
    out.push_str(")\n");
    out
}

/// One pad as read back from KiCad text, in KiCad's own axis convention.
#[derive(Debug, Clone, PartialEq)]
pub struct KicadPad {
    pub designator: String,
    pub shape: PadShape,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

fn number(node: &Sexpr, index: usize, what: &str) -> Result<f64, InterchangeError> {
    node.as_list()
        .and_then(|items| items.get(index))
        .and_then(Sexpr::as_atom)
        .and_then(|s| s.parse::<f64>().ok())
        .ok_or_else(|| InterchangeError::KicadStructure(format!("bad {what} node")))
}

/// Re-imports exported footprint text into the toolkit's axis convention
/// (+y up), assigning ordinals by pad order.
pub fn import_kicad(text: &str) -> Result<FootprintGeometry<Coord>, InterchangeError> {
    let root = sexpr::parse(text)?;
    if root.tag() != Some("footprint") {
        return Err(InterchangeError::KicadStructure(
            "root node is not 'footprint'".to_string(),
        ));
    }
    let name = root
        .as_list()
        .and_then(|items| items.get(1))
        .and_then(Sexpr::as_atom)
        .unwrap_or("footprint")
        .to_string();

    let mut pins = Vec::new();
    for (i, pad) in root.children("pad").enumerate() {
        let items = pad.as_list().expect("children() yields lists");
        let designator = items
            .get(1)
            .and_then(Sexpr::as_atom)
            .ok_or_else(|| InterchangeError::KicadStructure("pad missing designator".into()))?;
        let shape_atom = items
            .get(3)
            .and_then(Sexpr::as_atom)
            .ok_or_else(|| InterchangeError::KicadStructure("pad missing shape".into()))?;
        let shape = shape_from_kicad(shape_atom).ok_or_else(|| {
            InterchangeError::KicadStructure(format!("unknown pad shape {shape_atom:?}"))
        })?;
        let at = pad
            .children("at")
            .next()
            .ok_or_else(|| InterchangeError::KicadStructure("pad missing (at)".into()))?;
        let size = pad
            .children("size")
            .next()
            .ok_or_else(|| InterchangeError::KicadStructure("pad missing (size)".into()))?;
        let x = number(at, 1, "at")?;
        let y = number(at, 2, "at")?;
        let w = number(size, 1, "size")?;
        let h = number(size, 2, "size")?;
        pins.push(Pin::new(designator.to_string(), i as u32 + 1, x, -y, shape, w, h));
    }
    if pins.is_empty() {
        return Err(InterchangeError::KicadStructure("no pad nodes".to_string()));
    }
    let class = PackageClass::unclassified(detect_layout(&pins).topology());
    Ok(FootprintGeometry::new(class, pins, Origin::Source, name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PinTopology;

    fn chip() -> FootprintGeometry<Coord> {
        FootprintGeometry::new(
            PackageClass::new("CHIP2", PinTopology::TwoPad),
            vec![
                Pin::new("1", 1, -1.5, 0.0, PadShape::Rectangle, 0.9, 1.6),
                Pin::new("2", 2, 1.5, 0.0, PadShape::Rectangle, 0.9, 1.6),
            ],
            Origin::LayoutCenter,
            "chip",
        )
    }

    #[test]
    fn export_has_one_pad_node_per_pin() {
        let text = export_kicad(&chip(), "CHIP-TEST");
        assert_eq!(text.matches("(pad ").count(), 2);
        assert!(text.starts_with("(footprint \"CHIP-TEST\""));
        assert!(text.contains("(layers \"F.Cu\" \"F.Paste\" \"F.Mask\")"));
    }

    #[test]
    fn y_axis_is_negated() {
        let mut g = chip();
        g.pins[0].cx = 1.0;
        g.pins[0].cy = 2.0;
        let text = export_kicad(&g, "X");
        assert!(text.contains("(at 1.0 -2.0)"), "{text}");
    }

    #[test]
    fn export_then_import_round_trips() {
        let g = chip();
        let text = export_kicad(&g, "CHIP");
        let back = import_kicad(&text).unwrap();
        assert_eq!(back.pin_count(), g.pin_count());
        for (a, b) in g.pins.iter().zip(back.pins.iter()) {
            assert_eq!(a.designator, b.designator);
            assert_eq!(a.shape, b.shape);
            assert!((a.cx - b.cx).abs() < 1e-9);
            assert!((a.cy - b.cy).abs() < 1e-9);
            assert!((a.w - b.w).abs() < 1e-9);
            assert!((a.h - b.h).abs() < 1e-9);
        }
    }

    #[test]
    fn export_is_byte_stable() {
        let g = chip();
        assert_eq!(export_kicad(&g, "A"), export_kicad(&g, "A"));
    }

    #[test]
    fn stadium_maps_to_oval() {
        let mut g = chip();
        g.pins[0].shape = PadShape::Stadium;
        let text = export_kicad(&g, "X");
        assert!(text.contains("smd oval"));
        let back = import_kicad(&text).unwrap();
        assert_eq!(back.pins[0].shape, PadShape::Stadium);
    }
}
