//! Shared helpers for integration tests: seeded random geometry and the
//! brute-force grid-counting area oracle.

#![allow(dead_code)]

use padforge_core::geom::Pin as GenericPin;
use padforge_core::rng::rng_for_seed;
use padforge_core::scalar::round_decimals;
use padforge_core::{FootprintGeometry, Origin, PackageClass, PadShape, Pin, PinTopology};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Lattice pitch of the oracle field, mm.
pub const ORACLE_PITCH_MM: f64 = 0.05;
/// Oracle grid is ORACLE_UNITS x ORACLE_UNITS cells.
pub const ORACLE_UNITS: usize = 2000;

/// An axis-aligned rectangle on the oracle lattice, in integer cell units.
#[derive(Debug, Clone, Copy)]
pub struct LatticeRect {
    pub x0: u32,
    pub y0: u32,
    pub x1: u32,
    pub y1: u32,
}

impl LatticeRect {
    pub fn to_mm(&self) -> padforge_core::Rect {
        padforge_core::Rect {
            x0: self.x0 as f64 * ORACLE_PITCH_MM,
            y0: self.y0 as f64 * ORACLE_PITCH_MM,
            x1: self.x1 as f64 * ORACLE_PITCH_MM,
            y1: self.y1 as f64 * ORACLE_PITCH_MM,
        }
    }

    pub fn to_pin(&self, ordinal: u32) -> Pin {
        let r = self.to_mm();
        Pin::new(
            ordinal.to_string(),
            ordinal,
            (r.x0 + r.x1) / 2.0,
            (r.y0 + r.y1) / 2.0,
            PadShape::Rectangle,
            r.x1 - r.x0,
            r.y1 - r.y0,
        )
    }
}

/// Random lattice-aligned rectangles; overlaps allowed.
pub fn random_lattice_rects(rng: &mut ChaCha8Rng, count: usize) -> Vec<LatticeRect> {
    (0..count)
        .map(|_| {
            let w = rng.random_range(2..=60u32);
            let h = rng.random_range(2..=60u32);
            let x0 = rng.random_range(0..=(ORACLE_UNITS as u32 - w));
            let y0 = rng.random_range(0..=(ORACLE_UNITS as u32 - h));
            LatticeRect { x0, y0, x1: x0 + w, y1: y0 + h }
        })
        .collect()
}

/// Brute-force union area: marks every covered cell of the 2000x2000 oracle
/// grid in a bitset and counts. Exact for lattice-aligned rectangles.
pub struct GridOracle {
    bits: Vec<u64>,
}

impl GridOracle {
    pub fn new() -> Self {
        Self { bits: vec![0u64; ORACLE_UNITS * ORACLE_UNITS / 64] }
    }

    pub fn union_area(&mut self, rects: &[LatticeRect]) -> f64 {
        self.bits.fill(0);
        for r in rects {
            for y in r.y0..r.y1 {
                let row = y as usize * ORACLE_UNITS;
                for x in r.x0..r.x1 {
                    let i = row + x as usize;
                    self.bits[i / 64] |= 1u64 << (i % 64);
                }
            }
        }
        let cells: u64 = self.bits.iter().map(|w| w.count_ones() as u64).sum();
        cells as f64 * ORACLE_PITCH_MM * ORACLE_PITCH_MM
    }
}

/// A valid random geometry: pads placed on a coarse placement grid with
/// bounded jitter so outlines never overlap, coordinates on the 1e-6 mm
/// grid, dimensions on the 0.01 mm grid.
pub fn random_geometry(seed: u64) -> FootprintGeometry {
    let mut rng = rng_for_seed(seed);
    let n = rng.random_range(1..=24usize);
    let cols = (n as f64).sqrt().ceil() as usize;
    let pins: Vec<Pin> = (0..n)
        .map(|i| {
            let col = (i % cols) as f64;
            let row = (i / cols) as f64;
            let cx = round_decimals(col * 8.0 + rng.random_range(-1.0..1.0), 6);
            let cy = round_decimals(row * 8.0 + rng.random_range(-1.0..1.0), 6);
            let shape = match rng.random_range(0..3) {
                0 => PadShape::Rectangle,
                1 => PadShape::Circle,
                _ => PadShape::Stadium,
            };
            let w = round_decimals(rng.random_range(0.2..5.0), 2);
            let h = if shape == PadShape::Circle {
                w
            } else {
                round_decimals(rng.random_range(0.2..5.0), 2)
            };
            Pin::new((i + 1).to_string(), i as u32 + 1, cx, cy, shape, w, h)
        })
        .collect();
    let g = FootprintGeometry::new(
        PackageClass::new("SOIC", PinTopology::DualRow),
        pins,
        Origin::Source,
        format!("rand-{seed}"),
    );
    g.recenter().expect("non-empty")
}

/// Translates every pin of a geometry by (dx, dy).
pub fn translate(g: &FootprintGeometry, dx: f64, dy: f64) -> FootprintGeometry {
    let mut out = g.clone();
    for p in &mut out.pins {
        p.cx += dx;
        p.cy += dy;
    }
    out
}

/// Point-in-outline test mirroring the pad geometry definition, used by the
/// pixel-counting oracle for curved shapes.
pub fn point_in_pad(p: &GenericPin<f64>, x: f64, y: f64) -> bool {
    let r = p.corner_radius();
    let dx = (x - p.cx).abs() - (p.w / 2.0 - r);
    let dy = (y - p.cy).abs() - (p.h / 2.0 - r);
    let dx = dx.max(0.0);
    let dy = dy.max(0.0);
    if r == 0.0 {
        (x - p.cx).abs() <= p.w / 2.0 && (y - p.cy).abs() <= p.h / 2.0
    } else {
        dx * dx + dy * dy <= r * r
    }
}
