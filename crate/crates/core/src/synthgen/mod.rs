//! Parametric footprint sampler.
//!
//! `build_footprint` constructs a geometry deterministically from concrete
//! parameters; `sample_footprint` draws parameters from per-class ranges with
//! a seeded RNG; `sample_corpus` expands a master seed into per-sample seeds
//! so corpora are reproducible and order-independent.
//!
//! Conventions: pin 1 top-left with counter-clockwise ordinal order for
//! dual-row and quad packages, row-major for grids, left-to-right for single
//! rows. Grid designators use letter-number form (A1, A2, ...) skipping
//! I, O, Q, S, X and Z.
//!
//! All dimensions are sampled on a 0.01 mm grid and all coordinates land on a
//! 1e-6 mm grid, so diagram labels (2 decimals) and canonical JSON
//! (6 decimals) reproduce the geometry exactly.

use crate::geom::{FootprintGeometry, Origin, PackageClass, PadShape, Pin, PinTopology};
use crate::rng::{derive_seed, rng_for_seed};
use crate::scalar::round_decimals;
use crate::{Coord, PackageRegistry};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Letters used for grid row designators; I, O, Q, S, X, Z are skipped.
const GRID_ROW_LETTERS: [char; 20] = [
    'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'J', 'K', 'L', 'M', 'N', 'P', 'R', 'T', 'U', 'V',
    'W', 'Y',
];

/// Designator for grid row `index` (0-based): A, B, ..., Y, AA, AB, ...
pub fn grid_row_label(index: usize) -> String {
    let n = GRID_ROW_LETTERS.len();
    if index < n {
        GRID_ROW_LETTERS[index].to_string()
    } else {
        let hi = (index / n) - 1;
        let lo = index % n;
        format!("{}{}", GRID_ROW_LETTERS[hi], GRID_ROW_LETTERS[lo])
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("pin count {count} is not achievable for {topology} ({detail})")]
    BadPinCount { topology: &'static str, count: u32, detail: &'static str },
    #[error("pads would overlap: {constraint}")]
    Overlap { constraint: String },
    #[error("non-positive parameter: {name} = {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("unknown package class: {0}")]
    UnknownClass(String),
    #[error("corpus spec invalid: {0}")]
    BadSpec(String),
    #[error("sample {index}: {source}")]
    AtSample { index: usize, source: Box<GenError> },
    #[error("infeasible ranges for {class}: {detail}")]
    InfeasibleRanges { class: String, detail: String },
}

/// Concrete build parameters for one footprint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FootprintParams {
    /// Total pin count. Must match `grid` dimensions when present.
    pub pin_count: u32,
    /// (rows, cols) for full-grid packages.
    pub grid: Option<(u32, u32)>,
    /// Center-to-center spacing of adjacent pins in a row, mm. For two-pad
    /// packages this is the pad separation.
    pub pitch: f64,
    /// Pad dimension along the row axis, mm. Ball diameter for grids.
    pub pad_along: f64,
    /// Pad dimension across the row axis (pointing outward), mm.
    pub pad_across: f64,
    /// Center-to-center distance between opposing rows, mm. Ignored for
    /// grid, single-row, and two-pad topologies.
    pub span: f64,
}

fn q2(v: f64) -> f64 {
    round_decimals(v, 2)
}

fn q6(v: f64) -> f64 {
    round_decimals(v, 6)
}

fn check_positive(params: &FootprintParams, needs_span: bool) -> Result<(), GenError> {
    let checks: [(&'static str, f64, bool); 4] = [
        ("pitch", params.pitch, true),
        ("pad_along", params.pad_along, true),
        ("pad_across", params.pad_across, true),
        ("span", params.span, needs_span),
    ];
    for (name, value, required) in checks {
        if required && value <= 0.0 {
            return Err(GenError::NonPositive { name, value });
        }
    }
    Ok(())
}

/// Builds a footprint deterministically from concrete parameters.
/// The result is always `validate`-clean or an error.
pub fn build_footprint(
    class: &PackageClass,
    params: &FootprintParams,
) -> Result<FootprintGeometry<Coord>, GenError> {
    let pins = match class.topology {
        PinTopology::DualRow => build_dual_row(params)?,
        PinTopology::QuadPerimeter => build_quad(params)?,
        PinTopology::FullGrid => build_grid(params)?,
        PinTopology::SingleRow => build_single_row(params)?,
        PinTopology::TwoPad => build_two_pad(params)?,
    };
    Ok(FootprintGeometry::new(
        class.clone(),
        pins,
        Origin::LayoutCenter,
        format!("{}-{}", class.name.to_lowercase(), params.pin_count),
    ))
}

/// Positions of `m` pins spaced by `pitch`, centered on zero, first pin at
/// the positive end when `descending`.
fn run_positions(m: u32, pitch: f64, descending: bool) -> Vec<f64> {
    (0..m)
        .map(|k| {
            let offset = k as f64 - (m as f64 - 1.0) / 2.0;
            let v = q6(offset * pitch);
            if descending {
                -v
            } else {
                v
            }
        })
        .map(|v| if v == 0.0 { 0.0 } else { v })
        .collect()
}

fn require_no_run_overlap(params: &FootprintParams, m: u32) -> Result<(), GenError> {
    if m >= 2 && params.pad_along >= params.pitch {
        return Err(GenError::Overlap {
            constraint: format!(
                "pad_along {} must stay below pitch {}",
                params.pad_along, params.pitch
            ),
        });
    }
    Ok(())
}

fn build_dual_row(params: &FootprintParams) -> Result<Vec<Pin<Coord>>, GenError> {
    check_positive(params, true)?;
    let n = params.pin_count;
    if n < 2 || n % 2 != 0 {
        return Err(GenError::BadPinCount {
            topology: "dual-row",
            count: n,
            detail: "must be even and >= 2",
        });
    }
    let m = n / 2;
    require_no_run_overlap(params, m)?;
    if params.span <= params.pad_across {
        return Err(GenError::Overlap {
            constraint: format!(
                "row span {} must exceed pad_across {}",
                params.span, params.pad_across
            ),
        });
    }
    let x = q6(params.span / 2.0);
    let (w, h) = (params.pad_across, params.pad_along);
    let mut pins = Vec::with_capacity(n as usize);
    // Left column, top to bottom.
    for (k, y) in run_positions(m, params.pitch, true).into_iter().enumerate() {
        let ordinal = k as u32 + 1;
        pins.push(Pin::new(ordinal.to_string(), ordinal, -x, y, PadShape::Rectangle, w, h));
    }
    // Right column, bottom to top.
    for (k, y) in run_positions(m, params.pitch, false).into_iter().enumerate() {
        let ordinal = m + k as u32 + 1;
        pins.push(Pin::new(ordinal.to_string(), ordinal, x, y, PadShape::Rectangle, w, h));
    }
    Ok(pins)
}

fn build_quad(params: &FootprintParams) -> Result<Vec<Pin<Coord>>, GenError> {
    check_positive(params, true)?;
    let n = params.pin_count;
    if n < 12 || n % 4 != 0 {
        return Err(GenError::BadPinCount {
            topology: "quad-perimeter",
            count: n,
            detail: "must be a multiple of 4 and >= 12",
        });
    }
    let m = n / 4;
    require_no_run_overlap(params, m)?;
    // Corner clearance: the end pin of one side must not reach the end pin of
    // the adjacent side.
    let run = (m as f64 - 1.0) * params.pitch;
    let min_span = run + params.pad_across + params.pad_along;
    if params.span < min_span {
        return Err(GenError::Overlap {
            constraint: format!(
                "span {} below corner-clearance minimum {min_span:.2}",
                params.span
            ),
        });
    }
    let s = q6(params.span / 2.0);
    let (along, across) = (params.pad_along, params.pad_across);
    let mut pins = Vec::with_capacity(n as usize);
    let mut ordinal = 0u32;
    let mut push = |cx: f64, cy: f64, w: f64, h: f64, pins: &mut Vec<Pin<Coord>>| {
        ordinal += 1;
        pins.push(Pin::new(ordinal.to_string(), ordinal, cx, cy, PadShape::Rectangle, w, h));
    };
    // Left side, top to bottom.
    for y in run_positions(m, params.pitch, true) {
        push(-s, y, across, along, &mut pins);
    }
    // Bottom side, left to right.
    for x in run_positions(m, params.pitch, false) {
        push(x, -s, along, across, &mut pins);
    }
    // Right side, bottom to top.
    for y in run_positions(m, params.pitch, false) {
        push(s, y, across, along, &mut pins);
    }
    // Top side, right to left.
    for x in run_positions(m, params.pitch, true) {
        push(x, s, along, across, &mut pins);
    }
    Ok(pins)
}

fn build_grid(params: &FootprintParams) -> Result<Vec<Pin<Coord>>, GenError> {
    check_positive(params, false)?;
    let (rows, cols) = params.grid.ok_or(GenError::BadPinCount {
        topology: "full-grid",
        count: params.pin_count,
        detail: "grid dimensions required",
    })?;
    if rows == 0 || cols == 0 || rows * cols != params.pin_count {
        return Err(GenError::BadPinCount {
            topology: "full-grid",
            count: params.pin_count,
            detail: "pin_count must equal rows * cols",
        });
    }
    let d = params.pad_along;
    if (rows > 1 || cols > 1) && d >= params.pitch {
        return Err(GenError::Overlap {
            constraint: format!("ball diameter {d} must stay below pitch {}", params.pitch),
        });
    }
    let xs = run_positions(cols, params.pitch, false);
    let ys = run_positions(rows, params.pitch, true);
    let mut pins = Vec::with_capacity((rows * cols) as usize);
    for (i, &y) in ys.iter().enumerate() {
        let row = grid_row_label(i);
        for (j, &x) in xs.iter().enumerate() {
            let ordinal = (i * cols as usize + j) as u32 + 1;
            pins.push(Pin::new(
                format!("{row}{}", j + 1),
                ordinal,
                x,
                y,
                PadShape::Circle,
                d,
                d,
            ));
        }
    }
    Ok(pins)
}

fn build_single_row(params: &FootprintParams) -> Result<Vec<Pin<Coord>>, GenError> {
    check_positive(params, false)?;
    let n = params.pin_count;
    if n == 0 {
        return Err(GenError::BadPinCount {
            topology: "single-row",
            count: n,
            detail: "must be >= 1",
        });
    }
    require_no_run_overlap(params, n)?;
    let (w, h) = (params.pad_along, params.pad_across);
    Ok(run_positions(n, params.pitch, false)
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            let ordinal = k as u32 + 1;
            Pin::new(ordinal.to_string(), ordinal, x, 0.0, PadShape::Rectangle, w, h)
        })
        .collect())
}

fn build_two_pad(params: &FootprintParams) -> Result<Vec<Pin<Coord>>, GenError> {
    check_positive(params, false)?;
    if params.pin_count != 2 {
        return Err(GenError::BadPinCount {
            topology: "two-pad",
            count: params.pin_count,
            detail: "must be exactly 2",
        });
    }
    require_no_run_overlap(params, 2)?;
    let x = q6(params.pitch / 2.0);
    let (w, h) = (params.pad_along, params.pad_across);
    Ok(vec![
        Pin::new("1", 1, -x, 0.0, PadShape::Rectangle, w, h),
        Pin::new("2", 2, x, 0.0, PadShape::Rectangle, w, h),
    ])
}

/// Inclusive sampling ranges for one package class, all lengths in mm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamRanges {
    pub pin_count: (u32, u32),
    pub pitch: (f64, f64),
    /// Pad size along the row axis (ball diameter for grids). Capped during
    /// sampling at `MAX_ALONG_PITCH_FRACTION` of the drawn pitch.
    pub pad_along: (f64, f64),
    /// Pad size across the row axis.
    pub pad_across: (f64, f64),
    /// Extra body clearance added beyond the minimum feasible row span.
    pub clearance: (f64, f64),
}

/// Largest fraction of the pitch a pad may occupy along its row.
pub const MAX_ALONG_PITCH_FRACTION: f64 = 0.85;

impl ParamRanges {
    fn check(&self, class: &str) -> Result<(), GenError> {
        let pairs = [
            ("pitch", self.pitch),
            ("pad_along", self.pad_along),
            ("pad_across", self.pad_across),
            ("clearance", self.clearance),
        ];
        for (name, (lo, hi)) in pairs {
            if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 && name != "clearance" || lo > hi {
                return Err(GenError::InfeasibleRanges {
                    class: class.to_string(),
                    detail: format!("{name} range ({lo}, {hi}) is degenerate"),
                });
            }
        }
        if self.pin_count.0 == 0 || self.pin_count.0 > self.pin_count.1 || self.pin_count.1 > 800 {
            return Err(GenError::InfeasibleRanges {
                class: class.to_string(),
                detail: format!("pin count range {:?} outside [1, 800]", self.pin_count),
            });
        }
        Ok(())
    }
}

/// Default parameter ranges for the ten built-in classes.
pub fn default_ranges(class: &str) -> Option<ParamRanges> {
    let r = match class {
        "SOIC" => ParamRanges {
            pin_count: (8, 28),
            pitch: (0.65, 1.27),
            pad_along: (0.3, 0.65),
            pad_across: (1.2, 2.0),
            clearance: (2.4, 5.0),
        },
        "QFP" => ParamRanges {
            pin_count: (32, 208),
            pitch: (0.4, 0.8),
            pad_along: (0.2, 0.45),
            pad_across: (1.0, 1.8),
            clearance: (0.4, 1.6),
        },
        "QFN" => ParamRanges {
            pin_count: (16, 72),
            pitch: (0.4, 0.65),
            pad_along: (0.2, 0.35),
            pad_across: (0.6, 1.0),
            clearance: (0.4, 1.2),
        },
        "BGA" => ParamRanges {
            pin_count: (4, 784),
            pitch: (0.5, 1.0),
            pad_along: (0.25, 0.6),
            pad_across: (0.25, 0.6),
            clearance: (0.0, 0.0),
        },
        "DIP" => ParamRanges {
            pin_count: (4, 40),
            pitch: (1.78, 2.54),
            pad_along: (0.9, 1.6),
            pad_across: (1.4, 2.2),
            clearance: (5.0, 12.0),
        },
        "SOT" => ParamRanges {
            pin_count: (4, 8),
            pitch: (0.65, 0.95),
            pad_along: (0.3, 0.6),
            pad_across: (0.8, 1.4),
            clearance: (1.6, 2.6),
        },
        "SON" => ParamRanges {
            pin_count: (6, 16),
            pitch: (0.5, 1.0),
            pad_along: (0.22, 0.5),
            pad_across: (0.5, 0.9),
            clearance: (1.6, 3.2),
        },
        "PLCC" => ParamRanges {
            pin_count: (20, 84),
            pitch: (1.27, 1.27),
            pad_along: (0.6, 0.8),
            pad_across: (1.8, 2.4),
            clearance: (0.8, 2.0),
        },
        "CHIP2" => ParamRanges {
            pin_count: (2, 2),
            pitch: (1.0, 4.0),
            pad_along: (0.5, 2.0),
            pad_across: (0.5, 2.5),
            clearance: (0.0, 0.0),
        },
        "SIP" => ParamRanges {
            pin_count: (1, 12),
            pitch: (1.27, 2.54),
            pad_along: (0.6, 1.5),
            pad_across: (1.0, 2.5),
            clearance: (0.0, 0.0),
        },
        _ => return None,
    };
    Some(r)
}

fn sample_uniform(rng: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo >= hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

/// Draws concrete parameters for `class` from `ranges` and builds the
/// footprint. Deterministic in `(class, seed, ranges)`.
pub fn sample_footprint(
    class: &PackageClass,
    seed: u64,
    ranges: &ParamRanges,
) -> Result<FootprintGeometry<Coord>, GenError> {
    ranges.check(&class.name)?;
    let mut rng = rng_for_seed(seed);
    let params = sample_params(class, &mut rng, ranges)?;
    build_footprint(class, &params)
}

fn sample_params(
    class: &PackageClass,
    rng: &mut impl Rng,
    ranges: &ParamRanges,
) -> Result<FootprintParams, GenError> {
    let (lo, hi) = ranges.pin_count;
    let (pin_count, grid) = match class.topology {
        PinTopology::DualRow => {
            let m_lo = (lo + 1) / 2;
            let m_hi = (hi / 2).max(m_lo);
            (2 * rng.random_range(m_lo..=m_hi), None)
        }
        PinTopology::QuadPerimeter => {
            let m_lo = lo.div_ceil(4).max(3);
            let m_hi = (hi / 4).max(m_lo);
            (4 * rng.random_range(m_lo..=m_hi), None)
        }
        PinTopology::FullGrid => {
            let n = rng.random_range(lo.max(4)..=hi.max(4));
            let rows = (n as f64).sqrt().round().max(2.0) as u32;
            let cols = n.div_ceil(rows).max(2);
            (rows * cols, Some((rows, cols)))
        }
        PinTopology::SingleRow => (rng.random_range(lo..=hi), None),
        PinTopology::TwoPad => (2, None),
    };

    let pitch = q2(sample_uniform(rng, ranges.pitch)).max(0.01);
    let along_cap = q2(pitch * MAX_ALONG_PITCH_FRACTION);
    let along_hi = ranges.pad_along.1.min(along_cap);
    if along_hi < ranges.pad_along.0 && pin_count > 1 {
        return Err(GenError::InfeasibleRanges {
            class: class.name.clone(),
            detail: format!(
                "pad_along range {:?} incompatible with pitch {pitch} (cap {along_cap})",
                ranges.pad_along
            ),
        });
    }
    let pad_along = q2(sample_uniform(rng, (ranges.pad_along.0.min(along_hi), along_hi))).max(0.01);
    let pad_across = if class.topology == PinTopology::FullGrid {
        pad_along
    } else {
        q2(sample_uniform(rng, ranges.pad_across)).max(0.01)
    };

    let clearance = q2(sample_uniform(rng, ranges.clearance)).max(0.0);
    let span = match class.topology {
        PinTopology::DualRow => q2(pad_across + 0.2 + clearance),
        PinTopology::QuadPerimeter => {
            let m = pin_count as f64 / 4.0;
            q2((m - 1.0) * pitch + pad_across + pad_along + 0.2 + clearance)
        }
        _ => 0.0,
    };

    Ok(FootprintParams { pin_count, grid, pitch, pad_along, pad_across, span })
}

/// One class entry in a corpus spec: a sampling weight plus parameter ranges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub class: String,
    pub weight: f64,
    pub ranges: ParamRanges,
}

/// Corpus description consumed by the `gen` command: how many samples, which
/// classes at which weights, and the master seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub count: usize,
    pub seed: u64,
    pub classes: Vec<ClassSpec>,
}

impl CorpusSpec {
    /// Uniform weights over the ten default classes with default ranges.
    pub fn default_uniform(count: usize, seed: u64) -> Self {
        let registry = PackageRegistry::default();
        let classes = registry
            .classes()
            .iter()
            .map(|c| ClassSpec {
                class: c.name.clone(),
                weight: 1.0,
                ranges: default_ranges(&c.name).expect("default class has default ranges"),
            })
            .collect();
        Self { count, seed, classes }
    }

    pub fn check(&self, registry: &PackageRegistry) -> Result<(), GenError> {
        if self.classes.is_empty() {
            return Err(GenError::BadSpec("no classes listed".to_string()));
        }
        let mut total = 0.0;
        for spec in &self.classes {
            if registry.get(&spec.class).is_none() {
                return Err(GenError::UnknownClass(spec.class.clone()));
            }
            if !spec.weight.is_finite() || spec.weight < 0.0 {
                return Err(GenError::BadSpec(format!(
                    "class {} has invalid weight {}",
                    spec.class, spec.weight
                )));
            }
            total += spec.weight;
            spec.ranges.check(&spec.class)?;
        }
        if total <= 0.0 {
            return Err(GenError::BadSpec("class weights sum to zero".to_string()));
        }
        Ok(())
    }
}

/// Samples `spec.count` geometries. Deterministic in the seed; sample `i`
/// depends only on `(spec, i)`, so parallel generation by index produces the
/// same corpus as this sequential loop. Source ids are `fp-<i>`.
pub fn sample_corpus(
    spec: &CorpusSpec,
    registry: &PackageRegistry,
) -> Result<Vec<FootprintGeometry<Coord>>, GenError> {
    spec.check(registry)?;
    (0..spec.count)
        .map(|index| {
            sample_corpus_entry(spec, registry, index)
                .map_err(|e| GenError::AtSample { index, source: Box::new(e) })
        })
        .collect()
}

/// Samples corpus entry `index` independently of all other entries.
pub fn sample_corpus_entry(
    spec: &CorpusSpec,
    registry: &PackageRegistry,
    index: usize,
) -> Result<FootprintGeometry<Coord>, GenError> {
    let seed = derive_seed(spec.seed, index as u64);
    let mut rng = rng_for_seed(seed);
    let total: f64 = spec.classes.iter().map(|c| c.weight).sum();
    let mut pick = rng.random_range(0.0..total);
    let mut chosen = &spec.classes[spec.classes.len() - 1];
    for c in &spec.classes {
        if pick < c.weight {
            chosen = c;
            break;
        }
        pick -= c.weight;
    }
    let class = registry
        .get(&chosen.class)
        .ok_or_else(|| GenError::UnknownClass(chosen.class.clone()))?;
    let mut geometry = sample_footprint(class, rng.random(), &chosen.ranges)?;
    geometry.source_id = format!("fp-{index:05}");
    Ok(geometry)
}
