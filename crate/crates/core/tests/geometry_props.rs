//! Property tests for the geometry core: recentering, pad IoU, layout IoU
//! symmetry and translation invariance, and agreement between the exact
//! rectangle-union sweep, the banded scanline, and brute-force oracles.

mod common;

use common::{
    point_in_pad, random_geometry, random_lattice_rects, translate, GridOracle, ORACLE_PITCH_MM,
};
use padforge_core::geom::{layout_iou, layout_union_area, pad_iou, rect_union_area};
use padforge_core::rng::rng_for_seed;
use padforge_core::{PadShape, Pin};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn recenter_idempotent_and_distance_preserving() {
    for seed in 0..200u64 {
        let g = random_geometry(seed);
        let once = g.recenter().unwrap();
        let twice = once.recenter().unwrap();
        assert_eq!(once, twice, "seed {seed}: recenter not idempotent");
        for i in 0..g.pins.len() {
            for j in i + 1..g.pins.len() {
                let before = ((g.pins[i].cx - g.pins[j].cx).powi(2)
                    + (g.pins[i].cy - g.pins[j].cy).powi(2))
                .sqrt();
                let after = ((once.pins[i].cx - once.pins[j].cx).powi(2)
                    + (once.pins[i].cy - once.pins[j].cy).powi(2))
                .sqrt();
                assert!((before - after).abs() < 1e-9, "seed {seed}: distance changed");
            }
        }
    }
}

#[test]
fn sampled_geometries_have_identity_iou() {
    for seed in 0..100u64 {
        let g = random_geometry(seed);
        let all_rect = g.pins.iter().all(|p| p.shape == PadShape::Rectangle);
        let iou = layout_iou(&g, &g);
        if all_rect {
            assert_eq!(iou, 1.0, "seed {seed}");
        } else {
            assert!(iou >= 1.0 - 1e-3, "seed {seed}: {iou}");
        }
    }
}

#[test]
fn layout_iou_symmetry_and_translation_invariance() {
    for seed in 0..60u64 {
        let a = random_geometry(seed);
        let b = random_geometry(seed + 10_000);
        let ab = layout_iou(&a, &b);
        let ba = layout_iou(&b, &a);
        assert!((ab - ba).abs() <= 1e-9, "seed {seed}: {ab} vs {ba}");

        let at = translate(&a, 3.25, -1.75);
        let bt = translate(&b, 3.25, -1.75);
        let translated = layout_iou(&at, &bt);
        let tol = if a
            .pins
            .iter()
            .chain(b.pins.iter())
            .all(|p| p.shape == PadShape::Rectangle)
        {
            1e-9
        } else {
            1e-3
        };
        assert!((translated - ab).abs() <= tol, "seed {seed}: {translated} vs {ab}");
    }
}

#[test]
fn union_area_of_disjoint_pads_is_additive() {
    for seed in 0..100u64 {
        let g = random_geometry(seed);
        if g.pins.iter().any(|p| p.shape != PadShape::Rectangle) {
            continue;
        }
        let sum: f64 = g.pins.iter().map(|p| p.area()).sum();
        let union = layout_union_area(&g.pins);
        assert!(
            (sum - union).abs() <= 1e-9 * sum.max(1.0),
            "seed {seed}: {sum} vs {union}"
        );
    }
}

proptest! {
    #[test]
    fn pad_iou_stays_in_unit_interval(seed in any::<u64>()) {
        let mut rng = rng_for_seed(seed);
        let mut random_pin = |ordinal: u32| {
            let shape = match rng.random_range(0..3) {
                0 => PadShape::Rectangle,
                1 => PadShape::Circle,
                _ => PadShape::Stadium,
            };
            let w = rng.random_range(0.1..4.0);
            let h = if shape == PadShape::Circle { w } else { rng.random_range(0.1..4.0) };
            Pin::new(ordinal.to_string(), ordinal, rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), shape, w, h)
        };
        let a = random_pin(1);
        let b = random_pin(2);
        let iou = pad_iou(&a, &b);
        prop_assert!((0.0..=1.0).contains(&iou));
    }

    #[test]
    fn rect_pad_iou_is_one_iff_identical(seed in any::<u64>()) {
        let mut rng = rng_for_seed(seed);
        let a = Pin::new("1", 1, rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), PadShape::Rectangle, rng.random_range(0.1..4.0), rng.random_range(0.1..4.0));
        prop_assert_eq!(pad_iou(&a, &a), 1.0);
        // Any perturbation must push the IoU strictly below 1.
        let mut b = a.clone();
        b.cx += 0.05;
        prop_assert!(pad_iou(&a, &b) < 1.0);
        let mut c = a.clone();
        c.w += 0.1;
        prop_assert!(pad_iou(&a, &c) < 1.0);
    }
}

#[test]
fn exact_sweep_matches_grid_oracle_spot_checks() {
    let mut oracle = GridOracle::new();
    let mut rng = rng_for_seed(7);
    // The spec's three-random-rectangles example, run 50 times.
    for round in 0..50 {
        let rects = random_lattice_rects(&mut rng, 3);
        let mm: Vec<padforge_core::Rect> = rects.iter().map(|r| r.to_mm()).collect();
        let exact = rect_union_area(&mm);
        let brute = oracle.union_area(&rects);
        assert!(
            (exact - brute).abs() < 1e-6,
            "round {round}: sweep {exact} vs oracle {brute}"
        );
    }
}

#[test]
fn exact_and_scanline_paths_agree_on_random_rect_layouts() {
    // Off-lattice rectangles exercise the banded scanline against the sweep.
    let mut rng = rng_for_seed(11);
    for round in 0..300 {
        let n = rng.random_range(1..=60usize);
        let pins: Vec<Pin> = (0..n)
            .map(|i| {
                Pin::new(
                    (i + 1).to_string(),
                    i as u32 + 1,
                    rng.random_range(-20.0..20.0),
                    rng.random_range(-20.0..20.0),
                    PadShape::Rectangle,
                    rng.random_range(0.3..4.0),
                    rng.random_range(0.3..4.0),
                )
            })
            .collect();
        let refs: Vec<&Pin> = pins.iter().collect();
        let exact = layout_union_area(&pins);
        let raster = padforge_core::geom::scanline_union_area(&refs, 0.01);
        assert!(
            (exact - raster).abs() / exact <= 1e-3,
            "round {round}: exact {exact} vs raster {raster}"
        );
    }
}

#[test]
fn circle_pad_iou_matches_pixel_counting_oracle() {
    // Two unit circles offset by 0.5 mm, pixel oracle at 1e-3 mm resolution.
    let a = Pin::new("1", 1, 0.0, 0.0, PadShape::Circle, 1.0, 1.0);
    let b = Pin::new("2", 2, 0.0, 0.5, PadShape::Circle, 1.0, 1.0);
    let step = 1e-3;
    let mut inter_cells = 0u64;
    let mut union_cells = 0u64;
    let (x0, x1, y0, y1) = (-0.5, 0.5, -0.5, 1.0);
    let nx = ((x1 - x0) / step) as usize;
    let ny = ((y1 - y0) / step) as usize;
    for iy in 0..ny {
        let y = y0 + (iy as f64 + 0.5) * step;
        for ix in 0..nx {
            let x = x0 + (ix as f64 + 0.5) * step;
            let in_a = point_in_pad(&a, x, y);
            let in_b = point_in_pad(&b, x, y);
            inter_cells += (in_a && in_b) as u64;
            union_cells += (in_a || in_b) as u64;
        }
    }
    let expected = inter_cells as f64 / union_cells as f64;
    let got = pad_iou(&a, &b);
    assert!(
        (got - expected).abs() / expected < 1e-3,
        "pad_iou {got} vs pixel oracle {expected}"
    );
}

#[test]
fn validate_clean_on_random_geometries() {
    for seed in 0..200u64 {
        let g = random_geometry(seed);
        let violations = g.validate();
        assert!(violations.is_empty(), "seed {seed}: {violations:?}");
    }
}
