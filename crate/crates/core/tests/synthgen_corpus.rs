//! Corpus-level generator properties: validity, determinism, class coverage,
//! pin-count bounds, and mirror symmetry.

use padforge_core::geom::detect_layout;
use padforge_core::interchange::write_geometry_json;
use padforge_core::synthgen::{sample_corpus, sample_corpus_entry, CorpusSpec};
use padforge_core::{FootprintGeometry, PackageRegistry, PinTopology};
use std::collections::BTreeMap;

fn class_counts(corpus: &[FootprintGeometry]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for g in corpus {
        *counts.entry(g.package_class.name.clone()).or_insert(0) += 1;
    }
    counts
}

#[test]
fn hundred_samples_cover_every_class() {
    let spec = CorpusSpec::default_uniform(100, 42);
    let registry = PackageRegistry::default();
    let corpus = sample_corpus(&spec, &registry).unwrap();
    assert_eq!(corpus.len(), 100);
    let counts = class_counts(&corpus);
    assert_eq!(counts.len(), 10, "{counts:?}");
    for (class, count) in &counts {
        assert!(*count >= 3, "class {class} appeared only {count} times: {counts:?}");
    }
}

#[test]
fn corpus_is_byte_identical_across_runs() {
    let spec = CorpusSpec::default_uniform(50, 7);
    let registry = PackageRegistry::default();
    let a = sample_corpus(&spec, &registry).unwrap();
    let b = sample_corpus(&spec, &registry).unwrap();
    for (x, y) in a.iter().zip(b.iter()) {
        assert_eq!(write_geometry_json(x), write_geometry_json(y));
    }
}

#[test]
fn per_index_sampling_matches_sequential() {
    let spec = CorpusSpec::default_uniform(20, 123);
    let registry = PackageRegistry::default();
    let sequential = sample_corpus(&spec, &registry).unwrap();
    // Out-of-order generation must produce the same samples.
    for index in [19usize, 3, 11, 0] {
        let g = sample_corpus_entry(&spec, &registry, index).unwrap();
        assert_eq!(g, sequential[index]);
    }
}

#[test]
fn class_frequencies_converge_to_uniform_weights() {
    let spec = CorpusSpec::default_uniform(2000, 11);
    let registry = PackageRegistry::default();
    let corpus = sample_corpus(&spec, &registry).unwrap();
    let counts = class_counts(&corpus);
    let expected = 200.0;
    let chi2: f64 = counts
        .values()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    // 99.9% quantile of chi-square with 9 degrees of freedom.
    assert!(chi2 < 27.88, "chi-square {chi2} over counts {counts:?}");
}

#[test]
fn every_sample_is_valid_with_bounded_pin_count() {
    let spec = CorpusSpec::default_uniform(500, 3);
    let registry = PackageRegistry::default();
    let corpus = sample_corpus(&spec, &registry).unwrap();
    for g in &corpus {
        let violations = g.validate();
        assert!(violations.is_empty(), "{}: {violations:?}", g.source_id);
        assert!((1..=800).contains(&g.pin_count()), "{}", g.source_id);
    }
}

#[test]
fn dual_and_quad_layouts_are_mirror_symmetric() {
    let spec = CorpusSpec::default_uniform(300, 21);
    let registry = PackageRegistry::default();
    let corpus = sample_corpus(&spec, &registry).unwrap();
    let mut checked = 0;
    for g in &corpus {
        let topology = g.package_class.topology;
        if !matches!(topology, PinTopology::DualRow | PinTopology::QuadPerimeter) {
            continue;
        }
        checked += 1;
        for pin in &g.pins {
            let mirrored_y_axis = g.pins.iter().any(|q| {
                (q.cx + pin.cx).abs() < 1e-9
                    && (q.cy - pin.cy).abs() < 1e-9
                    && (q.w - pin.w).abs() < 1e-9
                    && (q.h - pin.h).abs() < 1e-9
            });
            assert!(mirrored_y_axis, "{}: pin {} has no y-axis mirror", g.source_id, pin.ordinal);
            if topology == PinTopology::QuadPerimeter {
                let mirrored_x_axis = g.pins.iter().any(|q| {
                    (q.cx - pin.cx).abs() < 1e-9
                        && (q.cy + pin.cy).abs() < 1e-9
                        && (q.w - pin.w).abs() < 1e-9
                        && (q.h - pin.h).abs() < 1e-9
                });
                assert!(mirrored_x_axis, "{}: pin {} has no x-axis mirror", g.source_id, pin.ordinal);
            }
        }
    }
    assert!(checked > 50, "too few dual/quad samples: {checked}");
}

#[test]
fn detected_topology_matches_declared_class() {
    let spec = CorpusSpec::default_uniform(300, 5);
    let registry = PackageRegistry::default();
    let corpus = sample_corpus(&spec, &registry).unwrap();
    for g in &corpus {
        let detected = detect_layout(&g.pins).topology();
        let declared = g.package_class.topology;
        // Degenerate sizes legitimately collapse: a 2-pin SIP looks like a
        // two-pad part; a 1-pin anything is a single row.
        let compatible = detected == declared
            || (declared == PinTopology::SingleRow
                && matches!(detected, PinTopology::TwoPad | PinTopology::SingleRow));
        assert!(compatible, "{}: declared {declared:?}, detected {detected:?}", g.source_id);
    }
}
