use std::collections::BTreeSet;

use proptest::prelude::*;
use qualimeter_core::treemap::{initial_sites, layout_hierarchy, layout_siblings, LayoutParams, NestedCell, Region, TreemapNode};

fn check_partition(cell: &NestedCell) {
    if cell.children.is_empty() {
        return;
    }
    let mut union = BTreeSet::new();
    for c in &cell.children {
        for s in &c.samples {
            assert!(union.insert(*s), "sample {s} in two cells under {}", cell.path);
        }
        check_partition(c);
    }
    let parent: BTreeSet<u32> = cell.samples.iter().copied().collect();
    assert_eq!(union, parent, "children of {} do not cover it", cell.path);
}

#[test]
fn two_equal_sites_split_evenly() {
    let region = Region::full(256, 256);
    let params = LayoutParams::default();
    let sites = initial_sites(&region, &[1.0, 1.0], 7).unwrap();
    let out = layout_siblings(&region, &sites, &params).unwrap();
    assert!(out.iterations <= 100);
    let n = region.len() as f64;
    for c in &out.cells {
        let share = c.len() as f64 / n;
        assert!((share - 0.5).abs() <= 0.02, "share {share}");
    }
    assert_eq!(out.cells.iter().map(Vec::len).sum::<usize>(), region.len());
}

#[test]
fn hierarchy_partitions_every_level() {
    let root = TreemapNode::group(
        "root",
        vec![
            TreemapNode::group("a", vec![TreemapNode::leaf("a1", 3.0), TreemapNode::leaf("a2", 1.0)]),
            TreemapNode::leaf("b", 2.0),
            TreemapNode::group("c", vec![TreemapNode::leaf("c1", 1.0), TreemapNode::leaf("c2", 1.0), TreemapNode::leaf("c3", 2.0)]),
        ],
    );
    let params = LayoutParams { resolution: 128, ..Default::default() };
    let cell = layout_hierarchy(&root, &Region::full(128, 128), &params).unwrap();
    check_partition(&cell);
    assert_eq!(cell.leaves().len(), 6);
}

#[test]
fn layout_is_deterministic_per_seed() {
    let root = TreemapNode::group("r", (0..6).map(|i| TreemapNode::leaf(format!("l{i}"), 1.0 + i as f64)).collect());
    let region = Region::full(96, 96);
    let p = LayoutParams { resolution: 96, seed: 42, ..Default::default() };
    let a = layout_hierarchy(&root, &region, &p).unwrap();
    let b = layout_hierarchy(&root, &region, &p).unwrap();
    assert_eq!(a, b);
}

#[test]
fn bad_weights_are_rejected() {
    let region = Region::full(64, 64);
    assert!(initial_sites(&region, &[1.0, 0.0], 1).is_err());
    assert!(initial_sites(&region, &[1.0, f64::NAN], 1).is_err());
    let p = LayoutParams { resolution: 8, ..Default::default() };
    assert!(layout_hierarchy(&TreemapNode::leaf("x", 1.0), &region, &p).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_weights_partition_the_region(w in prop::collection::vec(0.5..10.0f64, 2..7), seed in any::<u64>()) {
        let region = Region::full(64, 64);
        let params = LayoutParams { resolution: 64, max_iterations: 30, seed, ..Default::default() };
        let sites = initial_sites(&region, &w, seed).unwrap();
        let out = layout_siblings(&region, &sites, &params).unwrap();
        let mut all: Vec<u32> = out.cells.concat();
        all.sort_unstable();
        prop_assert_eq!(all, region.samples.clone());
    }
}

#[test]
fn equal_weight_cells_stay_compact() {
    use qualimeter_core::treemap::aspect_ratios;
    for (k, seed) in [1u64, 2, 3].into_iter().enumerate() {
        let region = Region::full(128, 128);
        let params = LayoutParams { resolution: 128, seed, ..Default::default() };
        let n = 4 + 2 * k;
        let sites = initial_sites(&region, &vec![1.0; n], seed).unwrap();
        let out = layout_siblings(&region, &sites, &params).unwrap();
        assert!(out.converged, "seed {seed}");
        let cells: Vec<&[u32]> = out.cells.iter().map(Vec::as_slice).collect();
        let mut r = aspect_ratios(128, &cells);
        r.sort_by(f64::total_cmp);
        assert!(r[r.len() / 2] <= 2.0, "seed {seed}: {r:?}");
    }
}
