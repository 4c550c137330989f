#![allow(dead_code)]

use std::path::PathBuf;

use dtxp::oracle::gen::{gen_tree, GenSpec};
use dtxp::{load_tree, DecisionTree, FeatureSet, Point};
use rand::Rng;

pub fn fixture(name: &str) -> DecisionTree {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    load_tree(std::fs::File::open(path).expect("fixture exists")).expect("fixture loads")
}

/// Random tree with at most 6 features, domains of at most 3 values and
/// depth at most 6.
pub fn small_tree(seed: u64) -> DecisionTree {
    gen_tree(&GenSpec {
        features: 2 + (seed % 5) as usize,
        max_domain: 3,
        depth: 2 + (seed % 5) as usize,
        classes: 2 + (seed % 3 == 0) as usize,
        seed,
        max_nodes: 48,
        leaf_prob: 0.25,
        ordinal_fraction: 0.3,
    })
}

pub fn random_point(tree: &DecisionTree, rng: &mut impl Rng) -> Point {
    Point::new(
        tree.feature_ids()
            .map(|i| {
                let vals: Vec<_> = tree.domain(i).values().collect();
                vals[rng.gen_range(0..vals.len())]
            })
            .collect(),
    )
}

pub fn set(v: &[usize]) -> FeatureSet {
    v.iter().copied().collect()
}

pub fn sorted(mut sets: Vec<FeatureSet>) -> Vec<FeatureSet> {
    sets.sort_by(|a, b| a.iter().cmp(b.iter()));
    sets
}
