//! Checks that a tree partitions its feature space: no logically
//! inconsistent path, and every point consistent with exactly one path.

use crate::domain::{Value, ValueSet};
use crate::tree::{DecisionTree, FeatureId, NodeId, NodeKind, PathId, Point};

pub const DEFAULT_SPACE_LIMIT: u128 = 1 << 20;

/// Witness lists are truncated to this many entries.
const MAX_WITNESSES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    /// True when the whole feature space was enumerated; false when the
    /// structural partition check was used instead.
    pub exhaustive: bool,
    pub inconsistent_paths: Vec<PathId>,
    pub dead_end_witnesses: Vec<Point>,
    pub overlap_witnesses: Vec<(Point, PathId, PathId)>,
    /// Internal nodes whose children do not cover the values that can reach
    /// them (structural mode only).
    pub uncovered_nodes: Vec<NodeId>,
}

pub fn validate(tree: &DecisionTree) -> ValidationReport {
    validate_with_limit(tree, DEFAULT_SPACE_LIMIT)
}

pub fn validate_with_limit(tree: &DecisionTree, limit: u128) -> ValidationReport {
    let inconsistent_paths: Vec<PathId> = tree
        .paths()
        .iter()
        .filter(|p| p.rho_map().values().any(ValueSet::is_empty))
        .map(|p| p.id)
        .collect();

    let exhaustive = tree.feature_space_size().is_some_and(|n| n <= limit);
    let mut report = ValidationReport {
        ok: false,
        exhaustive,
        inconsistent_paths,
        dead_end_witnesses: Vec::new(),
        overlap_witnesses: Vec::new(),
        uncovered_nodes: Vec::new(),
    };
    if exhaustive {
        sweep(tree, &mut report);
    } else {
        report.uncovered_nodes = structural_gaps(tree);
    }
    report.ok = report.inconsistent_paths.is_empty()
        && report.dead_end_witnesses.is_empty()
        && report.overlap_witnesses.is_empty()
        && report.uncovered_nodes.is_empty();
    report
}

fn sweep(tree: &DecisionTree, report: &mut ValidationReport) {
    let m = tree.num_features();
    let lows: Vec<Value> = tree.features().iter().map(|f| f.domain.values().next().unwrap()).collect();
    let highs: Vec<Value> = tree.features().iter().map(|f| f.domain.values().last().unwrap()).collect();
    let mut point = Point::new(lows.clone());
    let mut leaves = Vec::new();
    loop {
        leaves.clear();
        consistent_leaves(tree, tree.root(), &point, &mut leaves);
        match leaves.as_slice() {
            [] if report.dead_end_witnesses.len() < MAX_WITNESSES => {
                report.dead_end_witnesses.push(point.clone())
            }
            [a, b, ..] if report.overlap_witnesses.len() < MAX_WITNESSES => {
                let pa = tree.path_by_leaf(*a).map(|p| p.id).unwrap_or(0);
                let pb = tree.path_by_leaf(*b).map(|p| p.id).unwrap_or(0);
                report.overlap_witnesses.push((point.clone(), pa, pb));
            }
            _ => {}
        }
        // odometer increment
        let mut k = m;
        loop {
            if k == 0 {
                return;
            }
            let i: FeatureId = k;
            if point.get(i) < highs[k - 1] {
                point.set(i, point.get(i) + 1);
                break;
            }
            point.set(i, lows[k - 1]);
            k -= 1;
        }
    }
}

/// Leaves of every path consistent with `point` below `at`.
fn consistent_leaves(tree: &DecisionTree, at: NodeId, point: &Point, out: &mut Vec<NodeId>) {
    match &tree.node(at).kind {
        NodeKind::Terminal { .. } => out.push(at),
        NodeKind::Internal { feature, edges } => {
            let v = point.get(*feature);
            for e in edges.iter().filter(|e| e.values.contains(v)) {
                consistent_leaves(tree, e.to, point, out);
            }
        }
    }
}

/// Nodes whose child value sets fail to cover the parent feature's domain
/// restricted by the ancestor literals.
fn structural_gaps(tree: &DecisionTree) -> Vec<NodeId> {
    let mut gaps = Vec::new();
    for node in tree.nodes() {
        if let NodeKind::Internal { feature, edges } = &node.kind {
            let reachable = incoming_effective(tree, node.id, *feature)
                .unwrap_or_else(|| tree.domain(*feature).full_set());
            let covered = edges
                .iter()
                .fold(ValueSet::empty(), |acc, e| acc.union(&e.values));
            if !reachable.is_subset(&covered) {
                gaps.push(node.id);
            }
        }
    }
    gaps
}

/// Values of `feature` consistent with the path from the root to `node`.
fn incoming_effective(tree: &DecisionTree, node: NodeId, feature: FeatureId) -> Option<ValueSet> {
    let mut child = node;
    while let Some(parent) = tree.parent(child) {
        if let NodeKind::Internal { feature: f, edges } = &tree.node(parent).kind {
            if *f == feature {
                // the nearest ancestor edge already folds in the ones above it
                return edges.iter().find(|e| e.to == child).map(|e| e.effective().clone());
            }
        }
        child = parent;
    }
    None
}
