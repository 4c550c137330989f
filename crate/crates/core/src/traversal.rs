//! Deletion-based explanations by tree traversal, without materializing the
//! conflict sets of opposing paths.

use std::collections::BTreeMap;

use crate::domain::ValueSet;
use crate::error::Result;
use crate::explanation::{Explanation, XpKind};
use crate::hitting::DeletionOrder;
use crate::target::{Mode, Target};
use crate::tree::{ClassId, DecisionTree, FeatureId, FeatureSet, NodeKind};

/// Features currently declared universal (free to take any value).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UniversalSet {
    pub universal: FeatureSet,
}

impl UniversalSet {
    pub fn new(universal: FeatureSet) -> Self {
        UniversalSet { universal }
    }

    pub fn contains(&self, i: FeatureId) -> bool {
        self.universal.contains(&i)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraversalStats {
    pub traversals: usize,
    pub node_visits: usize,
}

/// Dense per-feature view used by the walk.
struct Walker<'t> {
    tree: &'t DecisionTree,
    free: Vec<bool>,
    fixed: Vec<Option<&'t ValueSet>>,
    stack: Vec<usize>,
}

impl<'t> Walker<'t> {
    fn new(tree: &'t DecisionTree, fixed: &'t BTreeMap<FeatureId, ValueSet>) -> Self {
        let mut slots = vec![None; tree.num_features() + 1];
        for (&i, s) in fixed {
            slots[i] = Some(s);
        }
        Walker {
            tree,
            free: vec![false; tree.num_features() + 1],
            fixed: slots,
            stack: Vec::new(),
        }
    }

    /// Depth-first search for a terminal of a class other than `c`.
    fn reaches(&mut self, c: ClassId, visits: &mut usize) -> bool {
        self.stack.clear();
        self.stack.push(self.tree.root());
        while let Some(at) = self.stack.pop() {
            *visits += 1;
            match &self.tree.node(at).kind {
                NodeKind::Terminal { class } => {
                    if *class != c {
                        return true;
                    }
                }
                NodeKind::Internal { feature, edges } => {
                    let open = match self.fixed[*feature] {
                        Some(_) if self.free[*feature] => None,
                        other => other,
                    };
                    for e in edges.iter().rev() {
                        if open.is_none_or(|s| e.effective().intersects(s)) {
                            self.stack.push(e.to);
                        }
                    }
                }
            }
        }
        false
    }
}

/// True iff some walk from the root ends at a class other than `c`, where a
/// non-universal feature with a fixed value set only admits edges meeting it.
pub fn reaches_other_class(
    tree: &DecisionTree,
    universal: &UniversalSet,
    fixed: &BTreeMap<FeatureId, ValueSet>,
    c: ClassId,
) -> bool {
    let mut w = Walker::new(tree, fixed);
    for &i in &universal.universal {
        w.free[i] = true;
    }
    w.reaches(c, &mut 0)
}

/// Shrinks `seed`, a weak explanation of `target`, to a subset-minimal one.
/// Every feature outside `seed` stays universal.
pub fn shrink(
    target: &Target,
    seed: &FeatureSet,
    order: DeletionOrder,
    stats: &mut TraversalStats,
) -> FeatureSet {
    let tree = target.tree();
    let mut w = Walker::new(tree, target.fixed_map());
    for i in tree.feature_ids() {
        w.free[i] = !seed.contains(&i);
    }
    let mut kept = seed.clone();
    for i in order.arrange(seed) {
        w.free[i] = true;
        stats.traversals += 1;
        if w.reaches(target.class(), &mut stats.node_visits) {
            w.free[i] = false;
        } else {
            kept.remove(&i);
        }
    }
    kept
}

/// Shrinks `free`, a weak contrastive explanation of `target` (freeing it
/// exposes another class), to a subset-minimal one.
pub fn shrink_contrastive(
    target: &Target,
    free: &FeatureSet,
    order: DeletionOrder,
    stats: &mut TraversalStats,
) -> FeatureSet {
    let tree = target.tree();
    let mut w = Walker::new(tree, target.fixed_map());
    for i in tree.feature_ids() {
        w.free[i] = free.contains(&i) || !target.universe().contains(&i);
    }
    let mut kept = free.clone();
    for i in order.arrange(free) {
        w.free[i] = false;
        stats.traversals += 1;
        if w.reaches(target.class(), &mut stats.node_visits) {
            kept.remove(&i);
        } else {
            w.free[i] = true;
        }
    }
    kept
}

/// True iff fixing only the features of `set` keeps every opposing path
/// blocked.
pub fn is_weak(target: &Target, set: &FeatureSet) -> bool {
    let tree = target.tree();
    let mut w = Walker::new(tree, target.fixed_map());
    for i in tree.feature_ids() {
        w.free[i] = !set.contains(&i);
    }
    !w.reaches(target.class(), &mut 0)
}

pub fn explain_traversal_with_stats(
    target: &Target,
    order: DeletionOrder,
) -> (Explanation, TraversalStats) {
    let mut stats = TraversalStats::default();
    let xp = shrink(target, target.universe(), order, &mut stats);
    (Explanation::new(target, XpKind::abductive(target), &xp), stats)
}

pub fn explain_traversal(target: &Target, order: DeletionOrder) -> Explanation {
    explain_traversal_with_stats(target, order).0
}

pub fn apxp_traversal(tree: &DecisionTree, path: &crate::tree::Path) -> Explanation {
    explain_traversal(&Target::path(tree, path), DeletionOrder::Ascending)
}

pub fn axp_traversal(
    tree: &DecisionTree,
    v: &crate::tree::Point,
    mode: Mode,
) -> Result<Explanation> {
    Ok(explain_traversal(
        &Target::instance(tree, v, mode)?,
        DeletionOrder::Ascending,
    ))
}
