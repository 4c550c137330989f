//! Explicit path analysis: one explanation as a subset-minimal hitting set of
//! the conflict sets of all opposing paths.

use crate::error::Result;
use crate::explanation::{Explanation, XpKind};
use crate::target::{Mode, Target};
use crate::tree::{DecisionTree, FeatureId, FeatureSet, Path, Point};

/// Order in which features are tentatively dropped from the candidate set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DeletionOrder {
    #[default]
    Ascending,
    Descending,
}

impl DeletionOrder {
    pub fn arrange(self, set: &FeatureSet) -> Vec<FeatureId> {
        match self {
            DeletionOrder::Ascending => set.iter().copied().collect(),
            DeletionOrder::Descending => set.iter().rev().copied().collect(),
        }
    }
}

pub fn hits_all(candidate: &FeatureSet, sets: &[FeatureSet]) -> bool {
    sets.iter().all(|s| !s.is_disjoint(candidate))
}

/// Deletion-based subset-minimal hitting set of `sets` inside `candidates`.
/// `candidates` must already hit every set.
pub fn minimal_hitting_set(
    sets: &[FeatureSet],
    candidates: &FeatureSet,
    order: DeletionOrder,
) -> FeatureSet {
    let mut kept = candidates.clone();
    for i in order.arrange(candidates) {
        kept.remove(&i);
        // only sets containing i can lose their hit
        let still = sets
            .iter()
            .filter(|s| s.contains(&i))
            .all(|s| !s.is_disjoint(&kept));
        if !still {
            kept.insert(i);
        }
    }
    kept
}

pub fn explain_mhs(target: &Target, order: DeletionOrder) -> Explanation {
    let sets = target.conflicts();
    let xp = minimal_hitting_set(&sets, target.universe(), order);
    Explanation::new(target, XpKind::abductive(target), &xp)
}

pub fn apxp_mhs(tree: &DecisionTree, path: &Path) -> Explanation {
    explain_mhs(&Target::path(tree, path), DeletionOrder::Ascending)
}

pub fn axp_mhs(
    tree: &DecisionTree,
    v: &Point,
    mode: Mode,
    order: DeletionOrder,
) -> Result<Explanation> {
    Ok(explain_mhs(&Target::instance(tree, v, mode)?, order))
}
