use std::fmt;

use serde_json::{json, Value as Json};

use crate::format::{point_json, value_set_json};
use crate::target::{Anchor, Target};
use crate::tree::{DecisionTree, FeatureId, FeatureSet, Literal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum XpKind {
    AXp,
    WeakAXp,
    APXp,
    WeakAPXp,
    CXp,
    CPXp,
}

impl XpKind {
    pub fn name(self) -> &'static str {
        match self {
            XpKind::AXp => "AXp",
            XpKind::WeakAXp => "WeakAXp",
            XpKind::APXp => "APXp",
            XpKind::WeakAPXp => "WeakAPXp",
            XpKind::CXp => "CXp",
            XpKind::CPXp => "CPXp",
        }
    }

    pub fn is_abductive(self) -> bool {
        matches!(self, XpKind::AXp | XpKind::WeakAXp | XpKind::APXp | XpKind::WeakAPXp)
    }

    /// Abductive kind for a target: APXp for paths, AXp for instances.
    pub fn abductive(target: &Target) -> Self {
        if target.is_path() {
            XpKind::APXp
        } else {
            XpKind::AXp
        }
    }

    pub fn contrastive(target: &Target) -> Self {
        if target.is_path() {
            XpKind::CPXp
        } else {
            XpKind::CXp
        }
    }
}

impl fmt::Display for XpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Explanation {
    pub kind: XpKind,
    /// Sorted ascending.
    pub features: Vec<FeatureId>,
    pub literals: Vec<Literal>,
    pub anchor: Anchor,
}

impl Explanation {
    /// Builds an explanation carrying the target's fixed value sets.
    pub fn new(target: &Target, kind: XpKind, features: &FeatureSet) -> Self {
        let literals = features
            .iter()
            .map(|&i| Literal {
                feature: i,
                values: target
                    .fixed(i)
                    .cloned()
                    .unwrap_or_else(|| target.tree().domain(i).full_set()),
            })
            .collect();
        Explanation {
            kind,
            features: features.iter().copied().collect(),
            literals,
            anchor: target.anchor().clone(),
        }
    }

    pub fn feature_set(&self) -> FeatureSet {
        self.features.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn to_json(&self, tree: &DecisionTree) -> Json {
        let anchor = match &self.anchor {
            Anchor::Path(id) => json!({ "path": id }),
            Anchor::Instance(p) => json!({ "instance": point_json(tree, p) }),
        };
        json!({
            "kind": self.kind.name(),
            "features": self.features,
            "literals": self
                .literals
                .iter()
                .map(|l| json!({
                    "feature": l.feature,
                    "values": value_set_json(tree.domain(l.feature), &l.values),
                }))
                .collect::<Vec<_>>(),
            "anchor": anchor,
        })
    }

    /// `x1 in {0}, x3 in {1}` style rendering.
    pub fn describe(&self, tree: &DecisionTree) -> String {
        self.literals
            .iter()
            .map(|l| {
                let d = tree.domain(l.feature);
                format!("{} in {}", tree.feature(l.feature).name, l.values.display(d))
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Sort order used for explanation lists: smallest feature first, then
/// lexicographic.
pub fn sort_sets(sets: &mut [FeatureSet]) {
    sets.sort_by(|a, b| a.iter().cmp(b.iter()));
}

/// Keeps only the subset-minimal sets, deduplicated.
pub fn minimal_sets(mut sets: Vec<FeatureSet>) -> Vec<FeatureSet> {
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    sets.dedup();
    let mut kept: Vec<FeatureSet> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    sort_sets(&mut kept);
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::fig2;

    #[test]
    fn json_shape() {
        let t = fig2();
        let tg = Target::path(&t, t.path_by_leaf(15).unwrap());
        let x = Explanation::new(&tg, XpKind::APXp, &FeatureSet::from([3, 5]));
        assert_eq!(
            x.to_json(&t),
            json!({
                "kind": "APXp",
                "features": [3, 5],
                "literals": [{"feature": 3, "values": [1]}, {"feature": 5, "values": [1]}],
                "anchor": {"path": tg.anchor_path().id},
            })
        );
        assert_eq!(x.describe(&t), "x3 in {1}, x5 in {1}");
    }

    #[test]
    fn minimal_filtering() {
        let s = |v: &[usize]| v.iter().copied().collect::<FeatureSet>();
        let out = minimal_sets(vec![s(&[5]), s(&[4]), s(&[2, 5]), s(&[2, 4]), s(&[1]), s(&[4])]);
        assert_eq!(out, vec![s(&[1]), s(&[4]), s(&[5])]);
    }
}
