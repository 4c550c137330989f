//! Horn encodings of "fixing these features keeps every opposing terminal
//! unreachable", and decoding of MCS/MaxSAT solutions into explanations.
//!
//! Variable `b_r` holds when node `r` is reachable under the current choice
//! of universal features; `u_i` holds when feature `i` is universal. Clause
//! groups are emitted in the order H1 (root reachable), H2 (target-class
//! terminals), H3 (other terminals unreachable), H4 (edges consistent with the
//! target), H5 (inconsistent edges, passable only if their feature is
//! universal), H6 (features outside the candidate universe are universal).

use std::collections::BTreeMap;

use super::{horn_maxsat, horn_mcs, HornClause, HornProblem, Var};
use crate::domain::ValueSet;
use crate::error::{Error, Result};
use crate::explanation::{Explanation, XpKind};
use crate::target::{Anchor, Mode, Target};
use crate::tree::{ClassId, DecisionTree, FeatureId, FeatureSet, NodeId, NodeKind, Path, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingMap {
    /// `u_var[i]` for feature `i`; index 0 unused.
    pub u_var: Vec<Var>,
    /// `b_var[r]` for node `r`; index 0 unused.
    pub b_var: Vec<Var>,
    /// Feature behind each soft clause, in soft-clause order.
    pub soft_features: Vec<FeatureId>,
    pub kind: XpKind,
    pub anchor: Anchor,
    fixed: BTreeMap<FeatureId, ValueSet>,
}

pub fn encode(target: &Target) -> (HornProblem, EncodingMap) {
    let tree = target.tree();
    let n = tree.num_nodes();
    let m = tree.num_features();
    let b_var: Vec<Var> = (0..=n).collect();
    let u_var: Vec<Var> = (0..=m).map(|i| if i == 0 { 0 } else { n + i }).collect();

    let mut p = HornProblem::new(n + m);
    for r in 1..=n {
        p.var_names[b_var[r]] = format!("b_{r}");
    }
    for i in 1..=m {
        p.var_names[u_var[i]] = format!("u_{i}");
    }

    let c = target.class();
    p.add_hard(HornClause::fact(b_var[tree.root()]), "H1");
    let terminals: Vec<(NodeId, ClassId)> = tree
        .nodes()
        .iter()
        .filter_map(|node| match node.kind {
            NodeKind::Terminal { class } => Some((node.id, class)),
            _ => None,
        })
        .collect();
    for &(r, _) in terminals.iter().filter(|(_, k)| *k == c) {
        p.add_hard(HornClause::fact(b_var[r]), "H2");
    }
    for &(r, _) in terminals.iter().filter(|(_, k)| *k != c) {
        p.add_hard(HornClause::goal(vec![b_var[r]]), "H3");
    }

    let mut inconsistent = Vec::new();
    for node in tree.nodes() {
        if let NodeKind::Internal { feature, edges } = &node.kind {
            for e in edges {
                let open = target
                    .fixed(*feature)
                    .is_none_or(|s| e.effective().intersects(s));
                if open {
                    p.add_hard(HornClause::implies(vec![b_var[node.id]], b_var[e.to]), "H4");
                } else {
                    inconsistent.push((node.id, *feature, e.to));
                }
            }
        }
    }
    for (r, i, s) in inconsistent {
        p.add_hard(HornClause::implies(vec![b_var[r], u_var[i]], b_var[s]), "H5");
    }
    for i in tree.feature_ids().filter(|i| !target.universe().contains(i)) {
        p.add_hard(HornClause::fact(u_var[i]), "H6");
    }

    let soft_features: Vec<FeatureId> = target.universe().iter().copied().collect();
    p.soft = soft_features.iter().map(|&i| u_var[i]).collect();
    let map = EncodingMap {
        u_var,
        b_var,
        soft_features,
        kind: XpKind::abductive(target),
        anchor: target.anchor().clone(),
        fixed: target.fixed_map().clone(),
    };
    (p, map)
}

/// Instance encoding over all features. Fails unless `v` is predicted as `c`.
pub fn encode_unrestricted(
    tree: &DecisionTree,
    v: &Point,
    c: ClassId,
) -> Result<(HornProblem, EncodingMap)> {
    let target = Target::instance(tree, v, Mode::PathUnrestricted)?;
    if target.class() != c {
        return Err(Error::Invalid(format!(
            "instance is predicted as class {}, not {}",
            tree.class_label(target.class()),
            tree.class_label(c)
        )));
    }
    Ok(encode(&target))
}

pub fn encode_path(tree: &DecisionTree, path: &Path) -> (HornProblem, EncodingMap) {
    encode(&Target::path(tree, path))
}

/// Explanation made of the features whose soft clause `(u_i)` is falsified.
pub fn decode(falsified: &[usize], map: &EncodingMap) -> Result<Explanation> {
    let features: FeatureSet = falsified.iter().map(|&k| map.soft_features[k]).collect();
    if features.is_empty() {
        return Err(Error::EmptyExplanation);
    }
    Ok(Explanation {
        kind: map.kind,
        features: features.iter().copied().collect(),
        literals: features
            .iter()
            .map(|&i| crate::tree::Literal {
                feature: i,
                values: map.fixed[&i].clone(),
            })
            .collect(),
        anchor: map.anchor.clone(),
    })
}

/// Subset-minimal explanation from the MCS of the target's encoding.
pub fn explain_horn(target: &Target) -> Result<Explanation> {
    let (p, map) = encode(target);
    let r = horn_mcs(&p)?;
    decode(&r.mcs, &map)
}

/// Cardinality-minimal explanation from the MaxSAT optimum.
pub fn smallest_horn(target: &Target) -> Result<Explanation> {
    let (p, map) = encode(target);
    let r = horn_maxsat(&p)?;
    decode(&r.falsified, &map)
}
