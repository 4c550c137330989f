//! Seeded random trees and the OR-function comb.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;

use crate::domain::{Domain, Symbol, Value, ValueSet};
use crate::tree::{DecisionTree, Edge, Feature, Node, NodeId, NodeKind};

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub features: usize,
    /// Each feature draws a domain size in `2..=max_domain`.
    pub max_domain: usize,
    /// Maximum number of edges on a path.
    pub depth: usize,
    pub classes: usize,
    pub seed: u64,
    pub max_nodes: usize,
    /// Chance that a non-root node below the depth limit becomes a leaf.
    pub leaf_prob: f64,
    /// Fraction of features given an ordinal domain (split into intervals).
    pub ordinal_fraction: f64,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            features: 4,
            max_domain: 2,
            depth: 4,
            classes: 2,
            seed: 0,
            max_nodes: 64,
            leaf_prob: 0.3,
            ordinal_fraction: 0.0,
        }
    }
}

struct Pending {
    id: NodeId,
    depth: usize,
    /// Values of each feature that can still reach this node.
    allowed: Vec<ValueSet>,
}

/// Builds a valid, non-constant tree; the same settings always yield the same
/// tree.
pub fn gen_tree(spec: &GenSpec) -> DecisionTree {
    assert!(spec.features >= 1 && spec.max_domain >= 2 && spec.classes >= 2);
    assert!(spec.depth >= 1 && spec.max_nodes >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let features: Vec<Feature> = (1..=spec.features)
        .map(|i| {
            let size = rng.gen_range(2..=spec.max_domain) as Value;
            let domain = if rng.gen_bool(spec.ordinal_fraction.clamp(0.0, 1.0)) {
                Domain::Ordinal { min: 0, max: size - 1 }
            } else {
                Domain::Categorical((0..size).map(Symbol::Int).collect())
            };
            Feature {
                name: format!("x{i}"),
                domain,
            }
        })
        .collect();

    let mut kinds: Vec<Option<NodeKind>> = vec![None];
    let mut queue = VecDeque::from([Pending {
        id: 1,
        depth: 0,
        allowed: features.iter().map(|f| f.domain.full_set()).collect(),
    }]);
    kinds.push(None);
    let mut leaves = Vec::new();

    while let Some(node) = queue.pop_front() {
        let splittable: Vec<usize> = (0..spec.features)
            .filter(|&k| node.allowed[k].len() >= 2)
            .collect();
        let stop = node.depth >= spec.depth
            || splittable.is_empty()
            || kinds.len() - 1 + 2 > spec.max_nodes
            || (node.id != 1 && rng.gen_bool(spec.leaf_prob.clamp(0.0, 1.0)));
        if stop {
            let class = rng.gen_range(0..spec.classes);
            kinds[node.id] = Some(NodeKind::Terminal { class });
            leaves.push(node.id);
            continue;
        }
        let k = *splittable.choose(&mut rng).expect("non-empty");
        let domain = &features[k].domain;
        let here = &node.allowed[k];
        let room = spec.max_nodes - (kinds.len() - 1);
        let arity = rng.gen_range(2..=here.len().min(3) as usize).min(room);
        let mut parts = partition(&mut rng, here, arity, domain.is_ordinal());
        // sometimes widen the first edge with values that can no longer
        // arrive here; walks must then rely on the effective sets
        let unreachable = domain.full_set().difference(here);
        if !unreachable.is_empty() && rng.gen_bool(0.3) {
            let wide = parts[0].union(&unreachable);
            let contiguous = !domain.is_ordinal() || wide.as_interval().is_some();
            if wide != domain.full_set() && contiguous {
                parts[0] = wide;
            }
        }
        let mut edges = Vec::with_capacity(parts.len());
        for part in parts {
            let id = kinds.len();
            kinds.push(None);
            let mut allowed = node.allowed.clone();
            allowed[k] = part.intersect(here);
            edges.push(Edge::new(id, part));
            queue.push_back(Pending {
                id,
                depth: node.depth + 1,
                allowed,
            });
        }
        kinds[node.id] = Some(NodeKind::Internal {
            feature: k + 1,
            edges,
        });
    }

    // guarantee two classes
    let first = match kinds[leaves[0]] {
        Some(NodeKind::Terminal { class }) => class,
        _ => unreachable!(),
    };
    let constant = leaves
        .iter()
        .all(|&l| matches!(kinds[l], Some(NodeKind::Terminal { class }) if class == first));
    if constant {
        let l = *leaves.last().expect("root always splits");
        kinds[l] = Some(NodeKind::Terminal {
            class: (first + 1) % spec.classes,
        });
    }

    let nodes: Vec<Node> = kinds
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(id, kind)| Node {
            id,
            kind: kind.expect("every node is assigned"),
        })
        .collect();
    let classes = (0..spec.classes as i64).map(Symbol::Int).collect();
    DecisionTree::new(features, classes, nodes, 1).expect("generated trees are valid")
}

/// Splits `set` into `arity` non-empty disjoint parts: contiguous cuts for
/// ordinal features, a random grouping otherwise.
fn partition(rng: &mut ChaCha8Rng, set: &ValueSet, arity: usize, ordinal: bool) -> Vec<ValueSet> {
    let values: Vec<Value> = set.iter().collect();
    if ordinal {
        let mut cuts: Vec<usize> = (1..values.len()).collect();
        cuts.shuffle(rng);
        let mut cuts: Vec<usize> = cuts.into_iter().take(arity - 1).collect();
        cuts.sort_unstable();
        let mut parts = Vec::new();
        let mut start = 0;
        for c in cuts.into_iter().chain([values.len()]) {
            parts.push(ValueSet::from_values(values[start..c].iter().copied()));
            start = c;
        }
        return parts;
    }
    let mut shuffled = values.clone();
    shuffled.shuffle(rng);
    let mut groups: Vec<Vec<Value>> = shuffled[..arity].iter().map(|&v| vec![v]).collect();
    for &v in &shuffled[arity..] {
        let g = rng.gen_range(0..arity);
        groups[g].push(v);
    }
    groups.sort_by_key(|g| *g.iter().min().expect("non-empty"));
    groups.into_iter().map(ValueSet::from_values).collect()
}

/// Right comb computing `x_1 ∨ … ∨ x_m`: node `k` sends `x_k = 1` to a class-1
/// leaf and `x_k = 0` onward; the last `0` edge ends at the only class-0
/// leaf. Paths are numbered so that path `k` ends with `x_k = 1`.
pub fn or_tree(m: usize) -> DecisionTree {
    assert!(m >= 1);
    let features = (1..=m)
        .map(|i| Feature {
            name: format!("x{i}"),
            domain: Domain::Categorical(vec![Symbol::Int(0), Symbol::Int(1)]),
        })
        .collect();
    let mut nodes = Vec::with_capacity(2 * m + 1);
    for k in 1..=m {
        let id = 2 * k - 1;
        nodes.push(Node::internal(
            id,
            k,
            vec![
                Edge::new(id + 1, ValueSet::singleton(1)),
                Edge::new(id + 2, ValueSet::singleton(0)),
            ],
        ));
        nodes.push(Node::terminal(id + 1, 1));
    }
    nodes.push(Node::terminal(2 * m + 1, 0));
    DecisionTree::new(features, vec![Symbol::Int(0), Symbol::Int(1)], nodes, 1)
        .expect("comb is valid")
}
