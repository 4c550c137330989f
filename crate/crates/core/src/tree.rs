//! Decision-tree model: nodes, edges, paths and the per-path consistency
//! functions (`rho`, `chi_i`, `chi_p`) every explainer builds on.
//!
//! Feature ids and node ids are 1-based. Paths are numbered 1.. in
//! depth-first order, following edges in the order they were declared.

use std::collections::{BTreeMap, BTreeSet};

use crate::domain::{Domain, Symbol, Value, ValueSet};
use crate::error::{Error, Result, StructureError};

pub type FeatureId = usize;
pub type NodeId = usize;
pub type ClassId = usize;
pub type PathId = usize;
pub type FeatureSet = BTreeSet<FeatureId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feature {
    pub name: String,
    pub domain: Domain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub to: NodeId,
    pub values: ValueSet,
    effective: ValueSet,
}

impl Edge {
    pub fn new(to: NodeId, values: ValueSet) -> Self {
        Edge {
            effective: values.clone(),
            to,
            values,
        }
    }

    /// The edge's values intersected with every ancestor literal on the same
    /// feature: exactly the values a walk through this edge can carry.
    pub fn effective(&self) -> &ValueSet {
        &self.effective
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Internal { feature: FeatureId, edges: Vec<Edge> },
    Terminal { class: ClassId },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
}

impl Node {
    pub fn internal(id: NodeId, feature: FeatureId, edges: Vec<Edge>) -> Self {
        Node {
            id,
            kind: NodeKind::Internal { feature, edges },
        }
    }

    pub fn terminal(id: NodeId, class: ClassId) -> Self {
        Node {
            id,
            kind: NodeKind::Terminal { class },
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self.kind, NodeKind::Terminal { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub feature: FeatureId,
    pub values: ValueSet,
}

/// A root-to-terminal path with its literals and aggregated `rho` sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub id: PathId,
    pub nodes: Vec<NodeId>,
    pub literals: Vec<Literal>,
    pub features: FeatureSet,
    pub class: ClassId,
    rho: BTreeMap<FeatureId, ValueSet>,
}

impl Path {
    pub fn leaf(&self) -> NodeId {
        *self.nodes.last().expect("paths are never empty")
    }

    pub fn tests(&self, feature: FeatureId) -> bool {
        self.rho.contains_key(&feature)
    }

    /// Intersection of all literals on `feature`, or `None` if untested.
    pub fn rho(&self, feature: FeatureId) -> Option<&ValueSet> {
        self.rho.get(&feature)
    }

    pub fn rho_map(&self) -> &BTreeMap<FeatureId, ValueSet> {
        &self.rho
    }

    pub fn is_consistent(&self, point: &Point) -> bool {
        self.rho.iter().all(|(&i, s)| s.contains(point.get(i)))
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }
}

/// A point in feature space, one value per feature.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Value>);

impl Point {
    pub fn new(values: Vec<Value>) -> Self {
        Point(values)
    }

    pub fn get(&self, feature: FeatureId) -> Value {
        self.0[feature - 1]
    }

    pub fn set(&mut self, feature: FeatureId, v: Value) {
        self.0[feature - 1] = v;
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionTree {
    features: Vec<Feature>,
    classes: Vec<Symbol>,
    nodes: Vec<Node>,
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    paths: Vec<Path>,
    path_of_leaf: Vec<Option<PathId>>,
}

impl DecisionTree {
    /// Builds a tree, checking every structural invariant.
    pub fn new(
        features: Vec<Feature>,
        classes: Vec<Symbol>,
        mut nodes: Vec<Node>,
        root: NodeId,
    ) -> Result<Self, StructureError> {
        for (k, f) in features.iter().enumerate() {
            match &f.domain {
                Domain::Categorical(values) => {
                    if values.is_empty() {
                        return Err(StructureError::EmptyDomain(k + 1));
                    }
                    let distinct: BTreeSet<_> = values.iter().collect();
                    if distinct.len() != values.len() {
                        return Err(StructureError::DuplicateDomainValue(k + 1));
                    }
                }
                Domain::Ordinal { min, max } => {
                    if min > max {
                        return Err(StructureError::EmptyDomain(k + 1));
                    }
                }
            }
        }

        let count = nodes.len();
        nodes.sort_by_key(|n| n.id);
        for (k, n) in nodes.iter().enumerate() {
            if n.id == 0 || n.id > count {
                return Err(StructureError::NodeIdOutOfRange { id: n.id, count });
            }
            if n.id != k + 1 {
                return Err(StructureError::DuplicateNode(n.id));
            }
        }
        if root == 0 || root > count {
            return Err(StructureError::MissingRoot(root));
        }

        let mut incoming = vec![0usize; count + 1];
        let mut parent = vec![None; count + 1];
        for n in &nodes {
            match &n.kind {
                NodeKind::Terminal { class } => {
                    if *class >= classes.len() {
                        return Err(StructureError::UnknownClass(n.id));
                    }
                }
                NodeKind::Internal { feature, edges } => {
                    if *feature == 0 || *feature > features.len() {
                        return Err(StructureError::UnknownFeature(n.id));
                    }
                    if edges.len() < 2 {
                        return Err(StructureError::TooFewEdges(n.id));
                    }
                    let domain = &features[feature - 1].domain;
                    let full = domain.full_set();
                    for e in edges {
                        if e.to == 0 || e.to > count {
                            return Err(StructureError::DanglingEdge { from: n.id, to: e.to });
                        }
                        if e.values.is_empty() {
                            return Err(StructureError::EmptyEdge { from: n.id, to: e.to });
                        }
                        if !e.values.is_subset(&full) {
                            return Err(StructureError::ValueOutsideDomain { from: n.id, to: e.to });
                        }
                        if e.values == full {
                            return Err(StructureError::FullDomainEdge { from: n.id, to: e.to });
                        }
                        incoming[e.to] += 1;
                        parent[e.to] = Some(n.id);
                    }
                    for (a, ea) in edges.iter().enumerate() {
                        for eb in &edges[a + 1..] {
                            if ea.values.intersects(&eb.values) {
                                return Err(StructureError::OverlappingSiblings {
                                    node: n.id,
                                    a: ea.to,
                                    b: eb.to,
                                });
                            }
                        }
                    }
                }
            }
        }
        for id in 1..=count {
            match (id == root, incoming[id]) {
                (true, 0) | (false, 1) => {}
                (true, _) => return Err(StructureError::RootHasParent(id)),
                (false, 0) => return Err(StructureError::DuplicateRoot(id)),
                (false, c) => return Err(StructureError::MultipleParents { node: id, count: c }),
            }
        }

        let mut tree = DecisionTree {
            path_of_leaf: vec![None; count + 1],
            features,
            classes,
            nodes,
            root,
            parent,
            paths: Vec::new(),
        };
        let reached = tree.index_paths();
        if let Some(id) = (1..=count).find(|&id| !reached[id]) {
            return Err(StructureError::Unreachable(id));
        }
        let distinct: BTreeSet<ClassId> = tree.paths.iter().map(|p| p.class).collect();
        if distinct.len() < 2 {
            return Err(StructureError::ConstantClassifier);
        }
        Ok(tree)
    }

    /// Depth-first walk computing paths, `rho` and effective edge sets.
    /// Returns which nodes were reached.
    fn index_paths(&mut self) -> Vec<bool> {
        struct Frame {
            node: NodeId,
            nodes: Vec<NodeId>,
            literals: Vec<Literal>,
            rho: BTreeMap<FeatureId, ValueSet>,
        }
        let mut reached = vec![false; self.nodes.len() + 1];
        let mut paths = Vec::new();
        let mut stack = vec![Frame {
            node: self.root,
            nodes: vec![self.root],
            literals: Vec::new(),
            rho: BTreeMap::new(),
        }];
        while let Some(frame) = stack.pop() {
            if reached[frame.node] {
                continue;
            }
            reached[frame.node] = true;
            let node = &mut self.nodes[frame.node - 1];
            match &mut node.kind {
                NodeKind::Terminal { class } => {
                    let id = paths.len() + 1;
                    self.path_of_leaf[frame.node] = Some(id);
                    paths.push(Path {
                        id,
                        features: frame.rho.keys().copied().collect(),
                        nodes: frame.nodes,
                        literals: frame.literals,
                        class: *class,
                        rho: frame.rho,
                    });
                }
                NodeKind::Internal { feature, edges } => {
                    let i = *feature;
                    let prefix = frame.rho.get(&i).cloned();
                    // pushed in reverse so the first edge is explored first
                    for e in edges.iter_mut().rev() {
                        e.effective = match &prefix {
                            Some(p) => e.values.intersect(p),
                            None => e.values.clone(),
                        };
                        let mut nodes = frame.nodes.clone();
                        nodes.push(e.to);
                        let mut literals = frame.literals.clone();
                        literals.push(Literal {
                            feature: i,
                            values: e.values.clone(),
                        });
                        let mut rho = frame.rho.clone();
                        rho.insert(i, e.effective.clone());
                        stack.push(Frame {
                            node: e.to,
                            nodes,
                            literals,
                            rho,
                        });
                    }
                }
            }
        }
        self.paths = paths;
        reached
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn feature(&self, i: FeatureId) -> &Feature {
        &self.features[i - 1]
    }

    pub fn domain(&self, i: FeatureId) -> &Domain {
        &self.features[i - 1].domain
    }

    pub fn num_features(&self) -> usize {
        self.features.len()
    }

    pub fn feature_ids(&self) -> impl Iterator<Item = FeatureId> {
        1..=self.features.len()
    }

    pub fn all_features(&self) -> FeatureSet {
        self.feature_ids().collect()
    }

    pub fn classes(&self) -> &[Symbol] {
        &self.classes
    }

    pub fn class_label(&self, c: ClassId) -> &Symbol {
        &self.classes[c]
    }

    pub fn class_index(&self, label: &Symbol) -> Option<ClassId> {
        self.classes.iter().position(|c| c == label)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id - 1]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parent[id]
    }

    pub fn num_edges(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Longest path, counted in edges.
    pub fn depth(&self) -> usize {
        self.paths.iter().map(|p| p.nodes.len() - 1).max().unwrap_or(0)
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, id: PathId) -> Result<&Path> {
        id.checked_sub(1)
            .and_then(|k| self.paths.get(k))
            .ok_or_else(|| Error::UnknownPath(format!("path id {id}")))
    }

    pub fn path_by_leaf(&self, leaf: NodeId) -> Result<&Path> {
        self.path_of_leaf
            .get(leaf)
            .copied()
            .flatten()
            .map(|id| &self.paths[id - 1])
            .ok_or_else(|| Error::UnknownPath(format!("terminal node {leaf}")))
    }

    pub fn path_by_nodes(&self, nodes: &[NodeId]) -> Result<&Path> {
        self.paths
            .iter()
            .find(|p| p.nodes == nodes)
            .ok_or_else(|| Error::UnknownPath(format!("node sequence {nodes:?}")))
    }

    /// Number of points in feature space, if it fits in a `u128`.
    pub fn feature_space_size(&self) -> Option<u128> {
        self.features
            .iter()
            .try_fold(1u128, |acc, f| acc.checked_mul(f.domain.size() as u128))
    }

    pub fn check_point(&self, point: &Point) -> Result<()> {
        if point.values().len() != self.features.len() {
            return Err(Error::Instance(format!(
                "expected {} values, got {}",
                self.features.len(),
                point.values().len()
            )));
        }
        for i in self.feature_ids() {
            if !self.domain(i).contains(point.get(i)) {
                return Err(Error::Instance(format!(
                    "value of feature {} ({}) is outside its domain",
                    i,
                    self.feature(i).name
                )));
            }
        }
        Ok(())
    }

    pub fn rho<'a>(&self, i: FeatureId, path: &'a Path) -> Result<&'a ValueSet> {
        path.rho(i).ok_or(Error::FeatureNotTested {
            feature: i,
            path: path.id,
        })
    }

    /// Features of `path` whose literals reject the value in `point`.
    pub fn chi_i(&self, point: &Point, path: &Path) -> FeatureSet {
        path.rho
            .iter()
            .filter(|(&i, s)| !s.contains(point.get(i)))
            .map(|(&i, _)| i)
            .collect()
    }

    /// Features tested by both paths with disjoint `rho` sets.
    pub fn chi_p(&self, p: &Path, q: &Path) -> FeatureSet {
        p.rho
            .iter()
            .filter(|(i, s)| q.rho(**i).is_some_and(|t| !s.intersects(t)))
            .map(|(&i, _)| i)
            .collect()
    }

    /// Walks from the root following the edge accepting each tested value.
    pub fn classify(&self, point: &Point) -> Result<(ClassId, &Path)> {
        let mut at = self.root;
        loop {
            match &self.node(at).kind {
                NodeKind::Terminal { class } => {
                    return Ok((*class, self.path_by_leaf(at)?));
                }
                NodeKind::Internal { feature, edges } => {
                    let v = point.get(*feature);
                    at = edges
                        .iter()
                        .find(|e| e.values.contains(v))
                        .ok_or(Error::DeadEnd {
                            node: at,
                            feature: *feature,
                        })?
                        .to;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary() -> Domain {
        Domain::Categorical(vec![Symbol::Int(0), Symbol::Int(1)])
    }

    fn feats(n: usize) -> Vec<Feature> {
        (1..=n)
            .map(|i| Feature {
                name: format!("x{i}"),
                domain: binary(),
            })
            .collect()
    }

    fn classes() -> Vec<Symbol> {
        vec![Symbol::Int(0), Symbol::Int(1)]
    }

    fn e(to: NodeId, v: Value) -> Edge {
        Edge::new(to, ValueSet::singleton(v))
    }

    #[test]
    fn stump_has_two_paths() {
        let t = DecisionTree::new(
            feats(1),
            classes(),
            vec![
                Node::internal(1, 1, vec![e(2, 0), e(3, 1)]),
                Node::terminal(2, 0),
                Node::terminal(3, 1),
            ],
            1,
        )
        .unwrap();
        assert_eq!(t.paths().len(), 2);
        assert_eq!(t.paths()[0].nodes, vec![1, 2]);
        assert_eq!(t.depth(), 1);
        let (c, p) = t.classify(&Point::new(vec![1])).unwrap();
        assert_eq!((c, p.leaf()), (1, 3));
    }

    #[test]
    fn structural_errors() {
        let bad = |nodes: Vec<Node>| DecisionTree::new(feats(1), classes(), nodes, 1).unwrap_err();
        assert_eq!(
            bad(vec![
                Node::internal(1, 1, vec![e(2, 0), e(3, 0)]),
                Node::terminal(2, 0),
                Node::terminal(3, 1),
            ]),
            StructureError::OverlappingSiblings { node: 1, a: 2, b: 3 }
        );
        assert_eq!(
            bad(vec![
                Node::internal(1, 1, vec![e(2, 0), e(4, 1)]),
                Node::terminal(2, 0),
                Node::terminal(3, 1),
            ]),
            StructureError::DanglingEdge { from: 1, to: 4 }
        );
        assert_eq!(
            bad(vec![
                Node::internal(1, 1, vec![e(2, 0), Edge::new(3, ValueSet::interval(0, 1))]),
                Node::terminal(2, 0),
                Node::terminal(3, 1),
            ]),
            StructureError::FullDomainEdge { from: 1, to: 3 }
        );
        assert_eq!(
            bad(vec![
                Node::internal(1, 1, vec![e(2, 0), e(3, 1)]),
                Node::terminal(2, 0),
                Node::terminal(3, 1),
                Node::terminal(4, 1),
            ]),
            StructureError::DuplicateRoot(4)
        );
        assert_eq!(
            bad(vec![
                Node::internal(1, 1, vec![e(2, 0), e(3, 1)]),
                Node::terminal(2, 1),
                Node::terminal(3, 1),
            ]),
            StructureError::ConstantClassifier
        );
        // single leaf: a constant classifier
        assert_eq!(
            DecisionTree::new(feats(1), classes(), vec![Node::terminal(1, 0)], 1).unwrap_err(),
            StructureError::ConstantClassifier
        );
    }

    #[test]
    fn repeated_feature_rho_and_effective_sets() {
        let d = Domain::Ordinal { min: 0, max: 4 };
        let f = vec![Feature {
            name: "x".into(),
            domain: d,
        }];
        // x in {1,3} then x in {2,3,4}
        let t = DecisionTree::new(
            f,
            classes(),
            vec![
                Node::internal(
                    1,
                    1,
                    vec![
                        Edge::new(2, ValueSet::from_values([1, 3])),
                        Edge::new(5, ValueSet::from_values([0, 2, 4])),
                    ],
                ),
                Node::internal(
                    2,
                    1,
                    vec![
                        Edge::new(3, ValueSet::from_values([2, 3, 4])),
                        Edge::new(4, ValueSet::from_values([0, 1])),
                    ],
                ),
                Node::terminal(3, 1),
                Node::terminal(4, 0),
                Node::terminal(5, 0),
            ],
            1,
        )
        .unwrap();
        let p = t.path_by_leaf(3).unwrap();
        assert_eq!(t.rho(1, p).unwrap(), &ValueSet::singleton(3));
        match &t.node(2).kind {
            NodeKind::Internal { edges, .. } => {
                assert_eq!(edges[0].effective(), &ValueSet::singleton(3));
                assert_eq!(edges[1].effective(), &ValueSet::singleton(1));
            }
            _ => unreachable!(),
        }
        let leaf5 = t.path_by_leaf(5).unwrap();
        assert!(matches!(
            t.rho(2, leaf5),
            Err(Error::FeatureNotTested { feature: 2, .. })
        ));
    }
}
