use thiserror::Error;

use crate::tree::{FeatureId, NodeId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid tree: {0}")]
    Structure(#[from] StructureError),
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("feature {feature} is not tested on path {path}")]
    FeatureNotTested { feature: FeatureId, path: usize },
    #[error("no edge of node {node} accepts the value of feature {feature}")]
    DeadEnd { node: NodeId, feature: FeatureId },
    #[error("no path matches {0}")]
    UnknownPath(String),
    #[error("feature space has {size} points, above the limit of {limit}")]
    SpaceTooLarge { size: u128, limit: u128 },
    #[error("feature set {0:?} is not a weak AXp of the instance")]
    NotWeakAxp(Vec<FeatureId>),
    #[error("hard clauses are unsatisfiable on their own")]
    HardUnsat,
    #[error("encoding produced an empty explanation for a non-constant classifier")]
    EmptyExplanation,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("feature {0} has an empty domain")]
    EmptyDomain(usize),
    #[error("feature {0} has a repeated domain value")]
    DuplicateDomainValue(usize),
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("node ids must be 1..={count}, found {id}")]
    NodeIdOutOfRange { id: NodeId, count: usize },
    #[error("root {0} is not a node")]
    MissingRoot(NodeId),
    #[error("node {0} has no incoming edge but is not the root (duplicate root)")]
    DuplicateRoot(NodeId),
    #[error("root {0} has an incoming edge")]
    RootHasParent(NodeId),
    #[error("node {node} has {count} incoming edges")]
    MultipleParents { node: NodeId, count: usize },
    #[error("node {from} has an edge to missing node {to}")]
    DanglingEdge { from: NodeId, to: NodeId },
    #[error("node {0} is unreachable from the root")]
    Unreachable(NodeId),
    #[error("node {0} needs either a feature with edges or a class")]
    MalformedNode(NodeId),
    #[error("internal node {0} has fewer than two edges")]
    TooFewEdges(NodeId),
    #[error("node {0} tests unknown feature")]
    UnknownFeature(NodeId),
    #[error("node {node}: edges to {a} and {b} carry overlapping value sets")]
    OverlappingSiblings { node: NodeId, a: NodeId, b: NodeId },
    #[error("edge {from}->{to} carries the full domain of its feature")]
    FullDomainEdge { from: NodeId, to: NodeId },
    #[error("edge {from}->{to} carries an empty value set")]
    EmptyEdge { from: NodeId, to: NodeId },
    #[error("edge {from}->{to} has a value outside the feature domain")]
    ValueOutsideDomain { from: NodeId, to: NodeId },
    #[error("terminal {0} has an unknown class label")]
    UnknownClass(NodeId),
    #[error("classifier is constant (every terminal predicts the same class)")]
    ConstantClassifier,
}
