//! Small reference trees used by tests, benches and the CLI docs.

use crate::domain::{Domain, Symbol, ValueSet};
use crate::tree::{DecisionTree, Edge, Feature, Node, NodeId};

fn binary_features(names: &[&str]) -> Vec<Feature> {
    names
        .iter()
        .map(|n| Feature {
            name: (*n).to_string(),
            domain: Domain::Categorical(vec![Symbol::Int(0), Symbol::Int(1)]),
        })
        .collect()
}

fn split(id: NodeId, feature: usize, on0: NodeId, on1: NodeId) -> Node {
    Node::internal(
        id,
        feature,
        vec![
            Edge::new(on0, ValueSet::singleton(0)),
            Edge::new(on1, ValueSet::singleton(1)),
        ],
    )
}

/// Three binary features, seven nodes, four paths:
/// `<1,2>`, `<1,3,4>`, `<1,3,5,6>`, `<1,3,5,7>`.
pub fn fig1() -> DecisionTree {
    DecisionTree::new(
        binary_features(&["length", "thread", "author"]),
        vec![Symbol::Int(0), Symbol::Int(1)],
        vec![
            split(1, 1, 2, 3),
            Node::terminal(2, 0),
            split(3, 2, 4, 5),
            Node::terminal(4, 1),
            split(5, 3, 6, 7),
            Node::terminal(6, 0),
            Node::terminal(7, 1),
        ],
        1,
    )
    .expect("reference tree is valid")
}

/// Five binary features, fifteen nodes, eight paths.
pub fn fig2() -> DecisionTree {
    DecisionTree::new(
        binary_features(&["x1", "x2", "x3", "x4", "x5"]),
        vec![Symbol::Int(0), Symbol::Int(1)],
        vec![
            split(1, 1, 2, 3),
            split(2, 2, 4, 5),
            Node::terminal(3, 1),
            split(4, 3, 6, 7),
            split(5, 4, 8, 9),
            Node::terminal(6, 0),
            split(7, 4, 10, 11),
            split(8, 5, 12, 13),
            Node::terminal(9, 1),
            split(10, 5, 14, 15),
            Node::terminal(11, 1),
            Node::terminal(12, 0),
            Node::terminal(13, 1),
            Node::terminal(14, 0),
            Node::terminal(15, 1),
        ],
        1,
    )
    .expect("reference tree is valid")
}
