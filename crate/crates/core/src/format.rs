//! Canonical JSON tree files and instance parsing.
//!
//! ```json
//! {
//!   "features": [{"name": "x1", "kind": "categorical", "domain": [0, 1]},
//!                {"name": "age", "kind": "ordinal", "domain": {"min": 0, "max": 99}}],
//!   "classes": [0, 1],
//!   "root": 1,
//!   "nodes": [
//!     {"id": 1, "feature": 1, "edges": [{"to": 2, "values": [0]}, {"to": 3, "values": [1]}]},
//!     {"id": 2, "class": 0},
//!     {"id": 3, "class": 1}
//!   ]
//! }
//! ```

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::domain::{Domain, Symbol, Value, ValueSet};
use crate::error::{Error, Result, StructureError};
use crate::tree::{DecisionTree, Edge, Feature, FeatureId, Node, NodeId, NodeKind, Point};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeFile {
    features: Vec<FeatureDef>,
    classes: Vec<Symbol>,
    root: NodeId,
    nodes: Vec<NodeDef>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FeatureDef {
    name: String,
    kind: KindDef,
    domain: DomainDef,
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq)]
#[serde(rename_all = "lowercase")]
enum KindDef {
    Categorical,
    Ordinal,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DomainDef {
    List(Vec<Symbol>),
    Range { min: Value, max: Value },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDef {
    id: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    feature: Option<FeatureId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<EdgeDef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<Symbol>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDef {
    to: NodeId,
    values: ValuesDef,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValuesDef {
    List(Vec<Symbol>),
    Interval { lo: Value, hi: Value },
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn load_tree<R: Read>(source: R) -> Result<DecisionTree> {
    let file: TreeFile = serde_json::from_reader(source).map_err(parse_err)?;
    from_file(file)
}

pub fn parse_tree(text: &str) -> Result<DecisionTree> {
    let file: TreeFile = serde_json::from_str(text).map_err(parse_err)?;
    from_file(file)
}

fn from_file(file: TreeFile) -> Result<DecisionTree> {
    let mut features = Vec::with_capacity(file.features.len());
    for (k, f) in file.features.into_iter().enumerate() {
        let domain = match (f.kind, f.domain) {
            (KindDef::Categorical, DomainDef::List(values)) => Domain::Categorical(values),
            (KindDef::Ordinal, DomainDef::Range { min, max }) => Domain::Ordinal { min, max },
            (KindDef::Categorical, DomainDef::Range { .. }) => {
                return Err(Error::Invalid(format!(
                    "feature {}: categorical domains are value lists",
                    k + 1
                )))
            }
            (KindDef::Ordinal, DomainDef::List(_)) => {
                return Err(Error::Invalid(format!(
                    "feature {}: ordinal domains are {{\"min\",\"max\"}} ranges",
                    k + 1
                )))
            }
        };
        features.push(Feature { name: f.name, domain });
    }

    let mut nodes = Vec::with_capacity(file.nodes.len());
    for n in file.nodes {
        let node = match (n.feature, n.edges, n.class) {
            (Some(feature), Some(edges), None) => {
                let domain = features
                    .get(feature.wrapping_sub(1))
                    .map(|f| &f.domain)
                    .ok_or(StructureError::UnknownFeature(n.id))?;
                let edges = edges
                    .into_iter()
                    .map(|e| {
                        let values = value_set(domain, &e.values)
                            .ok_or(StructureError::ValueOutsideDomain { from: n.id, to: e.to })?;
                        Ok(Edge::new(e.to, values))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Node::internal(n.id, feature, edges)
            }
            (None, None, Some(label)) => {
                let class = file
                    .classes
                    .iter()
                    .position(|c| *c == label)
                    .ok_or(StructureError::UnknownClass(n.id))?;
                Node::terminal(n.id, class)
            }
            _ => return Err(StructureError::MalformedNode(n.id).into()),
        };
        nodes.push(node);
    }
    Ok(DecisionTree::new(features, file.classes, nodes, file.root)?)
}

fn value_set(domain: &Domain, def: &ValuesDef) -> Option<ValueSet> {
    match def {
        ValuesDef::List(symbols) => {
            let values = symbols
                .iter()
                .map(|s| domain.lookup(s))
                .collect::<Option<Vec<_>>>()?;
            Some(ValueSet::from_values(values))
        }
        ValuesDef::Interval { lo, hi } if domain.is_ordinal() => {
            let set = ValueSet::interval(*lo, *hi);
            (domain.contains(*lo) && domain.contains(*hi)).then_some(set)
        }
        ValuesDef::Interval { .. } => None,
    }
}

fn values_def(domain: &Domain, set: &ValueSet) -> ValuesDef {
    if domain.is_ordinal() {
        if let Some((lo, hi)) = set.as_interval() {
            if hi > lo {
                return ValuesDef::Interval { lo, hi };
            }
        }
    }
    ValuesDef::List(set.iter().map(|v| domain.symbol(v)).collect())
}

/// JSON rendering of a value set, matching the tree-file edge syntax.
pub fn value_set_json(domain: &Domain, set: &ValueSet) -> serde_json::Value {
    serde_json::to_value(values_def(domain, set)).expect("value sets always serialize")
}

/// Serializes a tree in the canonical format (pretty-printed, deterministic).
pub fn tree_to_json(tree: &DecisionTree) -> String {
    let file = TreeFile {
        features: tree
            .features()
            .iter()
            .map(|f| match &f.domain {
                Domain::Categorical(values) => FeatureDef {
                    name: f.name.clone(),
                    kind: KindDef::Categorical,
                    domain: DomainDef::List(values.clone()),
                },
                Domain::Ordinal { min, max } => FeatureDef {
                    name: f.name.clone(),
                    kind: KindDef::Ordinal,
                    domain: DomainDef::Range {
                        min: *min,
                        max: *max,
                    },
                },
            })
            .collect(),
        classes: tree.classes().to_vec(),
        root: tree.root(),
        nodes: tree
            .nodes()
            .iter()
            .map(|n| match &n.kind {
                NodeKind::Internal { feature, edges } => NodeDef {
                    id: n.id,
                    feature: Some(*feature),
                    edges: Some(
                        edges
                            .iter()
                            .map(|e| EdgeDef {
                                to: e.to,
                                values: values_def(tree.domain(*feature), &e.values),
                            })
                            .collect(),
                    ),
                    class: None,
                },
                NodeKind::Terminal { class } => NodeDef {
                    id: n.id,
                    feature: None,
                    edges: None,
                    class: Some(tree.class_label(*class).clone()),
                },
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("tree files always serialize")
}

/// Parses an instance: a JSON array in feature order, a `name=value` comma
/// list, or bare comma-separated values in feature order.
pub fn parse_instance(tree: &DecisionTree, text: &str) -> Result<Point> {
    let text = text.trim();
    let m = tree.num_features();
    let values: Vec<Value> = if text.starts_with('[') {
        let symbols: Vec<Symbol> = serde_json::from_str(text).map_err(parse_err)?;
        if symbols.len() != m {
            return Err(Error::Instance(format!("expected {m} values, got {}", symbols.len())));
        }
        symbols
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let d = tree.domain(k + 1);
                d.lookup(s)
                    .or_else(|| d.parse(&s.to_string()))
                    .ok_or_else(|| bad_value(tree, k + 1, &s.to_string()))
            })
            .collect::<Result<_>>()?
    } else if text.contains('=') {
        let mut slots: Vec<Option<Value>> = vec![None; m];
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, raw) = item
                .split_once('=')
                .ok_or_else(|| Error::Instance(format!("expected name=value, got '{item}'")))?;
            let i = tree
                .features()
                .iter()
                .position(|f| f.name == name.trim())
                .map(|p| p + 1)
                .ok_or_else(|| Error::Instance(format!("unknown feature '{}'", name.trim())))?;
            let v = tree.domain(i).parse(raw).ok_or_else(|| bad_value(tree, i, raw))?;
            slots[i - 1] = Some(v);
        }
        slots
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                v.ok_or_else(|| {
                    Error::Instance(format!("missing value for '{}'", tree.feature(k + 1).name))
                })
            })
            .collect::<Result<_>>()?
    } else {
        let raw: Vec<&str> = text.split(',').map(str::trim).collect();
        if raw.len() != m {
            return Err(Error::Instance(format!("expected {m} values, got {}", raw.len())));
        }
        raw.iter()
            .enumerate()
            .map(|(k, r)| tree.domain(k + 1).parse(r).ok_or_else(|| bad_value(tree, k + 1, r)))
            .collect::<Result<_>>()?
    };
    let point = Point::new(values);
    tree.check_point(&point)?;
    Ok(point)
}

fn bad_value(tree: &DecisionTree, i: FeatureId, raw: &str) -> Error {
    Error::Instance(format!(
        "'{}' is not in the domain of feature {} ({})",
        raw.trim(),
        i,
        tree.feature(i).name
    ))
}

/// Renders a point with domain symbols, as a JSON array.
pub fn point_json(tree: &DecisionTree, point: &Point) -> serde_json::Value {
    serde_json::Value::Array(
        tree.feature_ids()
            .map(|i| serde_json::to_value(tree.domain(i).symbol(point.get(i))).unwrap())
            .collect(),
    )
}
