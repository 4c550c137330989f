//! Formal explanations for decision trees.
//!
//! Abductive explanations answer "why this prediction?" with a subset-minimal
//! set of features whose values suffice for it; contrastive explanations
//! answer "why not another class?" with a subset-minimal set of features whose
//! change can flip it. Both come in instance form (values of one point) and
//! path form (the literals of a root-to-leaf path).
//!
//! ```
//! use dtxp::{samples, Target, DeletionOrder};
//!
//! let tree = samples::fig2();
//! let path = tree.path_by_leaf(15).unwrap();
//! let xp = dtxp::explain_traversal(&Target::path(&tree, path), DeletionOrder::Ascending);
//! assert_eq!(xp.features, vec![3, 5]);
//! ```

pub mod contrastive;
pub mod domain;
pub mod enumerate;
pub mod error;
pub mod explanation;
pub mod format;
pub mod hitting;
pub mod horn;
pub mod oracle;
pub mod report;
pub mod samples;
pub mod sat;
pub mod target;
pub mod traversal;
pub mod tree;
pub mod validate;

pub use contrastive::{all_cpxps, cxps_instance, explain_contrastive};
pub use domain::{Domain, Symbol, Value, ValueSet};
pub use enumerate::{
    enumerate_apxps, enumerate_by_size, enumerate_dual, min_hitting_set, smallest, smallest_apxp,
    AbductiveEnumerator, BySizeEnumerator, DualEnumerator,
};
pub use error::{Error, Result, StructureError};
pub use explanation::{Explanation, XpKind};
pub use format::{load_tree, parse_instance, parse_tree, tree_to_json};
pub use hitting::{apxp_mhs, axp_mhs, explain_mhs, minimal_hitting_set, DeletionOrder};
pub use horn::encode::{decode, encode, encode_path, encode_unrestricted, explain_horn, smallest_horn, EncodingMap};
pub use horn::{horn_maxsat, horn_mcs, horn_sat, HornClause, HornProblem, HornResult};
pub use report::{report, Algo, RedundancyReport, XrpFlag};
pub use target::{Anchor, Mode, Target};
pub use traversal::{explain_traversal, reaches_other_class, UniversalSet};
pub use tree::{
    ClassId, DecisionTree, Edge, Feature, FeatureId, FeatureSet, Literal, Node, NodeId, NodeKind,
    Path, PathId, Point,
};
pub use validate::{validate, validate_with_limit, ValidationReport};
