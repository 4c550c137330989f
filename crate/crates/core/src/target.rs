//! What an explanation is about: a path, or an instance read through its
//! consistent path.
//!
//! Every explainer works on the same reduced view. A [`Target`] fixes a
//! candidate universe of features, a value set per candidate feature, and a
//! class. Removing a feature from an explanation frees it; features outside
//! the universe are always free.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::domain::ValueSet;
use crate::error::{Error, Result};
use crate::tree::{ClassId, DecisionTree, FeatureId, FeatureSet, Path, PathId, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Anchor {
    Path(PathId),
    Instance(Point),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Path explanation: literals are the path's `rho` sets.
    Path,
    /// Instance explanation over the features of the consistent path.
    PathRestricted,
    /// Instance explanation over every feature.
    PathUnrestricted,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Path => "path",
            Mode::PathRestricted => "path-restricted",
            Mode::PathUnrestricted => "path-unrestricted",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(Mode::Path),
            "path-restricted" | "restricted" => Ok(Mode::PathRestricted),
            "path-unrestricted" | "unrestricted" => Ok(Mode::PathUnrestricted),
            other => Err(Error::Invalid(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Target<'t> {
    tree: &'t DecisionTree,
    anchor: Anchor,
    mode: Mode,
    path: &'t Path,
    universe: FeatureSet,
    fixed: BTreeMap<FeatureId, ValueSet>,
}

impl<'t> Target<'t> {
    pub fn path(tree: &'t DecisionTree, path: &'t Path) -> Self {
        Target {
            tree,
            anchor: Anchor::Path(path.id),
            mode: Mode::Path,
            path,
            universe: path.features.clone(),
            fixed: path.rho_map().clone(),
        }
    }

    pub fn path_id(tree: &'t DecisionTree, id: PathId) -> Result<Self> {
        Ok(Self::path(tree, tree.path(id)?))
    }

    /// Instance target. `Mode::Path` is treated as explaining the path the
    /// instance follows.
    pub fn instance(tree: &'t DecisionTree, point: &Point, mode: Mode) -> Result<Self> {
        tree.check_point(point)?;
        let (_, path) = tree.classify(point)?;
        if mode == Mode::Path {
            return Ok(Self::path(tree, path));
        }
        let universe = match mode {
            Mode::PathRestricted => path.features.clone(),
            _ => tree.all_features(),
        };
        let fixed = universe
            .iter()
            .map(|&i| (i, ValueSet::singleton(point.get(i))))
            .collect();
        Ok(Target {
            tree,
            anchor: Anchor::Instance(point.clone()),
            mode,
            path,
            universe,
            fixed,
        })
    }

    pub fn from_anchor(tree: &'t DecisionTree, anchor: &Anchor, mode: Mode) -> Result<Self> {
        match anchor {
            Anchor::Path(id) => Self::path_id(tree, *id),
            Anchor::Instance(p) => Self::instance(tree, p, mode),
        }
    }

    pub fn tree(&self) -> &'t DecisionTree {
        self.tree
    }

    pub fn anchor(&self) -> &Anchor {
        &self.anchor
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_path(&self) -> bool {
        self.mode == Mode::Path
    }

    /// The anchor path, or the path the instance follows.
    pub fn anchor_path(&self) -> &'t Path {
        self.path
    }

    pub fn class(&self) -> ClassId {
        self.path.class
    }

    /// Features an explanation may contain.
    pub fn universe(&self) -> &FeatureSet {
        &self.universe
    }

    pub fn fixed(&self, i: FeatureId) -> Option<&ValueSet> {
        self.fixed.get(&i)
    }

    pub fn fixed_map(&self) -> &BTreeMap<FeatureId, ValueSet> {
        &self.fixed
    }

    /// Paths predicting a different class.
    pub fn opposing(&self) -> impl Iterator<Item = &'t Path> + '_ {
        let c = self.class();
        self.tree.paths().iter().filter(move |q| q.class != c)
    }

    /// Features of the universe on which `q` contradicts the fixed values.
    pub fn conflict(&self, q: &Path) -> FeatureSet {
        q.rho_map()
            .iter()
            .filter(|(i, s)| self.fixed.get(i).is_some_and(|f| !f.intersects(s)))
            .map(|(&i, _)| i)
            .collect()
    }

    /// One conflict set per opposing path, in path order.
    pub fn conflicts(&self) -> Vec<FeatureSet> {
        self.opposing().map(|q| self.conflict(q)).collect()
    }
}
