//! Brute-force reference semantics over finite feature spaces.
//!
//! Nothing here reuses the explainers: every predicate is decided by
//! enumerating points and classifying them.

pub mod gen;

use crate::domain::Value;
use crate::error::{Error, Result};
use crate::target::{Anchor, Mode};
use crate::tree::{ClassId, DecisionTree, FeatureId, FeatureSet, Point};
use crate::validate::DEFAULT_SPACE_LIMIT;

/// Largest candidate universe the subset sweeps accept.
pub const MAX_UNIVERSE: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Abductive,
    Contrastive,
}

/// The anchor's literals as seen by the oracle.
#[derive(Clone, Debug)]
pub struct AnchorView {
    pub class: ClassId,
    /// Candidate features, ascending.
    pub universe: Vec<FeatureId>,
    /// Allowed values per feature when it is fixed (index 0 unused; `None`
    /// outside the universe).
    allowed: Vec<Option<Vec<Value>>>,
    domains: Vec<Vec<Value>>,
}

impl AnchorView {
    pub fn new(tree: &DecisionTree, anchor: &Anchor, mode: Mode) -> Result<Self> {
        let m = tree.num_features();
        let domains: Vec<Vec<Value>> = std::iter::once(Vec::new())
            .chain(tree.feature_ids().map(|i| tree.domain(i).values().collect()))
            .collect();
        let mut allowed = vec![None; m + 1];
        let (class, universe) = match anchor {
            Anchor::Path(id) => {
                let p = tree.path(*id)?;
                for (&i, s) in p.rho_map() {
                    allowed[i] = Some(s.iter().collect());
                }
                (p.class, p.features.iter().copied().collect())
            }
            Anchor::Instance(v) => {
                tree.check_point(v)?;
                let (c, p) = tree.classify(v)?;
                let universe: Vec<FeatureId> = match mode {
                    Mode::PathUnrestricted => tree.feature_ids().collect(),
                    _ => p.features.iter().copied().collect(),
                };
                for &i in &universe {
                    allowed[i] = Some(vec![v.get(i)]);
                }
                (c, universe)
            }
        };
        Ok(AnchorView {
            class,
            universe,
            allowed,
            domains,
        })
    }

    fn choices(&self, fixed: impl Fn(FeatureId) -> bool) -> Vec<&[Value]> {
        (1..self.domains.len())
            .map(|i| match &self.allowed[i] {
                Some(a) if fixed(i) => a.as_slice(),
                _ => self.domains[i].as_slice(),
            })
            .collect()
    }
}

fn check_space(tree: &DecisionTree, limit: u128) -> Result<()> {
    let size = tree.feature_space_size().unwrap_or(u128::MAX);
    if size > limit {
        return Err(Error::SpaceTooLarge { size, limit });
    }
    Ok(())
}

/// Calls `f` on every point of the product of `choices`; stops early when
/// `f` returns false. Returns false iff stopped early.
fn for_each_point(choices: &[&[Value]], mut f: impl FnMut(&Point) -> bool) -> bool {
    let m = choices.len();
    if choices.iter().any(|c| c.is_empty()) {
        return true;
    }
    let mut idx = vec![0usize; m];
    let mut point = Point::new(choices.iter().map(|c| c[0]).collect());
    loop {
        if !f(&point) {
            return false;
        }
        let mut k = m;
        loop {
            if k == 0 {
                return true;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                point.set(k + 1, choices[k][idx[k]]);
                break;
            }
            idx[k] = 0;
            point.set(k + 1, choices[k][0]);
        }
    }
}

fn class_of(tree: &DecisionTree, x: &Point) -> ClassId {
    tree.classify(x).map(|(c, _)| c).expect("validated trees classify every point")
}

/// Every point agreeing with the anchor on `s` is predicted as the anchor
/// class.
pub fn is_weak_axp(tree: &DecisionTree, anchor: &Anchor, mode: Mode, s: &FeatureSet) -> Result<bool> {
    is_weak_axp_with_limit(tree, anchor, mode, s, DEFAULT_SPACE_LIMIT)
}

pub fn is_weak_axp_with_limit(
    tree: &DecisionTree,
    anchor: &Anchor,
    mode: Mode,
    s: &FeatureSet,
    limit: u128,
) -> Result<bool> {
    check_space(tree, limit)?;
    let view = AnchorView::new(tree, anchor, mode)?;
    let choices = view.choices(|i| s.contains(&i));
    Ok(for_each_point(&choices, |x| class_of(tree, x) == view.class))
}

/// Some point agreeing with the anchor outside `s` is predicted as another
/// class.
pub fn is_weak_cxp(tree: &DecisionTree, anchor: &Anchor, mode: Mode, s: &FeatureSet) -> Result<bool> {
    check_space(tree, DEFAULT_SPACE_LIMIT)?;
    let view = AnchorView::new(tree, anchor, mode)?;
    let choices = view.choices(|i| !s.contains(&i));
    Ok(!for_each_point(&choices, |x| class_of(tree, x) == view.class))
}

/// Bitmasks (over universe positions) of the features on which each
/// other-class point agrees with the anchor, deduplicated.
fn agreement_masks(tree: &DecisionTree, view: &AnchorView) -> Vec<u32> {
    let choices = view.choices(|_| false);
    let mut masks = std::collections::BTreeSet::new();
    for_each_point(&choices, |x| {
        if class_of(tree, x) != view.class {
            let mut mask = 0u32;
            for (k, &i) in view.universe.iter().enumerate() {
                if view.allowed[i].as_ref().is_some_and(|a| a.contains(&x.get(i))) {
                    mask |= 1 << k;
                }
            }
            masks.insert(mask);
        }
        true
    });
    masks.into_iter().collect()
}

fn to_set(view: &AnchorView, mask: u32) -> FeatureSet {
    view.universe
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, &i)| i)
        .collect()
}

/// Subset-minimal masks among those satisfying `weak`, sorted like explanation
/// lists.
fn minimal_masks(u: usize, weak: impl Fn(u32) -> bool) -> Vec<u32> {
    let mut by_size: Vec<u32> = (0..1u32 << u).filter(|&s| weak(s)).collect();
    by_size.sort_by_key(|s| s.count_ones());
    let mut kept: Vec<u32> = Vec::new();
    for s in by_size {
        if !kept.iter().any(|&k| k & s == k) {
            kept.push(s);
        }
    }
    kept
}

/// All subset-minimal weak explanations of the given family.
pub fn all_explanations_bruteforce(
    tree: &DecisionTree,
    anchor: &Anchor,
    mode: Mode,
    family: Family,
) -> Result<Vec<FeatureSet>> {
    check_space(tree, DEFAULT_SPACE_LIMIT)?;
    let view = AnchorView::new(tree, anchor, mode)?;
    let u = view.universe.len();
    if u > MAX_UNIVERSE {
        return Err(Error::SpaceTooLarge {
            size: 1u128 << u,
            limit: 1 << MAX_UNIVERSE,
        });
    }
    let full = if u == 32 { u32::MAX } else { (1u32 << u) - 1 };
    let masks = agreement_masks(tree, &view);
    let minimal = match family {
        // fixing s is safe iff no other-class point agrees on all of s
        Family::Abductive => minimal_masks(u, |s| masks.iter().all(|&a| a & s != s)),
        // freeing s is enough iff some other-class point agrees off s
        Family::Contrastive => minimal_masks(u, |s| {
            let rest = full & !s;
            masks.iter().any(|&a| a & rest == rest)
        }),
    };
    let mut sets: Vec<FeatureSet> = minimal.into_iter().map(|m| to_set(&view, m)).collect();
    sets.sort_by(|a, b| a.iter().cmp(b.iter()));
    Ok(sets)
}

/// All minimal hitting sets of `sets` within `universe`, by subset sweep.
pub fn minimal_hitting_sets_bruteforce(sets: &[FeatureSet], universe: &FeatureSet) -> Vec<FeatureSet> {
    let items: Vec<FeatureId> = universe.iter().copied().collect();
    assert!(items.len() <= MAX_UNIVERSE, "universe too large for a subset sweep");
    let encoded: Vec<u32> = sets
        .iter()
        .map(|s| {
            items
                .iter()
                .enumerate()
                .filter(|(_, i)| s.contains(i))
                .fold(0, |m, (k, _)| m | 1 << k)
        })
        .collect();
    let minimal = minimal_masks(items.len(), |s| encoded.iter().all(|&e| e & s != 0));
    let mut out: Vec<FeatureSet> = minimal
        .into_iter()
        .map(|m| {
            items
                .iter()
                .enumerate()
                .filter(|(k, _)| m >> k & 1 == 1)
                .map(|(_, &i)| i)
                .collect()
        })
        .collect();
    out.sort_by(|a, b| a.iter().cmp(b.iter()));
    out
}

/// Binary classifier over a weak AXp `Z` of an instance: `1` on an assignment
/// of `Z` iff every completion of it is predicted as the instance class.
#[derive(Clone, Debug)]
pub struct RestrictedClassifier {
    /// `iota[k - 1]` is the original feature of local feature `k`.
    pub iota: Vec<FeatureId>,
    domains: Vec<Vec<Value>>,
    table: Vec<bool>,
    /// Projection of the instance onto `Z`, in local coordinates.
    pub seed: Vec<Value>,
}

impl RestrictedClassifier {
    pub fn arity(&self) -> usize {
        self.iota.len()
    }

    fn index(&self, y: &[Value]) -> usize {
        y.iter().enumerate().fold(0, |acc, (k, v)| {
            let pos = self.domains[k].iter().position(|d| d == v).expect("value in domain");
            acc * self.domains[k].len() + pos
        })
    }

    pub fn eval(&self, y: &[Value]) -> bool {
        self.table[self.index(y)]
    }

    /// Every assignment of the local features with its output, in
    /// lexicographic order.
    pub fn rows(&self) -> Vec<(Vec<Value>, bool)> {
        let choices: Vec<&[Value]> = self.domains.iter().map(Vec::as_slice).collect();
        let mut rows = Vec::new();
        for_each_point(&choices, |y| {
            rows.push((y.values().to_vec(), self.eval(y.values())));
            true
        });
        rows
    }

    /// Maps local feature ids (1-based) to the original ones.
    pub fn lift(&self, local: &FeatureSet) -> FeatureSet {
        local.iter().map(|&k| self.iota[k - 1]).collect()
    }

    fn minimal_local(&self, family: Family) -> Vec<FeatureSet> {
        let m = self.arity();
        let choices = |fixed: u32| -> Vec<Vec<Value>> {
            (0..m)
                .map(|k| {
                    if fixed >> k & 1 == 1 {
                        vec![self.seed[k]]
                    } else {
                        self.domains[k].clone()
                    }
                })
                .collect()
        };
        let all_true = |fixed: u32| {
            let c = choices(fixed);
            let refs: Vec<&[Value]> = c.iter().map(Vec::as_slice).collect();
            for_each_point(&refs, |y| self.eval(y.values()))
        };
        let full = (1u32 << m) - 1;
        let minimal = match family {
            Family::Abductive => minimal_masks(m, all_true),
            Family::Contrastive => minimal_masks(m, |s| !all_true(full & !s)),
        };
        let mut out: Vec<FeatureSet> = minimal
            .into_iter()
            .map(|mask| (1..=m).filter(|k| mask >> (k - 1) & 1 == 1).collect())
            .collect();
        out.sort_by(|a, b| a.iter().cmp(b.iter()));
        out
    }

    /// AXps of the restricted problem at the seed, in local ids.
    pub fn axps(&self) -> Vec<FeatureSet> {
        self.minimal_local(Family::Abductive)
    }

    /// CXps of the restricted problem at the seed, in local ids.
    pub fn cxps(&self) -> Vec<FeatureSet> {
        self.minimal_local(Family::Contrastive)
    }
}

pub fn build_restricted(tree: &DecisionTree, v: &Point, z: &FeatureSet) -> Result<RestrictedClassifier> {
    check_space(tree, DEFAULT_SPACE_LIMIT)?;
    let anchor = Anchor::Instance(v.clone());
    if !is_weak_axp(tree, &anchor, Mode::PathUnrestricted, z)? {
        return Err(Error::NotWeakAxp(z.iter().copied().collect()));
    }
    let (c, _) = tree.classify(v)?;
    let iota: Vec<FeatureId> = z.iter().copied().collect();
    let domains: Vec<Vec<Value>> = iota.iter().map(|&i| tree.domain(i).values().collect()).collect();
    let full_domains: Vec<Vec<Value>> = tree.feature_ids().map(|i| tree.domain(i).values().collect()).collect();

    let local_refs: Vec<&[Value]> = domains.iter().map(Vec::as_slice).collect();
    let mut table = Vec::new();
    for_each_point(&local_refs, |y| {
        let mut choices: Vec<&[Value]> = full_domains.iter().map(Vec::as_slice).collect();
        let pinned: Vec<[Value; 1]> = y.values().iter().map(|&val| [val]).collect();
        for (k, &i) in iota.iter().enumerate() {
            choices[i - 1] = &pinned[k];
        }
        table.push(for_each_point(&choices, |x| class_of(tree, x) == c));
        true
    });
    Ok(RestrictedClassifier {
        seed: iota.iter().map(|&i| v.get(i)).collect(),
        iota,
        domains,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{fig1, fig2};

    fn set(v: &[usize]) -> FeatureSet {
        v.iter().copied().collect()
    }

    #[test]
    fn weak_axp_checks() {
        let t = fig2();
        let p1 = Anchor::Path(t.path_by_leaf(15).unwrap().id);
        assert!(is_weak_axp(&t, &p1, Mode::Path, &set(&[3, 5])).unwrap());
        assert!(!is_weak_axp(&t, &p1, Mode::Path, &set(&[5])).unwrap());
        assert!(is_weak_axp(&t, &p1, Mode::Path, &set(&[1, 2, 3, 4, 5])).unwrap());
        assert!(is_weak_cxp(&t, &p1, Mode::Path, &set(&[3])).unwrap());
    }

    #[test]
    fn enumerations() {
        let t = fig1();
        let v = Anchor::Instance(Point::new(vec![0, 1, 0]));
        assert_eq!(
            all_explanations_bruteforce(&t, &v, Mode::PathUnrestricted, Family::Abductive).unwrap(),
            vec![set(&[1]), set(&[2, 3])]
        );
        let t = fig2();
        let p4 = Anchor::Path(t.path_by_nodes(&[1, 2, 5, 9]).unwrap().id);
        assert_eq!(
            all_explanations_bruteforce(&t, &p4, Mode::Path, Family::Abductive).unwrap(),
            vec![set(&[2, 4])]
        );
        assert_eq!(
            all_explanations_bruteforce(&t, &p4, Mode::Path, Family::Contrastive).unwrap(),
            vec![set(&[2]), set(&[4])]
        );
    }

    #[test]
    fn transversals() {
        let sets = vec![set(&[1, 2]), set(&[1, 3])];
        assert_eq!(
            minimal_hitting_sets_bruteforce(&sets, &set(&[1, 2, 3])),
            vec![set(&[1]), set(&[2, 3])]
        );
    }

    #[test]
    fn restricted_table() {
        let t = fig2();
        let v = Point::new(vec![0, 1, 1, 1, 0]);
        let k = build_restricted(&t, &v, &set(&[1, 2, 4])).unwrap();
        let expect = |y: &[Value]| match y {
            [0, 0, _] => false,
            [0, 1, 0] => false,
            [0, 1, 1] => true,
            [1, _, _] => true,
            _ => unreachable!(),
        };
        for (y, out) in k.rows() {
            assert_eq!(out, expect(&y), "row {y:?}");
        }
        assert!(matches!(
            build_restricted(&t, &v, &set(&[1])),
            Err(Error::NotWeakAxp(_))
        ));
    }
}
