//! Enumeration of all explanations of a target by hitting-set dualization.
//!
//! Pick variable `p_i` (one per candidate feature) says feature `i` is kept
//! fixed. A model hitting every contrastive set picks a weak abductive
//! explanation; it is shrunk inside the picked set and then blocked.

use crate::contrastive::contrastive_sets;
use crate::explanation::{Explanation, XpKind};
use crate::hitting::DeletionOrder;
use crate::sat::{Lit, SatSolver};
use crate::target::Target;
use crate::traversal::{is_weak, shrink, shrink_contrastive, TraversalStats};
use crate::tree::{DecisionTree, FeatureId, FeatureSet, Path};

/// Pick variables over the target's universe.
#[derive(Clone, Debug)]
struct PickVars {
    features: Vec<FeatureId>,
}

impl PickVars {
    fn new(universe: &FeatureSet) -> Self {
        PickVars {
            features: universe.iter().copied().collect(),
        }
    }

    fn len(&self) -> usize {
        self.features.len()
    }

    fn var(&self, i: FeatureId) -> Lit {
        let k = self.features.binary_search(&i).expect("feature in universe");
        k as Lit + 1
    }

    fn positive(&self, set: &FeatureSet) -> Vec<Lit> {
        set.iter().map(|&i| self.var(i)).collect()
    }

    fn negative(&self, set: &FeatureSet) -> Vec<Lit> {
        set.iter().map(|&i| -self.var(i)).collect()
    }

    fn picked(&self, model: &[bool]) -> FeatureSet {
        self.features
            .iter()
            .enumerate()
            .filter(|(k, _)| model[k + 1])
            .map(|(_, &i)| i)
            .collect()
    }
}

/// Streams every abductive explanation of a target, one satisfiability call
/// per emission plus a final unsatisfiable one.
pub struct AbductiveEnumerator<'t> {
    target: Target<'t>,
    picks: PickVars,
    solver: SatSolver,
    done: bool,
    pub stats: TraversalStats,
}

impl<'t> AbductiveEnumerator<'t> {
    pub fn new(target: Target<'t>) -> Self {
        let picks = PickVars::new(target.universe());
        let mut solver = SatSolver::new(picks.len());
        for set in contrastive_sets(&target).0 {
            solver.add_clause(picks.positive(&set));
        }
        AbductiveEnumerator {
            target,
            picks,
            solver,
            done: false,
            stats: TraversalStats::default(),
        }
    }

    pub fn sat_calls(&self) -> usize {
        self.solver.calls
    }
}

impl Iterator for AbductiveEnumerator<'_> {
    type Item = Explanation;

    fn next(&mut self) -> Option<Explanation> {
        if self.done {
            return None;
        }
        let Some(model) = self.solver.solve() else {
            self.done = true;
            return None;
        };
        let seed = self.picks.picked(&model);
        let xp = shrink(&self.target, &seed, DeletionOrder::Ascending, &mut self.stats);
        self.solver.add_clause(self.picks.negative(&xp));
        Some(Explanation::new(&self.target, XpKind::abductive(&self.target), &xp))
    }
}

pub fn enumerate_apxps<'t>(tree: &'t DecisionTree, path: &'t Path) -> AbductiveEnumerator<'t> {
    AbductiveEnumerator::new(Target::path(tree, path))
}

/// Exact minimum-cardinality hitting set of `sets` that contains no set of
/// `forbidden`. Ties resolve deterministically toward smaller feature ids.
pub fn min_hitting_set(sets: &[FeatureSet], forbidden: &[FeatureSet]) -> Option<FeatureSet> {
    struct Search<'a> {
        sets: &'a [FeatureSet],
        forbidden: &'a [FeatureSet],
        best: Option<FeatureSet>,
    }

    impl Search<'_> {
        fn lower_bound(&self, chosen: &FeatureSet) -> usize {
            // greedy packing of pairwise disjoint unhit sets
            let mut used = FeatureSet::new();
            let mut count = 0;
            for s in self.sets.iter().filter(|s| s.is_disjoint(chosen)) {
                if s.is_disjoint(&used) {
                    used.extend(s.iter().copied());
                    count += 1;
                }
            }
            count
        }

        fn go(&mut self, chosen: &mut FeatureSet, banned: &mut FeatureSet) {
            if self.forbidden.iter().any(|f| f.is_subset(chosen)) {
                return;
            }
            let limit = self.best.as_ref().map_or(usize::MAX, |b| b.len());
            if chosen.len() + self.lower_bound(chosen) >= limit {
                return;
            }
            let unhit = self
                .sets
                .iter()
                .filter(|s| s.is_disjoint(chosen))
                .min_by_key(|s| s.difference(banned).count());
            let Some(unhit) = unhit else {
                self.best = Some(chosen.clone());
                return;
            };
            let options: Vec<FeatureId> = unhit.difference(banned).copied().collect();
            let mark = banned.clone();
            for i in options {
                chosen.insert(i);
                self.go(chosen, banned);
                chosen.remove(&i);
                // later branches need not reconsider i
                banned.insert(i);
            }
            *banned = mark;
        }
    }

    let mut search = Search {
        sets,
        forbidden,
        best: None,
    };
    search.go(&mut FeatureSet::new(), &mut FeatureSet::new());
    search.best
}

/// A smallest abductive explanation: a minimum hitting set of the
/// contrastive sets.
pub fn smallest(target: &Target) -> Explanation {
    let (sets, _) = contrastive_sets(target);
    let xp = min_hitting_set(&sets, &[]).expect("contrastive sets are never empty");
    Explanation::new(target, XpKind::abductive(target), &xp)
}

pub fn smallest_apxp(tree: &DecisionTree, path: &Path) -> Explanation {
    smallest(&Target::path(tree, path))
}

/// Streams abductive explanations in non-decreasing size.
pub struct BySizeEnumerator<'t> {
    target: Target<'t>,
    sets: Vec<FeatureSet>,
    found: Vec<FeatureSet>,
}

impl<'t> BySizeEnumerator<'t> {
    pub fn new(target: Target<'t>) -> Self {
        let (sets, _) = contrastive_sets(&target);
        BySizeEnumerator {
            target,
            sets,
            found: Vec::new(),
        }
    }
}

impl Iterator for BySizeEnumerator<'_> {
    type Item = Explanation;

    fn next(&mut self) -> Option<Explanation> {
        let xp = min_hitting_set(&self.sets, &self.found)?;
        self.found.push(xp.clone());
        Some(Explanation::new(&self.target, XpKind::abductive(&self.target), &xp))
    }
}

pub fn enumerate_by_size<'t>(tree: &'t DecisionTree, path: &'t Path) -> BySizeEnumerator<'t> {
    BySizeEnumerator::new(Target::path(tree, path))
}

/// Streams all abductive and all contrastive explanations of a target,
/// alternating as the seeds dictate.
pub struct DualEnumerator<'t> {
    target: Target<'t>,
    picks: PickVars,
    solver: SatSolver,
    done: bool,
    pub stats: TraversalStats,
}

impl<'t> DualEnumerator<'t> {
    pub fn new(target: Target<'t>) -> Self {
        let picks = PickVars::new(target.universe());
        let solver = SatSolver::new(picks.len());
        DualEnumerator {
            target,
            picks,
            solver,
            done: false,
            stats: TraversalStats::default(),
        }
    }

    pub fn sat_calls(&self) -> usize {
        self.solver.calls
    }
}

impl Iterator for DualEnumerator<'_> {
    type Item = Explanation;

    fn next(&mut self) -> Option<Explanation> {
        if self.done {
            return None;
        }
        let Some(model) = self.solver.solve() else {
            self.done = true;
            return None;
        };
        let seed = self.picks.picked(&model);
        if is_weak(&self.target, &seed) {
            let xp = shrink(&self.target, &seed, DeletionOrder::Ascending, &mut self.stats);
            self.solver.add_clause(self.picks.negative(&xp));
            Some(Explanation::new(&self.target, XpKind::abductive(&self.target), &xp))
        } else {
            let free: FeatureSet = self.target.universe().difference(&seed).copied().collect();
            let cxp = shrink_contrastive(&self.target, &free, DeletionOrder::Ascending, &mut self.stats);
            self.solver.add_clause(self.picks.positive(&cxp));
            Some(Explanation::new(&self.target, XpKind::contrastive(&self.target), &cxp))
        }
    }
}

pub fn enumerate_dual(target: Target<'_>) -> DualEnumerator<'_> {
    DualEnumerator::new(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::target::Mode;
    use crate::tree::Point;
    use crate::samples::{fig1, fig2};

    fn set(v: &[usize]) -> FeatureSet {
        v.iter().copied().collect()
    }

    #[test]
    fn fig2_single_apxp() {
        let t = fig2();
        let q2 = t.path_by_leaf(14).unwrap();
        let mut e = enumerate_apxps(&t, q2);
        let all: Vec<_> = e.by_ref().map(|x| x.features).collect();
        assert_eq!(all, vec![vec![1, 4, 5]]);
        assert_eq!(e.sat_calls(), 2);
        assert_eq!(smallest_apxp(&t, q2).features, vec![1, 4, 5]);
    }

    #[test]
    fn fig1_single_apxp() {
        let t = fig1();
        let p2 = t.path_by_nodes(&[1, 3, 5, 7]).unwrap();
        let all: Vec<_> = enumerate_apxps(&t, p2).map(|x| x.features).collect();
        assert_eq!(all, vec![vec![1, 3]]);
    }

    #[test]
    fn by_size_on_instance() {
        let t = fig1();
        let tg = Target::instance(&t, &Point::new(vec![0, 1, 0]), Mode::PathUnrestricted).unwrap();
        let all: Vec<_> = BySizeEnumerator::new(tg).map(|x| x.features).collect();
        assert_eq!(all, vec![vec![1], vec![2, 3]]);
    }

    #[test]
    fn dual_on_fig2() {
        let t = fig2();
        let p4 = t.path_by_nodes(&[1, 2, 5, 9]).unwrap();
        let mut e = enumerate_dual(Target::path(&t, p4));
        let all: Vec<_> = e.by_ref().map(|x| (x.kind, x.features)).collect();
        assert_eq!(
            all,
            vec![
                (XpKind::CPXp, vec![4]),
                (XpKind::CPXp, vec![2]),
                (XpKind::APXp, vec![2, 4]),
            ]
        );
        assert_eq!(e.sat_calls(), 4);
    }

    #[test]
    fn min_hitting_set_cases() {
        let sets = vec![set(&[1]), set(&[4]), set(&[5])];
        assert_eq!(min_hitting_set(&sets, &[]), Some(set(&[1, 4, 5])));
        assert_eq!(min_hitting_set(&sets, &[set(&[1, 4, 5])]), None);
        let sets = vec![set(&[1, 2]), set(&[1, 3]), set(&[2, 3])];
        assert_eq!(min_hitting_set(&sets, &[]), Some(set(&[1, 2])));
        assert_eq!(min_hitting_set(&sets, &[set(&[1, 2])]), Some(set(&[1, 3])));
    }
}
