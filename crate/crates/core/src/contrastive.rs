//! All contrastive explanations in one pass over the opposing paths: each
//! opposing path contributes the features it disagrees on, and the
//! subset-minimal ones among those are the explanations.

use crate::error::Result;
use crate::explanation::{minimal_sets, Explanation, XpKind};
use crate::target::{Mode, Target};
use crate::tree::{DecisionTree, FeatureSet, Path, Point};

/// Subset-minimal conflict sets of the target, plus the number of
/// per-feature comparisons made.
pub fn contrastive_sets(target: &Target) -> (Vec<FeatureSet>, usize) {
    let mut comparisons = 0;
    let candidates = target
        .opposing()
        .map(|q| {
            comparisons += q.features.len();
            target.conflict(q)
        })
        .collect();
    (minimal_sets(candidates), comparisons)
}

pub fn explain_contrastive(target: &Target) -> Vec<Explanation> {
    let kind = XpKind::contrastive(target);
    contrastive_sets(target)
        .0
        .iter()
        .map(|s| Explanation::new(target, kind, s))
        .collect()
}

pub fn all_cpxps(tree: &DecisionTree, path: &Path) -> Vec<Explanation> {
    explain_contrastive(&Target::path(tree, path))
}

pub fn cxps_instance(tree: &DecisionTree, v: &Point) -> Result<Vec<Explanation>> {
    Ok(explain_contrastive(&Target::instance(
        tree,
        v,
        Mode::PathUnrestricted,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{fig1, fig2};

    fn features(xs: &[Explanation]) -> Vec<Vec<usize>> {
        xs.iter().map(|x| x.features.clone()).collect()
    }

    #[test]
    fn fig2_cpxps() {
        let t = fig2();
        let p4 = t.path_by_nodes(&[1, 2, 5, 9]).unwrap();
        let tg = Target::path(&t, p4);
        let raw: Vec<FeatureSet> = tg.conflicts();
        assert_eq!(
            raw,
            vec![FeatureSet::from([2]), FeatureSet::from([2, 4]), FeatureSet::from([4])]
        );
        assert_eq!(features(&all_cpxps(&t, p4)), vec![vec![2], vec![4]]);

        let q2 = t.path_by_leaf(14).unwrap();
        let x = all_cpxps(&t, q2);
        assert_eq!(features(&x), vec![vec![1], vec![4], vec![5]]);
        assert!(x.iter().all(|e| e.kind == XpKind::CPXp));
    }

    #[test]
    fn fig1_contrastive() {
        let t = fig1();
        let p2 = t.path_by_nodes(&[1, 3, 5, 7]).unwrap();
        assert_eq!(features(&all_cpxps(&t, p2)), vec![vec![1], vec![3]]);
        let cx = cxps_instance(&t, &Point::new(vec![1, 1, 1])).unwrap();
        assert_eq!(features(&cx), vec![vec![1], vec![3]]);
        assert_eq!(cx[0].kind, XpKind::CXp);
    }

    #[test]
    fn comparisons_are_bounded() {
        let t = fig2();
        for p in t.paths() {
            let tg = Target::path(&t, p);
            let (sets, cmp) = contrastive_sets(&tg);
            assert!(sets.len() <= tg.opposing().count());
            assert!(cmp <= t.num_features() * tg.opposing().count());
        }
    }
}
