//! Path-explanation redundancy: which paths test more features than their
//! explanation needs, and how much of the feature space they cover.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::AbductiveEnumerator;
use crate::error::{Error, Result};
use crate::explanation::Explanation;
use crate::hitting::{explain_mhs, DeletionOrder};
use crate::horn::encode::explain_horn;
use crate::target::Target;
use crate::traversal::explain_traversal;
use crate::tree::{DecisionTree, FeatureId, FeatureSet, Path, PathId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Mhs,
    Traversal,
    Horn,
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mhs" => Ok(Algo::Mhs),
            "traversal" => Ok(Algo::Traversal),
            "horn" => Ok(Algo::Horn),
            other => Err(Error::Invalid(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// One abductive explanation of `target` with the chosen algorithm, using
/// ascending deletion order.
pub fn explain(target: &Target, algo: Algo) -> Result<Explanation> {
    match algo {
        Algo::Mhs => Ok(explain_mhs(target, DeletionOrder::Ascending)),
        Algo::Traversal => Ok(explain_traversal(target, DeletionOrder::Ascending)),
        Algo::Horn => explain_horn(target),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XrpFlag {
    pub path: PathId,
    pub leaf: usize,
    pub tested: usize,
    pub apxp: Vec<FeatureId>,
    pub is_xrp: bool,
    /// Tested features outside the computed APXp.
    pub redundant_features: Vec<FeatureId>,
    /// `redundant_features` as a percentage of the tested features.
    pub redundant_pct: f64,
    /// Fraction of the feature space consistent with the path, in percent.
    pub coverage_pct: f64,
    /// With `all`: tested features that occur in no APXp of the path.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub never_in_apxp: Option<Vec<FeatureId>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RedundancyReport {
    pub depth: usize,
    pub nodes: usize,
    pub paths: usize,
    pub pct_redundant_paths: f64,
    pub pct_coverage: f64,
    pub min_pct: Option<f64>,
    pub max_pct: Option<f64>,
    pub avg_pct: Option<f64>,
    pub rows: Vec<XrpFlag>,
}

fn coverage(tree: &DecisionTree, path: &Path) -> f64 {
    path.rho_map()
        .iter()
        .map(|(&i, s)| s.len() as f64 / tree.domain(i).size() as f64)
        .product()
}

fn row(tree: &DecisionTree, path: &Path, algo: Algo, all: bool) -> Result<XrpFlag> {
    let target = Target::path(tree, path);
    let xp = explain(&target, algo)?;
    let kept = xp.feature_set();
    let redundant: Vec<FeatureId> = path.features.difference(&kept).copied().collect();
    let never_in_apxp = all.then(|| {
        let used: FeatureSet = AbductiveEnumerator::new(target.clone())
            .flat_map(|x| x.features)
            .collect();
        path.features.difference(&used).copied().collect()
    });
    Ok(XrpFlag {
        path: path.id,
        leaf: path.leaf(),
        tested: path.features.len(),
        apxp: xp.features,
        is_xrp: !redundant.is_empty(),
        redundant_pct: if path.features.is_empty() {
            0.0
        } else {
            redundant.len() as f64 / path.features.len() as f64 * 100.0
        },
        redundant_features: redundant,
        coverage_pct: coverage(tree, path) * 100.0,
        never_in_apxp,
    })
}

pub fn report(tree: &DecisionTree, algo: Algo, all: bool) -> Result<RedundancyReport> {
    let rows: Vec<XrpFlag> = tree
        .paths()
        .par_iter()
        .map(|p| row(tree, p, algo, all))
        .collect::<Result<_>>()?;
    let xrps: Vec<&XrpFlag> = rows.iter().filter(|r| r.is_xrp).collect();
    let fractions: Vec<f64> = xrps.iter().map(|r| r.redundant_pct).collect();
    let (min_pct, max_pct, avg_pct) = if fractions.is_empty() {
        (None, None, None)
    } else {
        (
            fractions.iter().copied().reduce(f64::min),
            fractions.iter().copied().reduce(f64::max),
            Some(fractions.iter().sum::<f64>() / fractions.len() as f64),
        )
    };
    Ok(RedundancyReport {
        depth: tree.depth(),
        nodes: tree.num_nodes(),
        paths: rows.len(),
        pct_redundant_paths: xrps.len() as f64 / rows.len() as f64 * 100.0,
        pct_coverage: xrps.iter().map(|r| r.coverage_pct).sum(),
        min_pct,
        max_pct,
        avg_pct,
        rows,
    })
}

fn pct(v: Option<f64>) -> String {
    v.map_or_else(|| "—".to_string(), |x| format!("{:.0}", x))
}

fn list(v: &[FeatureId]) -> String {
    let inner: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

impl RedundancyReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>4} {:>6} {:>6} {:>4} {:>4} {:>4} {:>4} {:>5}",
            "D", "#N", "#P", "%R", "%C", "%m", "%M", "%avg"
        );
        let _ = writeln!(
            out,
            "{:>4} {:>6} {:>6} {:>4} {:>4} {:>4} {:>4} {:>5}",
            self.depth,
            self.nodes,
            self.paths,
            pct(Some(self.pct_redundant_paths)),
            pct(Some(self.pct_coverage)),
            pct(self.min_pct),
            pct(self.max_pct),
            pct(self.avg_pct)
        );
        out.push('\n');
        let _ = writeln!(
            out,
            "{:>5} {:>5} {:>4}  {:<16} {:<16} {:>4}",
            "path", "leaf", "|Φ|", "APXp", "redundant", "%"
        );
        for r in &self.rows {
            let _ = write!(
                out,
                "{:>5} {:>5} {:>4}  {:<16} {:<16} {:>4}",
                r.path,
                r.leaf,
                r.tested,
                list(&r.apxp),
                list(&r.redundant_features),
                format!("{:.0}", r.redundant_pct)
            );
            if let Some(never) = &r.never_in_apxp {
                let _ = write!(out, "  never in any APXp: {}", list(never));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::gen::or_tree;
    use crate::samples::{fig1, fig2};

    #[test]
    fn fig2_longest_path_is_redundant() {
        let t = fig2();
        for algo in [Algo::Mhs, Algo::Traversal, Algo::Horn] {
            let r = report(&t, algo, false).unwrap();
            let p1 = t.path_by_leaf(15).unwrap().id;
            let row = &r.rows[p1 - 1];
            assert!(row.is_xrp);
            assert_eq!(row.redundant_features, vec![1, 2, 4]);
            assert!((row.redundant_pct - 60.0).abs() < 1e-9);
            assert_eq!(r.rows.len(), r.paths);
        }
    }

    #[test]
    fn coverage_sums_to_one_hundred() {
        let t = fig2();
        let total: f64 = t.paths().iter().map(|p| coverage(&t, p)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn xrp_rows_and_absent_stats() {
        let r = report(&fig1(), Algo::Mhs, true).unwrap();
        // <1,3,5,6> keeps {2,3} and <1,3,5,7> keeps {1,3}
        assert_eq!(r.rows.iter().filter(|x| x.is_xrp).count(), 2);
        assert_eq!(r.rows[3].never_in_apxp, Some(vec![2]));
        let stump = or_tree(1);
        let r = report(&stump, Algo::Traversal, false).unwrap();
        assert_eq!(r.pct_redundant_paths, 0.0);
        assert_eq!(r.min_pct, None);
        assert!(r.to_text().contains('—'));
    }

    #[test]
    fn or_comb_redundancy() {
        let m = 10;
        let r = report(&or_tree(m), Algo::Traversal, false).unwrap();
        let longest = &r.rows[m - 1];
        assert_eq!(longest.apxp, vec![m]);
        assert!((longest.redundant_pct - 90.0).abs() < 1e-9);
        let expect = (m - 1) as f64 / (m + 1) as f64 * 100.0;
        assert!((r.pct_redundant_paths - expect).abs() < 1e-9);
    }
}
