//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{fixture, random_point, set, small_tree, sorted};
use dtxp::horn::{horn_sat, is_minimal_correction_set, HornClause, HornProblem, HornResult};
use dtxp::oracle::gen::{gen_tree, or_tree, GenSpec};
use dtxp::oracle::{
    all_explanations_bruteforce, build_restricted, minimal_hitting_sets_bruteforce, Family,
};
use dtxp::traversal::explain_traversal_with_stats;
use dtxp::{
    all_cpxps, apxp_mhs, cxps_instance, enumerate_apxps, enumerate_dual, explain_horn,
    explain_mhs, explain_traversal, horn_maxsat, horn_mcs, report, smallest_apxp, Algo, Anchor,
    BySizeEnumerator, DecisionTree, DeletionOrder, FeatureSet, Mode, Point, Target, XpKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn features(xs: impl IntoIterator<Item = dtxp::Explanation>) -> Vec<FeatureSet> {
    sorted(xs.into_iter().map(|x| x.feature_set()).collect())
}

fn within(limit: Duration, start: Instant) {
    let took = start.elapsed();
    assert!(took < limit, "took {took:?}, limit {limit:?}");
}

fn fig1_exactness() {
    let start = Instant::now();
    let t = fixture("fig1.json");
    let p2 = t.path_by_nodes(&[1, 3, 5, 7]).unwrap();
    let q1 = t.path_by_nodes(&[1, 2]).unwrap();
    assert_eq!(apxp_mhs(&t, p2).feature_set(), set(&[1, 3]));
    assert_eq!(apxp_mhs(&t, q1).feature_set(), set(&[1]));

    let v = Point::new(vec![0, 1, 0]);
    let tg = Target::instance(&t, &v, Mode::PathUnrestricted).unwrap();
    let axps = features(BySizeEnumerator::new(tg.clone()));
    assert_eq!(axps, vec![set(&[1]), set(&[2, 3])]);
    let dual: Vec<_> = enumerate_dual(tg)
        .filter(|x| x.kind == XpKind::AXp)
        .map(|x| x.feature_set())
        .collect();
    assert_eq!(sorted(dual), axps);

    let cx = features(cxps_instance(&t, &Point::new(vec![1, 1, 1])).unwrap());
    assert_eq!(cx, vec![set(&[1]), set(&[3])]);
    within(Duration::from_secs(1), start);
}

fn fig2_exactness() {
    let start = Instant::now();
    let t = fixture("fig2.json");
    let p1 = t.path_by_nodes(&[1, 2, 4, 7, 10, 15]).unwrap();
    let p4 = t.path_by_nodes(&[1, 2, 5, 9]).unwrap();
    let q2 = t.path_by_nodes(&[1, 2, 4, 7, 10, 14]).unwrap();
    for algo in [Algo::Mhs, Algo::Traversal, Algo::Horn] {
        assert_eq!(dtxp::report::explain(&Target::path(&t, p1), algo).unwrap().feature_set(), set(&[3, 5]));
        assert_eq!(dtxp::report::explain(&Target::path(&t, p4), algo).unwrap().feature_set(), set(&[2, 4]));
    }
    assert_eq!(features(all_cpxps(&t, p4)), vec![set(&[2]), set(&[4])]);
    assert_eq!(features(all_cpxps(&t, q2)), vec![set(&[1]), set(&[4]), set(&[5])]);
    let mut e = enumerate_apxps(&t, q2);
    let got: Vec<_> = e.by_ref().map(|x| x.feature_set()).collect();
    assert_eq!(got, vec![set(&[1, 4, 5])]);
    assert_eq!(e.sat_calls(), 2);
    within(Duration::from_secs(1), start);
}

fn encoding_fidelity() {
    let t = fixture("fig2.json");
    let (p, map) = dtxp::encode_unrestricted(&t, &Point::new(vec![0, 0, 1, 0, 1]), 1).unwrap();
    let count = |p: &HornProblem, tag: &str| p.tagged(tag).len();
    let counts: Vec<usize> = ["H1", "H2", "H3", "H4", "H5"].iter().map(|g| count(&p, g)).collect();
    assert_eq!(counts, vec![1, 5, 3, 7, 7]);
    assert_eq!(p.soft.len(), 5);
    let b = |r: usize| map.b_var[r];
    let u = |i: usize| map.u_var[i];
    let mut h5: Vec<HornClause> = p.tagged("H5").into_iter().cloned().collect();
    h5.sort();
    let mut expect = vec![
        HornClause::implies(vec![b(1), u(1)], b(3)),
        HornClause::implies(vec![b(2), u(2)], b(5)),
        HornClause::implies(vec![b(4), u(3)], b(6)),
        HornClause::implies(vec![b(7), u(4)], b(11)),
        HornClause::implies(vec![b(10), u(5)], b(14)),
        HornClause::implies(vec![b(5), u(4)], b(9)),
        HornClause::implies(vec![b(8), u(5)], b(12)),
    ];
    expect.sort();
    assert_eq!(h5, expect);

    let p4 = t.path_by_nodes(&[1, 2, 5, 9]).unwrap();
    let (pp, map) = dtxp::encode_path(&t, p4);
    let h6: Vec<HornClause> = pp.tagged("H6").into_iter().cloned().collect();
    assert_eq!(h6, vec![HornClause::fact(map.u_var[3]), HornClause::fact(map.u_var[5])]);
    assert_eq!(count(&pp, "H4"), 10);
    assert_eq!(count(&pp, "H5"), 4);
}

fn cross_algorithm_agreement() {
    let start = Instant::now();
    for seed in 0..500 {
        let t = small_tree(seed);
        for p in t.paths() {
            let tg = Target::path(&t, p);
            let a = explain_mhs(&tg, DeletionOrder::Ascending);
            let b = explain_traversal(&tg, DeletionOrder::Ascending);
            let c = explain_horn(&tg).unwrap();
            assert_eq!(a, b, "seed {seed} path {}", p.id);
            assert_eq!(a, c, "seed {seed} path {}", p.id);
            let all = all_explanations_bruteforce(&t, &Anchor::Path(p.id), Mode::Path, Family::Abductive)
                .unwrap();
            assert!(all.contains(&a.feature_set()), "seed {seed} path {}", p.id);
        }
    }
    within(Duration::from_secs(60), start);
}

fn duality_suites() {
    for seed in 0..500 {
        let t = small_tree(seed);
        for p in t.paths() {
            let cpxps = features(all_cpxps(&t, p));
            let apxps = features(enumerate_apxps(&t, p));
            assert_eq!(
                minimal_hitting_sets_bruteforce(&cpxps, &p.features),
                apxps,
                "seed {seed} path {}",
                p.id
            );
            let ua: FeatureSet = apxps.iter().flatten().copied().collect();
            let uc: FeatureSet = cpxps.iter().flatten().copied().collect();
            assert_eq!(ua, uc, "seed {seed} path {}", p.id);

            let (ab, co): (Vec<_>, Vec<_>) =
                enumerate_dual(Target::path(&t, p)).partition(|x| x.kind == XpKind::APXp);
            assert_eq!(features(ab), apxps);
            assert_eq!(features(co), cpxps);
        }
    }
}

fn or_scaling() {
    for m in [3usize, 5, 10, 16] {
        let t = or_tree(m);
        let p = t.path(m).unwrap();
        assert_eq!(p.len(), m);
        let tg = Target::path(&t, p);
        for algo in [Algo::Mhs, Algo::Traversal, Algo::Horn] {
            assert_eq!(dtxp::report::explain(&tg, algo).unwrap().features, vec![m]);
        }
        let r = report(&t, Algo::Traversal, false).unwrap();
        let expect = (m - 1) as f64 / m as f64 * 100.0;
        assert!((r.rows[m - 1].redundant_pct - expect).abs() < 1e-9);
    }
}

fn smallest_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for seed in 0..200 {
        let t = small_tree(10_000 + seed);
        for p in t.paths() {
            let min = enumerate_apxps(&t, p).map(|x| x.len()).min().unwrap();
            assert_eq!(smallest_apxp(&t, p).len(), min, "seed {seed} path {}", p.id);
        }
        let v = random_point(&t, &mut rng);
        let tg = Target::instance(&t, &v, Mode::PathUnrestricted).unwrap();
        let (prob, _) = dtxp::encode(&tg);
        let best = horn_maxsat(&prob).unwrap();
        let brute = all_explanations_bruteforce(&t, tg.anchor(), Mode::PathUnrestricted, Family::Abductive)
            .unwrap()
            .iter()
            .map(|s| s.len())
            .min()
            .unwrap();
        assert_eq!(best.falsified.len(), brute, "seed {seed}");
    }
}

fn random_horn(rng: &mut ChaCha8Rng) -> (usize, Vec<HornClause>) {
    let n = rng.gen_range(1..=15);
    let clauses = (0..rng.gen_range(0..=2 * n))
        .map(|_| {
            let body: Vec<usize> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(1..=n)).collect();
            let head = rng.gen_bool(0.7).then(|| rng.gen_range(1..=n));
            HornClause { body, head }
        })
        .collect();
    (n, clauses)
}

/// Least model by truth table: the intersection of all models.
fn truth_table(n: usize, clauses: &[HornClause], assumed: u32) -> Option<u32> {
    let enc: Vec<(u32, Option<u32>)> = clauses
        .iter()
        .map(|c| (c.body.iter().fold(0, |m, v| m | 1 << (v - 1)), c.head.map(|h| 1 << (h - 1))))
        .collect();
    let mut least: Option<u32> = None;
    for a in 0..1u32 << n {
        if a & assumed != assumed {
            continue;
        }
        let ok = enc.iter().all(|&(b, h)| a & b != b || h.is_some_and(|h| a & h != 0));
        if ok {
            least = Some(least.map_or(a, |l| l & a));
        }
    }
    least
}

fn horn_engine() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10_000 {
        let (n, clauses) = random_horn(&mut rng);
        let assumptions: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.2)).collect();
        let assumed = assumptions.iter().fold(0u32, |m, v| m | 1 << (v - 1));
        let got = horn_sat(n, &clauses, &assumptions);
        match (got, truth_table(n, &clauses, assumed)) {
            (HornResult::Sat(model), Some(least)) => {
                let m = model.iter().fold(0u32, |acc, v| acc | 1 << (v - 1));
                assert_eq!(m, least);
            }
            (HornResult::Unsat(_), None) => {}
            (got, want) => panic!("engine {got:?} vs table {want:?}"),
        }

        let mut p = HornProblem::new(n);
        p.hard = clauses;
        p.hard_tags = vec![String::new(); p.hard.len()];
        p.soft = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
        if let Ok(r) = horn_mcs(&p) {
            assert!(is_minimal_correction_set(&p, &r.mcs));
        }
    }
}

fn performance() {
    let t = gen_tree(&GenSpec {
        features: 30,
        max_domain: 3,
        depth: 30,
        classes: 2,
        seed: 9,
        max_nodes: 500,
        leaf_prob: 0.05,
        ordinal_fraction: 0.2,
    });
    assert!(t.num_nodes() >= 450, "only {} nodes", t.num_nodes());
    let mut worst_traversal = Duration::ZERO;
    let mut worst_horn = Duration::ZERO;
    let mut paths: Vec<_> = t.paths().iter().collect();
    paths.sort_by_key(|p| std::cmp::Reverse(p.len()));
    for p in paths.into_iter().take(25) {
        let tg = Target::path(&t, p);
        let start = Instant::now();
        let (x, stats) = explain_traversal_with_stats(&tg, DeletionOrder::Ascending);
        worst_traversal = worst_traversal.max(start.elapsed());
        assert!(stats.node_visits <= t.num_nodes() * (t.num_features() + 1));
        let start = Instant::now();
        let y = explain_horn(&tg).unwrap();
        worst_horn = worst_horn.max(start.elapsed());
        assert_eq!(x, y);
    }
    assert!(worst_traversal < Duration::from_millis(10), "traversal {worst_traversal:?}");
    assert!(worst_horn < Duration::from_millis(50), "horn {worst_horn:?}");
}

fn restricted_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut triples = 0;
    let mut seed = 20_000;
    while triples < 100 {
        seed += 1;
        let t: DecisionTree = small_tree(seed);
        let v = random_point(&t, &mut rng);
        let anchor = Anchor::Instance(v.clone());
        let axps = all_explanations_bruteforce(&t, &anchor, Mode::PathUnrestricted, Family::Abductive).unwrap();
        let cxps = all_explanations_bruteforce(&t, &anchor, Mode::PathUnrestricted, Family::Contrastive).unwrap();
        let base = &axps[rng.gen_range(0..axps.len())];
        let z: FeatureSet = t
            .feature_ids()
            .filter(|i| base.contains(i) || rng.gen_bool(0.4))
            .collect();
        let k = build_restricted(&t, &v, &z).unwrap();
        let lifted: Vec<FeatureSet> = sorted(k.axps().iter().map(|x| k.lift(x)).collect());
        let inside: Vec<FeatureSet> = axps.iter().filter(|x| x.is_subset(&z)).cloned().collect();
        assert_eq!(lifted, sorted(inside), "seed {seed}");
        for y in k.cxps() {
            let y = k.lift(&y);
            assert!(cxps.iter().any(|c| y.is_subset(c)), "seed {seed}: {y:?}");
        }
        triples += 1;
    }
}

fn main() {
    let criteria: [(&str, fn()); 10] = [
        ("fixture exactness on the three-feature tree", fig1_exactness),
        ("fixture exactness on the five-feature tree", fig2_exactness),
        ("Horn encoding clause groups", encoding_fidelity),
        ("cross-algorithm agreement on 500 random trees", cross_algorithm_agreement),
        ("abductive/contrastive duality on 500 random trees", duality_suites),
        ("OR-function comb redundancy", or_scaling),
        ("smallest explanations on 200 random trees", smallest_consistency),
        ("Horn engine on 10000 random formulas", horn_engine),
        ("performance on a 500-node, 30-feature tree", performance),
        ("restricted classifier duality on 100 triples", restricted_duality),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check));
        let took = start.elapsed();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({took:.2?})", k + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {:>2}: FAIL  {name} ({took:.2?}): {msg}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
