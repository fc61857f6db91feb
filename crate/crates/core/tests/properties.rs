use std::collections::BTreeSet;

use proptest::prelude::*;

use qcov_core::homotopy::{Equivalence, HomotopyEngine};
use qcov_core::linalg::Mat;
use qcov_core::quiver::{Quiver, Walk};
use qcov_core::relations::{Ideal, Relation};
use qcov_core::rep_type::{classify_path_algebra, detect_wild_patterns, validate_embedding, validate_shape, wild_patterns, TypeClass};
use qcov_core::reps::{are_isomorphic, push_down, translate, Representation};
use qcov_core::scalar::{self, frac, int};
use qcov_core::universal_cover::{build_universal_cover, deck_action};

fn quiver_from_edges(n: usize, edges: &[(usize, usize)]) -> Quiver {
    let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let arrows: Vec<(String, String, String)> = edges.iter().enumerate().map(|(i, &(s, t))| (format!("e{i}"), vs[s].clone(), vs[t].clone())).collect();
    Quiver::new(&vs, &arrows).unwrap()
}

/// Star with arms of the given lengths around vertex 0.
fn star(arms: &[usize]) -> (usize, Vec<(usize, usize)>) {
    let mut n = 1;
    let mut edges = Vec::new();
    for &len in arms {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
    }
    (n, edges)
}

/// (graph, euclidean) for every Dynkin and Euclidean shape on at most 9
/// vertices, built from edge lists rather than from the classifier.
fn shapes() -> Vec<(usize, Vec<(usize, usize)>, bool)> {
    let mut out = Vec::new();
    for n in 1..=8 {
        let (v, e) = star(&[n - 1]);
        out.push((v, e, false));
    }
    for n in 4..=8 {
        let (v, e) = star(&[1, 1, n - 3]);
        out.push((v, e, false));
    }
    for arms in [[1, 2, 2], [1, 2, 3], [1, 2, 4]] {
        let (v, e) = star(&arms);
        out.push((v, e, false));
    }
    for n in 1..=7 {
        let e: Vec<(usize, usize)> = (0..=n).map(|i| (i, (i + 1) % (n + 1))).collect();
        out.push((n + 1, e, true));
    }
    for n in 4..=8 {
        let mut e: Vec<(usize, usize)> = (0..n - 2).map(|i| (i, i + 1)).collect();
        e.push((1, n - 1));
        e.push((n - 3, n));
        out.push((n + 1, e, true));
    }
    for arms in [[2, 2, 2], [1, 3, 3], [1, 2, 5]] {
        let (v, e) = star(&arms);
        out.push((v, e, true));
    }
    out
}

/// Follows `choices` through the quiver, taking one of the available steps
/// each time; stops early at a vertex with no steps.
fn walk_from(q: &Quiver, start: usize, choices: &[usize]) -> Walk {
    let mut w = Walk::trivial(start);
    for &c in choices {
        let steps = q.steps_from(q.walk_end(&w));
        if steps.is_empty() {
            break;
        }
        w.steps.push(steps[c % steps.len()]);
    }
    w
}

fn riedtmann_second() -> Ideal {
    let q = Quiver::new(&["1", "2"], &[("alpha", "1", "1"), ("beta", "1", "2"), ("gamma", "2", "1")]).unwrap();
    let p = |ids: &[&str]| q.path_from_ids(ids).unwrap();
    let gens = vec![
        Relation::new(&q, vec![(int(1), p(&["alpha", "alpha"])), (int(-1), p(&["beta", "gamma"]))]).unwrap(),
        Relation::monomial(&q, p(&["gamma", "beta"])).unwrap(),
    ];
    Ideal::new(q, gens, None, Some(4)).unwrap()
}

fn kronecker() -> Quiver {
    Quiver::new(&["x", "y"], &[("a", "y", "x"), ("b", "y", "x")]).unwrap()
}

fn small_int_mat(rows: usize, cols: usize, entries: &[i64]) -> Mat {
    let mut m = Mat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, int(entries[(i * cols + j) % entries.len()]));
        }
    }
    m
}

/// Representation of `q` supported on `support`, dims in 1..=2, entries
/// drawn cyclically from `entries`.
fn rep_on(q: &Quiver, support: &BTreeSet<usize>, dims_seed: &[usize], entries: &[i64]) -> Representation {
    let dims: Vec<usize> = (0..q.n_vertices()).map(|v| if support.contains(&v) { 1 + dims_seed[v % dims_seed.len()] % 2 } else { 0 }).collect();
    let mats: Vec<Mat> = (0..q.n_arrows())
        .map(|a| {
            let (s, t) = (dims[q.source(a)], dims[q.target(a)]);
            let rot: Vec<i64> = entries.iter().cycle().skip(a % entries.len()).take(entries.len()).copied().collect();
            small_int_mat(s, t, &rot)
        })
        .collect();
    Representation::new(q, dims, mats).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_ignores_orientation_and_names(
        idx in 0usize..64,
        flips in prop::collection::vec(any::<bool>(), 9),
        perm in Just((0..9usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let all = shapes();
        let (n, edges, euclidean) = &all[idx % all.len()];
        let canonical = classify_path_algebra(&quiver_from_edges(*n, edges));
        // Relabel by a permutation restricted to 0..n, keeping relative order.
        let order: Vec<usize> = perm.iter().copied().filter(|&i| i < *n).collect();
        let oriented: Vec<(usize, usize)> = edges
            .iter()
            .zip(&flips)
            .map(|(&(s, t), &f)| if f { (order[t], order[s]) } else { (order[s], order[t]) })
            .collect();
        let q = quiver_from_edges(*n, &oriented);
        let v = classify_path_algebra(&q);
        if q.has_oriented_cycle() {
            prop_assert_eq!(v.class, TypeClass::Inconclusive);
        } else {
            prop_assert_eq!(v.class, if *euclidean { TypeClass::Tame } else { TypeClass::Finite });
            prop_assert!(validate_shape(&q, &v).is_ok());
            if !quiver_from_edges(*n, edges).has_oriented_cycle() {
                prop_assert_eq!(&v.reason, &canonical.reason);
            }
        }
    }

    #[test]
    fn linear_algebra_rank_nullity(rows in 1usize..5, cols in 1usize..5, entries in prop::collection::vec(-3i64..=3, 16)) {
        let m = small_int_mat(rows, cols, &entries);
        let kernel = m.nullspace();
        prop_assert_eq!(m.rank() + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(m.mul(&Mat::column(v)).is_zero());
        }
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn scalars_round_trip_through_text(p in -1000i64..1000, q in 1i64..1000) {
        let x = frac(p, q);
        prop_assert_eq!(scalar::parse(&scalar::format(&x)).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn planted_wild_patterns_are_found(
        which in 0usize..6,
        opposite in any::<bool>(),
        extra_vertices in 0usize..3,
        extra in prop::collection::vec((0usize..8, 0usize..8), 0..5),
        perm in Just((0..8usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let (_, pat) = wild_patterns().swap_remove(which);
        let pat = if opposite { pat.opposite() } else { pat };
        let n = pat.n_vertices() + extra_vertices;
        let order: Vec<usize> = perm.iter().copied().filter(|&i| i < n).collect();
        let mut edges: Vec<(usize, usize)> = pat.arrows().iter().map(|a| (order[a.source], order[a.target])).collect();
        edges.extend(extra.iter().map(|&(s, t)| (s % n, t % n)));
        let host = quiver_from_edges(n, &edges);
        let found = detect_wild_patterns(&host);
        prop_assert!(found.is_some());
        prop_assert!(validate_embedding(&host, &found.unwrap()).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn covers_are_deterministic_and_grow_with_the_radius(
        n in 1usize..4,
        edges in prop::collection::vec((0usize..3, 0usize..3), 1..4),
        radius in 1usize..3,
    ) {
        let mut edges: Vec<(usize, usize)> = edges.iter().map(|&(s, t)| (s % n, t % n)).collect();
        // Connect the quiver with a path through all vertices.
        edges.extend((1..n).map(|i| (i - 1, i)));
        let q = quiver_from_edges(n, &edges);
        let ideal = Ideal::rad_squared(q, 4);
        let small = build_universal_cover(&ideal, 0, radius).unwrap();
        let again = build_universal_cover(&ideal, 0, radius).unwrap();
        let big = build_universal_cover(&ideal, 0, radius + 1).unwrap();
        prop_assert_eq!(small.cover.vertices(), again.cover.vertices());
        prop_assert_eq!(small.cover.arrows(), again.cover.arrows());
        let big_vs: BTreeSet<&String> = big.cover.vertices().iter().collect();
        prop_assert!(small.cover.vertices().iter().all(|v| big_vs.contains(v)));
        let big_as: BTreeSet<&String> = big.cover.arrows().iter().map(|a| &a.id).collect();
        prop_assert!(small.cover.arrows().iter().all(|a| big_as.contains(&a.id)));
        prop_assert!(small.projection.covering_report_on(Some(&small.interior())).is_covering);
    }

    #[test]
    fn exact_and_search_engines_agree(
        first in prop::collection::vec(0usize..4, 0..6),
        second in prop::collection::vec(0usize..4, 0..6),
    ) {
        let ideal = riedtmann_second();
        let exact = HomotopyEngine::new(&ideal).unwrap();
        prop_assert!(exact.is_exact());
        let search = exact.search_only();
        let q = &ideal.quiver;
        let (u, w) = (walk_from(q, 0, &first), walk_from(q, 0, &second));
        let e = exact.walks_equivalent(&u, &w);
        prop_assert_ne!(e, Equivalence::Undecided);
        let s = search.walks_equivalent(&u, &w);
        if s != Equivalence::Undecided {
            prop_assert_eq!(s, e, "{} vs {}", q.walk_str(&u), q.walk_str(&w));
        }
        prop_assert_eq!(exact.walks_equivalent(&u, &u), Equivalence::Yes);
    }

    #[test]
    fn push_down_is_additive_and_translation_invariant(
        support_a in prop::collection::btree_set(0usize..9, 1..4),
        support_b in prop::collection::btree_set(0usize..9, 1..4),
        dims in prop::collection::vec(0usize..4, 9),
        entries in prop::collection::vec(-2i64..=2, 1..7),
    ) {
        let q = kronecker();
        let cov = build_universal_cover(&Ideal::zero(q.clone(), 4), 0, 4).unwrap();
        let c = &cov.cover;
        // Vertices near the base, so a shift by one period stays inside.
        let near: Vec<usize> = (0..c.n_vertices()).filter(|&v| cov.distance[v] <= 2).collect();
        let pick = |s: &BTreeSet<usize>| s.iter().map(|&i| near[i % near.len()]).collect::<BTreeSet<_>>();
        let m = rep_on(c, &pick(&support_a), &dims, &entries);
        let n = rep_on(c, &pick(&support_b), &dims, &entries[1..].iter().chain(&entries[..1]).copied().collect::<Vec<_>>());
        let pi = &cov.projection;

        let sum = push_down(pi, &m.direct_sum(&n));
        let parts = push_down(pi, &m).direct_sum(&push_down(pi, &n));
        prop_assert_eq!(&sum.dims, &parts.dims);
        prop_assert!(are_isomorphic(&q, &sum, &parts).unwrap());

        let g = deck_action(&cov, &q.parse_walk("-a,b", Some(0)).unwrap()).unwrap();
        let shifted = translate(c, &m, &g).unwrap();
        prop_assert!(shifted.support() != m.support());
        prop_assert!(are_isomorphic(&q, &push_down(pi, &shifted), &push_down(pi, &m)).unwrap());
    }
}
