//! Acceptance run over the fixture corpus. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.
//!
//! Matrices follow the library's convention: for an arrow s -> t the matrix
//! has shape dims[s] x dims[t] and acts on row vectors from the space at t.
//! Displayed maps go the other way, so a displayed matrix appears transposed.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Debug;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use qcov::io::{group_from_json, load_bound_quiver, load_rep, GroupJson, Input};
use qcov_core::covering::BoundQuiverMorphism;
use qcov_core::group_action::{automorphisms, find_isomorphism, is_galois_covering, ActionPresentation, PartialAuto, DEFAULT_SEARCH_CAP};
use qcov_core::homotopy::{Equivalence, HomotopyEngine};
use qcov_core::linalg::{Mat, RowSpace};
use qcov_core::quiver::{Path, Quiver, Step, Walk, V};
use qcov_core::relations::{Ideal, Relation};
use qcov_core::rep_type::{
    classify_path_algebra, detect_wild_patterns, e7tt_tree_certificate, validate_embedding, validate_shape, validate_tree, TypeClass,
};
use qcov_core::reps::{
    are_isomorphic, check_rep, hom_basis, hom_dim, is_indecomposable, is_morphism, pull_up, push_down, push_down_morphism, translate,
    Representation,
};
use qcov_core::scalar::{int, Scalar};
use qcov_core::strings_bands::{band_module, canonical_band, enumerate_bands, enumerate_strings, string_module};
use qcov_core::universal_cover::{build_universal_cover, build_universal_cover_with, deck_action, TruncatedCover};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

trait Ctx<T> {
    fn ctx(self) -> Result<T, String>;
}

impl<T, E: Debug> Ctx<T> for Result<T, E> {
    fn ctx(self) -> Result<T, String> {
        self.map_err(|e| format!("{e:?}"))
    }
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn load(name: &str) -> Result<(Quiver, Ideal), String> {
    let input = Input::read(&fixture(name)).ctx()?;
    let (q, i, _) = load_bound_quiver(&input).ctx()?;
    Ok((q, i))
}

fn qcov_json(args: &[&str]) -> Result<Value, String> {
    let argv = ["qcov", "--json"].iter().chain(args).map(|s| s.to_string());
    let out = qcov::run(argv);
    ensure!(out.code == 0, "qcov {} exited {}: {}", args.join(" "), out.code, out.stderr.trim());
    serde_json::from_str(&out.stdout).ctx()
}

fn vertex(q: &Quiver, id: &str) -> Result<V, String> {
    q.vertex(id).ok_or_else(|| format!("no vertex {id}"))
}

fn walk(q: &Quiver, s: &str, base: V) -> Result<Walk, String> {
    q.parse_walk(s, Some(base)).ctx()
}

/// A cover that is a line: its vertices end to end, and between consecutive
/// vertices the arrow with its direction (true when it points forward).
struct LineOrder {
    vertices: Vec<V>,
    steps: Vec<(usize, bool)>,
}

fn line_order(c: &Quiver) -> Result<LineOrder, String> {
    let nbrs = |v: V| -> Vec<(usize, V, bool)> {
        let mut n: Vec<(usize, V, bool)> = c.out_arrows(v).iter().map(|&a| (a, c.target(a), true)).collect();
        n.extend(c.in_arrows(v).iter().map(|&a| (a, c.source(a), false)));
        n
    };
    ensure!(c.n_arrows() + 1 == c.n_vertices(), "not a tree: {} vertices, {} arrows", c.n_vertices(), c.n_arrows());
    ensure!((0..c.n_vertices()).all(|v| nbrs(v).len() <= 2), "a vertex has degree above 2");
    let end = (0..c.n_vertices()).find(|&v| nbrs(v).len() <= 1).ok_or("no end vertex")?;
    let mut vertices = vec![end];
    let mut steps = Vec::new();
    let mut prev_arrow = None;
    loop {
        let v = *vertices.last().unwrap();
        let Some(&(a, w, fwd)) = nbrs(v).iter().find(|(a, _, _)| Some(*a) != prev_arrow) else { break };
        vertices.push(w);
        steps.push((a, fwd));
        prev_arrow = Some(a);
    }
    ensure!(vertices.len() == c.n_vertices(), "cover is not connected as a line");
    Ok(LineOrder { vertices, steps })
}

impl LineOrder {
    fn reversed(&self) -> LineOrder {
        LineOrder {
            vertices: self.vertices.iter().rev().copied().collect(),
            steps: self.steps.iter().rev().map(|&(a, f)| (a, !f)).collect(),
        }
    }

    fn index(&self, v: V) -> usize {
        self.vertices.iter().position(|&x| x == v).unwrap()
    }
}

fn labels(cov: &TruncatedCover, line: &LineOrder) -> Vec<(String, bool)> {
    let q = &cov.projection.dst;
    line.steps.iter().map(|&(a, f)| (q.aid(cov.projection.amap[a]).to_string(), f)).collect()
}

/// Restriction of a representation to a set of vertices.
fn restrict(q: &Quiver, m: &Representation, window: &BTreeSet<V>) -> Representation {
    let dims = (0..q.n_vertices()).map(|v| if window.contains(&v) { m.dims[v] } else { 0 }).collect();
    let mut out = Representation::with_dims(q, dims);
    for a in 0..q.n_arrows() {
        if window.contains(&q.source(a)) && window.contains(&q.target(a)) {
            out.mats[a] = m.mats[a].clone();
        }
    }
    out
}

fn power(q: &Quiver, w: &Walk, k: usize) -> Walk {
    (0..k).fold(Walk::trivial(w.start), |acc, _| q.walk_concat(&acc, w))
}

// ---------------------------------------------------------------------------
// Independent model of a quotient kQ/I restricted to paths of length <= L.

struct QuotientModel {
    /// Paths of length 1..=L, grouped by (source, target).
    paths: BTreeMap<(V, V), Vec<Path>>,
    /// Span of the ideal inside each (source, target) block.
    ideal: BTreeMap<(V, V), RowSpace>,
}

fn all_paths(q: &Quiver, max_len: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut layer: Vec<Path> = (0..q.n_vertices()).map(Path::trivial).collect();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &layer {
            for &a in q.out_arrows(q.path_end(p)) {
                let mut arrows = p.arrows.clone();
                arrows.push(a);
                next.push(Path { start: p.start, arrows });
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl QuotientModel {
    fn new(q: &Quiver, gens: &[Relation], nilpotency: Option<usize>, l: usize) -> QuotientModel {
        let mut paths: BTreeMap<(V, V), Vec<Path>> = BTreeMap::new();
        let everything = all_paths(q, l);
        for p in &everything {
            paths.entry((p.start, q.path_end(p))).or_default().push(p.clone());
        }
        let mut ideal: BTreeMap<(V, V), RowSpace> = paths.iter().map(|(&k, ps)| (k, RowSpace::new(ps.len()))).collect();
        let col = |key: (V, V), p: &Path| paths[&key].iter().position(|x| x == p).unwrap();
        let with_trivial: Vec<Path> = (0..q.n_vertices()).map(Path::trivial).chain(everything.iter().cloned()).collect();
        for g in gens {
            let glen = g.terms.iter().map(|(_, p)| p.len()).max().unwrap();
            for u in with_trivial.iter().filter(|u| q.path_end(u) == g.source) {
                for v in with_trivial.iter().filter(|v| v.start == g.target) {
                    if u.len() + glen + v.len() > l {
                        continue;
                    }
                    let key = (u.start, q.path_end(v));
                    let mut row = vec![int(0); paths[&key].len()];
                    for (c, p) in &g.terms {
                        let full = u.then(p).then(v);
                        row[col(key, &full)] += c;
                    }
                    ideal.get_mut(&key).unwrap().insert(&row);
                }
            }
        }
        if let Some(n) = nilpotency {
            for p in everything.iter().filter(|p| p.len() >= n) {
                let key = (p.start, q.path_end(p));
                let mut row = vec![int(0); paths[&key].len()];
                row[col(key, p)] = int(1);
                ideal.get_mut(&key).unwrap().insert(&row);
            }
        }
        QuotientModel { paths, ideal }
    }

    fn from_ideal(i: &Ideal) -> QuotientModel {
        QuotientModel::new(&i.quiver, &i.generators, i.nilpotency_bound, i.truncation_length)
    }

    /// dim e_x (kQ/I) e_y, counting the trivial path when x = y.
    fn dim(&self, x: V, y: V) -> usize {
        let nontrivial = match self.paths.get(&(x, y)) {
            Some(ps) => ps.len() - self.ideal[&(x, y)].dim(),
            None => 0,
        };
        nontrivial + usize::from(x == y)
    }

    fn image(&self, key: (V, V), i: usize) -> Vec<Scalar> {
        let mut row = vec![int(0); self.paths[&key].len()];
        row[i] = int(1);
        self.ideal[&key].reduce(&row)
    }

    /// Ordered pairs of paths lying together in a minimal relation: the
    /// supports of minimal relations are the circuits of the path images in
    /// the quotient. Circuits up to `max_size` paths are enumerated.
    fn relation_pairs(&self, max_size: usize) -> BTreeSet<(Path, Path)> {
        let mut out = BTreeSet::new();
        for (&key, ps) in &self.paths {
            let images: Vec<Vec<Scalar>> = (0..ps.len()).map(|i| self.image(key, i)).collect();
            let live: Vec<usize> = (0..ps.len()).filter(|&i| images[i].iter().any(|x| *x != int(0))).collect();
            let rank = |idx: &[usize]| -> usize {
                if idx.is_empty() {
                    return 0;
                }
                let rows: Vec<Vec<Scalar>> = idx.iter().map(|&i| images[i].clone()).collect();
                Mat::from_rows(rows.len(), ps.len(), rows).rank()
            };
            for size in 2..=max_size.min(live.len()) {
                for subset in subsets(&live, size) {
                    if rank(&subset) != size - 1 {
                        continue;
                    }
                    let minimal = (0..size).all(|k| {
                        let rest: Vec<usize> = subset.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &i)| i).collect();
                        rank(&rest) == size - 1
                    });
                    if minimal {
                        for &i in &subset {
                            for &j in &subset {
                                if i != j {
                                    out.insert((ps[i].clone(), ps[j].clone()));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criteria

fn c1_loops_over_bouquet() -> Check {
    let (src, dst, map) = (fixture("loops3.json"), fixture("bouquet2.json"), fixture("loops3_to_bouquet2.map.json"));
    let rel = qcov_json(&["check-relcovering", "--src", &src, "--dst", &dst, "--map", &map])?;
    ensure!(rel["verdict"] == Value::Bool(true), "check-relcovering verdict {}", rel["verdict"]);
    let gal = qcov_json(&["check-galois", "--src", &src, "--dst", &dst, "--map", &map])?;
    ensure!(gal["verdict"] == Value::Bool(false), "check-galois verdict {}", gal["verdict"]);

    // Oracle: a Galois covering with 3-element fibres needs 3 automorphisms
    // over the identity of the base; enumerate all automorphisms directly.
    let (q, i) = load("loops3.json")?;
    let (qb, _) = load("bouquet2.json")?;
    let m: qcov::io::MorphismJson = Input::read(&map).ctx()?.parse().ctx()?;
    let pi = qcov::io::morphism_from_json("map", &q, &qb, &m).ctx()?;
    let autos = automorphisms(&q, Some(&i), DEFAULT_SEARCH_CAP).ctx()?;
    ensure!(autos.is_complete(), "automorphism enumeration hit its cap");
    let over_identity = autos
        .value()
        .iter()
        .filter(|g| {
            (0..q.n_vertices()).all(|v| pi.vmap[g.vmap[v].unwrap()] == pi.vmap[v]) && (0..q.n_arrows()).all(|a| pi.amap[g.amap[a].unwrap()] == pi.amap[a])
        })
        .count();
    ensure!(over_identity < 3, "{over_identity} deck transformations found");
    Ok(())
}

fn c2_kronecker_cover() -> Check {
    let k = fixture("kronecker.json");
    let report = qcov_json(&["cover", "--quiver", &k, "--radius", "4"])?;
    let golden: Value = serde_json::from_str(include_str!("golden/cover_kronecker_r4.json")).ctx()?;
    ensure!(report == golden, "cover report differs from the golden file");

    let (q, i) = load("kronecker.json")?;
    let x = vertex(&q, "x")?;
    let cov = build_universal_cover(&i, x, 4).ctx()?;
    let c = &cov.cover;
    ensure!(c.n_vertices() == 9 && c.n_arrows() == 8, "{} vertices, {} arrows", c.n_vertices(), c.n_arrows());
    let mut line = line_order(c)?;
    let centre = line.index(cov.base);
    ensure!(centre == 4, "base is not the middle of the zigzag");
    if labels(&cov, &line)[4].0 != "a" {
        line = line.reversed();
    }
    // Positions -4..4 left to right: labels alternate a, b starting with a,
    // and every arrow runs from an odd position (over y) to an even one.
    for (k, (label, fwd)) in labels(&cov, &line).iter().enumerate() {
        let want = if k % 2 == 0 { "a" } else { "b" };
        ensure!(label == want, "arrow {k} over {label}, expected {want}");
        let odd_first = k % 2 == 1;
        ensure!(*fwd == odd_first, "arrow {k} points the wrong way");
    }
    for (k, &v) in line.vertices.iter().enumerate() {
        let over = q.vid(cov.projection.vmap[v]);
        ensure!(over == if k % 2 == 0 { "x" } else { "y" }, "position {} lies over {over}", k as i64 - 4);
    }

    let pi1 = qcov_json(&["pi1", "--quiver", &k])?;
    ensure!(pi1["verdict"] == "infinite_cyclic", "pi1 verdict {}", pi1["verdict"]);

    // b a^-1 read right to left: first a^-1, then b. It shifts by -2.
    let g = deck_action(&cov, &walk(&q, "-a,b", x)?).ctx()?;
    let mut defined = 0;
    for (k, &v) in line.vertices.iter().enumerate() {
        if let Some(w) = g.vmap[v] {
            ensure!(line.index(w) + 2 == k, "deck maps position {} to {}", k as i64 - 4, line.index(w) as i64 - 4);
            defined += 1;
        }
    }
    ensure!(defined == 7, "deck transformation defined on {defined} vertices");
    Ok(())
}

fn c3_square() -> Check {
    let (q, i1) = load("square_mono.json")?;
    let x = vertex(&q, "x")?;
    let cov = build_universal_cover(&i1, x, 4).ctx()?;
    ensure!(cov.cover.n_vertices() == 9, "radius-4 cover has {} vertices", cov.cover.n_vertices());
    let line = line_order(&cov.cover)?;
    // Left to right: alpha1 ->, alpha2 ->, alpha4 <-, alpha3 <-, repeated.
    let period = [("alpha1", true), ("alpha2", true), ("alpha4", false), ("alpha3", false)];
    let fits = |l: &LineOrder| {
        let ls = labels(&cov, l);
        (0..4).any(|shift| ls.iter().enumerate().all(|(k, (a, f))| (a.as_str(), *f) == period[(k + shift) % 4]))
    };
    ensure!(fits(&line) || fits(&line.reversed()), "labels {:?} are not the periodic zigzag", labels(&cov, &line));
    let rel = &i1.generators[0];
    ensure!(!cov.ideal.generators.is_empty(), "no lifted relations");
    for g in &cov.ideal.generators {
        ensure!(g.terms.len() == 1, "lifted relation {} is not monomial", g.display(&cov.cover));
        ensure!(g.map(&cov.projection).normalized() == rel.normalized(), "lifted relation {} is not over alpha2 alpha1", g.display(&cov.cover));
    }
    let lifts = cov.cover.arrows().iter().filter(|a| q.aid(cov.projection.amap[cov.cover.arrow(&a.id).unwrap()]) == "alpha1").count();
    let complete_lifts = (0..cov.cover.n_arrows())
        .filter(|&a| q.aid(cov.projection.amap[a]) == "alpha1")
        .filter(|&a| cov.cover.out_arrows(cov.cover.target(a)).iter().any(|&b| q.aid(cov.projection.amap[b]) == "alpha2"))
        .count();
    ensure!(cov.ideal.generators.len() == complete_lifts, "{} lifted relations for {complete_lifts} lifted paths", cov.ideal.generators.len());
    ensure!(lifts >= complete_lifts, "inconsistent lift count");

    let (q2, i2) = load("square_comm.json")?;
    let cov2 = build_universal_cover(&i2, vertex(&q2, "x")?, 4).ctx()?;
    let ids: BTreeSet<&str> = cov2.cover.vertices().iter().map(|s| s.as_str()).collect();
    let want: BTreeSet<&str> = ["x", "x:alpha1", "x:alpha1,alpha2", "x:alpha3"].into();
    ensure!(ids == want, "cover vertices {ids:?}");
    ensure!(cov2.frontier.is_empty(), "cover has a frontier");
    let iso = find_isomorphism(&cov2.cover, Some(&cov2.ideal), &q2, Some(&i2), DEFAULT_SEARCH_CAP).ctx()?;
    ensure!(iso.value().is_some(), "cover is not isomorphic to (Q, I2)");
    Ok(())
}

/// The two-row ladder: row 0 has vertex 1 at odd columns, row 1 at even
/// columns; beta and gamma run along rows, alpha from a 1 diagonally to the
/// 1 in the next column of the other row.
fn ladder_ball(radius: usize) -> (BTreeMap<&'static str, usize>, BTreeMap<&'static str, usize>, Vec<usize>) {
    type Node = (i64, i64);
    let is_one = |(r, c): Node| (r + c).rem_euclid(2) == 1;
    let out = |n: Node| -> Vec<(&'static str, Node)> {
        let (r, c) = n;
        if is_one(n) {
            vec![("beta", (r, c + 1)), ("alpha", (1 - r, c + 1))]
        } else {
            vec![("gamma", (r, c + 1))]
        }
    };
    let inc = |n: Node| -> Vec<(&'static str, Node)> {
        let (r, c) = n;
        let mut v = Vec::new();
        for src in [(r, c - 1), (1 - r, c - 1)] {
            for (l, t) in out(src) {
                if t == n {
                    v.push((l, src));
                }
            }
        }
        v
    };
    let start: Node = (0, 1);
    let mut dist: BTreeMap<Node, usize> = BTreeMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        let d = dist[&n];
        if d == radius {
            continue;
        }
        for (_, m) in out(n).into_iter().chain(inc(n)) {
            if !dist.contains_key(&m) {
                dist.insert(m, d + 1);
                queue.push_back(m);
            }
        }
    }
    let mut vcount = BTreeMap::new();
    let mut acount = BTreeMap::new();
    let mut layers = vec![0; radius + 1];
    for (&n, &d) in &dist {
        *vcount.entry(if is_one(n) { "1" } else { "2" }).or_default() += 1;
        layers[d] += 1;
        for (l, m) in out(n) {
            if dist.contains_key(&m) {
                *acount.entry(l).or_default() += 1;
            }
        }
    }
    (vcount, acount, layers)
}

fn c4_riedtmann() -> Check {
    let p1 = qcov_json(&["pi1", "--quiver", &fixture("riedtmann_I1.json")])?;
    ensure!(p1["verdict"] == "trivial", "pi1 for I1: {}", p1["verdict"]);
    let p2 = qcov_json(&["pi1", "--quiver", &fixture("riedtmann_I2.json")])?;
    ensure!(p2["verdict"] == "infinite_cyclic", "pi1 for I2: {}", p2["verdict"]);
    let text = p2["result"]["verdict"].as_str().unwrap_or_default();
    ensure!(text.ends_with("generator [alpha]"), "pi1 for I2: {text}");

    let (q, i2) = load("riedtmann_I2.json")?;
    let cov = build_universal_cover(&i2, vertex(&q, "1")?, 3).ctx()?;
    let c = &cov.cover;
    let mut vcount: BTreeMap<&str, usize> = BTreeMap::new();
    for v in 0..c.n_vertices() {
        *vcount.entry(q.vid(cov.projection.vmap[v])).or_default() += 1;
    }
    let mut acount: BTreeMap<&str, usize> = BTreeMap::new();
    for a in 0..c.n_arrows() {
        *acount.entry(q.aid(cov.projection.amap[a])).or_default() += 1;
    }
    let mut layers = vec![0; 4];
    for &d in &cov.distance {
        layers[d] += 1;
    }
    let (mv, ma, ml) = ladder_ball(3);
    ensure!(vcount == mv, "vertices by label {vcount:?}, ladder {mv:?}");
    ensure!(acount == ma, "arrows by label {acount:?}, ladder {ma:?}");
    ensure!(layers == ml, "vertices by distance {layers:?}, ladder {ml:?}");
    Ok(())
}

fn c5_push_pull() -> Check {
    let (q, i) = load("kronecker.json")?;
    let x = vertex(&q, "x")?;
    let cov = build_universal_cover(&i, x, 4).ctx()?;
    let c = &cov.cover;
    let v = load_rep(&Input::read(&fixture("kronecker_V.json")).ctx()?, &q).ctx()?;
    let all: BTreeSet<V> = (0..c.n_vertices()).collect();
    let up = pull_up(&cov.projection, &v, &all);
    let mut want = Representation::with_dims(c, vec![1; c.n_vertices()]);
    for a in 0..c.n_arrows() {
        let entry = if q.aid(cov.projection.amap[a]) == "a" { 1 } else { 0 };
        want.mats[a] = Mat::from_ints(&[&[entry]]);
    }
    ensure!(up.rep == want, "pull-up differs from the alternating 1/0 zigzag");
    ensure!(up.windowed, "pull-up of an infinite module not flagged as windowed");

    let dims = (0..c.n_vertices()).map(|u| usize::from(cov.projection.vmap[u] == x)).collect();
    let n = Representation::with_dims(c, dims);
    let down = push_down(&cov.projection, &n);
    let simple = Representation::simple(&q, x);
    let five = (1..5).fold(simple.clone(), |acc, _| acc.direct_sum(&simple));
    ensure!(down == five, "push-down of N has dimension vector {:?}", down.dims);
    Ok(())
}

fn c6_not_full() -> Check {
    let (q, i) = load("loop_rad2.json")?;
    let cov = build_universal_cover(&i, 0, 3).ctx()?;
    let c = &cov.cover;
    let next = c.target(c.out_arrows(cov.base)[0]);
    let m = Representation::simple(c, cov.base);
    let n = Representation::simple(c, next);
    ensure!(hom_dim(c, &m, &n).ctx()? == 0, "Hom(M, N) is nonzero");
    let (fm, fn_) = (push_down(&cov.projection, &m), push_down(&cov.projection, &n));
    ensure!(hom_dim(&q, &fm, &fn_).ctx()? == 1, "Hom(F M, F N) is not one-dimensional");

    let v = Representation::simple(&q, 0);
    let mut last = 0;
    for radius in 1..=4 {
        let cov = build_universal_cover(&i, 0, radius).ctx()?;
        let all: BTreeSet<V> = (0..cov.cover.n_vertices()).collect();
        let up = pull_up(&cov.projection, &v, &all);
        ensure!(up.windowed, "pull-up at radius {radius} not flagged");
        let end = hom_dim(&cov.cover, &up.rep, &up.rep).ctx()?;
        ensure!(end == 2 * radius + 1, "End of the pull-up at radius {radius} has dimension {end}");
        ensure!(end > last, "End does not grow");
        last = end;
    }
    Ok(())
}

/// Random representation supported on an interval of a line cover around
/// its base, satisfying the lifted relations.
fn random_rep(rng: &mut ChaCha8Rng, cov: &TruncatedCover, line: &LineOrder) -> Result<Representation, String> {
    let c = &cov.cover;
    let b = line.index(cov.base);
    for _ in 0..1000 {
        let lo = b - rng.gen_range(0..=2);
        let hi = b + rng.gen_range(0..=2);
        let mut dims = vec![0; c.n_vertices()];
        for &v in &line.vertices[lo..=hi] {
            dims[v] = if rng.gen_bool(0.75) { 1 } else { 2 };
        }
        let mut m = Representation::with_dims(c, dims.clone());
        for a in 0..c.n_arrows() {
            let (r, k) = (dims[c.source(a)], dims[c.target(a)]);
            let rows = (0..r).map(|_| (0..k).map(|_| int(rng.gen_range(-1..=2))).collect()).collect();
            m.mats[a] = Mat::from_rows(r, k, rows);
        }
        if check_rep(&cov.ideal, &m).ctx()?.is_none() {
            return Ok(m);
        }
    }
    Err("no random representation satisfied the relations".into())
}

fn c7_property_suite() -> Check {
    let mut indecomposables = 0;
    let mut samples = 0;
    for (file, generator, saturate) in [("kronecker.json", "-a,b", 3), ("loop_rad2.json", "alpha", 5)] {
        let (q, i) = load(file)?;
        let cov = build_universal_cover(&i, 0, 8).ctx()?;
        let c = &cov.cover;
        let pi = &cov.projection;
        let line = line_order(c)?;
        let gen = walk(&q, generator, 0)?;
        let inv = q.walk_inverse(&gen);
        let mut deck: BTreeMap<i64, PartialAuto> = BTreeMap::new();
        for k in 1..=saturate {
            deck.insert(k as i64, deck_action(&cov, &power(&q, &gen, k)).ctx()?);
            deck.insert(-(k as i64), deck_action(&cov, &power(&q, &inv, k)).ctx()?);
        }
        deck.insert(0, PartialAuto::identity(c));
        let window: BTreeSet<V> = (0..c.n_vertices()).filter(|&v| cov.distance[v] <= 2).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut prev: Option<Representation> = None;
        for seed in 0..50 {
            let m = random_rep(&mut rng, &cov, &line)?;
            samples += 1;
            let fm = push_down(pi, &m);

            // Translates push down to isomorphic modules.
            for k in [-2i64, -1, 1, 2] {
                let gm = translate(c, &m, &deck[&k]).ctx()?;
                ensure!(are_isomorphic(&q, &push_down(pi, &gm), &fm).ctx()?, "{file} seed {seed}: translate by {k} changes the push-down");
            }

            // F. F_l M on the window is the sum of the translates meeting it.
            let up = restrict(c, &pull_up(pi, &fm, &window).rep, &window);
            let mut sum = Representation::zero(c);
            for g in deck.values() {
                sum = sum.direct_sum(&restrict(c, &translate(c, &m, g).ctx()?, &window));
            }
            ensure!(are_isomorphic(c, &up, &sum).ctx()?, "{file} seed {seed}: pull-up of push-down is not the sum of translates");
            let near = restrict(c, &m, &window).direct_sum(&restrict(c, &translate(c, &m, &deck[&1]).ctx()?, &window));
            ensure!(near.dims.iter().zip(&up.dims).all(|(a, b)| a <= b), "{file} seed {seed}: a partial sum is not contained");

            // Push-down keeps indecomposability (the stabilizer of a finite
            // support module is trivial).
            if is_indecomposable(c, &m, seed).ctx()?.is_yes() {
                indecomposables += 1;
                let v = is_indecomposable(&q, &fm, seed).ctx()?;
                ensure!(v.is_yes(), "{file} seed {seed}: push-down of an indecomposable is {}", v.name());
            }

            // Push-down is injective on hom bases.
            if let Some(n) = &prev {
                let basis = hom_basis(c, n, &m).ctx()?;
                let fnn = push_down(pi, n);
                let mut rows = Vec::new();
                for f in &basis {
                    let pf = push_down_morphism(pi, n, &m, f);
                    ensure!(is_morphism(&q, &pf, &fnn, &fm), "{file} seed {seed}: pushed-down map is not a morphism");
                    rows.push(pf.iter().flat_map(|x| x.entries().to_vec()).collect::<Vec<Scalar>>());
                }
                if !rows.is_empty() {
                    let width = rows[0].len();
                    ensure!(Mat::from_rows(rows.len(), width, rows).rank() == basis.len(), "{file} seed {seed}: push-down not injective on Hom");
                }
            }
            prev = Some(m);
        }
    }
    ensure!(samples >= 100 && indecomposables >= 20, "only {indecomposables} indecomposable samples");
    Ok(())
}

fn c8_kronecker_bands() -> Check {
    let (q, i) = load("kronecker.json")?;
    let x = vertex(&q, "x")?;
    let bands = enumerate_bands(&i, 6).ctx()?;
    ensure!(bands.len() == 1, "{} band classes", bands.len());
    let band = &bands[0];
    // a b^-1 read right to left: b^-1 first, then a.
    ensure!(canonical_band(&q, band) == canonical_band(&q, &walk(&q, "-b,a", x)?), "band class is {}", q.walk_str(band));

    let (a, b) = (q.arrow("a").unwrap(), q.arrow("b").unwrap());
    let mut mods = Vec::new();
    for n in 1..=3 {
        for lambda in 1..=3 {
            let m = band_module(&i, band, n, &int(lambda)).ctx()?;
            // The displayed J_n(lambda) has ones below the diagonal; stored
            // transposed.
            let mut jt = Mat::identity(n).scale(&int(lambda));
            for k in 0..n - 1 {
                jt.set(k, k + 1, int(1));
            }
            ensure!(m.dims == vec![n, n], "band module ({n}, {lambda}) has dimensions {:?}", m.dims);
            ensure!(m.mats[a] == jt && m.mats[b] == Mat::identity(n), "band module ({n}, {lambda}) is not (J_n, I)");
            ensure!(is_indecomposable(&q, &m, 0).ctx()?.is_yes(), "band module ({n}, {lambda}) is not indecomposable");
            mods.push(((n, lambda), m));
        }
    }
    for (k, (p, m)) in mods.iter().enumerate() {
        for (r, n) in &mods[k + 1..] {
            ensure!(!are_isomorphic(&q, m, n).ctx()?, "band modules {p:?} and {r:?} are isomorphic");
        }
    }
    let strings = enumerate_strings(&i, 6).ctx()?;
    ensure!(!strings.is_empty(), "no strings");
    for s in &strings {
        let sm = string_module(&i, s).ctx()?;
        for (p, m) in &mods {
            ensure!(sm.dims != m.dims || !are_isomorphic(&q, &sm, m).ctx()?, "string {} is isomorphic to band module {p:?}", q.walk_str(s));
        }
    }
    Ok(())
}

fn skewgentle_action() -> Result<(Quiver, Ideal, ActionPresentation), String> {
    let (q, i) = load("skewgentle6.json")?;
    let gj: GroupJson = Input::read(&fixture("flip.json")).ctx()?.parse().ctx()?;
    let gens = group_from_json("flip.json", &q, &gj).ctx()?;
    let act = ActionPresentation::new(q.clone(), gens, gj.enumeration_bound).ctx()?;
    Ok((q, i, act))
}

fn c9_orbit_quiver() -> Check {
    let (_, i, act) = skewgentle_action()?;
    let orbit = act.ball().orbit_quiver(&i).ctx()?;
    let oq = &orbit.quiver;
    ensure!(oq.n_vertices() == 3 && oq.n_arrows() == 4, "orbit quiver has {} vertices, {} arrows", oq.n_vertices(), oq.n_arrows());
    ensure!(orbit.free, "flip does not act freely");
    let p = |ids: &[&str]| oq.path_from_ids(ids).ctx();
    let want = vec![
        Relation::new(oq, vec![(int(1), p(&["a1", "a2"])?), (int(-1), p(&["b1", "b2"])?)]).ctx()?,
        Relation::new(oq, vec![(int(1), p(&["a1", "b2"])?), (int(-1), p(&["b1", "a2"])?)]).ctx()?,
    ];
    let expected = Ideal::new(oq.clone(), want.clone(), None, Some(orbit.ideal.truncation_length)).ctx()?;
    for r in &want {
        ensure!(orbit.ideal.contains(r).ctx()?, "orbit ideal misses {}", r.display(oq));
    }
    for r in &orbit.ideal.generators {
        ensure!(expected.contains(r).ctx()?, "orbit ideal has extra relation {}", r.display(oq));
    }
    let m = BoundQuiverMorphism::new(orbit.projection.clone(), i, orbit.ideal.clone()).ctx()?;
    ensure!(m.is_relation_covering().ctx()?.is_covering, "projection is not a relation covering");
    let g = is_galois_covering(&m, &act.ball()).ctx()?;
    ensure!(g.is_galois, "projection is not Galois: {}", g.reason);
    Ok(())
}

fn fibre_sums_match(m: &BoundQuiverMorphism, src: &QuotientModel, dst: &QuotientModel) -> Check {
    let pi = &m.map;
    let all: BTreeSet<V> = (0..pi.src.n_vertices()).collect();
    let table = m.quotient_dims(&all, &BTreeSet::new());
    ensure!(table.complete() && table.all_match, "quotient-dimension table does not match");
    for x in 0..pi.src.n_vertices() {
        for y2 in 0..pi.dst.n_vertices() {
            let fibre: usize = (0..pi.src.n_vertices()).filter(|&y| pi.vmap[y] == y2).map(|y| src.dim(x, y)).sum();
            let base = dst.dim(pi.vmap[x], y2);
            ensure!(fibre == base, "from {}: fibre sum {fibre}, base {base}", pi.src.vid(x));
            let fibre_in: usize = (0..pi.src.n_vertices()).filter(|&y| pi.vmap[y] == y2).map(|y| src.dim(y, x)).sum();
            ensure!(fibre_in == dst.dim(y2, pi.vmap[x]), "into {}: fibre sums differ", pi.src.vid(x));
        }
    }
    Ok(())
}

fn c10_quotient_dims() -> Check {
    let (q, i) = load("loops3.json")?;
    let (qb, ib) = load("bouquet2.json")?;
    let mj: qcov::io::MorphismJson = Input::read(&fixture("loops3_to_bouquet2.map.json")).ctx()?.parse().ctx()?;
    let pi = qcov::io::morphism_from_json("map", &q, &qb, &mj).ctx()?;
    ensure!(i.truncation_length == 4 && ib.truncation_length == 4, "fixtures are not at L = 4");
    // Loops at v modulo the ideal are e, a, b and a^2 = b^2; from x they
    // spread over the fibre as 3 + 1 + 0.
    let (model, base_model) = (QuotientModel::from_ideal(&i), QuotientModel::from_ideal(&ib));
    let v = qb.vertex("v").ok_or("no vertex v")?;
    ensure!(base_model.dim(v, v) == 4 && ib.quotient_dim(v, v) == 4, "dim at (v, v): model {}, library {}", base_model.dim(v, v), ib.quotient_dim(v, v));
    let fibre: Vec<usize> = ["x", "y", "z"].iter().map(|y| model.dim(q.vertex("x").unwrap(), q.vertex(y).unwrap())).collect();
    ensure!(fibre == [3, 1, 0], "fibre dims from x: {fibre:?}");
    let m = BoundQuiverMorphism::new(pi, i.clone(), ib.clone()).ctx()?;
    fibre_sums_match(&m, &model, &base_model)?;

    let (_, i6, act) = skewgentle_action()?;
    let orbit = act.ball().orbit_quiver(&i6).ctx()?;
    let m = BoundQuiverMorphism::new(orbit.projection.clone(), i6.clone(), orbit.ideal.clone()).ctx()?;
    fibre_sums_match(&m, &QuotientModel::from_ideal(&i6), &QuotientModel::from_ideal(&orbit.ideal))
}

fn c11_rep_type() -> Check {
    for f in ["dynkin_a4", "dynkin_d5", "dynkin_e6", "dynkin_e7", "dynkin_e8"] {
        let (q, _) = load(&format!("{f}.json"))?;
        let v = classify_path_algebra(&q);
        ensure!(v.class == TypeClass::Finite, "{f}: {}", v.reason);
        validate_shape(&q, &v).ctx()?;
    }
    for f in ["kronecker", "euclid_a3", "euclid_d4", "euclid_d5", "euclid_e6", "euclid_e7", "euclid_e8"] {
        let (q, _) = load(&format!("{f}.json"))?;
        let v = classify_path_algebra(&q);
        ensure!(v.class == TypeClass::Tame, "{f}: {}", v.reason);
        validate_shape(&q, &v).ctx()?;
    }
    for p in ["i", "ii", "iii", "iv", "v", "vi"] {
        let file = format!("wild_{p}.json");
        let (q, _) = load(&file)?;
        for host in [q.clone(), q.opposite()] {
            let e = detect_wild_patterns(&host).ok_or(format!("{file}: no pattern found"))?;
            validate_embedding(&host, &e).ctx()?;
        }
        let r = qcov_json(&["reptype", "--quiver", &fixture(&file)])?;
        ensure!(r["verdict"] == "wild_certified", "{file}: reptype verdict {}", r["verdict"]);
    }

    let (q, _) = load("wild_i.json")?;
    let t = e7tt_tree_certificate(&q, None, 6).ctx()?;
    let cov = build_universal_cover_with(&Ideal::rad_squared(q.clone(), 2), 0, 6, false).ctx()?;
    let trees = [&t.undirected, &t.chain_alternating, &t.alternating];
    ensure!(trees.iter().all(|x| x.is_some()), "a tree certificate is missing at radius 6");
    for tree in trees.into_iter().flatten() {
        validate_tree(&cov.cover, tree).ctx()?;
        for (a, l) in tree.arrows.iter().zip(&tree.labels) {
            let over = q.aid(cov.projection.amap[cov.cover.arrow(a).unwrap()]);
            ensure!(over == l, "tree arrow {a} lies over {over}, labelled {l}");
        }
    }
    Ok(())
}

/// Walk-homotopy by exhaustive search: union-find over all walks (reduced
/// or not) up to `bound` steps, joined by inserting or deleting a cancelling
/// pair and by replacing a path, or the inverse of a path, with another path
/// of the same minimal relation.
struct MoveGraph {
    index: HashMap<Walk, usize>,
    parent: Vec<usize>,
}

impl MoveGraph {
    fn new(q: &Quiver, pairs: &BTreeSet<(Path, Path)>, bound: usize) -> MoveGraph {
        let mut walks: Vec<Walk> = (0..q.n_vertices()).map(Walk::trivial).collect();
        let mut layer = walks.clone();
        for _ in 0..bound {
            let mut next = Vec::new();
            for w in &layer {
                for s in q.steps_from(q.walk_end(w)) {
                    let mut n = w.clone();
                    n.steps.push(s);
                    next.push(n);
                }
            }
            walks.extend(next.iter().cloned());
            layer = next;
        }
        let index: HashMap<Walk, usize> = walks.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
        let mut g = MoveGraph { parent: (0..walks.len()).collect(), index };
        let fwd: Vec<(Vec<Step>, Vec<Step>)> =
            pairs.iter().map(|(p, r)| (p.arrows.iter().map(|&a| Step::fwd(a)).collect(), r.arrows.iter().map(|&a| Step::fwd(a)).collect())).collect();
        let inv: Vec<(Vec<Step>, Vec<Step>)> = fwd
            .iter()
            .map(|(p, r)| (p.iter().rev().map(|s| s.flip()).collect(), r.iter().rev().map(|s| s.flip()).collect()))
            .collect();
        for (k, w) in walks.iter().enumerate() {
            let s = &w.steps;
            for j in 0..s.len().saturating_sub(1) {
                if s[j + 1] == s[j].flip() {
                    let shorter = Walk { start: w.start, steps: [&s[..j], &s[j + 2..]].concat() };
                    let t = g.index[&shorter];
                    g.union(k, t);
                }
            }
            for (pat, rep) in fwd.iter().chain(&inv) {
                if pat.len() > s.len() || s.len() - pat.len() + rep.len() > bound {
                    continue;
                }
                for j in 0..=s.len() - pat.len() {
                    if s[j..j + pat.len()] == pat[..] {
                        let other = Walk { start: w.start, steps: [&s[..j], &rep[..], &s[j + pat.len()..]].concat() };
                        let t = g.index[&other];
                        g.union(k, t);
                    }
                }
            }
        }
        g
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn class(&mut self, w: &Walk) -> usize {
        let k = self.index[w];
        self.find(k)
    }
}

fn reduced_walks(q: &Quiver, max_len: usize) -> Vec<Walk> {
    let mut out: Vec<Walk> = (0..q.n_vertices()).map(Walk::trivial).collect();
    let mut layer = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in q.steps_from(q.walk_end(w)) {
                if w.steps.last() != Some(&s.flip()) {
                    let mut n = w.clone();
                    n.steps.push(s);
                    next.push(n);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Compares the engine with the move graph on every pair of reduced walks
/// of length at most 6 with common ends. Returns (pairs, disagreements).
fn compare_homotopy(file: &str, bound: usize) -> Result<(usize, Vec<String>), String> {
    let (q, i) = load(file)?;
    let model = QuotientModel::from_ideal(&i);
    let mut graph = MoveGraph::new(&q, &model.relation_pairs(4), bound);
    let engine = HomotopyEngine::new(&i).ctx()?;
    let walks = reduced_walks(&q, 6);
    let mut groups: BTreeMap<(V, V), Vec<(Walk, usize)>> = BTreeMap::new();
    for w in walks {
        let c = graph.class(&w);
        groups.entry((w.start, q.walk_end(&w))).or_default().push((w, c));
    }
    let mut pairs = 0;
    let mut bad = Vec::new();
    for ws in groups.values() {
        for (k, (w1, c1)) in ws.iter().enumerate() {
            for (w2, c2) in &ws[k + 1..] {
                pairs += 1;
                let oracle = if c1 == c2 { Equivalence::Yes } else { Equivalence::No };
                let got = engine.walks_equivalent(w1, w2);
                if got != oracle {
                    bad.push(format!("{} vs {}: engine {}, search {}", q.walk_str(w1), q.walk_str(w2), got.as_str(), oracle.as_str()));
                }
            }
        }
    }
    Ok((pairs, bad))
}

fn c12_homotopy() -> Check {
    for (file, bound) in [("riedtmann_I2.json", 10), ("loops3.json", 8)] {
        let (pairs, bad) = compare_homotopy(file, bound)?;
        ensure!(bad.is_empty(), "{file}: {} of {pairs} pairs disagree, e.g. {}", bad.len(), bad[0]);
    }
    Ok(())
}

// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Check); 12] = [
        (1, "loops over the two-loop bouquet: relation covering, not Galois", 1, c1_loops_over_bouquet),
        (2, "Kronecker cover, fundamental group and deck shift", 1, c2_kronecker_cover),
        (3, "commutative square covers under a zero and a commutativity relation", 1, c3_square),
        (4, "Riedtmann ideals: fundamental groups and the ladder cover", 1, c4_riedtmann),
        (5, "Kronecker pull-up and push-down", 1, c5_push_pull),
        (6, "push-down and pull-up are not full", 1, c6_not_full),
        (7, "push-down property suite over seeded random modules", 30, c7_property_suite),
        (8, "Kronecker bands and band modules", 60, c8_kronecker_bands),
        (9, "orbit quiver of the flip", 1, c9_orbit_quiver),
        (10, "fibre-summed quotient dimensions", 5, c10_quotient_dims),
        (11, "representation-type certificates", 10, c11_rep_type),
        (12, "homotopy decisions against exhaustive move search", 30, c12_homotopy),
    ];
    let mut failed = Vec::new();
    for (n, title, limit, f) in criteria {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        let result = result.and_then(|_| if secs > limit as f64 { Err(format!("took {secs:.1} s, limit {limit} s")) } else { Ok(()) });
        match result {
            Ok(()) => println!("PASS {n:>2} {title} ({secs:.2} s)"),
            Err(e) => {
                println!("FAIL {n:>2} {title}: {e}");
                failed.push(n);
            }
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
