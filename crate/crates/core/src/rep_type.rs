//! Representation-type certificates.
//!
//! Every positive verdict carries something checkable: a Dynkin or Euclidean
//! shape, a subquiver embedding, a periodic walk, or a tree inside a cover.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::quiver::{Quiver, Step, Walk, A, V};
use crate::relations::Ideal;
use crate::universal_cover::build_universal_cover_with;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TypeClass {
    Finite,
    Tame,
    WildCertified,
    InfiniteType,
    Inconclusive,
}

impl TypeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TypeClass::Finite => "finite",
            TypeClass::Tame => "tame",
            TypeClass::WildCertified => "wild_certified",
            TypeClass::InfiniteType => "infinite_type",
            TypeClass::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeVerdict {
    pub class: TypeClass,
    /// Human-readable evidence, e.g. "Dynkin D_5".
    pub reason: String,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    None,
    /// A subgraph (vertex and arrow ids) of the stated Dynkin or Euclidean shape.
    Shape { name: String, vertices: Vec<String>, arrows: Vec<String> },
    Embedding(PatternEmbedding),
    /// Closed walk whose powers lift to an infinite line.
    Line { walk: String },
    Tree(TreeEmbedding),
}

// ---------------------------------------------------------------------------
// Underlying graphs

/// Shape of a connected multigraph, loops counted as edges.
fn graph_shape(n: usize, edges: &[(V, V)]) -> Option<(String, bool)> {
    // Some((name, euclidean))
    if n == 0 {
        return None;
    }
    let mut deg = vec![0usize; n];
    let mut simple = BTreeSet::new();
    for &(a, b) in edges {
        if a == b {
            return if n == 1 && edges.len() == 1 { Some(("~A_0".into(), true)) } else { None };
        }
        deg[a] += 1;
        deg[b] += 1;
        simple.insert((a.min(b), a.max(b)));
    }
    let m = edges.len();
    if m == n {
        // Unique cycle through all vertices.
        if deg.iter().all(|&d| d == 2) {
            return Some((format!("~A_{}", n - 1), true));
        }
        return None;
    }
    if m + 1 != n || simple.len() != m {
        return None;
    }
    let adj = adjacency(n, edges);
    let branch: Vec<V> = (0..n).filter(|&v| deg[v] >= 3).collect();
    if deg.iter().any(|&d| d > 4) {
        return None;
    }
    match branch.as_slice() {
        [] => Some((format!("A_{n}"), false)),
        [c] if deg[*c] == 4 => (n == 5).then(|| ("~D_4".into(), true)),
        [c] => {
            let mut arms: Vec<usize> = adj[*c].iter().map(|&nb| arm_length(&adj, *c, nb)).collect();
            arms.sort();
            match arms.as_slice() {
                [1, 1, _] => Some((format!("D_{n}"), false)),
                [1, 2, 2] => Some(("E_6".into(), false)),
                [1, 2, 3] => Some(("E_7".into(), false)),
                [1, 2, 4] => Some(("E_8".into(), false)),
                [2, 2, 2] => Some(("~E_6".into(), true)),
                [1, 3, 3] => Some(("~E_7".into(), true)),
                [1, 2, 5] => Some(("~E_8".into(), true)),
                _ => None,
            }
        }
        [x, y] if deg[*x] == 3 && deg[*y] == 3 => {
            // Both branch points must carry two leaves.
            let leaves = |c: V| adj[c].iter().filter(|&&nb| deg[nb] == 1).count();
            (leaves(*x) >= 2 && leaves(*y) >= 2).then(|| (format!("~D_{}", n - 1), true))
        }
        _ => None,
    }
}

fn adjacency(n: usize, edges: &[(V, V)]) -> Vec<Vec<V>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        if a != b {
            adj[b].push(a);
        }
    }
    adj
}

/// Number of vertices on the arm leaving `c` through `nb`, in a tree whose
/// only branch point is `c`.
fn arm_length(adj: &[Vec<V>], c: V, nb: V) -> usize {
    let (mut prev, mut cur, mut len) = (c, nb, 1);
    loop {
        let next: Vec<V> = adj[cur].iter().copied().filter(|&x| x != prev).collect();
        match next.as_slice() {
            [x] => {
                prev = cur;
                cur = *x;
                len += 1;
            }
            _ => return len,
        }
    }
}

fn edges_of(q: &Quiver) -> Vec<(V, V)> {
    q.arrows().iter().map(|a| (a.source, a.target)).collect()
}

/// A Euclidean subgraph of a connected graph that is neither Dynkin nor
/// Euclidean, as (vertices, arrows).
fn euclidean_subgraph(q: &Quiver) -> Option<(Vec<V>, Vec<A>)> {
    let n = q.n_vertices();
    // Loop, or two parallel arrows.
    for a in 0..q.n_arrows() {
        if q.source(a) == q.target(a) {
            return Some((vec![q.source(a)], vec![a]));
        }
        for b in a + 1..q.n_arrows() {
            let (s, t) = (q.source(a), q.target(a));
            let (u, w) = (q.source(b), q.target(b));
            if (s, t) == (u, w) || (s, t) == (w, u) {
                return Some((vec![s.min(t), s.max(t)], vec![a, b]));
            }
        }
    }
    if let Some(c) = shortest_cycle(q) {
        return Some(c);
    }
    // A tree from here on.
    let adj_arrows = |v: V| -> Vec<(A, V)> {
        let mut out: Vec<(A, V)> = q.out_arrows(v).iter().map(|&a| (a, q.target(a))).collect();
        out.extend(q.in_arrows(v).iter().map(|&a| (a, q.source(a))));
        out.sort();
        out
    };
    let deg: Vec<usize> = (0..n).map(|v| adj_arrows(v).len()).collect();
    if let Some(c) = (0..n).find(|&v| deg[v] >= 4) {
        let nbs: Vec<(A, V)> = adj_arrows(c).into_iter().take(4).collect();
        let mut vs = vec![c];
        vs.extend(nbs.iter().map(|x| x.1));
        return Some((sorted(vs), sorted(nbs.iter().map(|x| x.0).collect())));
    }
    let branch: Vec<V> = (0..n).filter(|&v| deg[v] == 3).collect();
    if branch.len() >= 2 {
        // Closest pair of branch points, plus the other two neighbours of each.
        let mut best: Option<Vec<(A, V)>> = None;
        for (i, &x) in branch.iter().enumerate() {
            for &y in &branch[i + 1..] {
                let p = tree_path(q, x, y);
                if best.as_ref().is_none_or(|b| p.len() < b.len()) {
                    best = Some(p);
                }
            }
        }
        let path = best.expect("two branch points");
        let x = path_start(q, &path);
        let y = path.last().expect("nonempty").1;
        let mut vs: Vec<V> = vec![x];
        let mut arrows: Vec<A> = Vec::new();
        for &(a, v) in &path {
            vs.push(v);
            arrows.push(a);
        }
        for end in [x, y] {
            for (a, v) in adj_arrows(end) {
                if !vs.contains(&v) {
                    vs.push(v);
                    arrows.push(a);
                }
            }
        }
        return Some((sorted(vs), sorted(arrows)));
    }
    let c = *branch.first()?;
    // Arms as paths leaving c, shortest first.
    let mut arms: Vec<Vec<(A, V)>> = adj_arrows(c)
        .into_iter()
        .map(|(a, nb)| {
            let mut arm = vec![(a, nb)];
            let (mut prev, mut cur) = (c, nb);
            while let [(a2, nx)] = adj_arrows(cur).into_iter().filter(|x| x.1 != prev).collect::<Vec<_>>().as_slice() {
                arm.push((*a2, *nx));
                prev = cur;
                cur = *nx;
            }
            arm
        })
        .collect();
    arms.sort_by_key(|a| a.len());
    let want: [usize; 3] = match (arms[0].len(), arms[1].len()) {
        (a, _) if a >= 2 => [2, 2, 2],
        (1, b) if b >= 3 => [1, 3, 3],
        (1, 2) => [1, 2, 5],
        _ => return None,
    };
    let mut vs = vec![c];
    let mut arrows = Vec::new();
    for (arm, &k) in arms.iter().zip(&want) {
        if arm.len() < k {
            return None;
        }
        for &(a, v) in &arm[..k] {
            vs.push(v);
            arrows.push(a);
        }
    }
    Some((sorted(vs), sorted(arrows)))
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

fn path_start(q: &Quiver, path: &[(A, V)]) -> V {
    let (a, v) = path[0];
    if q.source(a) == v {
        q.target(a)
    } else {
        q.source(a)
    }
}

/// Arrow path between two vertices of a tree, as (arrow, next vertex).
fn tree_path(q: &Quiver, x: V, y: V) -> Vec<(A, V)> {
    let mut prev: BTreeMap<V, (A, V)> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::from([x]);
    let mut seen = BTreeSet::from([x]);
    while let Some(v) = queue.pop_front() {
        for s in q.steps_from(v) {
            let w = q.step_end(s);
            if seen.insert(w) {
                prev.insert(w, (s.arrow, v));
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = y;
    while cur != x {
        let (a, p) = prev[&cur];
        path.push((a, cur));
        cur = p;
    }
    path.reverse();
    path
}

/// Shortest cycle of a graph with no loops or parallel arrows.
fn shortest_cycle(q: &Quiver) -> Option<(Vec<V>, Vec<A>)> {
    let mut best: Option<(Vec<V>, Vec<A>)> = None;
    for a in 0..q.n_arrows() {
        // Cycle through a: a shortest path from target to source avoiding a.
        let (s, t) = (q.source(a), q.target(a));
        let mut prev: BTreeMap<V, (A, V)> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::from([t]);
        let mut seen = BTreeSet::from([t]);
        while let Some(v) = queue.pop_front() {
            for st in q.steps_from(v) {
                if st.arrow == a {
                    continue;
                }
                let w = q.step_end(st);
                if seen.insert(w) {
                    prev.insert(w, (st.arrow, v));
                    queue.push_back(w);
                }
            }
        }
        if !seen.contains(&s) {
            continue;
        }
        let (mut vs, mut arrows) = (vec![s], vec![a]);
        let mut cur = s;
        while cur != t {
            let (b, p) = prev[&cur];
            arrows.push(b);
            vs.push(p);
            cur = p;
        }
        if best.as_ref().is_none_or(|b| arrows.len() < b.1.len()) {
            best = Some((sorted(vs), sorted(arrows)));
        }
    }
    best
}

/// Gabriel and Nazarova/Donovan-Freislich on the underlying graph. Only
/// applies to connected quivers without oriented cycles.
pub fn classify_path_algebra(q: &Quiver) -> TypeVerdict {
    let none = |reason: &str| TypeVerdict { class: TypeClass::Inconclusive, reason: reason.into(), certificate: Certificate::None };
    if q.n_vertices() == 0 || !q.is_connected() {
        return none("quiver is empty or disconnected");
    }
    if q.has_oriented_cycle() {
        return none("path algebra is infinite dimensional");
    }
    let all_v: Vec<String> = q.vertices().to_vec();
    let all_a: Vec<String> = q.arrows().iter().map(|a| a.id.clone()).collect();
    if let Some((name, euclid)) = graph_shape(q.n_vertices(), &edges_of(q)) {
        let class = if euclid { TypeClass::Tame } else { TypeClass::Finite };
        let kind = if euclid { "Euclidean" } else { "Dynkin" };
        return TypeVerdict {
            class,
            reason: format!("{kind} {name}"),
            certificate: Certificate::Shape { name, vertices: all_v, arrows: all_a },
        };
    }
    match euclidean_subgraph(q) {
        Some((vs, arrows)) => {
            let sub: Vec<(V, V)> = arrows.iter().map(|&a| (vs.binary_search(&q.source(a)).unwrap(), vs.binary_search(&q.target(a)).unwrap())).collect();
            let name = graph_shape(vs.len(), &sub).map(|x| x.0).unwrap_or_else(|| "?".into());
            TypeVerdict {
                class: TypeClass::WildCertified,
                reason: format!("strictly contains Euclidean {name}"),
                certificate: Certificate::Shape {
                    name,
                    vertices: vs.iter().map(|&v| q.vid(v).to_string()).collect(),
                    arrows: arrows.iter().map(|&a| q.aid(a).to_string()).collect(),
                },
            }
        }
        None => none("no Euclidean subgraph found"),
    }
}

/// Re-checks a `Shape` certificate: the named subgraph exists in `q`, has the
/// stated shape, and for wild verdicts is a proper subgraph.
pub fn validate_shape(q: &Quiver, v: &TypeVerdict) -> Result<()> {
    let Certificate::Shape { name, vertices, arrows } = &v.certificate else {
        return Err(Error::invalid("not a shape certificate"));
    };
    let vs: Vec<V> = vertices.iter().map(|x| q.vertex_or_err(x)).collect::<Result<_>>()?;
    let mut edges = Vec::new();
    for a in arrows {
        let a = q.arrow_or_err(a)?;
        let s = vs.iter().position(|&x| x == q.source(a)).ok_or_else(|| Error::invalid("arrow leaves the subgraph"))?;
        let t = vs.iter().position(|&x| x == q.target(a)).ok_or_else(|| Error::invalid("arrow leaves the subgraph"))?;
        edges.push((s, t));
    }
    let shape = graph_shape(vs.len(), &edges).ok_or_else(|| Error::invalid("subgraph is neither Dynkin nor Euclidean"))?;
    if &shape.0 != name {
        return Err(Error::invalid(format!("subgraph has shape {}, not {name}", shape.0)));
    }
    if v.class == TypeClass::WildCertified && (!shape.1 || (vs.len() == q.n_vertices() && edges.len() == q.n_arrows())) {
        return Err(Error::invalid("wild certificate needs a proper Euclidean subgraph"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Wild subquiver patterns

/// The six minimal wild configurations, as (vertex count, arrows).
pub fn wild_patterns() -> Vec<(&'static str, Quiver)> {
    let mk = |n: usize, arrows: &[(&str, usize, usize)]| {
        let vs: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows: Vec<(String, String, String)> = arrows.iter().map(|&(a, s, t)| (a.to_string(), s.to_string(), t.to_string())).collect();
        Quiver::new(&vs, &arrows).expect("pattern quiver")
    };
    vec![
        ("i", mk(2, &[("alpha", 1, 1), ("beta", 1, 1), ("gamma", 1, 2)])),
        ("ii", mk(2, &[("alpha", 1, 1), ("beta", 1, 2), ("beta2", 1, 2)])),
        ("iii", mk(3, &[("beta", 1, 2), ("beta2", 1, 2), ("alpha", 3, 2)])),
        ("iv", mk(3, &[("alpha", 1, 1), ("beta", 1, 2), ("gamma", 2, 1), ("eta", 2, 2), ("rho", 3, 1)])),
        ("v", mk(3, &[("alpha", 1, 1), ("beta", 1, 2), ("gamma", 2, 1), ("delta", 2, 3), ("rho", 1, 3)])),
        ("vi", mk(3, &[("alpha", 1, 1), ("beta", 1, 3), ("rho", 3, 3), ("gamma", 2, 1), ("delta", 2, 3)])),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternEmbedding {
    pub pattern: String,
    /// Whether the opposite of the pattern was embedded.
    pub opposite: bool,
    /// Pattern vertex id -> host vertex id.
    pub vertex_map: BTreeMap<String, String>,
    pub arrow_map: BTreeMap<String, String>,
}

/// First injective embedding of `pat` into `host` (on vertices and arrows),
/// in lexicographic order of host indices.
pub fn find_embedding(pat: &Quiver, host: &Quiver) -> Option<(Vec<V>, Vec<A>)> {
    fn go(pat: &Quiver, host: &Quiver, vmap: &mut Vec<V>, used: &mut Vec<bool>) -> Option<Vec<A>> {
        let k = vmap.len();
        if k == pat.n_vertices() {
            return assign_arrows(pat, host, vmap);
        }
        for h in 0..host.n_vertices() {
            if used[h] {
                continue;
            }
            vmap.push(h);
            used[h] = true;
            // Prune on arrows among the vertices placed so far.
            if assign_arrows_partial(pat, host, vmap) {
                if let Some(am) = go(pat, host, vmap, used) {
                    return Some(am);
                }
            }
            used[h] = false;
            vmap.pop();
        }
        None
    }
    let mut vmap = Vec::new();
    let mut used = vec![false; host.n_vertices()];
    let amap = go(pat, host, &mut vmap, &mut used)?;
    Some((vmap, amap))
}

fn assign_arrows_partial(pat: &Quiver, host: &Quiver, vmap: &[V]) -> bool {
    let k = vmap.len();
    let mut need: BTreeMap<(V, V), usize> = BTreeMap::new();
    for a in pat.arrows() {
        if a.source < k && a.target < k {
            *need.entry((vmap[a.source], vmap[a.target])).or_default() += 1;
        }
    }
    need.iter().all(|(&(s, t), &c)| host.out_arrows(s).iter().filter(|&&b| host.target(b) == t).count() >= c)
}

fn assign_arrows(pat: &Quiver, host: &Quiver, vmap: &[V]) -> Option<Vec<A>> {
    let mut used = BTreeSet::new();
    let mut amap = Vec::new();
    for a in pat.arrows() {
        let (s, t) = (vmap[a.source], vmap[a.target]);
        let b = host.out_arrows(s).iter().copied().find(|&b| host.target(b) == t && !used.contains(&b))?;
        used.insert(b);
        amap.push(b);
    }
    Some(amap)
}

/// Searches for the six wild patterns and their opposites as subquivers.
pub fn detect_wild_patterns(host: &Quiver) -> Option<PatternEmbedding> {
    for (name, pat) in wild_patterns() {
        for opposite in [false, true] {
            let p = if opposite { pat.opposite() } else { pat.clone() };
            if let Some((vmap, amap)) = find_embedding(&p, host) {
                return Some(PatternEmbedding {
                    pattern: name.to_string(),
                    opposite,
                    vertex_map: (0..p.n_vertices()).map(|v| (p.vid(v).to_string(), host.vid(vmap[v]).to_string())).collect(),
                    arrow_map: (0..p.n_arrows()).map(|a| (p.aid(a).to_string(), host.aid(amap[a]).to_string())).collect(),
                });
            }
        }
    }
    None
}

/// Re-validates an embedding against the host: injective and incidence
/// preserving.
pub fn validate_embedding(host: &Quiver, e: &PatternEmbedding) -> Result<()> {
    let (_, pat) = wild_patterns().into_iter().find(|(n, _)| *n == e.pattern).ok_or_else(|| Error::invalid("unknown pattern"))?;
    let pat = if e.opposite { pat.opposite() } else { pat };
    let mut vimg = BTreeSet::new();
    for v in pat.vertices() {
        let h = e.vertex_map.get(v).ok_or_else(|| Error::invalid(format!("vertex {v} unmapped")))?;
        host.vertex_or_err(h)?;
        if !vimg.insert(h) {
            return Err(Error::invalid("vertex map is not injective"));
        }
    }
    let mut aimg = BTreeSet::new();
    for a in pat.arrows() {
        let h = host.arrow_or_err(e.arrow_map.get(&a.id).ok_or_else(|| Error::invalid(format!("arrow {} unmapped", a.id)))?)?;
        if !aimg.insert(h) {
            return Err(Error::invalid("arrow map is not injective"));
        }
        let s = &e.vertex_map[pat.vid(a.source)];
        let t = &e.vertex_map[pat.vid(a.target)];
        if host.vid(host.source(h)) != s || host.vid(host.target(h)) != t {
            return Err(Error::invalid(format!("arrow {} is not mapped compatibly", a.id)));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Infinite lines

/// If every vertex has two incoming and two outgoing arrows, rad² has a
/// zigzag band: alternate a forward arrow with the inverse of a different
/// arrow into the same vertex. Returns the periodic part as a closed walk.
pub fn two_in_two_out_criterion(q: &Quiver) -> Option<Walk> {
    if q.n_vertices() == 0 || (0..q.n_vertices()).any(|v| q.out_arrows(v).len() < 2 || q.in_arrows(v).len() < 2) {
        return None;
    }
    // State: (vertex, arrow just used). The walk alternates a, -b, c, -d, ...
    let mut steps: Vec<Step> = Vec::new();
    let mut seen: BTreeMap<(V, A, bool), usize> = BTreeMap::new();
    let (mut v, mut last): (V, Option<A>) = (0, None);
    loop {
        let forward = steps.len() % 2 == 0;
        if let Some(l) = last {
            if let Some(&i) = seen.get(&(v, l, forward)) {
                let mut cyc = steps[i..].to_vec();
                if cyc[0].inverse {
                    cyc.rotate_left(1);
                }
                return Some(Walk { start: q.step_start(cyc[0]), steps: cyc });
            }
            seen.insert((v, l, forward), steps.len());
        }
        let choices: &[A] = if forward { q.out_arrows(v) } else { q.in_arrows(v) };
        let a = *choices.iter().find(|&&a| Some(a) != last).expect("two choices");
        let s = if forward { Step::fwd(a) } else { Step::inv(a) };
        v = q.step_end(s);
        last = Some(a);
        steps.push(s);
    }
}

// ---------------------------------------------------------------------------
// Trees in covers

/// A copy of the tree with an 8-vertex chain and one extra vertex attached to
/// its fourth vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEmbedding {
    /// Cover vertex ids: the chain in order, then the pendant.
    pub vertices: Vec<String>,
    /// Cover arrow ids: the 7 chain arrows in order, then the pendant arrow.
    pub arrows: Vec<String>,
    /// Base arrow ids of `arrows`.
    pub labels: Vec<String>,
    /// Orientations along `arrows`: "->" when pointing towards the chain's
    /// end (or the pendant), "<-" otherwise.
    pub orientation: Vec<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeSearch {
    pub cover_vertices: usize,
    pub cover_arrows: usize,
    /// Any orientation.
    pub undirected: Option<TreeEmbedding>,
    /// Chain vertices alternate between sources and sinks; the pendant arrow
    /// may point either way.
    pub chain_alternating: Option<TreeEmbedding>,
    /// Every vertex a source or a sink.
    pub alternating: Option<TreeEmbedding>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Orientation {
    Any,
    ChainAlternating,
    Alternating,
}

/// Branch arm lengths from the centre: pendant 1, short side 3, long side 4.
const ARMS: [usize; 3] = [1, 3, 4];

/// Searches the truncated universal cover of rad² (or of `ideal` if given)
/// for the 9-vertex wild tree.
pub fn e7tt_tree_certificate(q: &Quiver, ideal: Option<&Ideal>, radius: usize) -> Result<TreeSearch> {
    let owned;
    let ideal = match ideal {
        Some(i) => i,
        None => {
            owned = Ideal::rad_squared(q.clone(), 2);
            &owned
        }
    };
    if !ideal.is_monomial()? {
        return Err(Error::invalid("tree search needs a monomial ideal"));
    }
    let cov = build_universal_cover_with(ideal, 0, radius, false)?;
    let c = &cov.cover;
    let mut out =
        TreeSearch { cover_vertices: c.n_vertices(), cover_arrows: c.n_arrows(), undirected: None, chain_alternating: None, alternating: None };
    // Neighbours as (arrow, other end, points away from this vertex).
    let nbrs: Vec<Vec<(A, V, bool)>> = (0..c.n_vertices())
        .map(|v| {
            let mut n: Vec<(A, V, bool)> = c.out_arrows(v).iter().map(|&a| (a, c.target(a), true)).collect();
            n.extend(c.in_arrows(v).iter().map(|&a| (a, c.source(a), false)));
            n.sort();
            n
        })
        .collect();
    for mode in [Orientation::Any, Orientation::ChainAlternating, Orientation::Alternating] {
        for centre in 0..c.n_vertices() {
            if nbrs[centre].len() < 3 {
                continue;
            }
            let mut taken = BTreeSet::from([centre]);
            let mut arms = Vec::new();
            if grow_arms(&nbrs, centre, mode, 0, &mut taken, &mut arms) {
                let emb = Some(tree_embedding(&cov.cover, &cov.projection.dst, &cov.projection.amap, centre, &arms));
                match mode {
                    Orientation::Any => out.undirected = emb,
                    Orientation::ChainAlternating => out.chain_alternating = emb,
                    Orientation::Alternating => out.alternating = emb,
                }
                break;
            }
        }
    }
    Ok(out)
}

type Arm = Vec<(A, V, bool)>;

/// Arms are grown pendant first, then the two chain halves, which must
/// leave the centre with the same orientation.
fn grow_arms(nbrs: &[Vec<(A, V, bool)>], centre: V, mode: Orientation, k: usize, taken: &mut BTreeSet<V>, arms: &mut Vec<Arm>) -> bool {
    if k == ARMS.len() {
        return true;
    }
    let alternating = mode != Orientation::Any;
    for &first in &nbrs[centre] {
        if taken.contains(&first.1) {
            continue;
        }
        if (mode == Orientation::Alternating && k == 1 && first.2 != arms[0][0].2) || (alternating && k == 2 && first.2 != arms[1][0].2) {
            continue;
        }
        let mut arm = vec![first];
        if extend_arm(nbrs, alternating, ARMS[k], taken, &mut arm) {
            for x in &arm {
                taken.insert(x.1);
            }
            arms.push(arm.clone());
            if grow_arms(nbrs, centre, mode, k + 1, taken, arms) {
                return true;
            }
            arms.pop();
            for x in &arm {
                taken.remove(&x.1);
            }
        }
    }
    false
}

fn extend_arm(nbrs: &[Vec<(A, V, bool)>], alternating: bool, len: usize, taken: &BTreeSet<V>, arm: &mut Arm) -> bool {
    if taken.contains(&arm.last().expect("nonempty").1) || arm[..arm.len() - 1].iter().any(|x| x.1 == arm[arm.len() - 1].1) {
        return false;
    }
    if arm.len() == len {
        return true;
    }
    let (last_a, v, last_dir) = *arm.last().expect("nonempty");
    for &next in &nbrs[v] {
        if next.0 == last_a || (alternating && next.2 == last_dir) {
            continue;
        }
        arm.push(next);
        if extend_arm(nbrs, alternating, len, taken, arm) {
            return true;
        }
        arm.pop();
    }
    false
}

fn tree_embedding(cover: &Quiver, base: &Quiver, amap: &[A], centre: V, arms: &[Arm]) -> TreeEmbedding {
    let (pendant, short, long) = (&arms[0], &arms[1], &arms[2]);
    let mut vertices = Vec::new();
    let mut arrows = Vec::new();
    let mut orientation = Vec::new();
    // Short arm reversed: walking towards the centre flips each direction.
    for &(a, v, away) in short.iter().rev() {
        vertices.push(v);
        arrows.push(a);
        orientation.push(if away { "<-" } else { "->" });
    }
    vertices.push(centre);
    for &(a, v, away) in long.iter() {
        vertices.push(v);
        arrows.push(a);
        orientation.push(if away { "->" } else { "<-" });
    }
    let (a, v, away) = pendant[0];
    vertices.push(v);
    arrows.push(a);
    orientation.push(if away { "->" } else { "<-" });
    TreeEmbedding {
        vertices: vertices.iter().map(|&v| cover.vid(v).to_string()).collect(),
        arrows: arrows.iter().map(|&a| cover.aid(a).to_string()).collect(),
        labels: arrows.iter().map(|&a| base.aid(amap[a]).to_string()).collect(),
        orientation,
    }
}

/// Checks a tree embedding against a cover: the chain and pendant use the
/// listed arrows, and all 9 vertices are distinct.
pub fn validate_tree(cover: &Quiver, t: &TreeEmbedding) -> Result<()> {
    if t.vertices.len() != 9 || t.arrows.len() != 8 {
        return Err(Error::invalid("tree must have 9 vertices and 8 arrows"));
    }
    let vs: Vec<V> = t.vertices.iter().map(|v| cover.vertex_or_err(v)).collect::<Result<_>>()?;
    if vs.iter().collect::<BTreeSet<_>>().len() != 9 {
        return Err(Error::invalid("tree vertices repeat"));
    }
    let ends = |i: usize| if i < 7 { (vs[i], vs[i + 1]) } else { (vs[3], vs[8]) };
    for (i, a) in t.arrows.iter().enumerate() {
        let a = cover.arrow_or_err(a)?;
        let (x, y) = ends(i);
        let ok = match t.orientation[i] {
            "->" => cover.source(a) == x && cover.target(a) == y,
            _ => cover.source(a) == y && cover.target(a) == x,
        };
        if !ok {
            return Err(Error::invalid(format!("arrow {} does not join tree vertices {} and {}", cover.aid(a), i, i + 1)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiver(vs: &[&str], arrows: &[(&str, &str, &str)]) -> Quiver {
        Quiver::new(vs, arrows).unwrap()
    }

    #[test]
    fn dynkin_and_euclidean() {
        let a4 = quiver(&["1", "2", "3", "4"], &[("a", "1", "2"), ("b", "3", "2"), ("c", "3", "4")]);
        let v = classify_path_algebra(&a4);
        assert_eq!((v.class, v.reason.as_str()), (TypeClass::Finite, "Dynkin A_4"));
        let kr = quiver(&["x", "y"], &[("a", "y", "x"), ("b", "y", "x")]);
        let v = classify_path_algebra(&kr);
        assert_eq!((v.class, v.reason.as_str()), (TypeClass::Tame, "Euclidean ~A_1"));
        let k3 = quiver(&["x", "y"], &[("a", "y", "x"), ("b", "y", "x"), ("c", "y", "x")]);
        let v = classify_path_algebra(&k3);
        assert_eq!(v.class, TypeClass::WildCertified);
        validate_shape(&k3, &v).unwrap();
        let e6 = quiver(&["1", "2", "3", "4", "5", "6"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4"), ("d", "4", "5"), ("e", "3", "6")]);
        assert_eq!(classify_path_algebra(&e6).reason, "Dynkin E_6");
    }

    #[test]
    fn pattern_two_embeds() {
        let host = quiver(&["p", "q", "r"], &[("l", "p", "p"), ("m", "p", "q"), ("n", "p", "q"), ("o", "q", "r")]);
        let e = detect_wild_patterns(&host).unwrap();
        assert_eq!((e.pattern.as_str(), e.opposite), ("ii", false));
        validate_embedding(&host, &e).unwrap();
    }

    #[test]
    fn zigzag_line_when_two_in_two_out() {
        let q = quiver(&["x"], &[("a", "x", "x"), ("b", "x", "x")]);
        let w = two_in_two_out_criterion(&q).unwrap();
        assert_eq!(q.walk_str(&w), "a,-b");
        let kr = quiver(&["x", "y"], &[("a", "y", "x"), ("b", "y", "x")]);
        assert!(two_in_two_out_criterion(&kr).is_none());
    }

    #[test]
    fn tree_in_cover_of_pattern_one() {
        let q = wild_patterns().remove(0).1;
        let s = e7tt_tree_certificate(&q, None, 6).unwrap();
        let cover = build_universal_cover_with(&Ideal::rad_squared(q, 2), 0, 6, false).unwrap().cover;
        for t in [s.undirected, s.chain_alternating, s.alternating] {
            validate_tree(&cover, &t.unwrap()).unwrap();
        }
    }
}
