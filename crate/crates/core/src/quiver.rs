//! Quivers, paths, walks and quiver morphisms.
//!
//! Vertices and arrows are stored sorted by id, so index order is the
//! lexicographic id order used for every deterministic choice. Paths and
//! walks are stored first-traversed-first.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type V = usize;
pub type A = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub source: V,
    pub target: V,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vindex: HashMap<String, V>,
    aindex: HashMap<String, A>,
    out: Vec<Vec<A>>,
    inc: Vec<Vec<A>>,
}

impl Quiver {
    /// Builds a quiver from vertex ids and `(arrow id, source id, target id)`.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Quiver> {
        let mut vs: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        vs.sort();
        if let Some(w) = vs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate vertex id {:?}", w[0])));
        }
        let vindex: HashMap<String, V> = vs.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut raw: Vec<(String, String, String)> =
            arrows.iter().map(|(a, s, t)| (a.as_ref().to_string(), s.as_ref().to_string(), t.as_ref().to_string())).collect();
        raw.sort();
        if let Some(w) = raw.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid(format!("duplicate arrow id {:?}", w[0].0)));
        }
        let mut arr = Vec::with_capacity(raw.len());
        for (id, s, t) in raw {
            if vindex.contains_key(&id) {
                // Allowed, but worth rejecting: ids are used interchangeably in reports.
                return Err(Error::invalid(format!("id {id:?} names both a vertex and an arrow")));
            }
            let lookup = |x: &str| vindex.get(x).copied().ok_or_else(|| Error::invalid(format!("arrow {id:?} uses undeclared vertex {x:?}")));
            let (source, target) = (lookup(&s)?, lookup(&t)?);
            arr.push(Arrow { id, source, target });
        }
        Ok(Quiver::from_parts(vs, arr))
    }

    fn from_parts(vertices: Vec<String>, arrows: Vec<Arrow>) -> Quiver {
        let vindex = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let aindex = arrows.iter().enumerate().map(|(i, a)| (a.id.clone(), i)).collect();
        let mut out = vec![Vec::new(); vertices.len()];
        let mut inc = vec![Vec::new(); vertices.len()];
        for (i, a) in arrows.iter().enumerate() {
            out[a.source].push(i);
            inc[a.target].push(i);
        }
        Quiver { vertices, arrows, vindex, aindex, out, inc }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex(&self, id: &str) -> Option<V> {
        self.vindex.get(id).copied()
    }

    pub fn arrow(&self, id: &str) -> Option<A> {
        self.aindex.get(id).copied()
    }

    pub fn vertex_or_err(&self, id: &str) -> Result<V> {
        self.vertex(id).ok_or_else(|| Error::invalid(format!("unknown vertex {id:?}")))
    }

    pub fn arrow_or_err(&self, id: &str) -> Result<A> {
        self.arrow(id).ok_or_else(|| Error::invalid(format!("unknown arrow {id:?}")))
    }

    pub fn vid(&self, v: V) -> &str {
        &self.vertices[v]
    }

    pub fn aid(&self, a: A) -> &str {
        &self.arrows[a].id
    }

    pub fn source(&self, a: A) -> V {
        self.arrows[a].source
    }

    pub fn target(&self, a: A) -> V {
        self.arrows[a].target
    }

    /// Arrows starting at `v`, in id order.
    pub fn out_arrows(&self, v: V) -> &[A] {
        &self.out[v]
    }

    /// Arrows ending at `v`, in id order.
    pub fn in_arrows(&self, v: V) -> &[A] {
        &self.inc[v]
    }

    /// Steps leaving `v`: forward along out-arrows and backward along in-arrows,
    /// sorted by (arrow, orientation).
    pub fn steps_from(&self, v: V) -> Vec<Step> {
        let mut s: Vec<Step> = self.out[v].iter().map(|&a| Step::fwd(a)).chain(self.inc[v].iter().map(|&a| Step::inv(a))).collect();
        s.sort();
        s
    }

    pub fn step_start(&self, s: Step) -> V {
        if s.inverse { self.target(s.arrow) } else { self.source(s.arrow) }
    }

    pub fn step_end(&self, s: Step) -> V {
        if s.inverse { self.source(s.arrow) } else { self.target(s.arrow) }
    }

    pub fn has_loops(&self) -> bool {
        self.arrows.iter().any(|a| a.source == a.target)
    }

    /// Connected components of the underlying undirected graph, each sorted.
    pub fn components(&self) -> Vec<Vec<V>> {
        let mut seen = vec![false; self.n_vertices()];
        let mut comps = Vec::new();
        for s in 0..self.n_vertices() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for st in self.steps_from(v) {
                    let w = self.step_end(st);
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Same vertices, arrows reversed.
    pub fn opposite(&self) -> Quiver {
        let arrows = self.arrows.iter().map(|a| Arrow { id: a.id.clone(), source: a.target, target: a.source }).collect();
        Quiver::from_parts(self.vertices.clone(), arrows)
    }

    /// Full subquiver on the given vertices, plus the index maps back.
    pub fn full_subquiver(&self, keep: &BTreeSet<V>) -> (Quiver, Vec<V>, Vec<A>) {
        let vs: Vec<V> = keep.iter().copied().collect();
        let pos: HashMap<V, V> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut arrows = Vec::new();
        let mut amap = Vec::new();
        for (i, a) in self.arrows.iter().enumerate() {
            if let (Some(&s), Some(&t)) = (pos.get(&a.source), pos.get(&a.target)) {
                arrows.push(Arrow { id: a.id.clone(), source: s, target: t });
                amap.push(i);
            }
        }
        let names = vs.iter().map(|&v| self.vertices[v].clone()).collect();
        (Quiver::from_parts(names, arrows), vs, amap)
    }

    /// Renames vertices and arrows; the maps must be injective.
    pub fn relabel(&self, vname: impl Fn(&str) -> String, aname: impl Fn(&str) -> String) -> Result<Quiver> {
        let vs: Vec<String> = self.vertices.iter().map(|v| vname(v)).collect();
        let arrows: Vec<(String, String, String)> =
            self.arrows.iter().map(|a| (aname(&a.id), vs[a.source].clone(), vs[a.target].clone())).collect();
        Quiver::new(&vs, &arrows)
    }

    /// All paths starting at `x` of length at most `max_len`, in
    /// (length, lexicographic) order.
    pub fn paths_from(&self, x: V, max_len: usize) -> Vec<Path> {
        let mut out = vec![Path::trivial(x)];
        let mut layer = vec![Path::trivial(x)];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &layer {
                let e = self.path_end(p);
                for &a in &self.out[e] {
                    let mut q = p.clone();
                    q.arrows.push(a);
                    next.push(q);
                }
            }
            if next.is_empty() {
                break;
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn paths_between(&self, x: V, y: V, max_len: usize) -> Vec<Path> {
        self.paths_from(x, max_len).into_iter().filter(|p| self.path_end(p) == y).collect()
    }

    /// Whether some oriented cycle exists (loops included).
    pub fn has_oriented_cycle(&self) -> bool {
        let n = self.n_vertices();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.inc[v].len()).collect();
        let mut queue: Vec<V> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = queue.pop() {
            removed += 1;
            for &a in &self.out[v] {
                let t = self.target(a);
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push(t);
                }
            }
        }
        removed < n
    }

    pub fn path_end(&self, p: &Path) -> V {
        p.arrows.last().map_or(p.start, |&a| self.target(a))
    }

    pub fn walk_end(&self, w: &Walk) -> V {
        w.steps.last().map_or(w.start, |&s| self.step_end(s))
    }

    /// Builds a path from arrow ids, checking composability.
    pub fn path_from_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Path> {
        let arrows = ids.iter().map(|s| self.arrow_or_err(s.as_ref())).collect::<Result<Vec<_>>>()?;
        let Some(&first) = arrows.first() else {
            return Err(Error::invalid("empty path needs a base vertex"));
        };
        let p = Path { start: self.source(first), arrows };
        self.check_path(&p)?;
        Ok(p)
    }

    pub fn check_path(&self, p: &Path) -> Result<()> {
        let mut cur = p.start;
        for &a in &p.arrows {
            if self.source(a) != cur {
                return Err(Error::invalid(format!("path {} is not composable at arrow {:?}", self.path_str(p), self.aid(a))));
            }
            cur = self.target(a);
        }
        Ok(())
    }

    pub fn check_walk(&self, w: &Walk) -> Result<()> {
        let mut cur = w.start;
        for &s in &w.steps {
            if self.step_start(s) != cur {
                return Err(Error::invalid(format!("walk {} breaks at step {:?}", self.walk_str(w), self.step_str(s))));
            }
            cur = self.step_end(s);
        }
        Ok(())
    }

    /// Arrow ids joined by commas, first traversed first; `1_x` when trivial.
    pub fn path_str(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("1_{}", self.vid(p.start));
        }
        p.arrows.iter().map(|&a| self.aid(a)).collect::<Vec<_>>().join(",")
    }

    /// Composite in right-to-left notation, e.g. `ba` for a then b.
    pub fn path_str_rtl(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("1_{}", self.vid(p.start));
        }
        p.arrows.iter().rev().map(|&a| self.aid(a)).collect::<Vec<_>>().join("")
    }

    pub fn step_str(&self, s: Step) -> String {
        if s.inverse { format!("-{}", self.aid(s.arrow)) } else { self.aid(s.arrow).to_string() }
    }

    /// Steps as `a,-b`; empty for a trivial walk.
    pub fn walk_str(&self, w: &Walk) -> String {
        w.steps.iter().map(|&s| self.step_str(s)).collect::<Vec<_>>().join(",")
    }

    /// Like `walk_str`, but `1_x` for the trivial walk at x.
    pub fn walk_label(&self, w: &Walk) -> String {
        if w.is_trivial() {
            format!("1_{}", self.vid(w.start))
        } else {
            self.walk_str(w)
        }
    }

    /// Parses `a,-b`, or `1_x` for a trivial walk. An empty string gives the
    /// trivial walk at `base` (required in that case). When `base` is given
    /// it must match.
    pub fn parse_walk(&self, s: &str, base: Option<V>) -> Result<Walk> {
        let s = s.trim();
        if let Some(v) = s.strip_prefix("1_").and_then(|id| self.vertex(id)) {
            if base.is_some_and(|b| b != v) {
                return Err(Error::invalid(format!("walk {s:?} does not start at the base")));
            }
            return Ok(Walk::trivial(v));
        }
        if s.is_empty() {
            let b = base.ok_or_else(|| Error::invalid("a trivial walk needs a base vertex"))?;
            return Ok(Walk::trivial(b));
        }
        let mut steps = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            let (inverse, name) = match tok.strip_prefix('-') {
                Some(n) => (true, n),
                None => (false, tok),
            };
            steps.push(Step { arrow: self.arrow_or_err(name)?, inverse });
        }
        let start = self.step_start(steps[0]);
        if let Some(b) = base {
            if b != start {
                return Err(Error::invalid(format!("walk {s:?} does not start at {:?}", self.vid(b))));
            }
        }
        let w = Walk { start, steps };
        self.check_walk(&w)?;
        Ok(w)
    }

    /// Concatenation `u` then `v`.
    pub fn walk_concat(&self, u: &Walk, v: &Walk) -> Walk {
        debug_assert_eq!(self.walk_end(u), v.start);
        let mut steps = u.steps.clone();
        steps.extend_from_slice(&v.steps);
        Walk { start: u.start, steps }
    }

    pub fn walk_inverse(&self, w: &Walk) -> Walk {
        Walk { start: self.walk_end(w), steps: w.steps.iter().rev().map(|s| s.flip()).collect() }
    }

    /// Deterministic BFS spanning tree of the underlying graph.
    pub fn spanning_tree(&self, base: V) -> Result<SpanningTree> {
        let n = self.n_vertices();
        let mut parent: Vec<Option<Step>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = vec![base];
        seen[base] = true;
        let mut in_tree = vec![false; self.n_arrows()];
        let mut q = VecDeque::from([base]);
        while let Some(v) = q.pop_front() {
            for st in self.steps_from(v) {
                let w = self.step_end(st);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(st);
                    in_tree[st.arrow] = true;
                    order.push(w);
                    q.push_back(w);
                }
            }
        }
        if order.len() != n {
            return Err(Error::invalid("quiver is not connected"));
        }
        let tree = (0..self.n_arrows()).filter(|&a| in_tree[a]).collect();
        let non_tree = (0..self.n_arrows()).filter(|&a| !in_tree[a]).collect();
        Ok(SpanningTree { base, parent, tree, non_tree })
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{v}\";");
        }
        for a in &self.arrows {
            let _ = writeln!(s, "  \"{}\" -> \"{}\" [label=\"{}\"];", self.vertices[a.source], self.vertices[a.target], a.id);
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: V,
    pub arrows: Vec<A>,
}

impl Path {
    pub fn trivial(v: V) -> Path {
        Path { start: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn to_walk(&self) -> Walk {
        Walk { start: self.start, steps: self.arrows.iter().map(|&a| Step::fwd(a)).collect() }
    }

    /// `self` followed by `other` (caller checks composability).
    pub fn then(&self, other: &Path) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Path { start: self.start, arrows }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub arrow: A,
    pub inverse: bool,
}

impl Step {
    pub fn fwd(arrow: A) -> Step {
        Step { arrow, inverse: false }
    }

    pub fn inv(arrow: A) -> Step {
        Step { arrow, inverse: true }
    }

    pub fn flip(self) -> Step {
        Step { arrow: self.arrow, inverse: !self.inverse }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    pub start: V,
    pub steps: Vec<Step>,
}

impl Walk {
    pub fn trivial(v: V) -> Walk {
        Walk { start: v, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.steps.windows(2).all(|w| w[0] != w[1].flip())
    }

    /// Free reduction (cancel adjacent inverse pairs).
    pub fn reduced(&self) -> Walk {
        let mut out: Vec<Step> = Vec::with_capacity(self.steps.len());
        for &s in &self.steps {
            if out.last() == Some(&s.flip()) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        Walk { start: self.start, steps: out }
    }

    /// Some(path) when every step is forward.
    pub fn as_path(&self) -> Option<Path> {
        if self.steps.iter().any(|s| s.inverse) {
            return None;
        }
        Some(Path { start: self.start, arrows: self.steps.iter().map(|s| s.arrow).collect() })
    }
}

/// Shortlex order on walks: length first, then step sequence.
pub fn shortlex(a: &Walk, b: &Walk) -> std::cmp::Ordering {
    a.steps.len().cmp(&b.steps.len()).then_with(|| a.steps.cmp(&b.steps))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub base: V,
    /// Step from the parent into each vertex; `None` at the base.
    pub parent: Vec<Option<Step>>,
    pub tree: Vec<A>,
    pub non_tree: Vec<A>,
}

impl SpanningTree {
    /// Tree walk from the base to `v`.
    pub fn walk_to(&self, q: &Quiver, v: V) -> Walk {
        let mut steps = Vec::new();
        let mut cur = v;
        while let Some(s) = self.parent[cur] {
            steps.push(s);
            cur = q.step_start(s);
        }
        steps.reverse();
        Walk { start: self.base, steps }
    }

    pub fn is_tree_arrow(&self, a: A) -> bool {
        self.tree.binary_search(&a).is_ok()
    }
}

/// A morphism of quivers. Owns copies of both quivers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverMorphism {
    pub src: Quiver,
    pub dst: Quiver,
    pub vmap: Vec<V>,
    pub amap: Vec<A>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Direction {
    Out,
    In,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Out => "out",
            Direction::In => "in",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    Start,
    End,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringReport {
    pub is_covering: bool,
    /// (source vertex, direction) pairs where the star map is not bijective.
    pub violations: Vec<(V, Direction)>,
    pub surjective_on_vertices: bool,
    pub surjective_on_arrows: bool,
}

impl QuiverMorphism {
    /// Validates incidence.
    pub fn new(src: Quiver, dst: Quiver, vmap: Vec<V>, amap: Vec<A>) -> Result<QuiverMorphism> {
        if vmap.len() != src.n_vertices() || amap.len() != src.n_arrows() {
            return Err(Error::invalid("morphism maps have the wrong size"));
        }
        if vmap.iter().any(|&v| v >= dst.n_vertices()) || amap.iter().any(|&a| a >= dst.n_arrows()) {
            return Err(Error::invalid("morphism maps into missing vertices or arrows"));
        }
        for a in 0..src.n_arrows() {
            let b = amap[a];
            if vmap[src.source(a)] != dst.source(b) || vmap[src.target(a)] != dst.target(b) {
                return Err(Error::invalid(format!(
                    "arrow {:?} maps to {:?} but endpoints do not match",
                    src.aid(a),
                    dst.aid(b)
                )));
            }
        }
        Ok(QuiverMorphism { src, dst, vmap, amap })
    }

    /// From id maps; every source vertex and arrow must be mapped.
    pub fn from_ids(src: Quiver, dst: Quiver, vmap: &BTreeMap<String, String>, amap: &BTreeMap<String, String>) -> Result<QuiverMorphism> {
        let mut vm = Vec::with_capacity(src.n_vertices());
        for v in src.vertices() {
            let img = vmap.get(v).ok_or_else(|| Error::invalid(format!("vertex {v:?} is not mapped")))?;
            vm.push(dst.vertex_or_err(img)?);
        }
        let mut am = Vec::with_capacity(src.n_arrows());
        for a in src.arrows() {
            let img = amap.get(&a.id).ok_or_else(|| Error::invalid(format!("arrow {:?} is not mapped", a.id)))?;
            am.push(dst.arrow_or_err(img)?);
        }
        for k in vmap.keys() {
            src.vertex_or_err(k)?;
        }
        for k in amap.keys() {
            src.arrow_or_err(k)?;
        }
        QuiverMorphism::new(src, dst, vm, am)
    }

    pub fn identity(q: &Quiver) -> QuiverMorphism {
        QuiverMorphism { src: q.clone(), dst: q.clone(), vmap: (0..q.n_vertices()).collect(), amap: (0..q.n_arrows()).collect() }
    }

    pub fn compose(&self, then: &QuiverMorphism) -> Result<QuiverMorphism> {
        if self.dst != then.src {
            return Err(Error::invalid("morphisms are not composable"));
        }
        let vmap = self.vmap.iter().map(|&v| then.vmap[v]).collect();
        let amap = self.amap.iter().map(|&a| then.amap[a]).collect();
        Ok(QuiverMorphism { src: self.src.clone(), dst: then.dst.clone(), vmap, amap })
    }

    pub fn map_path(&self, p: &Path) -> Path {
        Path { start: self.vmap[p.start], arrows: p.arrows.iter().map(|&a| self.amap[a]).collect() }
    }

    pub fn map_walk(&self, w: &Walk) -> Walk {
        Walk { start: self.vmap[w.start], steps: w.steps.iter().map(|s| Step { arrow: self.amap[s.arrow], inverse: s.inverse }).collect() }
    }

    /// Star bijectivity at the given source vertices (all when `None`).
    pub fn covering_report_on(&self, only: Option<&BTreeSet<V>>) -> CoveringReport {
        let mut violations = Vec::new();
        for x in 0..self.src.n_vertices() {
            if only.is_some_and(|s| !s.contains(&x)) {
                continue;
            }
            let fx = self.vmap[x];
            for dir in [Direction::Out, Direction::In] {
                let (mine, theirs) = match dir {
                    Direction::Out => (self.src.out_arrows(x), self.dst.out_arrows(fx)),
                    Direction::In => (self.src.in_arrows(x), self.dst.in_arrows(fx)),
                };
                let mut img: Vec<A> = mine.iter().map(|&a| self.amap[a]).collect();
                img.sort_unstable();
                if img != theirs {
                    violations.push((x, dir));
                }
            }
        }
        let vs: BTreeSet<V> = self.vmap.iter().copied().collect();
        let as_: BTreeSet<A> = self.amap.iter().copied().collect();
        CoveringReport {
            is_covering: violations.is_empty(),
            violations,
            surjective_on_vertices: vs.len() == self.dst.n_vertices(),
            surjective_on_arrows: as_.len() == self.dst.n_arrows(),
        }
    }

    pub fn covering_report(&self) -> CoveringReport {
        self.covering_report_on(None)
    }

    pub fn is_quiver_covering(&self) -> bool {
        self.covering_report().is_covering
    }

    /// Preimages of each target vertex, sorted.
    pub fn fibres(&self) -> Vec<Vec<V>> {
        let mut f = vec![Vec::new(); self.dst.n_vertices()];
        for (x, &y) in self.vmap.iter().enumerate() {
            f[y].push(x);
        }
        f
    }

    /// Unique lift of a target walk with the chosen endpoint at `anchor`.
    /// Fails when the anchor is over the wrong vertex or a star is
    /// incomplete along the way (truncated covers).
    pub fn lift_walk(&self, w: &Walk, anchor: V, end: Anchor) -> Result<Walk> {
        let (w, flip) = match end {
            Anchor::Start => (w.clone(), false),
            Anchor::End => (self.dst.walk_inverse(w), true),
        };
        if self.vmap[anchor] != w.start {
            return Err(Error::invalid(format!(
                "anchor {:?} lies over {:?}, not over {:?}",
                self.src.vid(anchor),
                self.dst.vid(self.vmap[anchor]),
                self.dst.vid(w.start)
            )));
        }
        let mut cur = anchor;
        let mut steps = Vec::with_capacity(w.steps.len());
        for &s in &w.steps {
            let cands: &[A] = if s.inverse { self.src.in_arrows(cur) } else { self.src.out_arrows(cur) };
            let hits: Vec<A> = cands.iter().copied().filter(|&a| self.amap[a] == s.arrow).collect();
            match hits.as_slice() {
                [a] => {
                    let st = Step { arrow: *a, inverse: s.inverse };
                    steps.push(st);
                    cur = self.src.step_end(st);
                }
                [] => return Err(Error::invalid(format!("no lift of step {:?} at {:?}", self.dst.step_str(s), self.src.vid(cur)))),
                _ => return Err(Error::invalid(format!("ambiguous lift of step {:?} at {:?}", self.dst.step_str(s), self.src.vid(cur)))),
            }
        }
        let lifted = Walk { start: anchor, steps };
        Ok(if flip { self.src.walk_inverse(&lifted) } else { lifted })
    }

    pub fn lift_path(&self, p: &Path, anchor: V, end: Anchor) -> Result<Path> {
        let w = self.lift_walk(&p.to_walk(), anchor, end)?;
        Ok(w.as_path().expect("lift of a path is a path"))
    }

    pub fn vmap_ids(&self) -> BTreeMap<String, String> {
        (0..self.src.n_vertices()).map(|v| (self.src.vid(v).to_string(), self.dst.vid(self.vmap[v]).to_string())).collect()
    }

    pub fn amap_ids(&self) -> BTreeMap<String, String> {
        (0..self.src.n_arrows()).map(|a| (self.src.aid(a).to_string(), self.dst.aid(self.amap[a]).to_string())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kronecker() -> Quiver {
        Quiver::new(&["x", "y"], &[("a", "y", "x"), ("b", "y", "x")]).unwrap()
    }

    #[test]
    fn construction_sorts_and_validates() {
        let q = Quiver::new(&["z", "a"], &[("q", "z", "a"), ("p", "a", "a")]).unwrap();
        assert_eq!(q.vertices(), ["a", "z"]);
        assert_eq!(q.aid(0), "p");
        assert!(Quiver::new(&["x", "x"], &[]).is_err());
        assert!(Quiver::new(&["x"], &[("a", "x", "y")]).is_err());
        assert!(Quiver::new(&["x"], &[("a", "x", "x"), ("a", "x", "x")]).is_err());
    }

    #[test]
    fn walk_parse_and_reduce() {
        let q = kronecker();
        let w = q.parse_walk("a,-b,b,-a", None).unwrap();
        assert_eq!(q.walk_str(&w), "a,-b,b,-a");
        assert!(!w.is_reduced());
        assert!(w.reduced().is_trivial());
        assert_eq!(w.reduced().start, q.vertex("y").unwrap());
        assert!(q.parse_walk("a,a", None).is_err());
    }

    #[test]
    fn spanning_tree_kronecker_and_single_vertex() {
        let q = kronecker();
        let t = q.spanning_tree(q.vertex("y").unwrap()).unwrap();
        assert_eq!(t.tree, vec![q.arrow("a").unwrap()]);
        assert_eq!(t.non_tree, vec![q.arrow("b").unwrap()]);
        let p = Quiver::new(&["v"], &[] as &[(&str, &str, &str)]).unwrap();
        let t = p.spanning_tree(0).unwrap();
        assert!(t.tree.is_empty() && t.non_tree.is_empty());
        let d = Quiver::new(&["u", "v"], &[] as &[(&str, &str, &str)]).unwrap();
        assert!(d.spanning_tree(0).is_err());
    }

    #[test]
    fn paths_between_counts() {
        let q = kronecker();
        let (x, y) = (q.vertex("x").unwrap(), q.vertex("y").unwrap());
        assert_eq!(q.paths_between(y, x, 5).len(), 2);
        assert_eq!(q.paths_between(x, y, 5).len(), 0);
        assert!(!q.has_oriented_cycle());
    }

    #[test]
    fn identity_is_covering_and_lifts_trivially() {
        let q = kronecker();
        let id = QuiverMorphism::identity(&q);
        assert!(id.is_quiver_covering());
        let y = q.vertex("y").unwrap();
        assert_eq!(id.lift_path(&Path::trivial(y), y, Anchor::Start).unwrap(), Path::trivial(y));
        let w = q.parse_walk("a,-b", None).unwrap();
        assert_eq!(id.lift_walk(&w, y, Anchor::Start).unwrap(), w);
    }

    #[test]
    fn two_cycle_onto_loop_is_covering() {
        let two = Quiver::new(&["x", "y"], &[("p", "x", "y"), ("q", "y", "x")]).unwrap();
        let lp = Quiver::new(&["v"], &[("l", "v", "v")]).unwrap();
        // Both arrows onto the single loop: stars at x and y each have one
        // arrow in and one out, matching the loop. That is a covering.
        let f = QuiverMorphism::new(two.clone(), lp.clone(), vec![0, 0], vec![0, 0]).unwrap();
        assert!(f.is_quiver_covering());
        // Collapsing to one vertex with a single loop but keeping only one of the
        // two arrows: fails, since nothing maps onto the loop from y's out-star.
        let line = Quiver::new(&["x", "y"], &[("p", "x", "y")]).unwrap();
        let g = QuiverMorphism::new(line, lp, vec![0, 0], vec![0]).unwrap();
        let r = g.covering_report();
        assert!(!r.is_covering);
        assert_eq!(r.violations, vec![(0, Direction::In), (1, Direction::Out)]);
    }

    #[test]
    fn incidence_is_checked() {
        let q = kronecker();
        let r = QuiverMorphism::new(q.clone(), q.clone(), vec![1, 0], vec![0, 1]);
        assert!(r.is_err());
    }
}
