//! Truncated universal covers.
//!
//! Cover vertices are homotopy classes of walks starting at the base vertex,
//! found breadth-first up to a radius. The arrow (u, alpha) runs from the
//! class of u to the class of u followed by alpha. Every vertex and arrow
//! within the radius is kept, including arrows between two frontier
//! vertices, so the result is the induced ball around the base class.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::covering::BoundQuiverMorphism;
use crate::error::{Error, Result};
use crate::group_action::PartialAuto;
use crate::homotopy::{Equivalence, HomotopyEngine};
use crate::pi1::{self, GWord, Verdict};
use crate::quiver::{shortlex, Anchor, Quiver, QuiverMorphism, Walk, A, V};
use crate::relations::{Ideal, Relation};

#[derive(Clone, Debug)]
pub struct TruncatedCover {
    pub cover: Quiver,
    pub projection: QuiverMorphism,
    /// Cover vertex of the trivial walk.
    pub base: V,
    pub radius: usize,
    /// Vertices at distance exactly `radius`; their stars may be incomplete.
    pub frontier: BTreeSet<V>,
    pub ideal: Ideal,
    /// Canonical representative walk (in the base quiver) of each vertex.
    pub reps: Vec<Walk>,
    pub distance: Vec<usize>,
    engine: HomotopyEngine,
    keys: HashMap<(V, GWord), V>,
}

/// Registry of discovered classes, in discovery order.
struct Registry<'a> {
    engine: &'a HomotopyEngine,
    reps: Vec<Walk>,
    keys: HashMap<(V, GWord), usize>,
    by_end: HashMap<V, Vec<usize>>,
}

impl Registry<'_> {
    fn find(&self, w: &Walk) -> Result<Option<usize>> {
        if let Some(k) = self.engine.class_key(w) {
            return Ok(self.keys.get(&k).copied());
        }
        let end = self.engine.quiver.walk_end(w);
        for &c in self.by_end.get(&end).into_iter().flatten() {
            match self.engine.walks_equivalent(w, &self.reps[c]) {
                Equivalence::Yes => return Ok(Some(c)),
                Equivalence::No => {}
                Equivalence::Undecided => {
                    let q = &self.engine.quiver;
                    return Err(Error::refused(format!(
                        "cannot decide whether walks {:?} and {:?} are homotopic",
                        q.walk_str(w),
                        q.walk_str(&self.reps[c])
                    )));
                }
            }
        }
        Ok(None)
    }

    fn insert(&mut self, w: Walk) -> usize {
        let c = self.reps.len();
        if let Some(k) = self.engine.class_key(&w) {
            self.keys.insert(k, c);
        }
        self.by_end.entry(self.engine.quiver.walk_end(&w)).or_default().push(c);
        self.reps.push(w);
        c
    }
}

fn vertex_name(q: &Quiver, base: V, w: &Walk) -> String {
    if w.is_trivial() {
        q.vid(base).to_string()
    } else {
        format!("{}:{}", q.vid(base), q.walk_str(w))
    }
}

pub fn build_universal_cover(ideal: &Ideal, base: V, radius: usize) -> Result<TruncatedCover> {
    build_universal_cover_with(ideal, base, radius, true)
}

/// `check` runs the covering and relation-covering postconditions off the
/// frontier; large balls are much faster without it.
pub fn build_universal_cover_with(ideal: &Ideal, base: V, radius: usize, check: bool) -> Result<TruncatedCover> {
    let q = &ideal.quiver;
    if base >= q.n_vertices() {
        return Err(Error::invalid("base vertex out of range"));
    }
    if !q.is_connected() {
        return Err(Error::invalid("universal cover needs a connected quiver"));
    }
    let engine = HomotopyEngine::new(ideal)?;
    let mut reg = Registry { engine: &engine, reps: vec![], keys: HashMap::new(), by_end: HashMap::new() };
    reg.insert(Walk::trivial(base));
    let mut distance = vec![0];
    // (source class, base arrow) -> target class
    let mut edges: BTreeMap<(usize, A), usize> = BTreeMap::new();
    let mut layer = vec![0usize];
    for d in 0..=radius {
        let mut cands: Vec<(Walk, usize, crate::quiver::Step)> = Vec::new();
        for &c in &layer {
            let rep = &reg.reps[c];
            for s in q.steps_from(q.walk_end(rep)) {
                let mut w = rep.clone();
                w.steps.push(s);
                cands.push((w.reduced(), c, s));
            }
        }
        cands.sort_by(|a, b| shortlex(&a.0, &b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        let mut next = Vec::new();
        for (w, from, s) in cands {
            let to = match reg.find(&w)? {
                Some(t) => t,
                // Past the radius only links between known classes count.
                None if d == radius => continue,
                None => {
                    let t = reg.insert(w);
                    distance.push(d + 1);
                    next.push(t);
                    t
                }
            };
            let key = if s.inverse { (to, s.arrow) } else { (from, s.arrow) };
            let other = if s.inverse { from } else { to };
            if let Some(&prev) = edges.get(&key) {
                if prev != other {
                    return Err(Error::Contradiction(format!("arrow {:?} lifts ambiguously", q.aid(s.arrow))));
                }
            }
            edges.insert(key, other);
        }
        layer = next;
    }

    let names: Vec<String> = reg.reps.iter().map(|w| vertex_name(q, base, w)).collect();
    let arrows: Vec<(String, String, String)> =
        edges.iter().map(|(&(s, a), &t)| (format!("{}|{}", names[s], q.aid(a)), names[s].clone(), names[t].clone())).collect();
    let cover = Quiver::new(&names, &arrows)?;
    let index: Vec<V> = names.iter().map(|n| cover.vertex(n).expect("just inserted")).collect();
    let mut reps = vec![Walk::trivial(base); names.len()];
    let mut dist = vec![0; names.len()];
    for (c, w) in reg.reps.iter().enumerate() {
        reps[index[c]] = w.clone();
        dist[index[c]] = distance[c];
    }
    let vmap: Vec<V> = reps.iter().map(|w| q.walk_end(w)).collect();
    let mut amap = vec![0; cover.n_arrows()];
    for &(s, a) in edges.keys() {
        amap[cover.arrow(&format!("{}|{}", names[s], q.aid(a))).expect("just inserted")] = a;
    }
    let projection = QuiverMorphism::new(cover.clone(), q.clone(), vmap, amap)?;
    let frontier: BTreeSet<V> = (0..cover.n_vertices()).filter(|&v| dist[v] == radius).collect();
    let cover_ideal = lift_ideal(ideal, &projection)?;
    let keys = reg.keys.iter().map(|(k, &c)| (k.clone(), index[c])).collect();
    let cov = TruncatedCover {
        cover,
        projection,
        base: index[0],
        radius,
        frontier,
        ideal: cover_ideal,
        reps,
        distance: dist,
        engine: engine.clone(),
        keys,
    };
    if check {
        cov.check_postconditions(ideal)?;
    }
    Ok(cov)
}

/// Lifts of the minimal generators of the base ideal at every fibre vertex,
/// skipping lifts that leave the truncation.
fn lift_ideal(ideal: &Ideal, pi: &QuiverMorphism) -> Result<Ideal> {
    let cover = &pi.src;
    let mut gens: Vec<Relation> = Vec::new();
    for (_, rho) in ideal.minimal_generators()? {
        for anchor in 0..cover.n_vertices() {
            if pi.vmap[anchor] != rho.source {
                continue;
            }
            let lifts: Option<Vec<_>> = rho.terms.iter().map(|(_, p)| pi.lift_path(p, anchor, Anchor::Start).ok()).collect();
            let Some(lifts) = lifts else { continue };
            let ends: BTreeSet<V> = lifts.iter().map(|p| cover.path_end(p)).collect();
            if ends.len() != 1 {
                return Err(Error::Contradiction(format!(
                    "paths of {} lift to different endpoints from {:?}",
                    rho.display(&ideal.quiver),
                    cover.vid(anchor)
                )));
            }
            let terms = rho.terms.iter().zip(lifts).map(|((c, _), p)| (c.clone(), p)).collect();
            gens.push(Relation::new(cover, terms)?.normalized());
        }
    }
    gens.sort_by_key(|r| r.display(cover));
    gens.dedup();
    Ideal::new(cover.clone(), gens, ideal.nilpotency_bound, Some(ideal.truncation_length))
}

impl TruncatedCover {
    pub fn interior(&self) -> BTreeSet<V> {
        (0..self.cover.n_vertices()).filter(|v| !self.frontier.contains(v)).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.engine.is_exact()
    }

    fn check_postconditions(&self, base_ideal: &Ideal) -> Result<()> {
        let interior = self.interior();
        let rep = self.projection.covering_report_on(Some(&interior));
        if !rep.is_covering {
            return Err(Error::Contradiction("projection is not a covering off the frontier".into()));
        }
        let m = BoundQuiverMorphism::new(self.projection.clone(), self.ideal.clone(), base_ideal.clone())?;
        let r = m.relation_covering_report(Some(&interior))?;
        if !r.is_covering {
            return Err(Error::Contradiction("projection is not a relation covering off the frontier".into()));
        }
        Ok(())
    }

    /// Cover vertex holding the class of `w`, a walk from the base vertex.
    pub fn class_of(&self, w: &Walk) -> Result<Option<V>> {
        let w = w.reduced();
        if let Some(k) = self.engine.class_key(&w) {
            return Ok(self.keys.get(&k).copied());
        }
        let end = self.engine.quiver.walk_end(&w);
        for v in 0..self.cover.n_vertices() {
            if self.projection.vmap[v] != end {
                continue;
            }
            match self.engine.walks_equivalent(&w, &self.reps[v]) {
                Equivalence::Yes => return Ok(Some(v)),
                Equivalence::No => {}
                Equivalence::Undecided => {
                    return Err(Error::refused(format!("cannot place walk {:?} in the cover", self.engine.quiver.walk_str(&w))))
                }
            }
        }
        Ok(None)
    }

    pub fn vertex_ids(&self, vs: &BTreeSet<V>) -> Vec<String> {
        vs.iter().map(|&v| self.cover.vid(v).to_string()).collect()
    }
}

/// The deck transformation of a closed walk `v` at the base: the class of
/// u goes to the class of v^-1 followed by u. Defined where the image stays
/// inside the truncation.
pub fn deck_action(cov: &TruncatedCover, v: &Walk) -> Result<PartialAuto> {
    let q = &cov.projection.dst;
    let b = cov.projection.vmap[cov.base];
    if v.start != b || q.walk_end(v) != b {
        return Err(Error::invalid("deck word must be a closed walk at the base vertex"));
    }
    let inv = q.walk_inverse(v);
    let c = &cov.cover;
    let mut vmap = vec![None; c.n_vertices()];
    for (u, rep) in cov.reps.iter().enumerate() {
        vmap[u] = cov.class_of(&q.walk_concat(&inv, rep))?;
    }
    let mut amap = vec![None; c.n_arrows()];
    for a in 0..c.n_arrows() {
        let (Some(s), Some(t)) = (vmap[c.source(a)], vmap[c.target(a)]) else { continue };
        let base_arrow = cov.projection.amap[a];
        amap[a] = c.out_arrows(s).iter().copied().find(|&x| cov.projection.amap[x] == base_arrow && c.target(x) == t);
    }
    let g = PartialAuto { vmap, amap };
    g.validate(c)?;
    let trivial = cov.class_of(v)? == Some(cov.base);
    if trivial {
        if !g.is_identity_on_domain() {
            return Err(Error::Contradiction("null-homotopic deck word moves a vertex".into()));
        }
    } else if g.vmap.iter().enumerate().any(|(i, x)| *x == Some(i)) {
        return Err(Error::Contradiction(format!("deck word {:?} has a fixed vertex", q.walk_str(v))));
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverPi1Report {
    pub verdict: Verdict,
    pub relators: Vec<String>,
    /// True when the cover has a frontier, so the verdict only speaks about
    /// the truncation.
    pub within_radius: bool,
}

pub fn check_trivial_pi1_of_cover(cov: &TruncatedCover) -> Result<CoverPi1Report> {
    let (_, pres) = pi1::pi1_presentation(&cov.ideal, cov.base)?;
    let s = pi1::simplify(&pres);
    Ok(CoverPi1Report { relators: s.presentation.relator_strs(), verdict: s.verdict, within_radius: !cov.frontier.is_empty() })
}
