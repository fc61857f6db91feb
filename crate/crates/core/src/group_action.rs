//! Group actions on quivers: balls of words in generating automorphisms,
//! freeness and admissibility, orbit quivers, Galois recognition and
//! exhaustive isomorphism search.
//!
//! Elements are partial maps. On finite quivers they are total; deck
//! transformations of a truncated cover are only defined where the image
//! stays inside the truncation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::covering::BoundQuiverMorphism;
use crate::error::{Error, Result};
use crate::quiver::{Quiver, QuiverMorphism, A, V};
use crate::relations::{Ideal, Relation};

pub const DEFAULT_SEARCH_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialAuto {
    pub vmap: Vec<Option<V>>,
    pub amap: Vec<Option<A>>,
}

impl PartialAuto {
    pub fn identity(q: &Quiver) -> PartialAuto {
        PartialAuto { vmap: (0..q.n_vertices()).map(Some).collect(), amap: (0..q.n_arrows()).map(Some).collect() }
    }

    pub fn from_morphism(f: &QuiverMorphism) -> PartialAuto {
        PartialAuto { vmap: f.vmap.iter().map(|&v| Some(v)).collect(), amap: f.amap.iter().map(|&a| Some(a)).collect() }
    }

    /// Total automorphism from id maps; validated.
    pub fn from_ids(q: &Quiver, vmap: &BTreeMap<String, String>, amap: &BTreeMap<String, String>) -> Result<PartialAuto> {
        let f = QuiverMorphism::from_ids(q.clone(), q.clone(), vmap, amap)?;
        let g = PartialAuto::from_morphism(&f);
        g.validate(q)?;
        Ok(g)
    }

    /// Injective, and incidence-preserving wherever the arrow map is defined.
    pub fn validate(&self, q: &Quiver) -> Result<()> {
        let vs: Vec<V> = self.vmap.iter().flatten().copied().collect();
        let as_: Vec<A> = self.amap.iter().flatten().copied().collect();
        if vs.len() != vs.iter().collect::<BTreeSet<_>>().len() || as_.len() != as_.iter().collect::<BTreeSet<_>>().len() {
            return Err(Error::invalid("group element is not injective"));
        }
        for (a, img) in self.amap.iter().enumerate() {
            if let Some(b) = img {
                if self.vmap[q.source(a)] != Some(q.source(*b)) || self.vmap[q.target(a)] != Some(q.target(*b)) {
                    return Err(Error::invalid(format!("group element breaks incidence at arrow {:?}", q.aid(a))));
                }
            }
        }
        Ok(())
    }

    pub fn is_total(&self) -> bool {
        self.vmap.iter().all(Option::is_some) && self.amap.iter().all(Option::is_some)
    }

    pub fn is_empty(&self) -> bool {
        self.vmap.iter().all(Option::is_none)
    }

    /// Fixes every vertex and arrow where it is defined.
    pub fn is_identity_on_domain(&self) -> bool {
        self.vmap.iter().enumerate().all(|(i, v)| v.is_none_or(|v| v == i)) && self.amap.iter().enumerate().all(|(i, a)| a.is_none_or(|a| a == i))
    }

    /// `self` after `first`.
    pub fn after(&self, first: &PartialAuto) -> PartialAuto {
        PartialAuto {
            vmap: first.vmap.iter().map(|v| v.and_then(|v| self.vmap[v])).collect(),
            amap: first.amap.iter().map(|a| a.and_then(|a| self.amap[a])).collect(),
        }
    }

    pub fn inverse(&self) -> PartialAuto {
        let mut vmap = vec![None; self.vmap.len()];
        let mut amap = vec![None; self.amap.len()];
        for (i, v) in self.vmap.iter().enumerate() {
            if let Some(v) = v {
                vmap[*v] = Some(i);
            }
        }
        for (i, a) in self.amap.iter().enumerate() {
            if let Some(a) = a {
                amap[*a] = Some(i);
            }
        }
        PartialAuto { vmap, amap }
    }

    pub fn as_morphism(&self, q: &Quiver) -> Option<QuiverMorphism> {
        if !self.is_total() {
            return None;
        }
        Some(QuiverMorphism {
            src: q.clone(),
            dst: q.clone(),
            vmap: self.vmap.iter().map(|v| v.unwrap()).collect(),
            amap: self.amap.iter().map(|a| a.unwrap()).collect(),
        })
    }

    /// Every generator maps into the ideal. Only meaningful for total maps.
    pub fn preserves_ideal(&self, ideal: &Ideal) -> Result<bool> {
        let f = self.as_morphism(&ideal.quiver).ok_or_else(|| Error::invalid("ideal preservation needs a total map"))?;
        for g in &ideal.generators {
            if !ideal.contains(&g.map(&f))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn vmap_ids(&self, q: &Quiver) -> BTreeMap<String, String> {
        self.vmap.iter().enumerate().filter_map(|(i, v)| v.map(|v| (q.vid(i).to_string(), q.vid(v).to_string()))).collect()
    }

    pub fn amap_ids(&self, q: &Quiver) -> BTreeMap<String, String> {
        self.amap.iter().enumerate().filter_map(|(i, a)| a.map(|a| (q.aid(i).to_string(), q.aid(a).to_string()))).collect()
    }
}

/// A word in the generators: (generator index, inverted).
pub type Word = Vec<(usize, bool)>;

pub fn word_str(w: &Word) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|&(g, inv)| if inv { format!("g{g}^-1") } else { format!("g{g}") }).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug)]
pub struct ActionPresentation {
    pub quiver: Quiver,
    pub generators: Vec<PartialAuto>,
    pub enumeration_bound: usize,
}

#[derive(Clone, Debug)]
pub struct Ball {
    pub quiver: Quiver,
    /// Distinct elements with a shortest word; the identity comes first.
    pub elements: Vec<(PartialAuto, Word)>,
    /// All elements total and one more layer adds nothing: the group is
    /// finite and fully enumerated.
    pub closed: bool,
}

impl ActionPresentation {
    pub fn new(quiver: Quiver, generators: Vec<PartialAuto>, enumeration_bound: usize) -> Result<ActionPresentation> {
        for g in &generators {
            if g.vmap.len() != quiver.n_vertices() || g.amap.len() != quiver.n_arrows() {
                return Err(Error::invalid("group element has the wrong size"));
            }
            g.validate(&quiver)?;
        }
        Ok(ActionPresentation { quiver, generators, enumeration_bound })
    }

    pub fn trivial(quiver: Quiver) -> ActionPresentation {
        ActionPresentation { quiver, generators: vec![], enumeration_bound: 0 }
    }

    /// Words of length at most the bound. Maps that are empty, or the
    /// identity on their domain, are not recorded as new elements.
    pub fn ball(&self) -> Ball {
        let id = PartialAuto::identity(&self.quiver);
        let letters: Vec<(PartialAuto, (usize, bool))> = self
            .generators
            .iter()
            .enumerate()
            .flat_map(|(i, g)| [(g.clone(), (i, false)), (g.inverse(), (i, true))])
            .collect();
        let mut seen: BTreeSet<PartialAuto> = BTreeSet::from([id.clone()]);
        let mut elements = vec![(id.clone(), Word::new())];
        let mut layer = vec![(id, Word::new())];
        let mut grew_past_bound = false;
        for depth in 0..=self.enumeration_bound {
            let mut next = Vec::new();
            for (e, w) in &layer {
                for (l, tag) in &letters {
                    let ne = l.after(e);
                    if ne.is_empty() || ne.is_identity_on_domain() || seen.contains(&ne) {
                        continue;
                    }
                    if depth == self.enumeration_bound {
                        grew_past_bound = true;
                        continue;
                    }
                    seen.insert(ne.clone());
                    let mut nw = w.clone();
                    nw.push(*tag);
                    next.push((ne, nw));
                }
            }
            elements.extend(next.iter().cloned());
            layer = next;
            if layer.is_empty() {
                break;
            }
        }
        let closed = !grew_past_bound && layer.is_empty() && elements.iter().all(|(e, _)| e.is_total());
        Ball { quiver: self.quiver.clone(), elements, closed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    pub free: bool,
    /// The verdict covers the whole group (closed ball).
    pub exact: bool,
    /// (word, fixed vertex id)
    pub witness: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub exact: bool,
    /// (vertex, "successors" or "predecessors", two vertices in one orbit)
    pub witness: Option<(String, &'static str, String, String)>,
}

impl Ball {
    pub fn acts_freely(&self) -> FreenessReport {
        for (e, w) in self.elements.iter().skip(1) {
            for (v, img) in e.vmap.iter().enumerate() {
                if *img == Some(v) {
                    return FreenessReport { free: false, exact: self.closed, witness: Some((word_str(w), self.quiver.vid(v).to_string())) };
                }
            }
        }
        FreenessReport { free: true, exact: self.closed, witness: None }
    }

    /// Vertex orbit representative (least index) for every vertex.
    pub fn vertex_orbits(&self) -> Vec<V> {
        let mut uf = UnionFind::new(self.quiver.n_vertices());
        for (e, _) in &self.elements {
            for (v, img) in e.vmap.iter().enumerate() {
                if let Some(w) = img {
                    uf.union(v, *w);
                }
            }
        }
        (0..self.quiver.n_vertices()).map(|v| uf.least(v)).collect()
    }

    pub fn arrow_orbits(&self) -> Vec<A> {
        let mut uf = UnionFind::new(self.quiver.n_arrows());
        for (e, _) in &self.elements {
            for (a, img) in e.amap.iter().enumerate() {
                if let Some(b) = img {
                    uf.union(a, *b);
                }
            }
        }
        (0..self.quiver.n_arrows()).map(|a| uf.least(a)).collect()
    }

    pub fn is_admissible(&self) -> AdmissibilityReport {
        let q = &self.quiver;
        let orb = self.vertex_orbits();
        for x in 0..q.n_vertices() {
            for (label, nbrs) in [
                ("successors", q.out_arrows(x).iter().map(|&a| q.target(a)).collect::<BTreeSet<V>>()),
                ("predecessors", q.in_arrows(x).iter().map(|&a| q.source(a)).collect::<BTreeSet<V>>()),
            ] {
                let mut by_orbit: BTreeMap<V, V> = BTreeMap::new();
                for &n in &nbrs {
                    if let Some(&prev) = by_orbit.get(&orb[n]) {
                        return AdmissibilityReport {
                            admissible: false,
                            exact: self.closed,
                            witness: Some((q.vid(x).to_string(), label, q.vid(prev).to_string(), q.vid(n).to_string())),
                        };
                    }
                    by_orbit.insert(orb[n], n);
                }
            }
        }
        AdmissibilityReport { admissible: true, exact: self.closed, witness: None }
    }

    /// Every element of a closed ball preserves the ideal.
    pub fn preserves_ideal(&self, ideal: &Ideal) -> Result<bool> {
        for (e, _) in &self.elements {
            if !e.preserves_ideal(ideal)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Orbit quiver with projection and induced ideal. Needs a closed ball.
    pub fn orbit_quiver(&self, ideal: &Ideal) -> Result<OrbitQuiver> {
        if !self.closed {
            return Err(Error::refused("orbit quiver needs a finite, fully enumerated group (ball not closed)"));
        }
        let q = &self.quiver;
        let vorb = self.vertex_orbits();
        let aorb = self.arrow_orbits();
        let vreps: Vec<V> = vorb.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let areps: Vec<A> = aorb.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let vnames: Vec<String> = vreps.iter().map(|&v| q.vid(v).to_string()).collect();
        let arrows: Vec<(String, String, String)> =
            areps.iter().map(|&a| (q.aid(a).to_string(), q.vid(vorb[q.source(a)]).to_string(), q.vid(vorb[q.target(a)]).to_string())).collect();
        let oq = Quiver::new(&vnames, &arrows)?;
        let vmap: Vec<V> = (0..q.n_vertices()).map(|v| oq.vertex(q.vid(vorb[v])).unwrap()).collect();
        let amap: Vec<A> = (0..q.n_arrows()).map(|a| oq.arrow(q.aid(aorb[a])).unwrap()).collect();
        let projection = QuiverMorphism::new(q.clone(), oq.clone(), vmap, amap)?;
        let mut gens: Vec<Relation> = Vec::new();
        for g in &ideal.generators {
            let img = g.map(&projection);
            if img.is_zero() {
                continue;
            }
            let norm = img.normalized();
            if !gens.iter().any(|h| h.normalized() == norm) {
                gens.push(img);
            }
        }
        let induced = Ideal::new(oq.clone(), gens, ideal.nilpotency_bound, Some(ideal.truncation_length))?;
        let free = self.acts_freely().free;
        if free {
            let m = BoundQuiverMorphism::new(projection.clone(), ideal.clone(), induced.clone())?;
            if !m.is_relation_covering()?.is_covering {
                return Err(Error::Contradiction("projection of a free action is not a relation covering".into()));
            }
        }
        Ok(OrbitQuiver { quiver: oq, projection, ideal: induced, free })
    }
}

#[derive(Clone, Debug)]
pub struct OrbitQuiver {
    pub quiver: Quiver,
    pub projection: QuiverMorphism,
    pub ideal: Ideal,
    pub free: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisReport {
    pub is_galois: bool,
    pub reason: String,
}

/// Whether `m` is the quotient by the (closed) ball's group, up to an
/// isomorphism of the orbit quiver forced by the projection.
pub fn is_galois_covering(m: &BoundQuiverMorphism, ball: &Ball) -> Result<GaloisReport> {
    if !ball.closed {
        return Err(Error::refused("Galois check needs a finite, fully enumerated group (ball not closed)"));
    }
    let no = |reason: String| Ok(GaloisReport { is_galois: false, reason });
    let fr = ball.acts_freely();
    if !fr.free {
        let (w, v) = fr.witness.unwrap();
        return no(format!("element {w} fixes vertex {v}"));
    }
    if !ball.preserves_ideal(&m.src_ideal)? {
        return no("some group element does not preserve the source ideal".into());
    }
    let f = &m.map;
    for (e, w) in &ball.elements {
        let moved_v = e.vmap.iter().enumerate().any(|(v, img)| f.vmap[img.unwrap()] != f.vmap[v]);
        let moved_a = e.amap.iter().enumerate().any(|(a, img)| f.amap[img.unwrap()] != f.amap[a]);
        if moved_v || moved_a {
            return no(format!("the map is not constant on orbits (element {})", word_str(w)));
        }
    }
    let orbit = ball.orbit_quiver(&m.src_ideal)?;
    // nu is forced: nu(pi(x)) = f(x).
    let oq = &orbit.quiver;
    let mut nu_v = vec![usize::MAX; oq.n_vertices()];
    let mut nu_a = vec![usize::MAX; oq.n_arrows()];
    for v in 0..f.src.n_vertices() {
        nu_v[orbit.projection.vmap[v]] = f.vmap[v];
    }
    for a in 0..f.src.n_arrows() {
        nu_a[orbit.projection.amap[a]] = f.amap[a];
    }
    let bij = |xs: &[usize], n: usize| xs.len() == n && xs.iter().collect::<BTreeSet<_>>().len() == n;
    if !bij(&nu_v, f.dst.n_vertices()) || !bij(&nu_a, f.dst.n_arrows()) {
        return no(format!(
            "orbit quiver has {} vertices and {} arrows, but the forced map onto the target is not bijective",
            oq.n_vertices(),
            oq.n_arrows()
        ));
    }
    let nu = QuiverMorphism::new(oq.clone(), f.dst.clone(), nu_v, nu_a)?;
    if !ideals_correspond(&nu, &orbit.ideal, &m.dst_ideal)? {
        return no("induced ideal differs from the target ideal".into());
    }
    Ok(GaloisReport { is_galois: true, reason: format!("group of order {} acts freely; orbit quiver matches the target", ball.elements.len()) })
}

/// For an isomorphism `nu`: nu(I1) is contained in I2 and nu^-1(I2) in I1.
pub fn ideals_correspond(nu: &QuiverMorphism, i1: &Ideal, i2: &Ideal) -> Result<bool> {
    for g in &i1.generators {
        if !i2.contains(&g.map(nu))? {
            return Ok(false);
        }
    }
    let inv = invert_iso(nu);
    for g in &i2.generators {
        if !i1.contains(&g.map(&inv))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn invert_iso(nu: &QuiverMorphism) -> QuiverMorphism {
    let mut vmap = vec![0; nu.vmap.len()];
    let mut amap = vec![0; nu.amap.len()];
    for (i, &v) in nu.vmap.iter().enumerate() {
        vmap[v] = i;
    }
    for (i, &a) in nu.amap.iter().enumerate() {
        amap[a] = i;
    }
    QuiverMorphism { src: nu.dst.clone(), dst: nu.src.clone(), vmap, amap }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome<T> {
    Done(T),
    /// Node cap reached; partial result attached.
    CapReached(T),
}

impl<T> SearchOutcome<T> {
    pub fn value(&self) -> &T {
        match self {
            SearchOutcome::Done(t) | SearchOutcome::CapReached(t) => t,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, SearchOutcome::Done(_))
    }
}

/// Backtracking enumeration of isomorphisms (Q1, I1) -> (Q2, I2), in
/// lexicographic order of vertex assignments. `visit` returns false to stop.
pub fn for_each_isomorphism(
    q1: &Quiver,
    i1: Option<&Ideal>,
    q2: &Quiver,
    i2: Option<&Ideal>,
    cap: usize,
    mut visit: impl FnMut(&QuiverMorphism) -> Result<bool>,
) -> Result<bool> {
    if q1.n_vertices() != q2.n_vertices() || q1.n_arrows() != q2.n_arrows() {
        return Ok(true);
    }
    let n = q1.n_vertices();
    let count = |q: &Quiver| {
        let mut c: HashMap<(V, V), Vec<A>> = HashMap::new();
        for (i, a) in q.arrows().iter().enumerate() {
            c.entry((a.source, a.target)).or_default().push(i);
        }
        c
    };
    let (c1, c2) = (count(q1), count(q2));
    let mult = |c: &HashMap<(V, V), Vec<A>>, u: V, v: V| c.get(&(u, v)).map_or(0, Vec::len);
    let sig = |q: &Quiver, c: &HashMap<(V, V), Vec<A>>, v: V| (q.out_arrows(v).len(), q.in_arrows(v).len(), mult(c, v, v));
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut nodes = 0usize;
    let mut stop = false;

    struct Ctx<'a, F> {
        q1: &'a Quiver,
        q2: &'a Quiver,
        i1: Option<&'a Ideal>,
        i2: Option<&'a Ideal>,
        c1: &'a HashMap<(V, V), Vec<A>>,
        c2: &'a HashMap<(V, V), Vec<A>>,
        cap: usize,
        visit: F,
    }

    fn arrows_rec<F: FnMut(&QuiverMorphism) -> Result<bool>>(
        ctx: &mut Ctx<'_, F>,
        classes: &[(Vec<A>, Vec<A>)],
        k: usize,
        amap: &mut Vec<A>,
        sigma: &[V],
        nodes: &mut usize,
        stop: &mut bool,
    ) -> Result<()> {
        if *stop {
            return Ok(());
        }
        if k == classes.len() {
            let f = QuiverMorphism { src: ctx.q1.clone(), dst: ctx.q2.clone(), vmap: sigma.to_vec(), amap: amap.clone() };
            let ok = match (ctx.i1, ctx.i2) {
                (None, None) => true,
                (Some(a), Some(b)) => ideals_correspond(&f, a, b)?,
                (Some(a), None) => ideals_correspond(&f, a, &Ideal::zero(ctx.q2.clone(), a.truncation_length))?,
                (None, Some(b)) => ideals_correspond(&f, &Ideal::zero(ctx.q1.clone(), b.truncation_length), b)?,
            };
            if ok && !(ctx.visit)(&f)? {
                *stop = true;
            }
            return Ok(());
        }
        let (src, dst) = &classes[k];
        for perm in permutations(dst.len()) {
            *nodes += 1;
            if *nodes > ctx.cap {
                return Err(Error::refused("isomorphism search cap reached"));
            }
            for (i, &a) in src.iter().enumerate() {
                amap[a] = dst[perm[i]];
            }
            arrows_rec(ctx, classes, k + 1, amap, sigma, nodes, stop)?;
            if *stop {
                return Ok(());
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn vert_rec<F: FnMut(&QuiverMorphism) -> Result<bool>>(
        ctx: &mut Ctx<'_, F>,
        v: usize,
        sigma: &mut Vec<V>,
        used: &mut Vec<bool>,
        nodes: &mut usize,
        stop: &mut bool,
        sigs: &(Vec<(usize, usize, usize)>, Vec<(usize, usize, usize)>),
    ) -> Result<()> {
        let n = sigma.len();
        if v == n {
            let mut classes: Vec<(Vec<A>, Vec<A>)> = ctx
                .c1
                .iter()
                .map(|(&(s, t), arrows)| (arrows.clone(), ctx.c2.get(&(sigma[s], sigma[t])).cloned().unwrap_or_default()))
                .collect();
            classes.sort();
            let mut amap = vec![0; ctx.q1.n_arrows()];
            return arrows_rec(ctx, &classes, 0, &mut amap, sigma, nodes, stop);
        }
        for w in 0..n {
            if used[w] || sigs.0[v] != sigs.1[w] {
                continue;
            }
            *nodes += 1;
            if *nodes > ctx.cap {
                return Err(Error::refused("isomorphism search cap reached"));
            }
            let m1 = |a: V, b: V| ctx.c1.get(&(a, b)).map_or(0, Vec::len);
            let m2 = |a: V, b: V| ctx.c2.get(&(a, b)).map_or(0, Vec::len);
            let consistent = (0..v).all(|u| m1(u, v) == m2(sigma[u], w) && m1(v, u) == m2(w, sigma[u]));
            if !consistent {
                continue;
            }
            sigma[v] = w;
            used[w] = true;
            vert_rec(ctx, v + 1, sigma, used, nodes, stop, sigs)?;
            used[w] = false;
            sigma[v] = usize::MAX;
            if *stop {
                return Ok(());
            }
        }
        Ok(())
    }

    let sigs = ((0..n).map(|v| sig(q1, &c1, v)).collect(), (0..n).map(|v| sig(q2, &c2, v)).collect());
    let mut ctx = Ctx { q1, q2, i1, i2, c1: &c1, c2: &c2, cap, visit: &mut visit };
    match vert_rec(&mut ctx, 0, &mut sigma, &mut used, &mut nodes, &mut stop, &sigs) {
        Ok(()) => Ok(true),
        Err(Error::Refused(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// First isomorphism of bound quivers, if any.
pub fn find_isomorphism(q1: &Quiver, i1: Option<&Ideal>, q2: &Quiver, i2: Option<&Ideal>, cap: usize) -> Result<SearchOutcome<Option<QuiverMorphism>>> {
    let mut found = None;
    let complete = for_each_isomorphism(q1, i1, q2, i2, cap, |f| {
        found = Some(f.clone());
        Ok(false)
    })?;
    Ok(if complete || found.is_some() { SearchOutcome::Done(found) } else { SearchOutcome::CapReached(found) })
}

/// All automorphisms of (Q, I).
pub fn automorphisms(q: &Quiver, ideal: Option<&Ideal>, cap: usize) -> Result<SearchOutcome<Vec<PartialAuto>>> {
    let mut out = Vec::new();
    let complete = for_each_isomorphism(q, ideal, q, ideal, cap, |f| {
        out.push(PartialAuto::from_morphism(f));
        Ok(true)
    })?;
    Ok(if complete { SearchOutcome::Done(out) } else { SearchOutcome::CapReached(out) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaloisExistence {
    /// Some group realizes the covering as a Galois covering; the deck group works.
    Exists { group_order: usize },
    /// No group can: any such group consists of deck transformations, which
    /// here do not act transitively on fibres or do not give the target.
    None { reason: String },
    /// Automorphism search hit its cap.
    Inconclusive,
}

/// Decides whether any group of (Q, I)-automorphisms makes `m` Galois.
/// A group G that works satisfies f g = f, so G lies in the deck group, and
/// G must be transitive on fibres. The deck group of a covering of a
/// connected quiver acts freely, so it suffices to test the deck group.
pub fn galois_group_exists(m: &BoundQuiverMorphism, cap: usize) -> Result<GaloisExistence> {
    let f = &m.map;
    let autos = automorphisms(&f.src, Some(&m.src_ideal), cap)?;
    let SearchOutcome::Done(autos) = autos else {
        return Ok(GaloisExistence::Inconclusive);
    };
    let deck: Vec<PartialAuto> = autos
        .into_iter()
        .filter(|g| {
            g.vmap.iter().enumerate().all(|(v, img)| f.vmap[img.unwrap()] == f.vmap[v])
                && g.amap.iter().enumerate().all(|(a, img)| f.amap[img.unwrap()] == f.amap[a])
        })
        .collect();
    for (b, fibre) in f.fibres().iter().enumerate() {
        let Some(&x) = fibre.first() else { continue };
        let reached: BTreeSet<V> = deck.iter().map(|g| g.vmap[x].unwrap()).collect();
        if reached.len() != fibre.len() {
            return Ok(GaloisExistence::None {
                reason: format!(
                    "deck group has order {}; it moves {:?} to {} of the {} vertices over {:?}",
                    deck.len(),
                    f.src.vid(x),
                    reached.len(),
                    fibre.len(),
                    f.dst.vid(b)
                ),
            });
        }
    }
    let ball = Ball { quiver: f.src.clone(), elements: deck.iter().map(|g| (g.clone(), Word::new())).collect(), closed: true };
    let r = is_galois_covering(m, &ball)?;
    Ok(if r.is_galois { GaloisExistence::Exists { group_order: deck.len() } } else { GaloisExistence::None { reason: r.reason } })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    /// Keeps the smaller index as root, so roots are least members.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    fn least(&mut self, x: usize) -> usize {
        self.find(x)
    }
}

/// Convenience for tests and fixtures: a total automorphism from pairs.
pub fn auto_from_pairs(q: &Quiver, vs: &[(&str, &str)], arrows: &[(&str, &str)]) -> Result<PartialAuto> {
    let vm: BTreeMap<String, String> = vs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let am: BTreeMap<String, String> = arrows.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    PartialAuto::from_ids(q, &vm, &am)
}
