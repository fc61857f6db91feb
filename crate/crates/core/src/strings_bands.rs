//! Strings and bands of monomial bound quivers, their modules, and lines in
//! covers.
//!
//! A string is a reduced walk whose direct and inverse runs avoid the ideal.
//! Strings are identified with their inverses; bands are cyclic strings up
//! to rotation and inversion whose powers are strings, and which are not
//! proper powers themselves.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group_action::{word_str, Ball, PartialAuto};
use crate::linalg::Mat;
use crate::quiver::{Anchor, Path, Quiver, Step, Walk, V};
use crate::relations::Ideal;
use crate::reps::Representation;
use crate::scalar::Scalar;
use crate::universal_cover::TruncatedCover;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringReport {
    pub is_string: bool,
    /// First violated condition, empty when `is_string`.
    pub witness: String,
}

/// Monomial ideal, at most two arrows in and out of every vertex, and for
/// each arrow at most one arrow on each side composing with it outside the
/// ideal.
pub fn is_string_presentation(ideal: &Ideal) -> Result<StringReport> {
    let q = &ideal.quiver;
    let fail = |w: String| Ok(StringReport { is_string: false, witness: w });
    if !ideal.is_monomial()? {
        return fail("ideal is not generated by paths".into());
    }
    for v in 0..q.n_vertices() {
        if q.out_arrows(v).len() > 2 {
            return fail(format!("more than two arrows start at {:?}", q.vid(v)));
        }
        if q.in_arrows(v).len() > 2 {
            return fail(format!("more than two arrows end at {:?}", q.vid(v)));
        }
    }
    for a in 0..q.n_arrows() {
        let after = q.out_arrows(q.target(a)).iter().filter(|&&b| !ideal.contains_path(&path2(q, a, b)).unwrap_or(true)).count();
        if after > 1 {
            return fail(format!("two arrows compose after {:?} outside the ideal", q.aid(a)));
        }
        let before = q.in_arrows(q.source(a)).iter().filter(|&&b| !ideal.contains_path(&path2(q, b, a)).unwrap_or(true)).count();
        if before > 1 {
            return fail(format!("two arrows compose before {:?} outside the ideal", q.aid(a)));
        }
    }
    Ok(StringReport { is_string: true, witness: String::new() })
}

fn path2(q: &Quiver, a: usize, b: usize) -> Path {
    Path { start: q.source(a), arrows: vec![a, b] }
}

fn require_monomial(ideal: &Ideal) -> Result<()> {
    if !ideal.is_monomial()? {
        return Err(Error::invalid("strings and bands need a monomial ideal"));
    }
    Ok(())
}

/// Maximal runs of equally oriented steps, as paths.
fn runs(q: &Quiver, w: &Walk) -> Vec<Path> {
    let mut out = Vec::new();
    let mut i = 0;
    let mut at = w.start;
    while i < w.steps.len() {
        let inv = w.steps[i].inverse;
        let mut j = i;
        let start = at;
        while j < w.steps.len() && w.steps[j].inverse == inv {
            at = q.step_end(w.steps[j]);
            j += 1;
        }
        let seg = Walk { start, steps: w.steps[i..j].to_vec() };
        let seg = if inv { q.walk_inverse(&seg) } else { seg };
        out.push(seg.as_path().expect("run of forward steps"));
        i = j;
    }
    out
}

pub fn is_string(ideal: &Ideal, w: &Walk) -> Result<bool> {
    let q = &ideal.quiver;
    q.check_walk(w)?;
    if !w.is_reduced() {
        return Ok(false);
    }
    for p in runs(q, w) {
        if path_in_monomial_ideal(ideal, &p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// In a monomial ideal a path lies in the ideal iff one of its subpaths of
/// the truncation length does, which keeps long runs checkable.
fn path_in_monomial_ideal(ideal: &Ideal, p: &Path) -> Result<bool> {
    let l = ideal.truncation_length;
    if p.len() <= l {
        return ideal.contains_path(p);
    }
    let q = &ideal.quiver;
    for i in 0..=p.len() - l {
        let start = if i == 0 { p.start } else { q.target(p.arrows[i - 1]) };
        if ideal.contains_path(&Path { start, arrows: p.arrows[i..i + l].to_vec() })? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Lexicographically least of a walk and its inverse.
pub fn canonical_string(q: &Quiver, w: &Walk) -> Walk {
    let inv = q.walk_inverse(w);
    if inv.steps < w.steps {
        inv
    } else {
        w.clone()
    }
}

/// Every string up to the given length, one per inverse pair, ordered by
/// length, then steps, then start vertex.
pub fn enumerate_strings(ideal: &Ideal, max_len: usize) -> Result<Vec<Walk>> {
    require_monomial(ideal)?;
    let q = &ideal.quiver;
    let mut found: BTreeSet<(usize, Vec<Step>, V)> = BTreeSet::new();
    let mut stack: Vec<Walk> = (0..q.n_vertices()).map(Walk::trivial).collect();
    while let Some(w) = stack.pop() {
        let c = canonical_string(q, &w);
        found.insert((c.len(), c.steps.clone(), c.start));
        if w.len() == max_len {
            continue;
        }
        for s in q.steps_from(q.walk_end(&w)) {
            let mut n = w.clone();
            n.steps.push(s);
            // Strings are closed under taking subwalks, so pruning is safe.
            if is_string(ideal, &n)? {
                stack.push(n);
            }
        }
    }
    Ok(found.into_iter().map(|(_, steps, start)| Walk { start, steps }).collect())
}

fn rotate(q: &Quiver, w: &Walk, k: usize) -> Walk {
    let steps: Vec<Step> = w.steps[k..].iter().chain(&w.steps[..k]).copied().collect();
    let start = if k == 0 { w.start } else { q.step_end(w.steps[k - 1]) };
    Walk { start, steps }
}

/// Least rotation of the walk or of its inverse.
pub fn canonical_band(q: &Quiver, w: &Walk) -> Walk {
    let inv = q.walk_inverse(w);
    let mut best = w.clone();
    for base in [w, &inv] {
        for k in 0..base.len() {
            let r = rotate(q, base, k);
            if (&r.steps, r.start) < (&best.steps, best.start) {
                best = r;
            }
        }
    }
    best
}

fn is_proper_power(w: &Walk) -> bool {
    let n = w.len();
    (1..n).any(|d| n % d == 0 && (d..n).all(|i| w.steps[i] == w.steps[i - d]))
}

/// Closed, cyclically reduced, primitive, and every power a string.
pub fn is_band(ideal: &Ideal, w: &Walk) -> Result<bool> {
    let q = &ideal.quiver;
    if w.is_trivial() || q.walk_end(w) != w.start {
        return Ok(false);
    }
    if w.steps.first().unwrap().flip() == *w.steps.last().unwrap() || is_proper_power(w) {
        return Ok(false);
    }
    // A run can wrap around at most until it exceeds the truncation length,
    // after which it is in the ideal or every longer path is.
    let reps = if w.steps.iter().all(|s| s.inverse == w.steps[0].inverse) { ideal.truncation_length / w.len() + 2 } else { 2 };
    let mut power = w.clone();
    for _ in 1..reps {
        power.steps.extend_from_slice(&w.steps);
    }
    is_string(ideal, &power)
}

/// Every band up to the given length in canonical form, ordered by length
/// then steps.
pub fn enumerate_bands(ideal: &Ideal, max_len: usize) -> Result<Vec<Walk>> {
    require_monomial(ideal)?;
    let q = &ideal.quiver;
    let mut found: BTreeSet<(usize, Vec<Step>, V)> = BTreeSet::new();
    for s in enumerate_strings(ideal, max_len)? {
        for w in [s.clone(), q.walk_inverse(&s)] {
            if is_band(ideal, &w)? {
                let c = canonical_band(q, &w);
                found.insert((c.len(), c.steps.clone(), c.start));
            }
        }
    }
    Ok(found.into_iter().map(|(_, steps, start)| Walk { start, steps }).collect())
}

/// Positions along a walk: vertex visited at each position, and the offset
/// of each position inside its vertex space.
fn positions(q: &Quiver, w: &Walk, count: usize, block: usize) -> (Vec<usize>, Vec<usize>, Vec<V>) {
    let mut verts = vec![w.start];
    for &s in &w.steps {
        verts.push(q.step_end(s));
    }
    verts.truncate(count);
    let mut dims = vec![0; q.n_vertices()];
    let mut offset = Vec::with_capacity(count);
    for &v in &verts {
        offset.push(dims[v]);
        dims[v] += block;
    }
    (dims, offset, verts)
}

fn place_step(rep: &mut Representation, s: Step, from: (V, usize), to: (V, usize), block: &Mat) {
    // A forward step from position i to i+1 writes into the arrow's matrix
    // at (i, i+1); an inverse step at (i+1, i).
    let (row, col) = if s.inverse { (to.1, from.1) } else { (from.1, to.1) };
    rep.mats[s.arrow].set_block(row, col, block);
}

/// String module: one basis vector per position along the walk, arrows act
/// by 0/1 incidence.
pub fn string_module(ideal: &Ideal, w: &Walk) -> Result<Representation> {
    if !is_string(ideal, w)? {
        return Err(Error::invalid("walk is not a string"));
    }
    let q = &ideal.quiver;
    let (dims, offset, verts) = positions(q, w, w.len() + 1, 1);
    let mut rep = Representation::with_dims(q, dims);
    let one = Mat::identity(1);
    for (i, &s) in w.steps.iter().enumerate() {
        place_step(&mut rep, s, (verts[i], offset[i]), (verts[i + 1], offset[i + 1]), &one);
    }
    Ok(rep)
}

/// Jordan block with eigenvalue lambda and ones above the diagonal.
pub fn jordan_block(n: usize, lambda: &Scalar) -> Mat {
    let mut j = Mat::identity(n).scale(lambda);
    for i in 0..n.saturating_sub(1) {
        j.set(i, i + 1, Scalar::one());
    }
    j
}

/// Band module: an n-dimensional space per position around the band,
/// identity blocks along every step except the least forward step, which
/// carries J_n(lambda).
pub fn band_module(ideal: &Ideal, b: &Walk, n: usize, lambda: &Scalar) -> Result<Representation> {
    if lambda.is_zero() {
        return Err(Error::invalid("band parameter must be nonzero"));
    }
    if n == 0 {
        return Err(Error::invalid("band module size must be positive"));
    }
    if !is_band(ideal, b)? {
        return Err(Error::invalid("walk is not a band"));
    }
    let q = &ideal.quiver;
    let m = b.len();
    let (dims, offset, verts) = positions(q, b, m, n);
    let special = (0..m).filter(|&i| !b.steps[i].inverse).min_by_key(|&i| (b.steps[i], i));
    let mut rep = Representation::with_dims(q, dims);
    let id = Mat::identity(n);
    let jb = jordan_block(n, lambda);
    for (i, &s) in b.steps.iter().enumerate() {
        let j = (i + 1) % m;
        let blk = if Some(i) == special { &jb } else { &id };
        place_step(&mut rep, s, (verts[i], offset[i]), (verts[j], offset[j]), blk);
    }
    // Bands made only of inverse steps have no forward step: twist the
    // least inverse one instead, which gives an isomorphic module.
    if special.is_none() {
        let i = (0..m).min_by_key(|&i| (b.steps[i], i)).unwrap();
        let j = (i + 1) % m;
        place_step(&mut rep, b.steps[i], (verts[i], offset[i]), (verts[j], offset[j]), &jb);
    }
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineShape {
    /// Finite, away from the frontier.
    Finite,
    /// Reaches the frontier at one end.
    OneSided,
    /// Reaches the frontier at both ends.
    TwoSided,
}

impl LineShape {
    pub fn as_str(self) -> &'static str {
        match self {
            LineShape::Finite => "A_n",
            LineShape::OneSided => "A_inf",
            LineShape::TwoSided => "A_inf_inf",
        }
    }
}

/// A line in a truncated cover: a set of vertices whose full subquiver is a
/// linear quiver with no path in the ideal, convex in the cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    /// Vertices in order along the line.
    pub vertices: Vec<V>,
    pub shape: LineShape,
}

impl Line {
    pub fn new(cov: &TruncatedCover, members: &BTreeSet<V>) -> Result<Line> {
        let c = &cov.cover;
        if members.is_empty() {
            return Err(Error::invalid("empty line"));
        }
        let inner: Vec<usize> = (0..c.n_arrows()).filter(|&a| members.contains(&c.source(a)) && members.contains(&c.target(a))).collect();
        if inner.len() + 1 != members.len() {
            return Err(Error::invalid("vertex set does not span a linear quiver"));
        }
        let degree = |v: V| inner.iter().filter(|&&a| c.source(a) == v || c.target(a) == v).count();
        if members.iter().any(|&v| degree(v) > 2) {
            return Err(Error::invalid("vertex set does not span a linear quiver"));
        }
        // Walk along the line from an end.
        let start = *members.iter().find(|&&v| degree(v) <= 1).ok_or_else(|| Error::invalid("vertex set is a cycle"))?;
        let mut order = vec![start];
        let mut steps = Vec::new();
        let mut used = BTreeSet::new();
        while order.len() < members.len() {
            let at = *order.last().unwrap();
            let next = inner.iter().copied().find(|&a| !used.contains(&a) && (c.source(a) == at || c.target(a) == at));
            let a = next.ok_or_else(|| Error::invalid("vertex set is not connected"))?;
            used.insert(a);
            let s = if c.source(a) == at { Step::fwd(a) } else { Step::inv(a) };
            steps.push(s);
            order.push(c.step_end(s));
        }
        // No path along the line may vanish.
        let walk = Walk { start, steps };
        if !is_string(&cov.ideal, &walk)? {
            return Err(Error::invalid("a path inside the line lies in the ideal"));
        }
        // Convexity: nothing that leaves the set comes back to it.
        let mut seen: BTreeSet<V> = BTreeSet::new();
        let mut queue: VecDeque<V> = VecDeque::new();
        for &v in members {
            for &a in c.out_arrows(v) {
                let t = c.target(a);
                if !members.contains(&t) && seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        while let Some(x) = queue.pop_front() {
            for &a in c.out_arrows(x) {
                let t = c.target(a);
                if members.contains(&t) {
                    return Err(Error::invalid(format!("not convex: a path through {:?} returns to the line", c.vid(x))));
                }
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        let ends = [order[0], *order.last().unwrap()];
        let at_frontier = ends.iter().filter(|v| cov.frontier.contains(v)).count();
        let at_frontier = if members.len() == 1 { at_frontier.min(1) } else { at_frontier };
        let shape = match at_frontier {
            0 => LineShape::Finite,
            1 => LineShape::OneSided,
            _ => LineShape::TwoSided,
        };
        Ok(Line { vertices: order, shape })
    }

    /// The line traced by lifting a base walk at an anchor.
    pub fn lift(cov: &TruncatedCover, w: &Walk, anchor: V) -> Result<Line> {
        let lifted = cov.projection.lift_walk(w, anchor, Anchor::Start)?;
        let mut members = BTreeSet::from([anchor]);
        for &s in &lifted.steps {
            members.insert(cov.cover.step_end(s));
        }
        Line::new(cov, &members)
    }

    pub fn is_truncated(&self) -> bool {
        self.shape != LineShape::Finite
    }
}

/// B_L: one-dimensional on the line, identity along its arrows.
pub fn line_module(cov: &TruncatedCover, line: &Line) -> Representation {
    let c = &cov.cover;
    let members: BTreeSet<V> = line.vertices.iter().copied().collect();
    let dims = (0..c.n_vertices()).map(|v| usize::from(members.contains(&v))).collect();
    let mut rep = Representation::with_dims(c, dims);
    for a in 0..c.n_arrows() {
        if members.contains(&c.source(a)) && members.contains(&c.target(a)) {
            rep.mats[a] = Mat::identity(1);
        }
    }
    rep
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilizer {
    /// Words (in the ball's generators) of the non-identity elements that
    /// preserve the line.
    pub elements: Vec<String>,
    /// Element with the smallest positive displacement along the line.
    pub generator: Option<String>,
    /// That displacement, counted in arrows.
    pub period: Option<usize>,
}

/// Ball elements that map the line into itself wherever they are defined.
/// For a finite line the element must also be defined on all of it.
pub fn line_stabilizer(cov: &TruncatedCover, line: &Line, ball: &Ball) -> Result<Stabilizer> {
    let c = &cov.cover;
    let pos: std::collections::BTreeMap<V, usize> = line.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut elements = Vec::new();
    let mut best: Option<(usize, String)> = None;
    for (g, w) in &ball.elements {
        if w.is_empty() || g.is_identity_on_domain() {
            continue;
        }
        if !preserves(c, g, line, &pos) {
            continue;
        }
        let shifts: BTreeSet<usize> =
            line.vertices.iter().filter_map(|&v| g.vmap[v].map(|gv| pos[&v].abs_diff(pos[&gv]))).collect();
        let word = word_str(w);
        elements.push(word.clone());
        if let Some(&d) = shifts.iter().next() {
            if d > 0 && shifts.len() == 1 && best.as_ref().is_none_or(|(b, _)| d < *b) {
                best = Some((d, word));
            }
        }
    }
    Ok(Stabilizer { elements, period: best.as_ref().map(|b| b.0), generator: best.map(|b| b.1) })
}

fn preserves(c: &Quiver, g: &PartialAuto, line: &Line, pos: &std::collections::BTreeMap<V, usize>) -> bool {
    let mut any = false;
    for &v in &line.vertices {
        match g.vmap[v] {
            Some(gv) if pos.contains_key(&gv) => any = true,
            Some(_) => return false,
            None if !line.is_truncated() => return false,
            None => {}
        }
    }
    // Arrows of the line go to arrows of the line where defined.
    for a in 0..c.n_arrows() {
        if pos.contains_key(&c.source(a)) && pos.contains_key(&c.target(a)) {
            if let Some(b) = g.amap[a] {
                if !pos.contains_key(&c.source(b)) || !pos.contains_key(&c.target(b)) {
                    return false;
                }
            }
        }
    }
    any
}
