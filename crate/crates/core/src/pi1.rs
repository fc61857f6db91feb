//! Fundamental groups of bound quivers as finite presentations.
//!
//! Generators are the arrows outside a BFS spanning tree. A walk's word is
//! its sequence of non-tree letters. Each minimal relation contributes, for
//! every ordered pair of its paths, the relator word(p_j) word(p_i)^-1.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::quiver::{Quiver, SpanningTree, Walk, V};
use crate::relations::Ideal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn flip(self) -> Letter {
        Letter { gen: self.gen, inv: !self.inv }
    }
}

pub type GWord = Vec<Letter>;

pub fn free_reduce(w: &[Letter]) -> GWord {
    let mut out: GWord = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.flip()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[Letter]) -> GWord {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == w[w.len() - 1].flip() {
        w.pop();
        w.remove(0);
    }
    w
}

pub fn inverse(w: &[Letter]) -> GWord {
    w.iter().rev().map(|l| l.flip()).collect()
}

/// Least rotation of the word or its inverse, after cyclic reduction.
pub fn canonical_relator(w: &[Letter]) -> GWord {
    let w = cyclic_reduce(w);
    let inv = inverse(&w);
    let n = w.len();
    let mut best = w.clone();
    for base in [&w, &inv] {
        for r in 0..n {
            let rot: GWord = base[r..].iter().chain(&base[..r]).copied().collect();
            if rot < best {
                best = rot;
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<GWord>,
}

impl GroupPresentation {
    pub fn word_str(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        // Group runs of a letter into powers.
        let mut parts = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let e = (j - i) as i64 * if w[i].inv { -1 } else { 1 };
            let g = &self.generators[w[i].gen];
            parts.push(if e == 1 { g.clone() } else { format!("{g}^{e}") });
            i = j;
        }
        parts.join(" ")
    }

    pub fn relator_strs(&self) -> Vec<String> {
        self.relators.iter().map(|r| self.word_str(r)).collect()
    }

    /// Exponent-sum matrix, one row per relator.
    pub fn exponent_matrix(&self) -> Vec<Vec<BigInt>> {
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::zero(); self.generators.len()];
                for l in r {
                    row[l.gen] += if l.inv { -1 } else { 1 };
                }
                row
            })
            .collect()
    }

    /// Abelianization as invariant factors: entries > 1 for torsion, then
    /// one 0 per free summand.
    pub fn abelianization(&self) -> Vec<BigInt> {
        let d = smith_diagonal(self.exponent_matrix(), self.generators.len());
        let mut out: Vec<BigInt> = d.iter().filter(|x| **x > BigInt::one()).cloned().collect();
        let nonzero = d.iter().filter(|x| !x.is_zero()).count();
        out.extend(std::iter::repeat_n(BigInt::zero(), self.generators.len() - nonzero));
        out
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} | {} >", self.generators.join(", "), self.relator_strs().join(", "))
    }
}

/// Graph fundamental group: free on the non-tree arrows.
pub fn graph_pi1(q: &Quiver, base: V) -> Result<(SpanningTree, GroupPresentation)> {
    let tree = q.spanning_tree(base)?;
    let generators = tree.non_tree.iter().map(|&a| q.aid(a).to_string()).collect();
    Ok((tree, GroupPresentation { generators, relators: vec![] }))
}

/// Image of a walk in the free group on non-tree arrows.
pub fn walk_word(tree: &SpanningTree, w: &Walk) -> GWord {
    let letters: GWord = w
        .steps
        .iter()
        .filter_map(|s| tree.non_tree.binary_search(&s.arrow).ok().map(|gen| Letter { gen, inv: s.inverse }))
        .collect();
    free_reduce(&letters)
}

pub fn pi1_presentation(ideal: &Ideal, base: V) -> Result<(SpanningTree, GroupPresentation)> {
    let q = &ideal.quiver;
    let (tree, mut pres) = graph_pi1(q, base)?;
    let mut seen = BTreeSet::new();
    for rho in ideal.minimal_relations()? {
        for (i, (_, pi)) in rho.terms.iter().enumerate() {
            for (j, (_, pj)) in rho.terms.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut w = walk_word(&tree, &pj.to_walk());
                w.extend(inverse(&walk_word(&tree, &pi.to_walk())));
                let w = cyclic_reduce(&w);
                if w.is_empty() {
                    continue;
                }
                if seen.insert(canonical_relator(&w)) {
                    pres.relators.push(w);
                }
            }
        }
    }
    Ok((tree, pres))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Trivial,
    InfiniteCyclic { generator: String },
    Free { rank: usize },
    Unresolved,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Trivial => "trivial",
            Verdict::InfiniteCyclic { .. } => "infinite_cyclic",
            Verdict::Free { .. } => "free",
            Verdict::Unresolved => "unresolved",
        }
    }

    pub fn free_rank(&self) -> Option<usize> {
        match self {
            Verdict::Trivial => Some(0),
            Verdict::InfiniteCyclic { .. } => Some(1),
            Verdict::Free { rank } => Some(*rank),
            Verdict::Unresolved => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplified {
    pub presentation: GroupPresentation,
    pub verdict: Verdict,
    pub abelianization: Vec<BigInt>,
    /// Eliminated generators with the word they were replaced by.
    pub eliminations: Vec<(String, String)>,
    /// Image of each original generator as a word in the final generators.
    pub images: Vec<GWord>,
}

impl Simplified {
    /// Maps a word in the original generators to the final generators.
    pub fn map_word(&self, w: &[Letter]) -> GWord {
        let mut out = Vec::new();
        for l in w {
            let img = &self.images[l.gen];
            if l.inv {
                out.extend(inverse(img));
            } else {
                out.extend(img.iter().copied());
            }
        }
        free_reduce(&out)
    }

    /// With no relators left the group is free on the remaining generators,
    /// so `map_word` followed by free reduction solves the word problem.
    pub fn solves_word_problem(&self) -> bool {
        self.presentation.relators.is_empty()
    }
}

/// Tietze elimination to a fixpoint: a generator occurring exactly once in
/// some relator is solved for and substituted everywhere.
pub fn simplify(p: &GroupPresentation) -> Simplified {
    let mut gens: Vec<String> = p.generators.clone();
    let mut rels: Vec<GWord> = tidy(&p.relators);
    let mut eliminations = Vec::new();
    let mut images: Vec<GWord> = (0..gens.len()).map(|g| vec![Letter { gen: g, inv: false }]).collect();
    loop {
        let mut order: Vec<usize> = (0..gens.len()).collect();
        order.sort_by(|&a, &b| gens[a].cmp(&gens[b]));
        let pick = order.iter().find_map(|&g| {
            rels.iter().position(|r| r.iter().filter(|l| l.gen == g).count() == 1).map(|ri| (g, ri))
        });
        let Some((g, ri)) = pick else { break };
        let r = rels.remove(ri);
        let k = r.iter().position(|l| l.gen == g).unwrap();
        // r = u g^e v = 1  =>  g^e = u^-1 v^-1
        let (u, v) = (&r[..k], &r[k + 1..]);
        let mut sol: GWord = inverse(u);
        sol.extend(inverse(v));
        let value = if r[k].inv { inverse(&sol) } else { sol };
        let value = free_reduce(&value);
        let shown = GroupPresentation { generators: gens.clone(), relators: vec![] }.word_str(&value);
        eliminations.push((gens[g].clone(), shown));
        let substitute = |w: &GWord| -> GWord {
            let mut out = Vec::new();
            for &l in w {
                if l.gen == g {
                    if l.inv {
                        out.extend(inverse(&value));
                    } else {
                        out.extend(value.iter().copied());
                    }
                } else {
                    out.push(l);
                }
            }
            out
        };
        let renumber = |w: GWord| -> GWord { w.into_iter().map(|l| Letter { gen: if l.gen > g { l.gen - 1 } else { l.gen }, inv: l.inv }).collect() };
        rels = tidy(&rels.iter().map(|w| renumber(substitute(w))).collect::<Vec<_>>());
        images = images.iter().map(|w| renumber(free_reduce(&substitute(w)))).collect();
        gens.remove(g);
    }
    let presentation = GroupPresentation { generators: gens, relators: rels };
    let verdict = match (presentation.generators.len(), presentation.relators.len()) {
        (0, _) => Verdict::Trivial,
        (1, 0) => Verdict::InfiniteCyclic { generator: presentation.generators[0].clone() },
        (r, 0) => Verdict::Free { rank: r },
        _ => Verdict::Unresolved,
    };
    let abelianization = presentation.abelianization();
    Simplified { presentation, verdict, abelianization, eliminations, images }
}

/// Cyclically reduce, drop empties, dedupe up to rotation and inversion.
fn tidy(rels: &[GWord]) -> Vec<GWord> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in rels {
        let r = cyclic_reduce(r);
        if r.is_empty() {
            continue;
        }
        if seen.insert(canonical_relator(&r)) {
            out.push(r);
        }
    }
    out
}

/// Diagonal of the Smith normal form (length min(rows, cols)), nonnegative.
pub fn smith_diagonal(mut m: Vec<Vec<BigInt>>, cols: usize) -> Vec<BigInt> {
    let rows = m.len();
    let n = rows.min(cols);
    for t in 0..n {
        // Pivot: smallest nonzero absolute value in the remaining block.
        loop {
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_diagonal(&m, n);
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let (q, _) = m[i][t].div_mod_floor(&p);
                if !q.is_zero() {
                    for j in t..cols {
                        let d = &q * &m[t][j];
                        m[i][j] -= d;
                    }
                }
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let (q, _) = m[t][j].div_mod_floor(&p);
                if !q.is_zero() {
                    for row in m.iter_mut().skip(t) {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                }
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold in any entry not divisible by the pivot.
            let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| !(&m[i][j] % &p).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let x = m[i][j].clone();
                        m[t][j] += x;
                    }
                }
                None => break,
            }
        }
    }
    finish_diagonal(&m, n)
}

fn finish_diagonal(m: &[Vec<BigInt>], n: usize) -> Vec<BigInt> {
    (0..n).map(|i| m[i][i].abs()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplyConnectedReport {
    pub simply_connected: bool,
    pub has_oriented_cycle: bool,
    pub pi1: Verdict,
    /// Arrows that are not the only path between their endpoints.
    pub non_unique_arrows: Vec<String>,
}

/// Triangular quiver, trivial fundamental group, and every arrow the only
/// path between its endpoints.
pub fn simply_connected_criterion(ideal: &Ideal, base: V) -> Result<SimplyConnectedReport> {
    let q = &ideal.quiver;
    let cyc = q.has_oriented_cycle();
    let (_, pres) = pi1_presentation(ideal, base)?;
    let s = simplify(&pres);
    let mut non_unique = Vec::new();
    if !cyc {
        for a in 0..q.n_arrows() {
            let n = q.paths_between(q.source(a), q.target(a), q.n_vertices()).len();
            if n != 1 {
                non_unique.push(q.aid(a).to_string());
            }
        }
    }
    Ok(SimplyConnectedReport {
        simply_connected: !cyc && s.verdict == Verdict::Trivial && non_unique.is_empty(),
        has_oriented_cycle: cyc,
        pi1: s.verdict,
        non_unique_arrows: non_unique,
    })
}
