//! Homotopy of walks modulo a bound-quiver ideal.
//!
//! Two deciders are available. When the fundamental group presentation
//! simplifies to a free group, walks are compared through free-group normal
//! forms, which is exact. Otherwise a bidirectional breadth-first search runs
//! over reduced walks.
//!
//! Search moves come from the relator loops r = p_i p_j^-1 of each minimal
//! relation: for any rotation of r or r^-1 written as x y, a factor x of the
//! walk is replaced by y^-1, followed by free reduction. With x = p_i this is
//! the plain "replace p_i by p_j" move. The partial pieces are needed: in
//! <alpha^2 - gamma beta> the walks alpha gamma^-1 and alpha^-1 beta are
//! homotopic, but no single-path replacement applies to either.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet, VecDeque};
use std::rc::Rc;

use crate::error::Result;
use crate::pi1::{self, GWord, Simplified};
use crate::quiver::{Quiver, SpanningTree, Step, Walk, V};
use crate::relations::Ideal;

pub const DEFAULT_CLASS_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Yes,
    No,
    Undecided,
}

impl Equivalence {
    pub fn as_str(self) -> &'static str {
        match self {
            Equivalence::Yes => "yes",
            Equivalence::No => "no",
            Equivalence::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug)]
struct FreeDecider {
    tree: SpanningTree,
    simplified: Simplified,
}

#[derive(Clone, Debug)]
pub struct HomotopyEngine {
    pub quiver: Quiver,
    /// (pattern, replacement) step sequences.
    moves: Vec<(Vec<Step>, Vec<Step>)>,
    /// Largest length difference between two paths of a minimal relation.
    pub gap: usize,
    pub class_cap: usize,
    decider: Option<FreeDecider>,
    reached: RefCell<HashMap<(Walk, usize), Option<Rc<Reach>>>>,
}

#[derive(Debug)]
struct Reach {
    walks: HashSet<Walk>,
    pruned: bool,
}

impl HomotopyEngine {
    pub fn new(ideal: &Ideal) -> Result<HomotopyEngine> {
        let q = ideal.quiver.clone();
        let mut loops = Vec::new();
        let mut gap = 0;
        for rho in ideal.minimal_relations()? {
            for (i, (_, pi)) in rho.terms.iter().enumerate() {
                for (_, pj) in rho.terms.iter().skip(i + 1) {
                    gap = gap.max(pi.len().abs_diff(pj.len()));
                    let r = q.walk_concat(&pi.to_walk(), &q.walk_inverse(&pj.to_walk()));
                    loops.push(r.steps.clone());
                    loops.push(q.walk_inverse(&r).steps);
                }
            }
        }
        let mut moves = Vec::new();
        for r in &loops {
            for k in 0..r.len() {
                let rot: Vec<Step> = r[k..].iter().chain(&r[..k]).copied().collect();
                for m in 1..=rot.len() {
                    let (x, y) = rot.split_at(m);
                    // Moves may lengthen a walk by at most twice the gap.
                    if y.len() > x.len() + 2 * gap {
                        continue;
                    }
                    moves.push((x.to_vec(), y.iter().rev().map(|s| s.flip()).collect()));
                }
            }
        }
        moves.sort();
        moves.dedup();
        let decider = if q.n_vertices() > 0 && q.is_connected() {
            let (tree, pres) = pi1::pi1_presentation(ideal, 0)?;
            let simplified = pi1::simplify(&pres);
            simplified.solves_word_problem().then_some(FreeDecider { tree, simplified })
        } else {
            None
        };
        Ok(HomotopyEngine { quiver: q, moves, gap, class_cap: DEFAULT_CLASS_CAP, decider, reached: RefCell::default() })
    }

    /// Same engine without the free-group decider: search only.
    pub fn search_only(&self) -> HomotopyEngine {
        HomotopyEngine { decider: None, ..self.clone() }
    }

    pub fn is_exact(&self) -> bool {
        self.decider.is_some()
    }

    /// Canonical key of a walk's class among walks with the same start:
    /// (end vertex, free-group normal form). Only with the exact decider.
    pub fn class_key(&self, w: &Walk) -> Option<(V, GWord)> {
        let d = self.decider.as_ref()?;
        let q = &self.quiver;
        // Conjugate into the base by tree walks; tree letters are trivial.
        let word = pi1::walk_word(&d.tree, w);
        Some((q.walk_end(w), d.simplified.map_word(&word)))
    }

    pub fn walks_equivalent(&self, w1: &Walk, w2: &Walk) -> Equivalence {
        let q = &self.quiver;
        if w1.start != w2.start || q.walk_end(w1) != q.walk_end(w2) {
            return Equivalence::No;
        }
        let (r1, r2) = (w1.reduced(), w2.reduced());
        if r1 == r2 {
            return Equivalence::Yes;
        }
        if self.decider.is_some() {
            return if self.class_key(&r1) == self.class_key(&r2) { Equivalence::Yes } else { Equivalence::No };
        }
        self.search(&r1, &r2)
    }

    /// All walks one move away from a reduced walk.
    pub fn neighbours(&self, w: &Walk) -> Vec<Walk> {
        let mut out = Vec::new();
        for (pat, rep) in &self.moves {
            if pat.len() > w.steps.len() {
                continue;
            }
            for k in 0..=w.steps.len() - pat.len() {
                if w.steps[k..k + pat.len()] == pat[..] {
                    let steps = [&w.steps[..k], &rep[..], &w.steps[k + pat.len()..]].concat();
                    out.push(Walk { start: w.start, steps }.reduced());
                }
            }
        }
        out
    }

    /// Walks reachable from `w` by moves without exceeding `bound`, and
    /// whether a longer walk was discarded. None past the class cap.
    fn reach(&self, w: &Walk, bound: usize) -> Option<Rc<Reach>> {
        let key = (w.clone(), bound);
        if let Some(r) = self.reached.borrow().get(&key) {
            return r.clone();
        }
        let mut walks = HashSet::from([w.clone()]);
        let mut queue = VecDeque::from([w.clone()]);
        let mut pruned = false;
        let mut capped = false;
        'bfs: while let Some(x) = queue.pop_front() {
            for n in self.neighbours(&x) {
                if n.len() > bound {
                    pruned = true;
                } else if walks.insert(n.clone()) {
                    if walks.len() > self.class_cap {
                        capped = true;
                        break 'bfs;
                    }
                    queue.push_back(n);
                }
            }
        }
        let r = (!capped).then(|| Rc::new(Reach { walks, pruned }));
        self.reached.borrow_mut().insert(key, r.clone());
        r
    }

    /// Bidirectional search. "No" only when both sides are exhausted with no
    /// walk discarded for length; "undecided" on any cap.
    fn search(&self, a: &Walk, b: &Walk) -> Equivalence {
        let bound = a.len().max(b.len()) + 2 * self.gap;
        // Same answer as the search below, from cached reach sets.
        if let (Some(ra), Some(rb)) = (self.reach(a, bound), self.reach(b, bound)) {
            let (small, large) = if ra.walks.len() <= rb.walks.len() { (&ra, &rb) } else { (&rb, &ra) };
            return if small.walks.iter().any(|w| large.walks.contains(w)) {
                Equivalence::Yes
            } else if ra.pruned || rb.pruned {
                Equivalence::Undecided
            } else {
                Equivalence::No
            };
        }
        let mut seen: [HashSet<Walk>; 2] = [HashSet::from([a.clone()]), HashSet::from([b.clone()])];
        let mut queues: [VecDeque<Walk>; 2] = [VecDeque::from([a.clone()]), VecDeque::from([b.clone()])];
        let mut pruned = false;
        loop {
            let side = if queues[0].is_empty() {
                1
            } else if queues[1].is_empty() {
                0
            } else if queues[0].len() <= queues[1].len() {
                0
            } else {
                1
            };
            let Some(w) = queues[side].pop_front() else { break };
            for n in self.neighbours(&w) {
                if n.len() > bound {
                    pruned = true;
                    continue;
                }
                if seen[1 - side].contains(&n) {
                    return Equivalence::Yes;
                }
                if seen[side].insert(n.clone()) {
                    if seen[side].len() > self.class_cap {
                        return Equivalence::Undecided;
                    }
                    queues[side].push_back(n);
                }
            }
        }
        if pruned { Equivalence::Undecided } else { Equivalence::No }
    }

    /// Closure of a walk under the search moves, capped.
    pub fn closure(&self, w: &Walk, bound: usize) -> Option<Vec<Walk>> {
        let w = w.reduced();
        let mut seen: HashMap<Walk, ()> = HashMap::from([(w.clone(), ())]);
        let mut q = VecDeque::from([w]);
        while let Some(x) = q.pop_front() {
            for n in self.neighbours(&x) {
                if n.len() <= bound && !seen.contains_key(&n) {
                    seen.insert(n.clone(), ());
                    if seen.len() > self.class_cap {
                        return None;
                    }
                    q.push_back(n);
                }
            }
        }
        let mut out: Vec<Walk> = seen.into_keys().collect();
        out.sort_by(crate::quiver::shortlex);
        Some(out)
    }
}
