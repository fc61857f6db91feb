//! Relations, ideal presentations and truncated membership.
//!
//! Membership is decided inside the space of paths x -> y, one vertex pair at
//! a time. With a nilpotency bound N every path of length >= N is zero, so the
//! computation happens in the finite space of shorter paths and is exact.
//! Without N, elements `u.rho.v` are only used up to the truncation length, so
//! a "yes" is always right and a "no" means "not in the truncated ideal".

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::RowSpace;
use crate::quiver::{Path, Quiver, QuiverMorphism, V};
use crate::scalar::{self, Scalar};

pub const DEFAULT_SUBSET_CAP: usize = 20;

/// A linear combination of parallel paths x -> y of positive length.
/// Terms are kept sorted by path with nonzero coefficients; an empty term
/// list is the zero combination.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub source: V,
    pub target: V,
    pub terms: Vec<(Scalar, Path)>,
}

impl Relation {
    /// Combines like terms and drops zero coefficients. Rejects non-parallel
    /// or trivial paths, and an empty result.
    pub fn new(q: &Quiver, terms: Vec<(Scalar, Path)>) -> Result<Relation> {
        let r = Relation::combination(q, terms)?;
        if r.terms.is_empty() {
            return Err(Error::invalid("relation has no nonzero terms"));
        }
        Ok(r)
    }

    /// Like [`Relation::new`] but the zero combination is allowed (it needs
    /// at least one input term to fix the endpoints).
    pub fn combination(q: &Quiver, terms: Vec<(Scalar, Path)>) -> Result<Relation> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::invalid("relation has no terms"));
        };
        let (x, y) = (first.start, q.path_end(first));
        let mut acc: BTreeMap<Path, Scalar> = BTreeMap::new();
        for (c, p) in terms {
            q.check_path(&p)?;
            if p.is_trivial() {
                return Err(Error::invalid(format!("relation term {} has length 0", q.path_str(&p))));
            }
            if p.start != x || q.path_end(&p) != y {
                return Err(Error::invalid(format!("relation terms are not parallel: {}", q.path_str(&p))));
            }
            *acc.entry(p).or_insert_with(Scalar::zero) += c;
        }
        Ok(Relation::from_map(x, y, acc))
    }

    fn from_map(source: V, target: V, acc: BTreeMap<Path, Scalar>) -> Relation {
        Relation { source, target, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(p, c)| (c, p)).collect() }
    }

    pub fn monomial(q: &Quiver, p: Path) -> Result<Relation> {
        Relation::new(q, vec![(Scalar::one(), p)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn max_path_len(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).max().unwrap_or(0)
    }

    pub fn min_path_len(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).min().unwrap_or(0)
    }

    /// Sub-combination on the given term indices.
    pub fn partial(&self, idx: &[usize]) -> Relation {
        Relation { source: self.source, target: self.target, terms: idx.iter().map(|&i| self.terms[i].clone()).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Relation {
        Relation { source: self.source, target: self.target, terms: self.terms.iter().map(|(a, p)| (a * c, p.clone())).collect() }
    }

    /// Image under a quiver morphism, with like terms combined.
    pub fn map(&self, f: &QuiverMorphism) -> Relation {
        let mut acc: BTreeMap<Path, Scalar> = BTreeMap::new();
        for (c, p) in &self.terms {
            *acc.entry(f.map_path(p)).or_insert_with(Scalar::zero) += c;
        }
        Relation::from_map(f.vmap[self.source], f.vmap[self.target], acc)
    }

    /// Scales so that the first coefficient is 1; used to dedupe up to scalars.
    pub fn normalized(&self) -> Relation {
        match self.terms.first() {
            Some((c, _)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Right-to-left product notation, e.g. `alpha alpha - gamma beta`.
    pub fn display(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (c, p)) in self.terms.iter().enumerate() {
            let word = p.arrows.iter().rev().map(|&a| q.aid(a)).collect::<Vec<_>>().join(" ");
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                s.push_str(&scalar::format(&mag));
                s.push(' ');
            }
            s.push_str(&word);
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelKind {
    Zero,
    Minimal,
    Decomposable,
    NotInIdeal,
}

impl RelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RelKind::Zero => "zero",
            RelKind::Minimal => "minimal",
            RelKind::Decomposable => "decomposable",
            RelKind::NotInIdeal => "not_in_ideal",
        }
    }
}

impl fmt::Display for RelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Cached data for one vertex pair.
#[derive(Debug)]
struct PairSpace {
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    ideal: RowSpace,
}

pub struct Ideal {
    pub quiver: Quiver,
    pub generators: Vec<Relation>,
    pub nilpotency_bound: Option<usize>,
    pub truncation_length: usize,
    pub subset_cap: usize,
    cache: Mutex<HashMap<(V, V), Arc<PairSpace>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            quiver: self.quiver.clone(),
            generators: self.generators.clone(),
            nilpotency_bound: self.nilpotency_bound,
            truncation_length: self.truncation_length,
            subset_cap: self.subset_cap,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ideal")
            .field("generators", &self.generators.iter().map(|r| r.display(&self.quiver)).collect::<Vec<_>>())
            .field("nilpotency_bound", &self.nilpotency_bound)
            .field("truncation_length", &self.truncation_length)
            .finish()
    }
}

impl Ideal {
    /// `truncation_length` defaults to max(2 * longest generator path, N, 1).
    pub fn new(quiver: Quiver, generators: Vec<Relation>, nilpotency_bound: Option<usize>, truncation_length: Option<usize>) -> Result<Ideal> {
        if nilpotency_bound == Some(0) {
            return Err(Error::invalid("nilpotency bound must be positive"));
        }
        for g in &generators {
            if g.is_zero() {
                return Err(Error::invalid("zero generator"));
            }
            for (_, p) in &g.terms {
                quiver.check_path(p)?;
            }
        }
        let longest = generators.iter().map(Relation::max_path_len).max().unwrap_or(0);
        let l = truncation_length.unwrap_or_else(|| (2 * longest).max(nilpotency_bound.unwrap_or(0)).max(1));
        if let Some(n) = nilpotency_bound {
            if l < n {
                return Err(Error::invalid(format!("truncation length {l} is below the nilpotency bound {n}")));
            }
        }
        if l < longest {
            return Err(Error::invalid(format!("truncation length {l} is shorter than a generator ({longest})")));
        }
        Ok(Ideal { quiver, generators, nilpotency_bound, truncation_length: l, subset_cap: DEFAULT_SUBSET_CAP, cache: Mutex::new(HashMap::new()) })
    }

    pub fn zero(quiver: Quiver, truncation_length: usize) -> Ideal {
        Ideal::new(quiver, vec![], None, Some(truncation_length.max(1))).expect("zero ideal is well formed")
    }

    /// All paths of length 2 as zero relations, N = 2.
    pub fn rad_squared(quiver: Quiver, truncation_length: usize) -> Ideal {
        let mut gens = Vec::new();
        for a in 0..quiver.n_arrows() {
            for &b in quiver.out_arrows(quiver.target(a)) {
                let p = Path { start: quiver.source(a), arrows: vec![a, b] };
                gens.push(Relation::monomial(&quiver, p).expect("length-2 path"));
            }
        }
        Ideal::new(quiver, gens, Some(2), Some(truncation_length.max(2))).expect("rad^2 is well formed")
    }

    /// Whether a statement about paths up to the truncation is exact.
    pub fn is_exact(&self) -> bool {
        self.nilpotency_bound.is_some()
    }

    fn pair(&self, x: V, y: V) -> Arc<PairSpace> {
        if let Some(p) = self.cache.lock().unwrap().get(&(x, y)) {
            return p.clone();
        }
        let built = Arc::new(self.build_pair(x, y));
        self.cache.lock().unwrap().insert((x, y), built.clone());
        built
    }

    /// Longest path kept in the basis.
    fn basis_len(&self) -> usize {
        match self.nilpotency_bound {
            Some(n) => n - 1,
            None => self.truncation_length,
        }
    }

    fn build_pair(&self, x: V, y: V) -> PairSpace {
        let q = &self.quiver;
        let lim = self.basis_len();
        let paths = q.paths_between(x, y, lim);
        let index: HashMap<Path, usize> = paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut ideal = RowSpace::new(paths.len());
        for g in &self.generators {
            // Budget for the context u, v around g.
            let budget = match self.nilpotency_bound {
                Some(n) => {
                    if g.min_path_len() >= n {
                        continue;
                    }
                    n - 1 - g.min_path_len()
                }
                None => {
                    if g.max_path_len() > self.truncation_length {
                        continue;
                    }
                    self.truncation_length - g.max_path_len()
                }
            };
            let prefixes = q.paths_between(x, g.source, budget);
            let suffixes = q.paths_between(g.target, y, budget);
            for u in &prefixes {
                for v in &suffixes {
                    if u.len() + v.len() > budget {
                        continue;
                    }
                    let mut vec = vec![Scalar::zero(); paths.len()];
                    let mut any = false;
                    for (c, p) in &g.terms {
                        let full = Path { start: x, arrows: [u.arrows.as_slice(), &p.arrows, &v.arrows].concat() };
                        if let Some(&i) = index.get(&full) {
                            vec[i] += c;
                            any = true;
                        }
                    }
                    if any {
                        ideal.insert(&vec);
                    }
                }
            }
        }
        PairSpace { paths, index, ideal }
    }

    /// Coordinates of a combination in the pair space; terms beyond the
    /// nilpotency bound are zero and dropped.
    fn coords(&self, sp: &PairSpace, r: &Relation) -> Result<Vec<Scalar>> {
        let mut v = vec![Scalar::zero(); sp.paths.len()];
        for (c, p) in &r.terms {
            if p.len() > self.truncation_length {
                return Err(Error::invalid(format!(
                    "path {} is longer than the truncation length {}",
                    self.quiver.path_str(p),
                    self.truncation_length
                )));
            }
            match sp.index.get(p) {
                Some(&i) => v[i] += c,
                None => {
                    debug_assert!(self.nilpotency_bound.is_some_and(|n| p.len() >= n));
                }
            }
        }
        Ok(v)
    }

    pub fn contains(&self, r: &Relation) -> Result<bool> {
        if r.is_zero() {
            return Ok(true);
        }
        let sp = self.pair(r.source, r.target);
        let v = self.coords(&sp, r)?;
        Ok(sp.ideal.contains(&v))
    }

    pub fn contains_path(&self, p: &Path) -> Result<bool> {
        if p.is_trivial() {
            return Ok(false);
        }
        self.contains(&Relation::monomial(&self.quiver, p.clone())?)
    }

    /// dim of (paths x -> y up to the truncation) modulo the ideal. Exact when
    /// a nilpotency bound is set.
    pub fn quotient_dim(&self, x: V, y: V) -> usize {
        let sp = self.pair(x, y);
        sp.paths.len() - sp.ideal.dim()
    }

    /// Paths x -> y of length at most `len` that are not zero in the quotient.
    pub fn nonzero_paths(&self, x: V, y: V) -> Vec<Path> {
        let sp = self.pair(x, y);
        sp.paths
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let mut e = vec![Scalar::zero(); sp.paths.len()];
                e[*i] = Scalar::one();
                !sp.ideal.contains(&e)
            })
            .map(|(_, p)| p.clone())
            .collect()
    }

    pub fn classify(&self, r: &Relation) -> Result<RelKind> {
        let n = r.len();
        if n > self.subset_cap {
            return Err(Error::refused(format!("relation has {n} terms, above the subset cap {}", self.subset_cap)));
        }
        if !self.contains(r)? {
            return Ok(RelKind::NotInIdeal);
        }
        if n <= 1 {
            return Ok(RelKind::Zero);
        }
        Ok(match self.smallest_partial_in_ideal(r)? {
            Some(_) => RelKind::Decomposable,
            None => RelKind::Minimal,
        })
    }

    /// Smallest proper nonempty subset of term indices whose partial sum lies
    /// in the ideal; ties broken lexicographically.
    fn smallest_partial_in_ideal(&self, r: &Relation) -> Result<Option<Vec<usize>>> {
        let n = r.len();
        for size in 1..n {
            for subset in combinations(n, size) {
                if self.contains(&r.partial(&subset))? {
                    return Ok(Some(subset));
                }
            }
        }
        Ok(None)
    }

    /// Splits every generator into minimal and zero relations.
    pub fn minimal_generators(&self) -> Result<Vec<(RelKind, Relation)>> {
        let mut out = Vec::new();
        for g in &self.generators {
            self.split_into(g, &mut out)?;
        }
        Ok(out)
    }

    fn split_into(&self, r: &Relation, out: &mut Vec<(RelKind, Relation)>) -> Result<()> {
        match self.classify(r)? {
            k @ (RelKind::Zero | RelKind::Minimal) => {
                out.push((k, r.clone()));
                Ok(())
            }
            RelKind::NotInIdeal => Err(Error::Contradiction(format!("generator {} is not in its own ideal", r.display(&self.quiver)))),
            RelKind::Decomposable => {
                let part = self.smallest_partial_in_ideal(r)?.expect("decomposable has a partial sum");
                let rest: Vec<usize> = (0..r.len()).filter(|i| !part.contains(i)).collect();
                self.split_into(&r.partial(&part), out)?;
                self.split_into(&r.partial(&rest), out)
            }
        }
    }

    /// Minimal relations only (the ones that matter for homotopy).
    pub fn minimal_relations(&self) -> Result<Vec<Relation>> {
        Ok(self.minimal_generators()?.into_iter().filter(|(k, _)| *k == RelKind::Minimal).map(|(_, r)| r).collect())
    }

    /// True when no generator splits into a minimal relation.
    pub fn is_monomial(&self) -> Result<bool> {
        Ok(self.minimal_generators()?.iter().all(|(k, _)| *k == RelKind::Zero))
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
