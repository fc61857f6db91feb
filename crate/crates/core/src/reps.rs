//! Finite-dimensional representations of bound quivers.
//!
//! Matrices are contravariant: for an arrow alpha: a -> b the matrix of
//! alpha maps the space at b to the space at a, so it has dims[a] rows and
//! dims[b] columns. The matrix of a path (stored first-traversed-first) is
//! the left-to-right product of its arrow matrices.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group_action::PartialAuto;
use crate::linalg::{Mat, Poly};
use crate::quiver::{Path, Quiver, QuiverMorphism, V};
use crate::relations::Ideal;
use crate::scalar::{self, Scalar};

/// Total dimension above which hom computations are refused.
pub const DEFAULT_DIM_CAP: usize = 64;
pub const DEFAULT_SEED: u64 = 0x5eed;
const RANDOM_TRIALS: usize = 64;
/// Largest number of determinant evaluations in the grid certificate.
const GRID_BUDGET: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub dims: Vec<usize>,
    pub mats: Vec<Mat>,
}

/// A morphism: one matrix per vertex, dims_N[x] x dims_M[x].
pub type Morphism = Vec<Mat>;

impl Representation {
    pub fn new(q: &Quiver, dims: Vec<usize>, mats: Vec<Mat>) -> Result<Representation> {
        if dims.len() != q.n_vertices() || mats.len() != q.n_arrows() {
            return Err(Error::invalid("representation does not match the quiver"));
        }
        for (a, m) in mats.iter().enumerate() {
            let want = (dims[q.source(a)], dims[q.target(a)]);
            if m.shape() != want {
                return Err(Error::invalid(format!("matrix of {:?} is {:?}, expected {:?}", q.aid(a), m.shape(), want)));
            }
        }
        Ok(Representation { dims, mats })
    }

    pub fn zero(q: &Quiver) -> Representation {
        Representation::with_dims(q, vec![0; q.n_vertices()])
    }

    /// Given dimensions, all maps zero.
    pub fn with_dims(q: &Quiver, dims: Vec<usize>) -> Representation {
        let mats = (0..q.n_arrows()).map(|a| Mat::zeros(dims[q.source(a)], dims[q.target(a)])).collect();
        Representation { dims, mats }
    }

    pub fn simple(q: &Quiver, v: V) -> Representation {
        let mut dims = vec![0; q.n_vertices()];
        dims[v] = 1;
        Representation::with_dims(q, dims)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn support(&self) -> BTreeSet<V> {
        (0..self.dims.len()).filter(|&v| self.dims[v] > 0).collect()
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        Representation {
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            mats: self.mats.iter().zip(&other.mats).map(|(a, b)| a.direct_sum(b)).collect(),
        }
    }

    pub fn path_matrix(&self, p: &Path) -> Mat {
        let mut m = Mat::identity(self.dims[p.start]);
        for &a in &p.arrows {
            m = m.mul(&self.mats[a]);
        }
        m
    }

    /// Conjugate by invertible matrices, one per vertex.
    pub fn conjugate(&self, q: &Quiver, by: &[Mat]) -> Result<Representation> {
        let mut mats = Vec::with_capacity(self.mats.len());
        for (a, m) in self.mats.iter().enumerate() {
            let inv = by[q.target(a)].inverse().ok_or_else(|| Error::invalid("conjugating matrix is singular"))?;
            mats.push(by[q.source(a)].mul(m).mul(&inv));
        }
        Ok(Representation { dims: self.dims.clone(), mats })
    }
}

/// First ideal generator not killed by the representation, in display form.
/// With a nilpotency bound N the paths of length N are checked as well.
pub fn check_rep(ideal: &Ideal, m: &Representation) -> Result<Option<String>> {
    let q = &ideal.quiver;
    Representation::new(q, m.dims.clone(), m.mats.clone())?;
    for g in &ideal.generators {
        let mut acc = Mat::zeros(m.dims[g.source], m.dims[g.target]);
        for (c, p) in &g.terms {
            acc.add_scaled(c, &m.path_matrix(p));
        }
        if !acc.is_zero() {
            return Ok(Some(g.display(q)));
        }
    }
    if let Some(n) = ideal.nilpotency_bound {
        for x in 0..q.n_vertices() {
            for p in q.paths_from(x, n) {
                if p.len() == n && !m.path_matrix(&p).is_zero() {
                    return Ok(Some(q.path_str_rtl(&p)));
                }
            }
        }
    }
    Ok(None)
}

fn check_cap(cap: usize, ms: &[&Representation]) -> Result<()> {
    for m in ms {
        if m.total_dim() > cap {
            return Err(Error::refused(format!("total dimension {} exceeds the cap {}", m.total_dim(), cap)));
        }
    }
    Ok(())
}

/// Basis of Hom(M, N): families f with f_a M_alpha = N_alpha f_b for every
/// arrow alpha: a -> b.
pub fn hom_basis(q: &Quiver, m: &Representation, n: &Representation) -> Result<Vec<Morphism>> {
    check_cap(DEFAULT_DIM_CAP, &[m, n])?;
    let mut offset = vec![0; q.n_vertices() + 1];
    for x in 0..q.n_vertices() {
        offset[x + 1] = offset[x] + n.dims[x] * m.dims[x];
    }
    let unknowns = offset[q.n_vertices()];
    let var = |x: V, i: usize, j: usize| offset[x] + i * m.dims[x] + j;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for a in 0..q.n_arrows() {
        let (s, t) = (q.source(a), q.target(a));
        for i in 0..n.dims[s] {
            for j in 0..m.dims[t] {
                let mut row = vec![Scalar::zero(); unknowns];
                for k in 0..m.dims[s] {
                    row[var(s, i, k)] += m.mats[a].get(k, j);
                }
                for k in 0..n.dims[t] {
                    row[var(t, k, j)] -= n.mats[a].get(i, k);
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let null = if rows.is_empty() {
        (0..unknowns).map(|i| (0..unknowns).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect()
    } else {
        let h = rows.len();
        Mat::from_rows(h, unknowns, rows).nullspace()
    };
    Ok(null
        .into_iter()
        .map(|v| {
            (0..q.n_vertices())
                .map(|x| {
                    let (r, c) = (n.dims[x], m.dims[x]);
                    Mat::from_rows(r, c, (0..r).map(|i| (0..c).map(|j| v[var(x, i, j)].clone()).collect()).collect())
                })
                .collect()
        })
        .collect())
}

pub fn hom_dim(q: &Quiver, m: &Representation, n: &Representation) -> Result<usize> {
    Ok(hom_basis(q, m, n)?.len())
}

pub fn is_morphism(q: &Quiver, f: &[Mat], m: &Representation, n: &Representation) -> bool {
    (0..q.n_arrows()).all(|a| f[q.source(a)].mul(&m.mats[a]) == n.mats[a].mul(&f[q.target(a)]))
}

fn combine(basis: &[Morphism], coeffs: &[Scalar]) -> Morphism {
    let mut out: Morphism = basis[0].iter().map(|b| Mat::zeros(b.rows(), b.cols())).collect();
    for (f, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, b) in out.iter_mut().zip(f) {
            o.add_scaled(c, b);
        }
    }
    out
}

fn morphism_det(f: &[Mat]) -> Scalar {
    f.iter().filter(|b| b.rows() > 0).map(Mat::det).product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    Isomorphic { witness: Morphism },
    NotIsomorphic { reason: String },
    Unresolved { reason: String },
}

impl IsoVerdict {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            IsoVerdict::Isomorphic { .. } => Some(true),
            IsoVerdict::NotIsomorphic { .. } => Some(false),
            IsoVerdict::Unresolved { .. } => None,
        }
    }
}

/// Dimension comparisons, then a search for an invertible element of
/// Hom(M, N) among basis elements and seeded random combinations, then an
/// exhaustive determinant check on a grid large enough to certify that the
/// determinant polynomial vanishes identically.
pub fn isomorphism(q: &Quiver, m: &Representation, n: &Representation, seed: u64) -> Result<IsoVerdict> {
    if m.dims != n.dims {
        return Ok(IsoVerdict::NotIsomorphic { reason: "dimension vectors differ".into() });
    }
    if m.is_zero() {
        return Ok(IsoVerdict::Isomorphic { witness: vec![Mat::zeros(0, 0); q.n_vertices()] });
    }
    let hmn = hom_basis(q, m, n)?;
    let dims = [hmn.len(), hom_dim(q, n, m)?, hom_dim(q, m, m)?, hom_dim(q, n, n)?];
    if dims.iter().any(|&d| d != dims[0]) {
        return Ok(IsoVerdict::NotIsomorphic {
            reason: format!("hom dimensions differ: Hom(M,N)={} Hom(N,M)={} End(M)={} End(N)={}", dims[0], dims[1], dims[2], dims[3]),
        });
    }
    let k = hmn.len();
    for f in &hmn {
        if !morphism_det(f).is_zero() {
            return Ok(IsoVerdict::Isomorphic { witness: f.clone() });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_TRIALS {
        let coeffs: Vec<Scalar> = (0..k).map(|_| scalar::int(rng.gen_range(-50..=50))).collect();
        let f = combine(&hmn, &coeffs);
        if !morphism_det(&f).is_zero() {
            return Ok(IsoVerdict::Isomorphic { witness: f });
        }
    }
    // det(sum t_i f_i) has degree at most D in each variable; if it vanishes
    // on {0..D}^k it vanishes identically and no isomorphism exists.
    let d = m.total_dim();
    let points = (d + 1).checked_pow(k as u32).filter(|&p| p <= GRID_BUDGET);
    let Some(points) = points else {
        return Ok(IsoVerdict::Unresolved { reason: format!("grid of {}^{} points is over budget", d + 1, k) });
    };
    for idx in 0..points {
        let mut rest = idx;
        let coeffs: Vec<Scalar> = (0..k)
            .map(|_| {
                let c = rest % (d + 1);
                rest /= d + 1;
                scalar::int(c as i64)
            })
            .collect();
        let f = combine(&hmn, &coeffs);
        if !morphism_det(&f).is_zero() {
            return Ok(IsoVerdict::Isomorphic { witness: f });
        }
    }
    Ok(IsoVerdict::NotIsomorphic { reason: format!("determinant vanishes on the full {}^{} grid", d + 1, k) })
}

/// Refuses instead of guessing when the verdict is unresolved.
pub fn are_isomorphic(q: &Quiver, m: &Representation, n: &Representation) -> Result<bool> {
    match isomorphism(q, m, n, DEFAULT_SEED)? {
        IsoVerdict::Unresolved { reason } => Err(Error::refused(reason)),
        v => Ok(v.as_bool().unwrap()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndecVerdict {
    Yes { reason: String },
    No { reason: String, summands: Option<Box<(Representation, Representation)>> },
    Unresolved { reason: String },
}

impl IndecVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            IndecVerdict::Yes { .. } => "yes",
            IndecVerdict::No { .. } => "no",
            IndecVerdict::Unresolved { .. } => "unresolved",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, IndecVerdict::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, IndecVerdict::No { .. })
    }
}

/// Span of all products of length n of elements of `gens`, as flattened
/// morphisms; stops once the span is zero.
fn is_nilpotent_span(gens: &[Morphism], limit: usize) -> bool {
    let mut cur: Vec<Morphism> = gens.to_vec();
    for _ in 0..=limit {
        cur.retain(|f| f.iter().any(|b| !b.is_zero()));
        if cur.is_empty() {
            return true;
        }
        let mut next: Vec<Morphism> = Vec::new();
        let mut space = crate::linalg::RowSpace::new(cur[0].iter().map(|b| b.rows() * b.cols()).sum());
        for f in &cur {
            for g in gens {
                let p: Morphism = f.iter().zip(g).map(|(a, b)| a.mul(b)).collect();
                let flat: Vec<Scalar> = p.iter().flat_map(|b| b.entries().to_vec()).collect();
                if space.insert(&flat) {
                    next.push(p);
                }
            }
        }
        cur = next;
    }
    false
}

/// Indecomposability through End(M).
///
/// If every endomorphism minus its scalar part (trace over dimension) lies in
/// a nilpotent subspace, End(M) is local with residue field k and M is
/// (absolutely) indecomposable. Otherwise endomorphisms are searched for a
/// characteristic polynomial with a rational root and a coprime cofactor,
/// whose generalized kernels split M.
pub fn is_indecomposable(q: &Quiver, m: &Representation, seed: u64) -> Result<IndecVerdict> {
    if m.is_zero() {
        return Ok(IndecVerdict::No { reason: "zero module".into(), summands: None });
    }
    let end = hom_basis(q, m, m)?;
    if end.len() == 1 {
        return Ok(IndecVerdict::Yes { reason: "End(M) = k".into() });
    }
    let d = m.total_dim();
    let dd = scalar::int(d as i64);
    let scalar_free: Vec<Morphism> = end
        .iter()
        .map(|f| {
            let tr: Scalar = f.iter().map(Mat::trace).sum::<Scalar>() / &dd;
            f.iter().map(|b| b.sub(&Mat::identity(b.rows()).scale(&tr))).collect()
        })
        .collect();
    if is_nilpotent_span(&scalar_free, d) {
        return Ok(IndecVerdict::Yes { reason: format!("End(M) is local of dimension {}", end.len()) });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<Morphism> = end.clone();
    for _ in 0..RANDOM_TRIALS {
        let coeffs: Vec<Scalar> = (0..end.len()).map(|_| scalar::int(rng.gen_range(-9..=9))).collect();
        candidates.push(combine(&end, &coeffs));
    }
    for e in &candidates {
        if let Some(split) = fitting_split(q, m, e) {
            return Ok(IndecVerdict::No { reason: "endomorphism with coprime characteristic factors".into(), summands: Some(Box::new(split)) });
        }
    }
    Ok(IndecVerdict::Unresolved { reason: "not absolutely indecomposable, and no rational splitting found".into() })
}

fn fitting_split(q: &Quiver, m: &Representation, e: &[Mat]) -> Option<(Representation, Representation)> {
    let chi = e.iter().filter(|b| b.rows() > 0).fold(Poly::one(), |acc, b| acc.mul(&b.charpoly()));
    for r in chi.rational_roots() {
        let lin = Poly::new(vec![-r.clone(), Scalar::one()]);
        let mut f = Poly::one();
        let mut rest = chi.clone();
        loop {
            let (quo, rem) = rest.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            f = f.mul(&lin);
            rest = quo;
        }
        if rest.degree() == 0 {
            continue;
        }
        let k1 = sub_rep(q, m, e, &f)?;
        let k2 = sub_rep(q, m, e, &rest)?;
        if !k1.is_zero() && !k2.is_zero() {
            return Some((k1, k2));
        }
    }
    None
}

/// Kernel of p(e) as a subrepresentation, in the basis found by nullspace.
fn sub_rep(q: &Quiver, m: &Representation, e: &[Mat], p: &Poly) -> Option<Representation> {
    let bases: Vec<Mat> = (0..q.n_vertices())
        .map(|x| {
            let cols = if m.dims[x] == 0 { vec![] } else { e[x].eval_poly(p).nullspace() };
            basis_matrix(m.dims[x], &cols)
        })
        .collect();
    restrict(q, m, &bases)
}

fn basis_matrix(rows: usize, cols: &[Vec<Scalar>]) -> Mat {
    let mut b = Mat::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            b.set(i, j, x.clone());
        }
    }
    b
}

/// Restriction of M to subspaces given by full-column-rank bases; None if
/// they do not form a subrepresentation.
pub fn restrict(q: &Quiver, m: &Representation, bases: &[Mat]) -> Option<Representation> {
    let dims: Vec<usize> = bases.iter().map(Mat::cols).collect();
    let mut mats = Vec::with_capacity(q.n_arrows());
    for a in 0..q.n_arrows() {
        let (s, t) = (q.source(a), q.target(a));
        let image = m.mats[a].mul(&bases[t]);
        if dims[s] == 0 {
            if !image.is_zero() {
                return None;
            }
            mats.push(Mat::zeros(0, dims[t]));
            continue;
        }
        // Least-squares solve, exact when the image lies in the span.
        let bt = bases[s].transpose();
        let x = bt.mul(&bases[s]).inverse()?.mul(&bt).mul(&image);
        if bases[s].mul(&x) != image {
            return None;
        }
        mats.push(x);
    }
    Some(Representation { dims, mats })
}

/// The translate: (gM)_{g x} = M_x.
pub fn translate(q: &Quiver, m: &Representation, g: &PartialAuto) -> Result<Representation> {
    let mut dims = vec![0; q.n_vertices()];
    for x in m.support() {
        let y = g.vmap[x].ok_or_else(|| Error::invalid(format!("group element undefined at support vertex {:?}", q.vid(x))))?;
        dims[y] = m.dims[x];
    }
    let mut out = Representation::with_dims(q, dims);
    for a in 0..q.n_arrows() {
        if m.dims[q.source(a)] == 0 || m.dims[q.target(a)] == 0 {
            continue;
        }
        let b = g.amap[a].ok_or_else(|| Error::invalid(format!("group element undefined at arrow {:?}", q.aid(a))))?;
        out.mats[b] = m.mats[a].clone();
    }
    Ok(out)
}

/// Offsets of each cover vertex inside its fibre sum, in cover vertex order
/// (which is lexicographic by id).
fn fibre_offsets(pi: &QuiverMorphism, dims: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut base_dims = vec![0; pi.dst.n_vertices()];
    let mut offset = vec![0; dims.len()];
    for (x, &d) in dims.iter().enumerate() {
        let b = pi.vmap[x];
        offset[x] = base_dims[b];
        base_dims[b] += d;
    }
    (base_dims, offset)
}

/// Push-down: the space at a base vertex is the sum over its fibre, and each
/// cover arrow over alpha contributes its matrix as a block of alpha's
/// matrix.
pub fn push_down(pi: &QuiverMorphism, m: &Representation) -> Representation {
    let (base_dims, offset) = fibre_offsets(pi, &m.dims);
    let base = &pi.dst;
    let mut out = Representation::with_dims(base, base_dims);
    for a in 0..pi.src.n_arrows() {
        let (s, t) = (pi.src.source(a), pi.src.target(a));
        if m.dims[s] == 0 || m.dims[t] == 0 {
            continue;
        }
        out.mats[pi.amap[a]].set_block(offset[s], offset[t], &m.mats[a]);
    }
    out
}

/// Push-down of a morphism M -> N: block diagonal over each fibre.
pub fn push_down_morphism(pi: &QuiverMorphism, m: &Representation, n: &Representation, f: &[Mat]) -> Morphism {
    let (bm, om) = fibre_offsets(pi, &m.dims);
    let (bn, on) = fibre_offsets(pi, &n.dims);
    let mut out: Morphism = (0..pi.dst.n_vertices()).map(|b| Mat::zeros(bn[b], bm[b])).collect();
    for x in 0..pi.src.n_vertices() {
        if m.dims[x] > 0 && n.dims[x] > 0 {
            out[pi.vmap[x]].set_block(on[x], om[x], &f[x]);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullUp {
    pub rep: Representation,
    /// The full pull-up is not finite dimensional, or the window cuts
    /// arrows off: only a window of it is shown.
    pub windowed: bool,
}

/// Pull-up restricted to a window of cover vertices; arrows with an
/// endpoint outside the window are dropped.
pub fn pull_up(pi: &QuiverMorphism, v: &Representation, window: &BTreeSet<V>) -> PullUp {
    let cover = &pi.src;
    let dims: Vec<usize> = (0..cover.n_vertices()).map(|x| if window.contains(&x) { v.dims[pi.vmap[x]] } else { 0 }).collect();
    let mut rep = Representation::with_dims(cover, dims);
    for a in 0..cover.n_arrows() {
        if window.contains(&cover.source(a)) && window.contains(&cover.target(a)) {
            rep.mats[a] = v.mats[pi.amap[a]].clone();
        }
    }
    let full = window.len() == cover.n_vertices() && pi.covering_report_on(Some(window)).is_covering;
    PullUp { rep, windowed: !v.is_zero() && !full }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    /// dim Hom(push_down M, V)
    pub base_side: usize,
    /// dim Hom(M, pull_up V) on the window
    pub cover_side: usize,
    /// The window holds supp M, every vertex with an arrow into supp M, and
    /// full arrow stars there, so the windowed count is the true one.
    pub complete: bool,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        !self.complete || self.base_side == self.cover_side
    }
}

pub fn adjunction_check(pi: &QuiverMorphism, m: &Representation, v: &Representation, window: &BTreeSet<V>) -> Result<AdjunctionReport> {
    let cover = &pi.src;
    let supp = m.support();
    let mut needed = supp.clone();
    for &x in &supp {
        needed.extend(cover.in_arrows(x).iter().map(|&a| cover.source(a)));
    }
    let complete = needed.is_subset(window) && pi.covering_report_on(Some(&supp)).is_covering;
    let base_side = hom_dim(&pi.dst, &push_down(pi, m), v)?;
    let up = pull_up(pi, v, window);
    let cover_side = hom_dim(cover, m, &up.rep)?;
    Ok(AdjunctionReport { base_side, cover_side, complete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::Relation;
    use crate::scalar::int;

    fn kronecker() -> Quiver {
        Quiver::new(&["x", "y"], &[("a", "y", "x"), ("b", "y", "x")]).unwrap()
    }

    fn band(q: &Quiver, n: usize, lambda: i64) -> Representation {
        let mut j = Mat::identity(n).scale(&int(lambda));
        for i in 0..n.saturating_sub(1) {
            j.set(i, i + 1, int(1));
        }
        Representation::new(q, vec![n, n], vec![j, Mat::identity(n)]).unwrap()
    }

    #[test]
    fn hom_of_simples() {
        let q = kronecker();
        let s = Representation::simple(&q, 0);
        assert_eq!(hom_dim(&q, &s, &s).unwrap(), 1);
        assert_eq!(hom_dim(&q, &s, &Representation::simple(&q, 1)).unwrap(), 0);
    }

    #[test]
    fn band_module_is_indecomposable() {
        let q = kronecker();
        let m = band(&q, 2, 3);
        assert!(is_indecomposable(&q, &m, DEFAULT_SEED).unwrap().is_yes());
        let s = Representation::simple(&q, 0);
        let v = is_indecomposable(&q, &s.direct_sum(&s), DEFAULT_SEED).unwrap();
        assert!(v.is_no());
    }

    #[test]
    fn decomposable_band_sum_splits() {
        let q = kronecker();
        let m = band(&q, 1, 2).direct_sum(&band(&q, 1, 5));
        match is_indecomposable(&q, &m, DEFAULT_SEED).unwrap() {
            IndecVerdict::No { summands: Some(s), .. } => {
                assert_eq!(s.0.total_dim() + s.1.total_dim(), 4);
                assert!(are_isomorphic(&q, &s.0.direct_sum(&s.1), &m).unwrap());
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn iso_under_conjugation() {
        let q = kronecker();
        let m = band(&q, 2, 3);
        let p = Mat::from_ints(&[&[1, 2], &[3, 7]]);
        let r = Mat::from_ints(&[&[2, 1], &[1, 1]]);
        let n = m.conjugate(&q, &[p, r]).unwrap();
        assert!(are_isomorphic(&q, &m, &n).unwrap());
        assert!(!are_isomorphic(&q, &m, &band(&q, 2, 4)).unwrap());
        assert!(!are_isomorphic(&q, &Representation::simple(&q, 0), &Representation::simple(&q, 1)).unwrap());
    }

    #[test]
    fn check_rep_finds_violations() {
        let q = Quiver::new(&["1"], &[("alpha", "1", "1")]).unwrap();
        let i = Ideal::new(q.clone(), vec![Relation::monomial(&q, q.path_from_ids(&["alpha", "alpha"]).unwrap()).unwrap()], Some(2), None).unwrap();
        let ok = Representation::new(&q, vec![2], vec![Mat::from_ints(&[&[0, 1], &[0, 0]])]).unwrap();
        assert_eq!(check_rep(&i, &ok).unwrap(), None);
        let bad = Representation::new(&q, vec![2], vec![Mat::from_ints(&[&[1, 1], &[0, 0]])]).unwrap();
        assert!(check_rep(&i, &bad).unwrap().is_some());
        assert!(is_indecomposable(&q, &ok, DEFAULT_SEED).unwrap().is_yes());
    }
}
