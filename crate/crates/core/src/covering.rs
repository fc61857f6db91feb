//! Coverings of quivers with relations.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::quiver::{Anchor, QuiverMorphism, V};
use crate::relations::{Ideal, RelKind, Relation};

#[derive(Clone, Debug)]
pub struct BoundQuiverMorphism {
    pub map: QuiverMorphism,
    pub src_ideal: Ideal,
    pub dst_ideal: Ideal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftFailure {
    /// Target generator, right-to-left notation.
    pub generator: String,
    pub anchor: String,
    pub anchor_end: &'static str,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelCoveringReport {
    pub is_covering: bool,
    /// Source generators whose image is not in the target ideal.
    pub image_failures: Vec<String>,
    pub lift_failures: Vec<LiftFailure>,
    pub lifts_checked: usize,
    /// Anchors skipped because a lift ran off the truncation.
    pub lifts_skipped: usize,
}

impl BoundQuiverMorphism {
    pub fn new(map: QuiverMorphism, src_ideal: Ideal, dst_ideal: Ideal) -> Result<BoundQuiverMorphism> {
        if src_ideal.quiver != map.src || dst_ideal.quiver != map.dst {
            return Err(Error::invalid("ideals live on different quivers than the morphism"));
        }
        Ok(BoundQuiverMorphism { map, src_ideal, dst_ideal })
    }

    pub fn is_relation_covering(&self) -> Result<RelCoveringReport> {
        self.relation_covering_report(None)
    }

    /// With `only`, the star condition and the lifting condition are checked
    /// at those source vertices, and lifts that leave the known part of the
    /// source are counted as skipped rather than failed.
    pub fn relation_covering_report(&self, only: Option<&BTreeSet<V>>) -> Result<RelCoveringReport> {
        let f = &self.map;
        let qr = f.covering_report_on(only);
        if !qr.is_covering {
            return Err(Error::invalid(format!(
                "underlying map is not a quiver covering at {}",
                qr.violations.iter().map(|(v, d)| format!("{}/{}", f.src.vid(*v), d.as_str())).collect::<Vec<_>>().join(", ")
            )));
        }
        let mut image_failures = Vec::new();
        for g in &self.src_ideal.generators {
            if let Some(set) = only {
                if !set.contains(&g.source) && !set.contains(&g.target) {
                    continue;
                }
            }
            if !self.dst_ideal.contains(&g.map(f))? {
                image_failures.push(g.display(&f.src));
            }
        }
        let fibres = f.fibres();
        let mut lift_failures = Vec::new();
        let (mut checked, mut skipped) = (0, 0);
        for (_, rho) in self.dst_ideal.minimal_generators()? {
            for end in [Anchor::Start, Anchor::End] {
                let over = if end == Anchor::Start { rho.source } else { rho.target };
                for &a in &fibres[over] {
                    if only.is_some_and(|s| !s.contains(&a)) {
                        continue;
                    }
                    let fail = |reason: String| LiftFailure {
                        generator: rho.display(&f.dst),
                        anchor: f.src.vid(a).to_string(),
                        anchor_end: if end == Anchor::Start { "start" } else { "end" },
                        reason,
                    };
                    match self.lift_relation(&rho, a, end) {
                        Ok(lift) => {
                            checked += 1;
                            if !self.src_ideal.contains(&lift)? {
                                lift_failures.push(fail(format!("lift {} is not in the source ideal", lift.display(&f.src))));
                            }
                        }
                        Err(Error::Invalid(_)) if only.is_some() => skipped += 1,
                        Err(Error::Invalid(msg)) => lift_failures.push(fail(msg)),
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        Ok(RelCoveringReport {
            is_covering: image_failures.is_empty() && lift_failures.is_empty(),
            image_failures,
            lift_failures,
            lifts_checked: checked,
            lifts_skipped: skipped,
        })
    }

    /// Lifts every term of `rho` with the chosen endpoint at `anchor`.
    /// Errors with `Invalid` when a lift is impossible or the lifted terms do
    /// not share their other endpoint.
    pub fn lift_relation(&self, rho: &Relation, anchor: V, end: Anchor) -> Result<Relation> {
        let f = &self.map;
        let mut terms = Vec::with_capacity(rho.len());
        for (c, p) in &rho.terms {
            terms.push((c.clone(), f.lift_path(p, anchor, end)?));
        }
        let first = &terms[0].1;
        let (s, t) = (first.start, f.src.path_end(first));
        if terms.iter().any(|(_, p)| p.start != s || f.src.path_end(p) != t) {
            return Err(Error::invalid(format!("lifts of {} from {:?} do not end together", rho.display(&f.dst), f.src.vid(anchor))));
        }
        Relation::new(&f.src, terms)
    }

    /// Lift of a minimal or zero relation, checked to have the same kind.
    pub fn lift_minimal_relation(&self, rho: &Relation, anchor: V, end: Anchor) -> Result<Relation> {
        let want = self.dst_ideal.classify(rho)?;
        if !matches!(want, RelKind::Minimal | RelKind::Zero) {
            return Err(Error::invalid(format!("{} is {want} in the target ideal", rho.display(&self.map.dst))));
        }
        let lift = self.lift_relation(rho, anchor, end).map_err(|e| Error::Contradiction(format!("relation does not lift: {e}")))?;
        let got = self.src_ideal.classify(&lift)?;
        if got != want {
            return Err(Error::Contradiction(format!("lift {} is {got}, expected {want}", lift.display(&self.map.src))));
        }
        Ok(lift)
    }

    /// Compares fibre-summed quotient dimensions with the target's, for each
    /// anchor in `window` and each target vertex, in both directions.
    /// `frontier` marks source vertices whose stars may be incomplete.
    pub fn quotient_dims(&self, window: &BTreeSet<V>, frontier: &BTreeSet<V>) -> DimTable {
        let f = &self.map;
        let fibres = f.fibres();
        let reach = self.src_ideal.truncation_length;
        let mut rows = Vec::new();
        for &x in window {
            for (dir, forward) in [("from", true), ("to", false)] {
                // Completeness: no path of length <= L touching the frontier.
                let q = if forward { f.src.clone() } else { f.src.opposite() };
                let paths = q.paths_from(x, reach);
                let complete = !paths.iter().any(|p| {
                    frontier.contains(&p.start) || p.arrows.iter().any(|&a| frontier.contains(&q.target(a)))
                });
                for b in 0..f.dst.n_vertices() {
                    let fibre_sum: usize = fibres[b]
                        .iter()
                        .map(|&y| if forward { self.src_ideal.quotient_dim(x, y) } else { self.src_ideal.quotient_dim(y, x) })
                        .sum();
                    let base = if forward { self.dst_ideal.quotient_dim(f.vmap[x], b) } else { self.dst_ideal.quotient_dim(b, f.vmap[x]) };
                    rows.push(DimRow {
                        anchor: f.src.vid(x).to_string(),
                        direction: dir,
                        other: f.dst.vid(b).to_string(),
                        fibre_sum,
                        base_dim: base,
                        complete,
                    });
                }
            }
        }
        let all_match = rows.iter().filter(|r| r.complete).all(|r| r.fibre_sum == r.base_dim);
        DimTable { rows, all_match }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimRow {
    pub anchor: String,
    /// "from": hom spaces out of the anchor; "to": into it.
    pub direction: &'static str,
    pub other: String,
    pub fibre_sum: usize,
    pub base_dim: usize,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimTable {
    pub rows: Vec<DimRow>,
    /// Every complete row matches.
    pub all_match: bool,
}

impl DimTable {
    pub fn complete(&self) -> bool {
        self.rows.iter().all(|r| r.complete)
    }
}
