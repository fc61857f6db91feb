//! JSON file formats.
//!
//! Paths are lists of arrow ids, first-traversed first. Scalars are strings,
//! "p" or "p/q".

use std::collections::{BTreeMap, BTreeSet};
use std::fs;

use qcov_core::group_action::PartialAuto;
use qcov_core::linalg::Mat;
use qcov_core::quiver::{Quiver, QuiverMorphism};
use qcov_core::relations::{Ideal, Relation};
use qcov_core::reps::Representation;
use qcov_core::scalar;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::Fail;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowJson {
    pub id: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: String,
    pub path: Vec<String>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RelationJson {
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct IdealJson {
    #[serde(default)]
    pub relations: Vec<RelationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotency_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_length: Option<usize>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub vertex_map: BTreeMap<String, String>,
    pub arrow_map: BTreeMap<String, String>,
}

/// A quiver, optionally with an ideal. Cover files also carry their
/// projection, frontier and base class.
#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverJson {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<IdealJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<MorphismJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frontier: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_class: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub generators: Vec<MorphismJson>,
    pub enumeration_bound: usize,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RepJson {
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub mats: BTreeMap<String, Vec<Vec<String>>>,
}

/// Truncation length used when a quiver file has no ideal.
pub const DEFAULT_TRUNCATION: usize = 4;

/// A loaded input file: its text, file name and content hash.
pub struct Input {
    pub name: String,
    pub text: String,
    pub sha256: String,
}

impl Input {
    pub fn read(path: &str) -> Result<Input, Fail> {
        let text = fs::read_to_string(path).map_err(|e| Fail::Input(format!("{path}: {e}")))?;
        let name = std::path::Path::new(path).file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.to_string());
        let sha256 = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        Ok(Input { name, text, sha256 })
    }

    pub fn parse<T: for<'de> Deserialize<'de>>(&self) -> Result<T, Fail> {
        serde_json::from_str(&self.text).map_err(|e| Fail::Input(format!("{}: line {} column {}: {e}", self.name, e.line(), e.column())))
    }

    pub fn record(&self) -> Value {
        json!({"file": self.name, "sha256": self.sha256})
    }
}

fn input_err(file: &str, e: qcov_core::Error) -> Fail {
    Fail::Input(format!("{file}: {e}"))
}

pub fn quiver_from_json(file: &str, j: &QuiverJson) -> Result<Quiver, Fail> {
    let arrows: Vec<(String, String, String)> = j.arrows.iter().map(|a| (a.id.clone(), a.from.clone(), a.to.clone())).collect();
    Quiver::new(&j.vertices, &arrows).map_err(|e| input_err(file, e))
}

pub fn ideal_from_json(file: &str, q: &Quiver, j: Option<&IdealJson>) -> Result<Ideal, Fail> {
    let Some(j) = j else {
        return Ok(Ideal::zero(q.clone(), DEFAULT_TRUNCATION));
    };
    let mut gens = Vec::new();
    for (i, r) in j.relations.iter().enumerate() {
        let mut terms = Vec::new();
        for (k, t) in r.terms.iter().enumerate() {
            let c = scalar::parse(&t.coeff).map_err(|e| Fail::Input(format!("{file}: relations[{i}].terms[{k}].coeff: {e}")))?;
            let p = q.path_from_ids(&t.path).map_err(|e| Fail::Input(format!("{file}: relations[{i}].terms[{k}].path: {e}")))?;
            terms.push((c, p));
        }
        gens.push(Relation::new(q, terms).map_err(|e| Fail::Input(format!("{file}: relations[{i}]: {e}")))?);
    }
    let trunc = j.truncation_length.or(if gens.is_empty() && j.nilpotency_bound.is_none() { Some(DEFAULT_TRUNCATION) } else { None });
    Ideal::new(q.clone(), gens, j.nilpotency_bound, trunc).map_err(|e| input_err(file, e))
}

pub fn load_bound_quiver(input: &Input) -> Result<(Quiver, Ideal, QuiverJson), Fail> {
    let j: QuiverJson = input.parse()?;
    let q = quiver_from_json(&input.name, &j)?;
    let ideal = ideal_from_json(&input.name, &q, j.ideal.as_ref())?;
    Ok((q, ideal, j))
}

pub fn morphism_from_json(file: &str, src: &Quiver, dst: &Quiver, j: &MorphismJson) -> Result<QuiverMorphism, Fail> {
    QuiverMorphism::from_ids(src.clone(), dst.clone(), &j.vertex_map, &j.arrow_map).map_err(|e| input_err(file, e))
}

pub fn group_from_json(file: &str, q: &Quiver, j: &GroupJson) -> Result<Vec<PartialAuto>, Fail> {
    j.generators
        .iter()
        .enumerate()
        .map(|(i, g)| PartialAuto::from_ids(q, &g.vertex_map, &g.arrow_map).map_err(|e| Fail::Input(format!("{file}: generators[{i}]: {e}"))))
        .collect()
}

pub fn rep_from_json(file: &str, q: &Quiver, j: &RepJson) -> Result<Representation, Fail> {
    for v in j.dims.keys() {
        q.vertex_or_err(v).map_err(|e| Fail::Input(format!("{file}: dims: {e}")))?;
    }
    for a in j.mats.keys() {
        q.arrow_or_err(a).map_err(|e| Fail::Input(format!("{file}: mats: {e}")))?;
    }
    let dims: Vec<usize> = q.vertices().iter().map(|v| j.dims.get(v).copied().unwrap_or(0)).collect();
    let mut mats = Vec::new();
    for a in q.arrows() {
        let (r, c) = (dims[a.source], dims[a.target]);
        let Some(rows) = j.mats.get(&a.id) else {
            mats.push(Mat::zeros(r, c));
            continue;
        };
        let bad = |msg: String| Fail::Input(format!("{file}: mats.{}: {msg}", a.id));
        if rows.len() != r {
            return Err(bad(format!("expected {r} rows, found {}", rows.len())));
        }
        let mut entries = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(bad(format!("row {i} has {} entries, expected {c}", row.len())));
            }
            entries.push(row.iter().map(|x| scalar::parse(x).map_err(|e| bad(e.to_string()))).collect::<Result<Vec<_>, _>>()?);
        }
        mats.push(Mat::from_rows(r, c, entries));
    }
    Representation::new(q, dims, mats).map_err(|e| input_err(file, e))
}

pub fn load_rep(input: &Input, q: &Quiver) -> Result<Representation, Fail> {
    rep_from_json(&input.name, q, &input.parse()?)
}

// ---------------------------------------------------------------------------
// Output

pub fn quiver_to_json(q: &Quiver, ideal: Option<&Ideal>) -> QuiverJson {
    QuiverJson {
        vertices: q.vertices().to_vec(),
        arrows: q.arrows().iter().map(|a| ArrowJson { id: a.id.clone(), from: q.vid(a.source).into(), to: q.vid(a.target).into() }).collect(),
        ideal: ideal.map(|i| IdealJson {
            relations: i.generators.iter().map(|r| relation_to_json(q, r)).collect(),
            nilpotency_bound: i.nilpotency_bound,
            truncation_length: Some(i.truncation_length),
        }),
        projection: None,
        frontier: None,
        base_class: None,
    }
}

pub fn relation_to_json(q: &Quiver, r: &Relation) -> RelationJson {
    RelationJson {
        terms: r
            .terms
            .iter()
            .map(|(c, p)| TermJson { coeff: scalar::format(c), path: p.arrows.iter().map(|&a| q.aid(a).to_string()).collect() })
            .collect(),
    }
}

pub fn morphism_to_json(f: &QuiverMorphism) -> MorphismJson {
    MorphismJson { vertex_map: f.vmap_ids(), arrow_map: f.amap_ids() }
}

pub fn rep_to_json(q: &Quiver, m: &Representation) -> RepJson {
    RepJson {
        dims: q.vertices().iter().cloned().zip(m.dims.iter().copied()).collect(),
        mats: q.arrows().iter().zip(&m.mats).map(|(a, x)| (a.id.clone(), x.to_strings())).collect(),
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

/// Vertex ids from `--window` flags; all vertices when none are given.
pub fn window(q: &Quiver, ids: &[String]) -> Result<BTreeSet<usize>, Fail> {
    if ids.is_empty() {
        return Ok((0..q.n_vertices()).collect());
    }
    ids.iter().map(|v| q.vertex_or_err(v).map_err(|e| Fail::Input(format!("--window: {e}")))).collect()
}
