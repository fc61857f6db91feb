//! `qcov` command-line front end.
//!
//! Every subcommand builds a [`Report`]: human-readable lines for stdout and
//! a JSON run report (sorted keys) with input hashes, parameters, verdict
//! and warnings. Exit codes: 0 verdict computed, 1 input error, 2 refusal.

pub mod io;

use std::collections::BTreeSet;
use std::fs;

use clap::{Args, Parser, Subcommand};
use qcov_core::covering::BoundQuiverMorphism;
use qcov_core::group_action::{automorphisms, galois_group_exists, is_galois_covering, ActionPresentation, GaloisExistence, DEFAULT_SEARCH_CAP};
use qcov_core::pi1::{pi1_presentation, simplify, simply_connected_criterion, Verdict};
use qcov_core::quiver::{Quiver, QuiverMorphism, V};
use qcov_core::relations::Ideal;
use qcov_core::rep_type::{
    classify_path_algebra, detect_wild_patterns, e7tt_tree_certificate, two_in_two_out_criterion, validate_embedding, validate_shape,
    TypeClass,
};
use qcov_core::reps::{self, IndecVerdict, IsoVerdict, Representation};
use qcov_core::scalar;
use qcov_core::strings_bands::{band_module, enumerate_bands, enumerate_strings, is_band, is_string_presentation};
use qcov_core::universal_cover::{build_universal_cover, deck_action, TruncatedCover};
use serde_json::{json, Map, Value};

use crate::io::{Input, QuiverJson};

#[derive(Debug)]
pub enum Fail {
    Input(String),
    Refused(String),
    Internal(String),
}

impl From<qcov_core::Error> for Fail {
    fn from(e: qcov_core::Error) -> Self {
        match e {
            qcov_core::Error::Invalid(m) => Fail::Input(m),
            qcov_core::Error::Refused(m) => Fail::Refused(m),
            qcov_core::Error::Contradiction(m) => Fail::Internal(m),
        }
    }
}

impl Fail {
    pub fn exit_code(&self) -> i32 {
        match self {
            Fail::Input(_) | Fail::Internal(_) => 1,
            Fail::Refused(_) => 2,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Fail::Input(m) => format!("error: {m}"),
            Fail::Refused(m) => format!("refused: {m}"),
            Fail::Internal(m) => format!("internal error: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qcov", version, about = "Coverings of quivers with relations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the main output (quiver, cover or representation JSON; otherwise the run report) here.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Print the JSON run report instead of the text summary.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct MapArgs {
    #[arg(long)]
    pub src: String,
    #[arg(long)]
    pub dst: String,
    /// Morphism JSON; defaults to the projection stored in the source file.
    #[arg(long)]
    pub map: Option<String>,
}

#[derive(Args, Debug)]
pub struct CoveringArgs {
    #[arg(long)]
    pub src: Option<String>,
    #[arg(long)]
    pub dst: Option<String>,
    #[arg(long)]
    pub map: Option<String>,
    /// Base bound quiver; with --radius, use its truncated universal cover.
    #[arg(long)]
    pub quiver: Option<String>,
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub base: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Is the quiver morphism a covering (stars map bijectively)?
    CheckQuiverCovering(MapArgs),
    /// Is the morphism of bound quivers a covering, relations included?
    CheckRelcovering(MapArgs),
    /// Fibre-summed quotient dimensions against the target's.
    QuotientDims {
        #[command(flatten)]
        map: MapArgs,
        /// Anchor vertex (repeatable); all source vertices by default.
        #[arg(long)]
        window: Vec<String>,
    },
    /// Galois covering check, for a given group or over all automorphisms.
    CheckGalois {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        group: Option<String>,
    },
    /// Orbit quiver of a group action.
    Orbit {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        group: String,
        #[arg(long)]
        dot: Option<String>,
    },
    /// Fundamental group of a bound quiver.
    Pi1 {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        base: Option<String>,
    },
    /// Triangular, trivial fundamental group, unique arrow paths.
    SimplyConnected {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        base: Option<String>,
    },
    /// Truncated universal cover.
    Cover {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        base: Option<String>,
        /// Closed walk at the base, e.g. "-a,b"; prints its deck transformation.
        #[arg(long)]
        deck: Option<String>,
        #[arg(long)]
        dot: Option<String>,
    },
    /// Push a representation of the cover down to the base.
    Pushdown {
        #[command(flatten)]
        covering: CoveringArgs,
        #[arg(long)]
        rep: String,
    },
    /// Pull a representation of the base up to a window of the cover.
    Pullup {
        #[command(flatten)]
        covering: CoveringArgs,
        #[arg(long)]
        rep: String,
        /// Cover vertex (repeatable); all cover vertices by default.
        #[arg(long)]
        window: Vec<String>,
    },
    /// Representation checks.
    Rep {
        #[command(subcommand)]
        op: RepOp,
    },
    /// Strings up to a length.
    Strings {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Band classes up to a length.
    Bands {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Band module of a band, a dimension and an eigenvalue.
    Bandmod {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        band: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: String,
    },
    /// Representation-type certificates.
    Reptype {
        #[arg(long)]
        quiver: String,
        /// Also search the rad-square cover of this radius for the wild tree.
        #[arg(long)]
        radius: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum RepOp {
    /// Does the representation satisfy the relations?
    Check {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        rep: String,
    },
    /// Hom space between two representations.
    Hom {
        #[arg(long)]
        quiver: String,
        #[arg(long, num_args = 2, required = true)]
        rep: Vec<String>,
    },
    /// Are two representations isomorphic?
    Iso {
        #[arg(long)]
        quiver: String,
        #[arg(long, num_args = 2, required = true)]
        rep: Vec<String>,
    },
    /// Is the representation indecomposable?
    Indec {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        rep: String,
    },
}

#[derive(Default)]
pub struct Report {
    pub subcommand: String,
    pub inputs: Vec<Value>,
    pub parameters: Map<String, Value>,
    pub verdict: Value,
    pub result: Value,
    pub warnings: Vec<String>,
    pub lines: Vec<String>,
    /// Main output written by `--out`.
    pub artifact: Option<Value>,
    pub dot: Option<(String, String)>,
    /// Exit code 2 for an undecided verdict.
    pub undecided: bool,
}

impl Report {
    fn new(subcommand: &str) -> Report {
        Report { subcommand: subcommand.into(), ..Default::default() }
    }

    fn input(&mut self, path: &str) -> Result<Input, Fail> {
        let i = Input::read(path)?;
        self.inputs.push(i.record());
        Ok(i)
    }

    fn param(&mut self, k: &str, v: impl Into<Value>) {
        self.parameters.insert(k.into(), v.into());
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn truncation(&mut self, label: &str, ideal: &Ideal) {
        self.param(&format!("{label}.truncation_length"), ideal.truncation_length);
        if let Some(n) = ideal.nilpotency_bound {
            self.param(&format!("{label}.nilpotency_bound"), n);
        }
        let exact = if ideal.is_exact() { "exact" } else { "not exact: no nilpotency bound at or below it" };
        self.line(format!("truncation length {} for {label} ({exact})", ideal.truncation_length));
        if !ideal.is_exact() {
            self.warnings.push(format!("{label}: ideal computations are relative to paths of length <= {}", ideal.truncation_length));
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("subcommand".into(), self.subcommand.clone().into());
        m.insert("inputs".into(), Value::Array(self.inputs.clone()));
        m.insert("parameters".into(), Value::Object(self.parameters.clone()));
        m.insert("verdict".into(), self.verdict.clone());
        m.insert("result".into(), self.result.clone());
        m.insert("warnings".into(), json!(self.warnings));
        if let Some(a) = &self.artifact {
            m.insert("artifact".into(), a.clone());
        }
        Value::Object(m)
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        for w in &self.warnings {
            s.push_str("warning: ");
            s.push_str(w);
            s.push('\n');
        }
        s
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

/// Output of one run: exit code, stdout, stderr.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: impl IntoIterator<Item = String>) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli) {
        Ok(rep) => {
            let mut stderr = String::new();
            if let Some(path) = &cli.out {
                let body = pretty(rep.artifact.as_ref().unwrap_or(&rep.to_json()));
                if let Err(e) = fs::write(path, body) {
                    return Outcome { code: 1, stdout: String::new(), stderr: format!("error: {path}: {e}\n") };
                }
            }
            if let Some((path, dot)) = &rep.dot {
                if let Err(e) = fs::write(path, dot) {
                    stderr.push_str(&format!("error: {path}: {e}\n"));
                    return Outcome { code: 1, stdout: String::new(), stderr };
                }
            }
            let stdout = if cli.json { pretty(&rep.to_json()) } else { rep.text() };
            Outcome { code: if rep.undecided { 2 } else { 0 }, stdout, stderr }
        }
        Err(f) => Outcome { code: f.exit_code(), stdout: String::new(), stderr: format!("{}\n", f.message()) },
    }
}

fn dispatch(cli: &Cli) -> Result<Report, Fail> {
    let seed = cli.seed;
    match &cli.command {
        Command::CheckQuiverCovering(m) => check_quiver_covering(m),
        Command::CheckRelcovering(m) => check_relcovering(m),
        Command::QuotientDims { map, window } => quotient_dims(map, window),
        Command::CheckGalois { map, group } => check_galois(map, group.as_deref()),
        Command::Orbit { quiver, group, dot } => orbit(quiver, group, dot.as_deref()),
        Command::Pi1 { quiver, base } => pi1(quiver, base.as_deref()),
        Command::SimplyConnected { quiver, base } => simply_connected(quiver, base.as_deref()),
        Command::Cover { quiver, radius, base, deck, dot } => cover(quiver, *radius, base.as_deref(), deck.as_deref(), dot.as_deref()),
        Command::Pushdown { covering, rep } => pushdown(covering, rep),
        Command::Pullup { covering, rep, window } => pullup(covering, rep, window),
        Command::Rep { op } => rep_op(op, seed),
        Command::Strings { quiver, max_len } => strings(quiver, *max_len),
        Command::Bands { quiver, max_len } => bands(quiver, *max_len),
        Command::Bandmod { quiver, band, n, lambda } => bandmod(quiver, band, *n, lambda, seed),
        Command::Reptype { quiver, radius } => reptype(quiver, *radius),
    }
}

// ---------------------------------------------------------------------------
// Loading helpers

struct Loaded {
    q: Quiver,
    ideal: Ideal,
    json: QuiverJson,
}

fn load(r: &mut Report, label: &str, path: &str) -> Result<Loaded, Fail> {
    let input = r.input(path)?;
    let (q, ideal, json) = io::load_bound_quiver(&input)?;
    r.param(label, input.name.clone());
    Ok(Loaded { q, ideal, json })
}

fn base_vertex(q: &Quiver, base: Option<&str>) -> Result<V, Fail> {
    match base {
        Some(b) => Ok(q.vertex_or_err(b)?),
        None if q.n_vertices() == 0 => Err(Fail::Input("quiver has no vertices".into())),
        None => Ok(0),
    }
}

fn load_map(r: &mut Report, m: &MapArgs) -> Result<(Loaded, Loaded, QuiverMorphism), Fail> {
    let src = load(r, "src", &m.src)?;
    let dst = load(r, "dst", &m.dst)?;
    let f = match &m.map {
        Some(path) => {
            let input = r.input(path)?;
            r.param("map", input.name.clone());
            io::morphism_from_json(&input.name, &src.q, &dst.q, &input.parse()?)?
        }
        None => {
            let j = src.json.projection.as_ref().ok_or_else(|| Fail::Input("no --map given and the source has no projection".into()))?;
            io::morphism_from_json(&m.src, &src.q, &dst.q, j)?
        }
    };
    Ok((src, dst, f))
}

/// Source vertices listed as frontier in a cover file.
fn frontier_of(src: &Loaded) -> Result<BTreeSet<V>, Fail> {
    let mut out = BTreeSet::new();
    for v in src.json.frontier.iter().flatten() {
        out.insert(src.q.vertex_or_err(v)?);
    }
    Ok(out)
}

fn covering_report_lines(r: &mut Report, f: &QuiverMorphism, only: Option<&BTreeSet<V>>) -> bool {
    let c = f.covering_report_on(only);
    r.line(format!("quiver covering: {}", c.is_covering));
    for (v, d) in &c.violations {
        r.line(format!("  star not bijective: {} ({})", f.src.vid(*v), d.as_str()));
    }
    r.line(format!("surjective on vertices: {}, on arrows: {}", c.surjective_on_vertices, c.surjective_on_arrows));
    r.result.as_object_mut().expect("object").insert(
        "quiver_covering".into(),
        json!({
            "is_covering": c.is_covering,
            "violations": c.violations.iter().map(|(v, d)| json!([f.src.vid(*v), d.as_str()])).collect::<Vec<_>>(),
            "surjective_on_vertices": c.surjective_on_vertices,
            "surjective_on_arrows": c.surjective_on_arrows,
        }),
    );
    c.is_covering
}

// ---------------------------------------------------------------------------
// Subcommands

fn check_quiver_covering(m: &MapArgs) -> Result<Report, Fail> {
    let mut r = Report::new("check-quiver-covering");
    let (src, _, f) = load_map(&mut r, m)?;
    r.result = json!({});
    let fr = frontier_of(&src)?;
    let interior: BTreeSet<V> = (0..f.src.n_vertices()).filter(|v| !fr.contains(v)).collect();
    let only = (!fr.is_empty()).then_some(&interior);
    if only.is_some() {
        r.warnings.push(format!("stars checked off the {} frontier vertices only", fr.len()));
    }
    let ok = covering_report_lines(&mut r, &f, only);
    r.verdict = json!(ok);
    Ok(r)
}

fn check_relcovering(m: &MapArgs) -> Result<Report, Fail> {
    let mut r = Report::new("check-relcovering");
    let (src, dst, f) = load_map(&mut r, m)?;
    r.truncation("src", &src.ideal);
    r.truncation("dst", &dst.ideal);
    r.result = json!({});
    let fr = frontier_of(&src)?;
    let interior: BTreeSet<V> = (0..f.src.n_vertices()).filter(|v| !fr.contains(v)).collect();
    let only = (!fr.is_empty()).then_some(&interior);
    covering_report_lines(&mut r, &f, only);
    let bm = BoundQuiverMorphism::new(f, src.ideal, dst.ideal)?;
    let rep = bm.relation_covering_report(only)?;
    r.line(format!("relation covering: {}", rep.is_covering));
    for g in &rep.image_failures {
        r.line(format!("  image not in target ideal: {g}"));
    }
    for l in &rep.lift_failures {
        r.line(format!("  no lift of {} at {} ({}): {}", l.generator, l.anchor, l.anchor_end, l.reason));
    }
    r.line(format!("lifts checked: {}, skipped: {}", rep.lifts_checked, rep.lifts_skipped));
    if rep.lifts_skipped > 0 {
        r.warnings.push(format!("{} lifts left the truncation and were skipped", rep.lifts_skipped));
    }
    r.result.as_object_mut().expect("object").insert(
        "relation_covering".into(),
        json!({
            "is_covering": rep.is_covering,
            "image_failures": rep.image_failures,
            "lift_failures": rep.lift_failures.iter().map(|l| json!({
                "generator": l.generator, "anchor": l.anchor, "anchor_end": l.anchor_end, "reason": l.reason
            })).collect::<Vec<_>>(),
            "lifts_checked": rep.lifts_checked,
            "lifts_skipped": rep.lifts_skipped,
        }),
    );
    r.verdict = json!(rep.is_covering);
    Ok(r)
}

fn quotient_dims(m: &MapArgs, window: &[String]) -> Result<Report, Fail> {
    let mut r = Report::new("quotient-dims");
    let (src, dst, f) = load_map(&mut r, m)?;
    r.truncation("src", &src.ideal);
    r.truncation("dst", &dst.ideal);
    let win = io::window(&f.src, window)?;
    r.param("window", json!(window));
    let fr = frontier_of(&src)?;
    let bm = BoundQuiverMorphism::new(f, src.ideal, dst.ideal)?;
    let table = bm.quotient_dims(&win, &fr);
    let mut rows = Vec::new();
    for row in &table.rows {
        let mark = if !row.complete {
            "incomplete"
        } else if row.fibre_sum == row.base_dim {
            "ok"
        } else {
            "MISMATCH"
        };
        r.line(format!("{} {} {}: fibre sum {}, base {} {mark}", row.anchor, row.direction, row.other, row.fibre_sum, row.base_dim));
        rows.push(json!({
            "anchor": row.anchor, "direction": row.direction, "other": row.other,
            "fibre_sum": row.fibre_sum, "base_dim": row.base_dim, "complete": row.complete,
        }));
    }
    if !table.complete() {
        r.warnings.push("some rows touch the frontier and were not compared".into());
    }
    r.line(format!("all complete rows match: {}", table.all_match));
    r.result = json!({"rows": rows});
    r.verdict = json!(table.all_match);
    Ok(r)
}

fn check_galois(m: &MapArgs, group: Option<&str>) -> Result<Report, Fail> {
    let mut r = Report::new("check-galois");
    let (src, dst, f) = load_map(&mut r, m)?;
    r.truncation("src", &src.ideal);
    r.truncation("dst", &dst.ideal);
    let bm = BoundQuiverMorphism::new(f, src.ideal.clone(), dst.ideal)?;
    match group {
        Some(path) => {
            let input = r.input(path)?;
            r.param("group", input.name.clone());
            let gj: io::GroupJson = input.parse()?;
            let gens = io::group_from_json(&input.name, &src.q, &gj)?;
            r.param("enumeration_bound", gj.enumeration_bound);
            let ball = ActionPresentation::new(src.q.clone(), gens, gj.enumeration_bound)?.ball();
            let g = is_galois_covering(&bm, &ball)?;
            r.line(format!("galois covering for the given group: {}", g.is_galois));
            r.line(g.reason.clone());
            r.verdict = json!(g.is_galois);
            r.result = json!({"group_order": ball.elements.len(), "reason": g.reason});
        }
        None => {
            r.param("automorphism_cap", DEFAULT_SEARCH_CAP);
            let autos = automorphisms(&src.q, Some(&src.ideal), DEFAULT_SEARCH_CAP)?;
            let order = autos.value().len();
            match galois_group_exists(&bm, DEFAULT_SEARCH_CAP)? {
                GaloisExistence::Exists { group_order } => {
                    r.line(format!("galois covering for some automorphism group: true (deck group of order {group_order})"));
                    r.verdict = json!(true);
                    r.result = json!({"automorphisms": order, "deck_group_order": group_order});
                }
                GaloisExistence::None { reason } => {
                    r.line("galois covering for some automorphism group: false");
                    r.line(format!("checked all {order} automorphisms: {reason}"));
                    r.verdict = json!(false);
                    r.result = json!({"automorphisms": order, "reason": reason});
                }
                GaloisExistence::Inconclusive => {
                    return Err(Fail::Refused(format!("automorphism search exceeded {DEFAULT_SEARCH_CAP} nodes")));
                }
            }
        }
    }
    Ok(r)
}

fn orbit(quiver: &str, group: &str, dot: Option<&str>) -> Result<Report, Fail> {
    let mut r = Report::new("orbit");
    let l = load(&mut r, "quiver", quiver)?;
    r.truncation("quiver", &l.ideal);
    let input = r.input(group)?;
    r.param("group", input.name.clone());
    let gj: io::GroupJson = input.parse()?;
    let gens = io::group_from_json(&input.name, &l.q, &gj)?;
    r.param("enumeration_bound", gj.enumeration_bound);
    let ball = ActionPresentation::new(l.q.clone(), gens, gj.enumeration_bound)?.ball();
    let o = ball.orbit_quiver(&l.ideal)?;
    r.line(format!("orbit quiver: {} vertices, {} arrows; group of order {}, acts freely: {}", o.quiver.n_vertices(), o.quiver.n_arrows(), ball.elements.len(), o.free));
    for a in o.quiver.arrows() {
        r.line(format!("  {}: {} -> {}", a.id, o.quiver.vid(a.source), o.quiver.vid(a.target)));
    }
    let rels = o.ideal.minimal_generators()?;
    for (kind, rel) in &rels {
        r.line(format!("  relation {} ({kind})", rel.display(&o.quiver)));
    }
    let mut qj = io::quiver_to_json(&o.quiver, Some(&o.ideal));
    qj.projection = Some(io::morphism_to_json(&o.projection));
    r.artifact = Some(io::to_value(&qj));
    r.result = json!({
        "vertices": o.quiver.n_vertices(),
        "arrows": o.quiver.n_arrows(),
        "free": o.free,
        "relations": rels.iter().map(|(_, x)| x.display(&o.quiver)).collect::<Vec<_>>(),
    });
    r.verdict = json!({"free": o.free});
    if let Some(path) = dot {
        r.param("dot", path);
        r.dot = Some((path.to_string(), o.quiver.to_dot("orbit")));
    }
    Ok(r)
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Trivial => "trivial".into(),
        Verdict::InfiniteCyclic { generator } => format!("infinite_cyclic, generator [{generator}]"),
        Verdict::Free { rank } => format!("free, rank {rank}"),
        Verdict::Unresolved => "unresolved".into(),
    }
}

fn pi1(quiver: &str, base: Option<&str>) -> Result<Report, Fail> {
    let mut r = Report::new("pi1");
    let l = load(&mut r, "quiver", quiver)?;
    r.truncation("quiver", &l.ideal);
    let b = base_vertex(&l.q, base)?;
    r.param("base", l.q.vid(b));
    let (_, pres) = pi1_presentation(&l.ideal, b)?;
    let s = simplify(&pres);
    r.line(verdict_text(&s.verdict));
    r.line(format!("generators: [{}]", s.presentation.generators.join(", ")));
    r.line(format!("relators: [{}]", s.presentation.relator_strs().join(", ")));
    let ab: Vec<String> = s.abelianization.iter().map(|x| x.to_string()).collect();
    r.line(format!("abelianization: [{}]", ab.join(", ")));
    if s.verdict == Verdict::Unresolved {
        r.warnings.push("presentation not recognized after simplification".into());
    }
    r.verdict = json!(s.verdict.name());
    r.result = json!({
        "verdict": verdict_text(&s.verdict),
        "free_rank": s.verdict.free_rank(),
        "generators": s.presentation.generators,
        "relators": s.presentation.relator_strs(),
        "abelianization": ab,
        "original_generators": pres.generators,
        "original_relators": pres.relator_strs(),
    });
    Ok(r)
}

fn simply_connected(quiver: &str, base: Option<&str>) -> Result<Report, Fail> {
    let mut r = Report::new("simply-connected");
    let l = load(&mut r, "quiver", quiver)?;
    r.truncation("quiver", &l.ideal);
    let b = base_vertex(&l.q, base)?;
    r.param("base", l.q.vid(b));
    let s = simply_connected_criterion(&l.ideal, b)?;
    r.line(format!("simply connected: {}", s.simply_connected));
    r.line(format!("oriented cycle: {}", s.has_oriented_cycle));
    r.line(format!("fundamental group: {}", verdict_text(&s.pi1)));
    if !s.non_unique_arrows.is_empty() {
        r.line(format!("arrows with parallel paths: [{}]", s.non_unique_arrows.join(", ")));
    }
    r.verdict = json!(s.simply_connected);
    r.result = json!({
        "has_oriented_cycle": s.has_oriented_cycle,
        "pi1": s.pi1.name(),
        "non_unique_arrows": s.non_unique_arrows,
    });
    Ok(r)
}

fn cover_json(cov: &TruncatedCover) -> QuiverJson {
    let mut j = io::quiver_to_json(&cov.cover, Some(&cov.ideal));
    j.projection = Some(io::morphism_to_json(&cov.projection));
    j.frontier = Some(cov.vertex_ids(&cov.frontier));
    j.base_class = Some(cov.cover.vid(cov.base).to_string());
    j
}

fn cover(quiver: &str, radius: usize, base: Option<&str>, deck: Option<&str>, dot: Option<&str>) -> Result<Report, Fail> {
    let mut r = Report::new("cover");
    let l = load(&mut r, "quiver", quiver)?;
    r.truncation("quiver", &l.ideal);
    let b = base_vertex(&l.q, base)?;
    r.param("base", l.q.vid(b));
    r.param("radius", radius);
    let cov = build_universal_cover(&l.ideal, b, radius)?;
    describe_cover(&mut r, &cov);
    if let Some(w) = deck {
        r.param("deck", w);
        let walk = l.q.parse_walk(w, Some(b))?;
        let g = deck_action(&cov, &walk)?;
        r.line(format!("deck transformation of {w}:"));
        let mut moves = Map::new();
        for (v, img) in g.vmap.iter().enumerate() {
            if let Some(u) = img {
                r.line(format!("  {} -> {}", cov.cover.vid(v), cov.cover.vid(*u)));
                moves.insert(cov.cover.vid(v).into(), cov.cover.vid(*u).into());
            }
        }
        r.result.as_object_mut().expect("object").insert("deck".into(), Value::Object(moves));
    }
    r.artifact = Some(io::to_value(&cover_json(&cov)));
    if let Some(path) = dot {
        r.param("dot", path);
        r.dot = Some((path.to_string(), cov.cover.to_dot("cover")));
    }
    Ok(r)
}

fn describe_cover(r: &mut Report, cov: &TruncatedCover) {
    let c = &cov.cover;
    let pi = &cov.projection;
    r.line(format!(
        "cover: {} vertices, {} arrows, radius {}, base class {}",
        c.n_vertices(),
        c.n_arrows(),
        cov.radius,
        c.vid(cov.base)
    ));
    r.line(format!("homotopy decided exactly: {}", cov.is_exact()));
    r.line(format!("frontier: [{}]", cov.vertex_ids(&cov.frontier).join(", ")));
    for v in 0..c.n_vertices() {
        r.line(format!("  vertex {} over {}", c.vid(v), pi.dst.vid(pi.vmap[v])));
    }
    for (i, a) in c.arrows().iter().enumerate() {
        r.line(format!("  arrow {}: {} -> {} over {}", a.id, c.vid(a.source), c.vid(a.target), pi.dst.aid(pi.amap[i])));
    }
    for g in &cov.ideal.generators {
        r.line(format!("  relation {}", g.display(c)));
    }
    if !cov.frontier.is_empty() {
        r.warnings.push(format!("truncated at radius {}: stars of frontier vertices may be incomplete", cov.radius));
    }
    if !cov.is_exact() {
        r.warnings.push("homotopy classes were separated by bounded search".into());
    }
    r.verdict = json!({"vertices": c.n_vertices(), "arrows": c.n_arrows()});
    r.result = json!({
        "vertices": c.n_vertices(),
        "arrows": c.n_arrows(),
        "frontier": cov.vertex_ids(&cov.frontier),
        "base_class": c.vid(cov.base),
        "exact": cov.is_exact(),
    });
}

/// The covering morphism for push-down and pull-up, with the cover's frontier.
fn load_covering(r: &mut Report, a: &CoveringArgs) -> Result<(QuiverMorphism, BTreeSet<V>), Fail> {
    if let (Some(src), Some(dst)) = (&a.src, &a.dst) {
        let m = MapArgs { src: src.clone(), dst: dst.clone(), map: a.map.clone() };
        let (s, _, f) = load_map(r, &m)?;
        let fr = frontier_of(&s)?;
        return Ok((f, fr));
    }
    let (Some(quiver), Some(radius)) = (&a.quiver, a.radius) else {
        return Err(Fail::Input("give --src and --dst (and optionally --map), or --quiver and --radius".into()));
    };
    let l = load(r, "quiver", quiver)?;
    r.truncation("quiver", &l.ideal);
    let b = base_vertex(&l.q, a.base.as_deref())?;
    r.param("base", l.q.vid(b));
    r.param("radius", radius);
    let cov = build_universal_cover(&l.ideal, b, radius)?;
    Ok((cov.projection.clone(), cov.frontier.clone()))
}

fn rep_lines(r: &mut Report, q: &Quiver, m: &Representation) {
    let dims: Vec<String> = q.vertices().iter().zip(&m.dims).filter(|(_, &d)| d > 0).map(|(v, d)| format!("{v}:{d}")).collect();
    r.line(format!("dimension vector: {{{}}}", dims.join(", ")));
    for (a, x) in q.arrows().iter().zip(&m.mats) {
        if x.rows() == 0 || x.cols() == 0 {
            continue;
        }
        let rows: Vec<String> = x.to_strings().iter().map(|row| format!("[{}]", row.join(" "))).collect();
        r.line(format!("  {}: {}", a.id, rows.join(" ")));
    }
}

fn pushdown(a: &CoveringArgs, rep: &str) -> Result<Report, Fail> {
    let mut r = Report::new("pushdown");
    let (pi, _) = load_covering(&mut r, a)?;
    let input = r.input(rep)?;
    r.param("rep", input.name.clone());
    let m = io::load_rep(&input, &pi.src)?;
    let down = reps::push_down(&pi, &m);
    rep_lines(&mut r, &pi.dst, &down);
    let j = io::to_value(&io::rep_to_json(&pi.dst, &down));
    r.verdict = json!({"total_dim": down.total_dim()});
    r.result = j.clone();
    r.artifact = Some(j);
    Ok(r)
}

fn pullup(a: &CoveringArgs, rep: &str, window: &[String]) -> Result<Report, Fail> {
    let mut r = Report::new("pullup");
    let (pi, fr) = load_covering(&mut r, a)?;
    let input = r.input(rep)?;
    r.param("rep", input.name.clone());
    let v = io::load_rep(&input, &pi.dst)?;
    let win = io::window(&pi.src, window)?;
    r.param("window", json!(window));
    let up = reps::pull_up(&pi, &v, &win);
    if up.windowed {
        r.warnings.push(format!("pull-up restricted to a window of {} of {} cover vertices", win.len(), pi.src.n_vertices()));
    }
    if !fr.is_empty() {
        r.warnings.push("the cover is truncated; the pull-up is only shown on the truncation".into());
    }
    rep_lines(&mut r, &pi.src, &up.rep);
    let j = io::to_value(&io::rep_to_json(&pi.src, &up.rep));
    r.verdict = json!({"total_dim": up.rep.total_dim(), "windowed": up.windowed});
    r.result = j.clone();
    r.artifact = Some(j);
    Ok(r)
}

fn rep_op(op: &RepOp, seed: u64) -> Result<Report, Fail> {
    match op {
        RepOp::Check { quiver, rep } => {
            let mut r = Report::new("rep check");
            let l = load(&mut r, "quiver", quiver)?;
            r.truncation("quiver", &l.ideal);
            let input = r.input(rep)?;
            let m = io::load_rep(&input, &l.q)?;
            let violation = reps::check_rep(&l.ideal, &m)?;
            match &violation {
                None => r.line("satisfies the relations: true"),
                Some(v) => {
                    r.line("satisfies the relations: false");
                    r.line(format!("  {v}"));
                }
            }
            r.verdict = json!(violation.is_none());
            r.result = json!({"violation": violation});
            Ok(r)
        }
        RepOp::Hom { quiver, rep } => {
            let mut r = Report::new("rep hom");
            let l = load(&mut r, "quiver", quiver)?;
            let (m, n) = two_reps(&mut r, &l.q, rep)?;
            let basis = reps::hom_basis(&l.q, &m, &n)?;
            r.line(format!("dim Hom = {}", basis.len()));
            let mut bj = Vec::new();
            for (i, f) in basis.iter().enumerate() {
                let mut comps = Map::new();
                for (v, x) in l.q.vertices().iter().zip(f) {
                    if x.rows() > 0 && x.cols() > 0 {
                        comps.insert(v.clone(), json!(x.to_strings()));
                        let rows: Vec<String> = x.to_strings().iter().map(|row| format!("[{}]", row.join(" "))).collect();
                        r.line(format!("  basis {i} at {v}: {}", rows.join(" ")));
                    }
                }
                bj.push(Value::Object(comps));
            }
            r.verdict = json!(basis.len());
            r.result = json!({"dim": basis.len(), "basis": bj});
            Ok(r)
        }
        RepOp::Iso { quiver, rep } => {
            let mut r = Report::new("rep iso");
            r.param("seed", seed);
            let l = load(&mut r, "quiver", quiver)?;
            let (m, n) = two_reps(&mut r, &l.q, rep)?;
            let v = reps::isomorphism(&l.q, &m, &n, seed)?;
            match &v {
                IsoVerdict::Isomorphic { .. } => {
                    r.line("isomorphic: true");
                    r.verdict = json!(true);
                    r.result = json!({"certificate": "invertible morphism found and checked"});
                }
                IsoVerdict::NotIsomorphic { reason } => {
                    r.line("isomorphic: false");
                    r.line(format!("  {reason}"));
                    r.verdict = json!(false);
                    r.result = json!({"reason": reason});
                }
                IsoVerdict::Unresolved { reason } => {
                    r.line("isomorphic: undecided");
                    r.line(format!("  {reason}"));
                    r.verdict = json!("undecided");
                    r.result = json!({"reason": reason});
                    r.undecided = true;
                }
            }
            Ok(r)
        }
        RepOp::Indec { quiver, rep } => {
            let mut r = Report::new("rep indec");
            r.param("seed", seed);
            let l = load(&mut r, "quiver", quiver)?;
            let input = r.input(rep)?;
            r.param("rep", input.name.clone());
            let m = io::load_rep(&input, &l.q)?;
            let v = reps::is_indecomposable(&l.q, &m, seed)?;
            indec_lines(&mut r, &v);
            Ok(r)
        }
    }
}

fn indec_lines(r: &mut Report, v: &IndecVerdict) {
    let (text, reason) = match v {
        IndecVerdict::Yes { reason } => ("true", reason.clone()),
        IndecVerdict::No { reason, .. } => ("false", reason.clone()),
        IndecVerdict::Unresolved { reason } => ("undecided", reason.clone()),
    };
    r.line(format!("indecomposable: {text}"));
    r.line(format!("  {reason}"));
    r.verdict = json!(v.name());
    r.result = json!({"reason": reason});
    r.undecided = matches!(v, IndecVerdict::Unresolved { .. });
}

fn two_reps(r: &mut Report, q: &Quiver, paths: &[String]) -> Result<(Representation, Representation), Fail> {
    let a = r.input(&paths[0])?;
    let b = r.input(&paths[1])?;
    r.param("rep", json!([a.name, b.name]));
    Ok((io::load_rep(&a, q)?, io::load_rep(&b, q)?))
}

fn string_check(r: &mut Report, l: &Loaded) -> Result<(), Fail> {
    let s = is_string_presentation(&l.ideal)?;
    r.line(format!("string presentation: {}", s.is_string));
    if !s.is_string {
        r.line(format!("  {}", s.witness));
        r.warnings.push("not a string algebra presentation; strings are listed anyway".into());
    }
    Ok(())
}

fn strings(quiver: &str, max_len: usize) -> Result<Report, Fail> {
    let mut r = Report::new("strings");
    let l = load(&mut r, "quiver", quiver)?;
    r.truncation("quiver", &l.ideal);
    r.param("max_len", max_len);
    string_check(&mut r, &l)?;
    let ws = enumerate_strings(&l.ideal, max_len)?;
    let labels: Vec<String> = ws.iter().map(|w| l.q.walk_label(w)).collect();
    r.line(format!("{} strings up to length {max_len} (one per inverse pair):", labels.len()));
    for s in &labels {
        r.line(format!("  {s}"));
    }
    r.verdict = json!(labels.len());
    r.result = json!({"strings": labels});
    Ok(r)
}

fn bands(quiver: &str, max_len: usize) -> Result<Report, Fail> {
    let mut r = Report::new("bands");
    let l = load(&mut r, "quiver", quiver)?;
    r.truncation("quiver", &l.ideal);
    r.param("max_len", max_len);
    string_check(&mut r, &l)?;
    let ws = enumerate_bands(&l.ideal, max_len)?;
    let labels: Vec<String> = ws.iter().map(|w| l.q.walk_str(w)).collect();
    r.line(format!("{} band classes up to length {max_len}:", labels.len()));
    for s in &labels {
        r.line(format!("  {s}"));
    }
    r.verdict = json!(labels.len());
    r.result = json!({"bands": labels});
    Ok(r)
}

fn bandmod(quiver: &str, band: &str, n: usize, lambda: &str, seed: u64) -> Result<Report, Fail> {
    let mut r = Report::new("bandmod");
    let l = load(&mut r, "quiver", quiver)?;
    r.truncation("quiver", &l.ideal);
    r.param("band", band);
    r.param("n", n);
    r.param("lambda", lambda);
    r.param("seed", seed);
    let b = l.q.parse_walk(band, None)?;
    if !is_band(&l.ideal, &b)? {
        return Err(Fail::Input(format!("{band} is not a band")));
    }
    let lam = scalar::parse(lambda)?;
    let m = band_module(&l.ideal, &b, n, &lam)?;
    rep_lines(&mut r, &l.q, &m);
    let v = reps::is_indecomposable(&l.q, &m, seed)?;
    indec_lines(&mut r, &v);
    let j = io::to_value(&io::rep_to_json(&l.q, &m));
    r.result = json!({"module": j, "indecomposable": v.name()});
    r.artifact = Some(j);
    Ok(r)
}

fn reptype(quiver: &str, radius: Option<usize>) -> Result<Report, Fail> {
    let mut r = Report::new("reptype");
    let l = load(&mut r, "quiver", quiver)?;
    let q = &l.q;
    let mut result = Map::new();
    let mut verdict = TypeClass::Inconclusive;
    let mut reason = "no criterion applies".to_string();

    if l.ideal.generators.is_empty() {
        let v = classify_path_algebra(q);
        r.line(format!("path algebra classification: {} ({})", v.class.as_str(), v.reason));
        if let qcov_core::rep_type::Certificate::Shape { name, vertices, arrows } = &v.certificate {
            validate_shape(q, &v)?;
            r.line(format!("  certificate: {name} on vertices [{}], arrows [{}]", vertices.join(", "), arrows.join(", ")));
            result.insert("shape".into(), json!({"name": name, "vertices": vertices, "arrows": arrows}));
        }
        result.insert("classification".into(), json!({"class": v.class.as_str(), "reason": v.reason}));
        if v.class != TypeClass::Inconclusive {
            verdict = v.class;
            reason = v.reason.clone();
        }
    } else {
        r.line("path algebra classification: skipped (the quiver has relations)");
    }

    match detect_wild_patterns(q) {
        Some(e) => {
            validate_embedding(q, &e)?;
            let dual = if e.opposite { " (opposite)" } else { "" };
            r.line(format!("wild pattern: ({}){dual}", e.pattern));
            let vm: Vec<String> = e.vertex_map.iter().map(|(a, b)| format!("{a}->{b}")).collect();
            let am: Vec<String> = e.arrow_map.iter().map(|(a, b)| format!("{a}->{b}")).collect();
            r.line(format!("  vertices {}; arrows {}", vm.join(" "), am.join(" ")));
            result.insert(
                "pattern".into(),
                json!({"pattern": e.pattern, "opposite": e.opposite, "vertex_map": e.vertex_map, "arrow_map": e.arrow_map}),
            );
            if verdict == TypeClass::Inconclusive {
                verdict = TypeClass::WildCertified;
                reason = format!("contains pattern ({}){dual}", e.pattern);
            }
        }
        None => r.line("wild pattern: none"),
    }

    match two_in_two_out_criterion(q) {
        Some(w) => {
            let ws = q.walk_str(&w);
            r.line(format!("two in, two out at every vertex: true; zigzag band {ws} lifts to an infinite line"));
            result.insert("infinite_line".into(), json!(ws));
            if verdict == TypeClass::Inconclusive {
                verdict = TypeClass::InfiniteType;
                reason = format!("every vertex has two arrows in and two out; band {ws}");
            }
        }
        None => r.line("two in, two out at every vertex: false"),
    }

    if let Some(radius) = radius {
        r.param("radius", radius);
        let ideal = if l.ideal.generators.is_empty() {
            None
        } else if l.ideal.is_monomial()? {
            Some(&l.ideal)
        } else {
            r.warnings.push("ideal is not monomial; tree search uses the cover of the radical-square quotient".into());
            None
        };
        let t = e7tt_tree_certificate(q, ideal, radius)?;
        r.line(format!("cover at radius {radius}: {} vertices, {} arrows", t.cover_vertices, t.cover_arrows));
        let mut tj = Map::new();
        for (label, emb) in [("undirected", &t.undirected), ("chain_alternating", &t.chain_alternating), ("alternating", &t.alternating)] {
            match emb {
                Some(e) => {
                    let chain: Vec<String> = e.labels.iter().zip(&e.orientation).map(|(l, o)| format!("{o}{l}")).collect();
                    r.line(format!("  wild tree ({label}): found, arrows {}", chain.join(" ")));
                    tj.insert(
                        label.into(),
                        json!({"vertices": e.vertices, "arrows": e.arrows, "labels": e.labels, "orientation": e.orientation}),
                    );
                }
                None => {
                    r.line(format!("  wild tree ({label}): none at this radius"));
                    tj.insert(label.into(), Value::Null);
                }
            }
        }
        result.insert("tree".into(), Value::Object(tj));
    }

    r.line(format!("verdict: {} ({reason})", verdict.as_str()));
    r.verdict = json!(verdict.as_str());
    result.insert("reason".into(), json!(reason));
    r.result = Value::Object(result);
    Ok(r)
}
