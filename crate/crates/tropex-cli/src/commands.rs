//! The subcommands. Each turns an input document into an output body (a document or an SVG),
//! a few human-readable summary lines, and a verdict.

use serde_json::{json, Value};
use thiserror::Error;

use tropex::complex::*;
use tropex::counting::*;
use tropex::curve::*;
use tropex::degeneration::*;
use tropex::linalg::*;
use tropex::map::*;
use tropex::transversalize::*;

use crate::codec::*;
use crate::render::{RenderError, Scene, Style};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    fn from_lib(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Input(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Predicate {
    Subdivision,
    Equidim,
    Reduced,
    Expansion,
    Transverse,
    Stability,
    Balancing,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub jobs: usize,
    /// Scales the degeneration-side total before the `--direct` comparison (fault injection).
    pub fault_scale: Option<Q>,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: DEFAULT_SEED, jobs: 1, fault_scale: None }
    }
}

pub const DEFAULT_SEED: u64 = 20240601;

/// Samples used to compare a round trip at several heights.
pub fn roundtrip_etas() -> Vec<Q> {
    vec![qr(1, 3), q(1), qr(5, 2), q(4), qr(17, 5)]
}

pub struct Output {
    pub body: String,
    pub summary: Vec<String>,
    pub ok: bool,
}

impl Output {
    fn doc(d: Document, summary: Vec<String>, ok: bool) -> Self {
        Output { body: d.to_text(), summary, ok }
    }

    fn result(payload: Value, summary: Vec<String>, ok: bool) -> Self {
        Self::doc(Document::new(Kind::Result, payload), summary, ok)
    }
}

fn doc_value(d: &Document) -> Value {
    json!({ "kind": d.kind.name(), "version": d.version, "payload": d.payload })
}

fn bigint_q(i: &num_bigint::BigInt) -> Value {
    enc_q(&Q::from_integer(i.clone()))
}

// ---------------------------------------------------------------------------------------------
// check

pub fn check(doc: &Document, p: Predicate) -> Result<Output> {
    let (verdict, details, mut summary) = match p {
        Predicate::Subdivision => {
            let m = dec_morphism(doc.expect(Kind::Morphism)?)?;
            let r = verify_subdivision(&m);
            let witness = r.witness.as_ref().map(|w| json!({ "target_cone": w.target_cone, "point": enc_vec(&w.point), "coverage": w.coverage }));
            let line = match (&r.non_injective, &r.witness) {
                (Some(c), _) => format!("cone {c} is not mapped injectively"),
                (None, Some(w)) => format!("target cone {} is covered {} times near {}", w.target_cone, w.coverage, show(&w.point)),
                _ => "the morphism is a subdivision".into(),
            };
            (r.ok, json!({ "non_injective": r.non_injective, "witness": witness }), vec![line])
        }
        Predicate::Equidim => {
            let m = dec_morphism(doc.expect(Kind::Morphism)?)?;
            let r = check_equidimensional(&m);
            let line = match r.witness {
                Some(c) => format!("cone {c} does not surject onto its assigned cone"),
                None => "every cone surjects onto its assigned cone".into(),
            };
            (r.ok, json!({ "witness": r.witness }), vec![line])
        }
        Predicate::Reduced => {
            let m = dec_morphism(doc.expect(Kind::Morphism)?)?;
            let r = check_reduced(&m);
            let witness = r.witness.as_ref().map(|(c, i)| json!({ "cone": c, "index": bigint_q(i) }));
            let line = match &r.witness {
                Some((c, i)) => format!("cone {c} has lattice index {i} onto its image"),
                None => "every cone is reduced".into(),
            };
            (r.ok, json!({ "witness": witness }), vec![line])
        }
        Predicate::Expansion => {
            let v = doc.expect(Kind::Morphism)?;
            if !is_expansion(v) {
                return input("the expansion predicate needs a morphism document with a \"base\" section");
            }
            let r = verify_expansion_axioms(&dec_expansion(v)?);
            let axioms: Vec<Value> = r.axioms.iter().enumerate().map(|(i, a)| json!({ "axiom": i + 1, "ok": a.ok, "witness": a.witness })).collect();
            let lines = r
                .axioms
                .iter()
                .enumerate()
                .map(|(i, a)| match &a.witness {
                    None => format!("axiom {}: holds", i + 1),
                    Some(w) => format!("axiom {}: fails: {w}", i + 1),
                })
                .collect();
            (r.all_ok(), json!({ "axioms": axioms }), lines)
        }
        Predicate::Transverse => {
            let u = dec_universal(doc.expect(Kind::MapFamily)?)?;
            let mut out = Vec::new();
            let mut lines = Vec::new();
            for (i, f) in u.families.iter().enumerate() {
                let r = is_combinatorially_transverse(f).map_err(CliError::from_lib)?;
                lines.push(match &r {
                    Ok(()) => format!("family {i}: transverse"),
                    Err(w) => format!("family {i}: not transverse: {w}"),
                });
                out.push(json!({ "family": i, "ok": r.is_ok(), "witness": r.err() }));
            }
            (out.iter().all(|x| x["ok"] == true), json!({ "families": out }), lines)
        }
        Predicate::Stability => {
            let v = doc.expect(Kind::CurveFamily)?;
            let c = dec_curve(v)?;
            let opts = v.get("stability").cloned().unwrap_or(Value::Null);
            let ctx = match opts.get("stable_vertices").filter(|x| !x.is_null()) {
                Some(s) => StabilityContext { stable_vertices: serde_json::from_value(s.clone()).map_err(|e| CodecError::Parse(format!("stable_vertices: {e}")))? },
                None => StabilityContext::combinatorial(&c),
            };
            if let Some(&v) = ctx.stable_vertices.iter().find(|&&v| v >= c.graph.vertices) {
                return input(format!("stable vertex {v} is not a vertex"));
            }
            let flag = |k: &str, default: bool| opts.get(k).and_then(Value::as_bool).unwrap_or(default);
            let injective = flag("moduli_map_injective", c.moduli_map_injective());
            let semistable = flag("semistable", true);
            let r = check_log_stability(&c, &ctx, injective, semistable);
            let failing = r.failing.map(|f| format!("{f:?}"));
            let line = match (&failing, r.witness_vertex) {
                (None, _) => "logarithmically stable".into(),
                (Some(f), Some(v)) => format!("not stable: condition {f} fails at vertex {v}"),
                (Some(f), None) => format!("not stable: condition {f} fails"),
            };
            (r.ok, json!({ "failing_condition": failing, "witness_vertex": r.witness_vertex }), vec![line])
        }
        Predicate::Balancing => {
            let u = dec_universal(doc.expect(Kind::MapFamily)?)?;
            let mut out = Vec::new();
            let mut lines = Vec::new();
            for (i, f) in u.families.iter().enumerate() {
                let b = check_balancing(f).map_err(CliError::from_lib)?;
                let bad: Vec<usize> = (0..b.len()).filter(|&v| !b[v]).collect();
                lines.push(if bad.is_empty() { format!("family {i}: balanced") } else { format!("family {i}: unbalanced at vertices {bad:?}") });
                out.push(json!({ "family": i, "ok": bad.is_empty(), "unbalanced": bad }));
            }
            (out.iter().all(|x| x["ok"] == true), json!({ "families": out }), lines)
        }
    };
    let name = format!("{p:?}").to_lowercase();
    summary.insert(0, format!("{name}: {}", if verdict { "pass" } else { "FAIL" }));
    Ok(Output::result(json!({ "command": "check", "predicate": name, "verdict": verdict, "details": details }), summary, verdict))
}

fn show(v: &[Q]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

// ---------------------------------------------------------------------------------------------
// expand

pub fn expand(doc: &Document) -> Result<Output> {
    let u = dec_universal(doc.expect(Kind::MapFamily)?)?;
    let r = transversalize_family(&u, &TransversalizeOptions::default()).map_err(CliError::from_lib)?;
    let mut failures = Vec::new();
    if let Some(w) = verify_conclusions(&r).failure() {
        failures.push(w);
    }
    let sub = verify_subdivision(&r.base_subdivision.morphism);
    if !sub.ok {
        failures.push(format!("base subdivision check failed: {sub:?}"));
    }
    let axioms = verify_expansion_axioms(&r.target_expansion);
    if !axioms.all_ok() {
        failures.push(format!("expansion axioms {:?} fail", axioms.failing()));
    }
    let base_trivial = r.base_subdivision.is_trivial() && r.saturation.is_trivial();
    let curve_trivial = r.refined.iter().all(|f| {
        let before = &u.families[f.input].curve.graph;
        let after = &f.map.curve.graph;
        (after.vertices, after.edges.len()) == (before.vertices, before.edges.len())
    });
    let trivial = |t: bool| if t { "trivial" } else { "subdivided" };
    let mut summary = vec![
        format!("base: {} ({} maximal cones)", trivial(base_trivial), r.base().maximal().len()),
        format!("curves: {} ({} refined families)", trivial(curve_trivial), r.refined.len()),
        format!("target expansion: {} cones", r.target_expansion.total().len()),
    ];
    let mut payload = json!({
        "command": "expand",
        "summary": {
            "base": trivial(base_trivial),
            "lattice": if r.saturation.is_trivial() { "unchanged" } else { "refined" },
            "curve": trivial(curve_trivial),
            "refined_families": r.refined.len(),
            "post_checks": if failures.is_empty() { "passed" } else { "failed" },
        },
        "base": doc_value(&Document::new(Kind::Morphism, enc_morphism(&r.base_subdivision.morphism))),
        "curve": doc_value(&Document::new(Kind::MapFamily, json!({ "families": r.refined.iter().map(|f| enc_map(&f.map)).collect::<Vec<_>>() }))),
        "target": doc_value(&Document::new(Kind::Morphism, enc_expansion(&r.target_expansion))),
    });
    // the smooth-divisor case has an independent construction to compare with
    if u.families.len() == 1 {
        if let Ok(li) = li_subdivision(&u.families[0]) {
            let cmp = compare_with_li(&r, &li);
            summary.push(match &cmp {
                Ok(()) => "agrees with the orderings subdivision".into(),
                Err(w) => format!("differs from the orderings subdivision: {w}"),
            });
            payload["li_comparison"] = json!({ "agrees": cmp.is_ok(), "witness": cmp.as_ref().err() });
            if let Err(w) = cmp {
                failures.push(w);
            }
        }
    }
    summary.extend(failures.iter().map(|f| format!("post-check failed: {f}")));
    if !failures.is_empty() {
        payload["failures"] = json!(failures);
    }
    Ok(Output::result(payload, summary, failures.is_empty()))
}

// ---------------------------------------------------------------------------------------------
// degeneration pipeline

pub fn degenerate(doc: &Document) -> Result<Output> {
    let d = dec_degeneration(doc.expect(Kind::Degeneration)?)?;
    let sf = d.special_fiber().map_err(CliError::from_lib)?;
    let components: Vec<Value> = sf.components.iter().map(|c| json!({ "ray": c.ray, "vertex": enc_vec(&c.vertex), "dim": c.stratum.dim() })).collect();
    let divisors: Vec<Value> = sf
        .divisors
        .iter()
        .map(|g| json!({ "cone": g.cone, "ends": [g.ends.0, g.ends.1], "direction": enc_vec(&g.direction), "length": enc_q(&g.length) }))
        .collect();
    let summary = vec![format!(
        "special fiber: {} components, {} gluing divisors, {}",
        sf.components.len(),
        sf.divisors.len(),
        if sf.is_connected() { "connected" } else { "disconnected" }
    )];
    Ok(Output::result(
        json!({
            "command": "degenerate",
            "fiber_ambient": d.fiber_ambient(),
            "special_fiber": { "components": components, "divisors": divisors, "connected": sf.is_connected() },
            "generic_fiber": d.generic_fiber().iter().map(enc_cell).collect::<Vec<_>>(),
        }),
        summary,
        true,
    ))
}

fn rigid_of(r: &RigidTypeDoc) -> Result<RigidType> {
    RigidType::constrained(&r.degeneration, &r.ty, &r.points)
        .map_err(CliError::from_lib)?
        .ok_or_else(|| CliError::Input("the type is not rigid over the degeneration".into()))
}

fn source_value(r: &RigidTypeDoc) -> Value {
    let v = enc_rigid(&r.degeneration, &r.ty, &r.points);
    json!({ "type": v["type"], "points": v["points"] })
}

/// The rigid-type payload recorded by `cut`, if any.
fn source_of(v: &Value, d: &TropicalDegeneration) -> Result<Option<RigidTypeDoc>> {
    let Some(s) = v.get("source").filter(|s| !s.is_null()) else { return Ok(None) };
    let mut full = s.clone();
    full["degeneration"] = enc_degeneration(d);
    Ok(Some(dec_rigid(&full)?))
}

struct CutState {
    degeneration: TropicalDegeneration,
    sf: SpecialFiber,
    source: Option<RigidTypeDoc>,
    cut: CutMap,
    base_points: Vec<QVec>,
}

fn cut_rigid(r: &RigidTypeDoc) -> Result<(RigidType, CutState)> {
    let t = rigid_of(r)?;
    let d = &r.degeneration;
    let sf = d.special_fiber().map_err(CliError::from_lib)?;
    let f = t.family(d).map_err(CliError::from_lib)?;
    let cm = cut(d, &sf, &f).map_err(CliError::from_lib)?;
    let base_points = cm.pieces.iter().map(|p| p.base.interior_point()).collect();
    Ok((t, CutState { degeneration: d.clone(), sf, source: Some(r.clone()), cut: cm, base_points }))
}

fn cut_payload(s: &CutState) -> Value {
    let mut v = json!({ "command": "cut", "degeneration": enc_degeneration(&s.degeneration) });
    if let Some(r) = &s.source {
        v["source"] = source_value(r);
    }
    v["cut"] = enc_cut(&s.cut);
    v["base_points"] = json!(s.base_points.iter().map(|b| enc_vec(b)).collect::<Vec<_>>());
    v
}

pub fn cut_cmd(doc: &Document) -> Result<Output> {
    let r = dec_rigid(doc.expect(Kind::RigidType)?)?;
    let (t, s) = cut_rigid(&r)?;
    let mut v = cut_payload(&s);
    v["m_rho"] = json!(t.m_rho);
    v["aut_order"] = json!(t.aut_order);
    let summary = vec![format!("{} pieces, {} nodes; m_rho = {}, |Aut| = {}", s.cut.pieces.len(), s.cut.nodes.len(), t.m_rho, t.aut_order)];
    Ok(Output::result(v, summary, true))
}

/// A cut (or glued) result document back in memory.
fn read_cut(v: &Value) -> Result<CutState> {
    let o = obj(v, "result")?;
    let degeneration = dec_degeneration(field(o, "degeneration")?)?;
    let sf = degeneration.special_fiber().map_err(CliError::from_lib)?;
    let cm = dec_cut(field(o, "cut")?, &sf)?;
    let base_points = match opt_field(o, "base_points") {
        Some(b) => {
            let pts = b.as_array().ok_or_else(|| CodecError::Parse("base_points must be an array".into()))?;
            pts.iter().map(dec_vec).collect::<std::result::Result<Vec<_>, _>>()?
        }
        None => cm.pieces.iter().map(|p| p.base.interior_point()).collect(),
    };
    let source = source_of(v, &degeneration)?;
    Ok(CutState { degeneration, sf, source, cut: cm, base_points })
}

fn glue_state(s: &CutState, modify: bool) -> std::result::Result<GluedConfiguration, DegenerationError> {
    let m = if modify { Some(modify_product(&s.degeneration, &s.sf, &s.cut.pieces)?) } else { None };
    glue(&s.sf, &s.cut, &s.base_points, m.as_ref())
}

/// Evaluation failures are verdicts; anything else is an input error.
fn glue_failure(e: DegenerationError) -> Result<(String, usize)> {
    match e {
        DegenerationError::EvaluationMismatch(edge) => Ok(("evaluation-mismatch".into(), edge)),
        DegenerationError::EvaluationNotVertex(edge) => Ok(("evaluation-not-vertex".into(), edge)),
        e => Err(CliError::from_lib(e)),
    }
}

pub fn glue_cmd(doc: &Document) -> Result<Output> {
    let v = doc.expect(Kind::Result)?;
    let s = read_cut(v)?;
    let modify = v.get("modify").and_then(Value::as_bool).unwrap_or(false);
    match glue_state(&s, modify) {
        Ok(g) => {
            let mut p = cut_payload(&s);
            p["command"] = json!("glue");
            p["evaluations"] = json!(g.evaluations.iter().map(|e| enc_vec(e)).collect::<Vec<_>>());
            Ok(Output::result(p, vec![format!("glued {} nodes", g.evaluations.len())], true))
        }
        Err(e) => {
            let (kind, edge) = glue_failure(e)?;
            let line = format!("{} at edge {edge}", kind.replace('-', " "));
            Ok(Output::result(json!({ "command": "glue", "verdict": false, "failure": { "kind": kind, "edge": edge } }), vec![line], false))
        }
    }
}

pub fn smooth_cmd(doc: &Document, roundtrip: bool) -> Result<Output> {
    let s = match doc.kind {
        Kind::RigidType => cut_rigid(&dec_rigid(&doc.payload)?)?.1,
        _ => read_cut(doc.expect_any(&[Kind::RigidType, Kind::Result])?)?,
    };
    let g = match glue_state(&s, false) {
        Ok(g) => g,
        Err(e) => {
            let (kind, edge) = glue_failure(e)?;
            return Ok(Output::result(json!({ "command": "smooth", "verdict": false, "failure": { "kind": kind, "edge": edge } }), vec![format!("cannot glue: {kind} at edge {edge}")], false));
        }
    };
    let back = smooth(&s.degeneration, &s.sf, &g).map_err(CliError::from_lib)?;
    if !roundtrip {
        let summary = vec![format!("smoothed family with {} vertices and {} edges", back.curve.graph.vertices, back.curve.graph.edges.len())];
        return Ok(Output::doc(Document::new(Kind::MapFamily, enc_map(&back)), summary, true));
    }
    let Some(src) = &s.source else { return input("--roundtrip needs the rigid type the cut came from") };
    let f = rigid_of(src)?.family(&s.degeneration).map_err(CliError::from_lib)?;
    let etas = roundtrip_etas();
    let mut differs = None;
    if back != f {
        differs = Some("the smoothed family differs from the original".to_string());
    }
    for eta in &etas {
        if differs.is_some() {
            break;
        }
        let a = smooth_at(&back, eta).map_err(CliError::from_lib)?;
        let b = realize_map(&f, std::slice::from_ref(eta)).map_err(CliError::from_lib)?;
        if a != b || a.image_cells() != b.image_cells() {
            differs = Some(format!("curves differ at height {eta}"));
        }
    }
    let ok = differs.is_none();
    let verdict = differs.clone().unwrap_or_else(|| "round trip exact".into());
    let payload = json!({
        "command": "smooth",
        "roundtrip": verdict,
        "verdict": ok,
        "etas": etas.iter().map(enc_q).collect::<Vec<_>>(),
        "family": doc_value(&Document::new(Kind::MapFamily, enc_map(&back))),
    });
    Ok(Output::result(payload, vec![verdict], ok))
}

// ---------------------------------------------------------------------------------------------
// count

fn certificate(c: &GenericityCertificate) -> Value {
    json!({ "seed": c.seed, "attempts": c.attempts, "perturbed": c.perturbed(), "points": c.points.iter().map(|p| enc_vec(p)).collect::<Vec<_>>() })
}

pub fn count(doc: &Document, direct: bool, opts: &Options) -> Result<Output> {
    let seed = opts.seed;
    let problem = dec_count(doc.expect(Kind::CountProblem)?, |n| random_points(n, seed))?;
    match problem {
        CountProblem::Planar(p) => {
            let (e, cert) = enumerate_generic(&p, seed).map_err(CliError::from_lib)?;
            let curves: Vec<Value> = e
                .curves
                .iter()
                .map(|c| json!({ "vertices": enc_mat(&c.vertices), "edges": c.edges.len(), "multiplicity": enc_q(&c.multiplicity) }))
                .collect();
            let mut summary = vec![format!("{} curves, total {}", e.curves.len(), e.total)];
            if cert.perturbed() {
                summary.push(format!("points perturbed {} times to reach a generic configuration", cert.attempts - 1));
            }
            let mut v = json!({ "command": "count", "total": enc_q(&e.total), "curves": curves, "certificate": certificate(&cert) });
            if direct {
                v["direct"] = enc_q(&e.total);
            }
            Ok(Output::result(v, summary, true))
        }
        CountProblem::Degeneration { degeneration: d, degree, points, oracle } => {
            let registry = OracleRegistry::default();
            let oracle = registry.get(&oracle).map_err(CliError::from_lib)?;
            let ends = recession_fan(&d).map_err(CliError::from_lib)?.rays().len() * degree as usize;
            let points = points.unwrap_or_else(|| random_points(ends.saturating_sub(1), seed));
            let r = degeneration_consistency(&d, degree, &points, seed, oracle).map_err(CliError::from_lib)?;
            let mut total = r.via_degeneration.clone();
            if let Some(k) = &opts.fault_scale {
                total *= k;
            }
            let types: Vec<Value> = r
                .types
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let weight = Q::new(t.m_rho.into(), (t.aut_order as u64).into());
                    json!({
                        "type": i,
                        "vertices": t.vertices,
                        "curve_multiplicity": enc_q(&t.multiplicity),
                        "m_rho_before_base_change": t.m_rho_before,
                        "m_rho": t.m_rho,
                        "aut": t.aut_order,
                        "run_algorithm": enc_q(&t.value),
                        "contribution": enc_q(&(weight * &t.value)),
                    })
                })
                .collect();
            let mut summary = vec![format!("degree {degree}: total {total} over {} rigid types (base change {})", r.types.len(), r.base_change)];
            summary.push(format!("{:>5} {:>8} {:>6} {:>4} {:>10} {:>12}", "type", "vertices", "m_rho", "aut", "value", "contribution"));
            for (i, t) in r.types.iter().enumerate() {
                let w = Q::new(t.m_rho.into(), (t.aut_order as u64).into()) * &t.value;
                summary.push(format!("{i:>5} {:>8} {:>6} {:>4} {:>10} {:>12}", t.vertices, t.m_rho, t.aut_order, t.value.to_string(), w.to_string()));
            }
            let mut v = json!({
                "command": "count",
                "degree": degree,
                "total": enc_q(&total),
                "base_change": r.base_change,
                "types": types,
                "certificate": certificate(&r.certificate),
            });
            let mut ok = true;
            if direct {
                ok = r.direct == total;
                v["direct"] = enc_q(&r.direct);
                v["consistent"] = json!(ok);
                summary.push(if ok { format!("direct count {} agrees", r.direct) } else { format!("MISMATCH: direct count {} but degeneration gives {total}", r.direct) });
            }
            Ok(Output::result(v, summary, ok))
        }
    }
}

// ---------------------------------------------------------------------------------------------
// render

fn fan_scene(s: &mut Scene, fan: &ConeComplex, style: Style) -> Result<()> {
    if !fan.is_embedded() {
        return input("only embedded fans can be drawn");
    }
    let n = fan.ambient().unwrap_or(0);
    if n > 2 {
        return Err(RenderError::DimensionTooHigh(n).into());
    }
    for c in fan_cells(fan) {
        s.cell(&c, style)?;
    }
    Ok(())
}

fn fiber_scene(s: &mut Scene, cells: &[Cell]) -> Result<()> {
    for c in cells {
        s.cell(c, if c.is_bounded() && c.dim() > 0 { Style::Highlight } else { Style::Target })?;
    }
    Ok(())
}

pub fn render(doc: &Document, opts: &Options) -> Result<Output> {
    let mut s = Scene::default();
    let about = match doc.kind {
        Kind::Complex => {
            fan_scene(&mut s, &dec_complex(&doc.payload)?, Style::Target)?;
            "fan".to_string()
        }
        Kind::Morphism if is_expansion(&doc.payload) => {
            let e = dec_expansion(&doc.payload)?;
            let cells = fiber(&e.to_base, &q(1)).map_err(CliError::from_lib)?;
            let mapped: Vec<Cell> = cells.iter().map(|c| c.map(&e.to_target.maps[c.source])).collect();
            fiber_scene(&mut s, &mapped)?;
            "expansion fiber at t = 1".into()
        }
        Kind::Morphism => {
            let m = dec_morphism(&doc.payload)?;
            fan_scene(&mut s, &m.target, Style::Target)?;
            let old = m.target.rays();
            if !m.source.is_embedded() {
                return input("only subdivisions of embedded fans can be drawn");
            }
            let n = m.source.ambient().unwrap_or(0);
            for r in m.source.rays().iter().filter(|r| !old.contains(r)) {
                s.ray(&zeros(n), r, Style::Highlight)?;
            }
            "subdivision".into()
        }
        Kind::Degeneration => {
            let d = dec_degeneration(&doc.payload)?;
            if d.fiber_ambient() > 2 {
                return Err(RenderError::DimensionTooHigh(d.fiber_ambient()).into());
            }
            fiber_scene(&mut s, &d.generic_fiber())?;
            "generic fiber at t = 1".into()
        }
        Kind::MapFamily => {
            let u = dec_universal(&doc.payload)?;
            fan_scene(&mut s, &u.target, Style::Target)?;
            for f in &u.families {
                let r = realize_map(f, &f.curve.base.interior_point()).map_err(CliError::from_lib)?;
                for c in r.image_cells() {
                    s.cell(&c, Style::Curve)?;
                }
            }
            format!("{} curve(s) over their base's interior point", u.families.len())
        }
        Kind::CountProblem => {
            let seed = opts.seed;
            let CountProblem::Planar(p) = dec_count(&doc.payload, |n| random_points(n, seed))? else {
                return input("only plane count problems can be drawn");
            };
            let (e, cert) = enumerate_generic(&p, seed).map_err(CliError::from_lib)?;
            fan_scene(&mut s, &p.fan, Style::Target)?;
            for c in &e.curves {
                for (a, b, _, _) in &c.edges {
                    s.segment(&c.vertices[*a], &c.vertices[*b], Style::Curve)?;
                }
                for (v, k) in &c.ends {
                    let from = v.map(|v| c.vertices[v].clone()).or_else(|| c.vertices.first().cloned()).unwrap_or_else(|| zeros(2));
                    s.ray(&from, &e.classes[*k].end.dir, Style::Curve)?;
                }
            }
            for p in &cert.points {
                s.dot(p, Style::Marked)?;
            }
            format!("{} curves through {} points", e.curves.len(), cert.points.len())
        }
        k => return Err(CodecError::KindMismatch { expected: "a drawable document".into(), got: k.name().into() }.into()),
    };
    Ok(Output { body: s.to_svg(), summary: vec![format!("rendered {about}")], ok: true })
}
