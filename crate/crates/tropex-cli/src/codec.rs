//! JSON documents: `{kind, version, payload}` with every coordinate written as an exact
//! rational `"p/q"`. Indices, weights and counts of combinatorial objects stay JSON integers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Map, Value};
use thiserror::Error;

use tropex::complex::*;
use tropex::cone::*;
use tropex::counting::{PlanarCountProblem, PlanarEnd};
use tropex::curve::*;
use tropex::degeneration::*;
use tropex::linalg::*;
use tropex::map::*;
use tropex::transversalize::UniversalFamily;

pub const VERSION: &str = "1.0.0";

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("expected a {expected} document, got {got}")]
    KindMismatch { expected: String, got: String },
    #[error("unsupported document version {0}")]
    Version(String),
}

pub type Result<T> = std::result::Result<T, CodecError>;

fn perr<T>(msg: impl Into<String>) -> Result<T> {
    Err(CodecError::Parse(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Complex,
    Morphism,
    CurveFamily,
    MapFamily,
    Degeneration,
    RigidType,
    CountProblem,
    Result,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Complex,
        Kind::Morphism,
        Kind::CurveFamily,
        Kind::MapFamily,
        Kind::Degeneration,
        Kind::RigidType,
        Kind::CountProblem,
        Kind::Result,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Complex => "complex",
            Kind::Morphism => "morphism",
            Kind::CurveFamily => "curve-family",
            Kind::MapFamily => "map-family",
            Kind::Degeneration => "degeneration",
            Kind::RigidType => "rigid-type",
            Kind::CountProblem => "count-problem",
            Kind::Result => "result",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = CodecError;
    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| CodecError::Parse(format!("unknown kind {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub kind: Kind,
    pub version: String,
    pub payload: Value,
}

impl Document {
    pub fn new(kind: Kind, payload: Value) -> Self {
        Document { kind, version: VERSION.into(), payload }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| CodecError::Parse(e.to_string()))?;
        let o = obj(&v, "document")?;
        let kind: Kind = str_field(o, "kind")?.parse()?;
        let version = str_field(o, "version")?.to_string();
        if version.split('.').next() != VERSION.split('.').next() {
            return Err(CodecError::Version(version));
        }
        let payload = field(o, "payload")?.clone();
        Ok(Document { kind, version, payload })
    }

    /// Pretty-printed, newline-terminated.
    pub fn to_text(&self) -> String {
        let v = json!({ "kind": self.kind.name(), "version": self.version, "payload": self.payload });
        let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn expect(&self, kind: Kind) -> Result<&Value> {
        if self.kind != kind {
            return Err(CodecError::KindMismatch { expected: kind.name().into(), got: self.kind.name().into() });
        }
        Ok(&self.payload)
    }

    pub fn expect_any(&self, kinds: &[Kind]) -> Result<&Value> {
        if !kinds.contains(&self.kind) {
            let expected = kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join(" or ");
            return Err(CodecError::KindMismatch { expected, got: self.kind.name().into() });
        }
        Ok(&self.payload)
    }
}

// ---------------------------------------------------------------------------------------------
// field access

pub fn obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| CodecError::Parse(format!("{what} must be an object")))
}

pub fn field<'a>(o: &'a Map<String, Value>, k: &str) -> Result<&'a Value> {
    o.get(k).ok_or_else(|| CodecError::Parse(format!("missing field {k:?}")))
}

/// A field that may be absent or null.
pub fn opt_field<'a>(o: &'a Map<String, Value>, k: &str) -> Option<&'a Value> {
    o.get(k).filter(|v| !v.is_null())
}

fn str_field<'a>(o: &'a Map<String, Value>, k: &str) -> Result<&'a str> {
    field(o, k)?.as_str().ok_or_else(|| CodecError::Parse(format!("{k:?} must be a string")))
}

fn arr<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| CodecError::Parse(format!("{what} must be an array")))
}

pub fn dec_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| CodecError::Parse(format!("{what} must be a nonnegative integer")))
}

fn dec_u32(v: &Value, what: &str) -> Result<u32> {
    v.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| CodecError::Parse(format!("{what} must be a small nonnegative integer")))
}

pub fn dec_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| CodecError::Parse(format!("{what} must be a nonnegative integer")))
}

fn dec_bool(v: &Value, what: &str) -> Result<bool> {
    v.as_bool().ok_or_else(|| CodecError::Parse(format!("{what} must be a boolean")))
}

fn dec_list<T>(v: &Value, what: &str, f: impl Fn(&Value) -> Result<T>) -> Result<Vec<T>> {
    arr(v, what)?.iter().map(f).collect()
}

fn usizes(v: &Value, what: &str) -> Result<Vec<usize>> {
    dec_list(v, what, |x| dec_usize(x, what))
}

fn u32s(v: &Value, what: &str) -> Result<Vec<u32>> {
    dec_list(v, what, |x| dec_u32(x, what))
}

fn pair(v: &Value, what: &str) -> Result<(usize, usize)> {
    match usizes(v, what)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => perr(format!("{what} must be a pair")),
    }
}

// ---------------------------------------------------------------------------------------------
// numbers

pub fn enc_q(x: &Q) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

/// Accepts `"p/q"`, `"p"` and JSON integers.
pub fn dec_q(v: &Value) -> Result<Q> {
    if let Some(i) = v.as_i64() {
        return Ok(q(i));
    }
    let Some(s) = v.as_str() else { return perr(format!("{v} is not an exact rational")) };
    let int = |t: &str| BigInt::from_str(t.trim()).map_err(|_| CodecError::Parse(format!("{s:?} is not an exact rational")));
    match s.split_once('/') {
        None => Ok(Q::from_integer(int(s)?)),
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return perr(format!("{s:?} has zero denominator"));
            }
            Ok(Q::new(int(n)?, d))
        }
    }
}

pub fn enc_vec(v: &[Q]) -> Value {
    Value::Array(v.iter().map(enc_q).collect())
}

pub fn dec_vec(v: &Value) -> Result<QVec> {
    dec_list(v, "vector", dec_q)
}

fn dec_vec_n(v: &Value, n: usize, what: &str) -> Result<QVec> {
    let x = dec_vec(v)?;
    if x.len() != n {
        return perr(format!("{what} must have {n} entries, got {}", x.len()));
    }
    Ok(x)
}

pub fn enc_mat(m: &QMat) -> Value {
    Value::Array(m.iter().map(|r| enc_vec(r)).collect())
}

pub fn dec_mat(v: &Value) -> Result<QMat> {
    dec_list(v, "matrix", dec_vec)
}

/// A matrix with `rows` rows of length `cols`.
fn dec_mat_shape(v: &Value, rows: usize, cols: usize, what: &str) -> Result<QMat> {
    let m = dec_mat(v)?;
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return perr(format!("{what} must be a {rows}x{cols} matrix"));
    }
    Ok(m)
}

// ---------------------------------------------------------------------------------------------
// lattices, cones, complexes

fn enc_basis(l: &Lattice) -> Value {
    match &l.basis_change {
        None => Value::Null,
        Some(b) => enc_mat(b),
    }
}

fn dec_lattice(v: Option<&Value>, rank: usize) -> Result<Lattice> {
    match v {
        None => Ok(Lattice::standard(rank)),
        Some(b) => {
            let b = dec_mat_shape(b, rank, rank, "lattice basis")?;
            Lattice::with_basis(b).map_err(|e| CodecError::Parse(e.to_string()))
        }
    }
}

pub fn enc_cone(c: &Cone) -> Value {
    json!({ "ambient": c.ambient(), "lattice": enc_basis(c.lattice()), "rays": enc_mat(&c.rays().to_vec()) })
}

pub fn dec_cone(v: &Value) -> Result<Cone> {
    let o = obj(v, "cone")?;
    let n = dec_usize(field(o, "ambient")?, "ambient")?;
    let lat = dec_lattice(opt_field(o, "lattice"), n)?;
    let rays = dec_list(field(o, "rays")?, "rays", |r| dec_vec_n(r, n, "ray"))?;
    Cone::with_lattice(lat, rays).map_err(|e| CodecError::Parse(e.to_string()))
}

/// Fans are written by their maximal cones; anything else cone by cone with face maps.
pub fn enc_complex(c: &ConeComplex) -> Value {
    if let Some(v) = enc_fan_form(c) {
        return v;
    }
    let faces: Vec<Value> = c
        .face_relation()
        .iter()
        .map(|(&(f, g), m)| json!({ "face": f, "cone": g, "matrix": enc_mat(&m.matrix) }))
        .collect();
    json!({ "form": "cones", "cones": c.cones().iter().map(enc_cone).collect::<Vec<_>>(), "faces": faces })
}

fn enc_fan_form(c: &ConeComplex) -> Option<Value> {
    if !c.is_embedded() {
        return None;
    }
    let n = c.ambient()?;
    let lat = c.cone(0).lattice().clone();
    if c.cones().iter().any(|x| *x.lattice() != lat) {
        return None;
    }
    let v = json!({
        "form": "fan",
        "ambient": n,
        "lattice": enc_basis(&lat),
        "cones": c.maximal_cones().iter().map(|x| enc_mat(&x.rays().to_vec())).collect::<Vec<_>>(),
    });
    // only when reading it back gives the same cone numbering
    (dec_complex(&v).ok().as_ref() == Some(c)).then_some(v)
}

pub fn dec_complex(v: &Value) -> Result<ConeComplex> {
    let o = obj(v, "complex")?;
    match str_field(o, "form")? {
        "fan" => {
            let n = dec_usize(field(o, "ambient")?, "ambient")?;
            let lat = dec_lattice(opt_field(o, "lattice"), n)?;
            let cones = dec_list(field(o, "cones")?, "cones", |c| {
                let rays = dec_list(c, "rays", |r| dec_vec_n(r, n, "ray"))?;
                Cone::new(n, rays).map_err(|e| CodecError::Parse(e.to_string()))
            })?;
            let fan = ConeComplex::from_fan(n, cones).map_err(|e| CodecError::Parse(e.to_string()))?;
            Ok(if lat == Lattice::standard(n) { fan } else { fan.relattice(&lat) })
        }
        "cones" => {
            let cones = dec_list(field(o, "cones")?, "cones", dec_cone)?;
            let mut faces = BTreeMap::new();
            for f in arr(field(o, "faces")?, "faces")? {
                let fo = obj(f, "face")?;
                let (a, b) = (dec_usize(field(fo, "face")?, "face")?, dec_usize(field(fo, "cone")?, "cone")?);
                if a >= cones.len() || b >= cones.len() {
                    return perr(format!("face ({a}, {b}) names a missing cone"));
                }
                let m = dec_mat_shape(field(fo, "matrix")?, cones[b].ambient(), cones[a].ambient(), "face map")?;
                let lm = IntegralLinearMap::new(cones[a].lattice().clone(), cones[b].lattice().clone(), m).map_err(|e| CodecError::Parse(e.to_string()))?;
                faces.insert((a, b), lm);
            }
            ConeComplex::from_parts(cones, faces).map_err(|e| CodecError::Parse(e.to_string()))
        }
        other => perr(format!("unknown complex form {other:?}")),
    }
}

fn check_cone_id(c: &ConeComplex, id: usize, what: &str) -> Result<usize> {
    if id >= c.len() {
        return perr(format!("{what} names cone {id}, but the complex has {} cones", c.len()));
    }
    Ok(id)
}

// ---------------------------------------------------------------------------------------------
// morphisms and expansions

fn enc_arrow(assign: &[ConeId], maps: &[IntegralLinearMap]) -> (Value, Value) {
    (json!(assign), Value::Array(maps.iter().map(|m| enc_mat(&m.matrix)).collect()))
}

/// Cone assignments and matrices over `source`; lattices come from the cones.
fn dec_arrow(o: &Map<String, Value>, source: &ConeComplex, target: &ConeComplex) -> Result<(Vec<ConeId>, Vec<IntegralLinearMap>)> {
    let assign = usizes(field(o, "assign")?, "assign")?;
    let maps = arr(field(o, "maps")?, "maps")?;
    if assign.len() != source.len() || maps.len() != source.len() {
        return perr("one assignment and one matrix per source cone are required");
    }
    let mut out = Vec::new();
    for (i, (&a, m)) in assign.iter().zip(maps).enumerate() {
        check_cone_id(target, a, "assign")?;
        let (s, t) = (source.cone(i), target.cone(a));
        let m = dec_mat_shape(m, t.ambient(), s.ambient(), "cone map")?;
        out.push(IntegralLinearMap::new(s.lattice().clone(), t.lattice().clone(), m).map_err(|e| CodecError::Parse(format!("map of cone {i}: {e}")))?);
    }
    Ok((assign, out))
}

pub fn enc_morphism(m: &ComplexMorphism) -> Value {
    let (assign, maps) = enc_arrow(&m.assign, &m.maps);
    json!({ "source": enc_complex(&m.source), "target": enc_complex(&m.target), "assign": assign, "maps": maps })
}

/// The source of a morphism document and its map to the target. Assignments are not checked
/// here: the checkers report on malformed morphisms.
pub fn dec_morphism(v: &Value) -> Result<ComplexMorphism> {
    let o = obj(v, "morphism")?;
    let source = dec_complex(field(o, "source")?)?;
    let target = dec_complex(field(o, "target")?)?;
    let (assign, maps) = dec_arrow(o, &source, &target)?;
    Ok(ComplexMorphism::from_parts(source, target, assign, maps))
}

/// An expansion is a morphism document with a `base` section.
pub fn enc_expansion(e: &TropicalExpansion) -> Value {
    let mut v = enc_morphism(&e.to_target);
    let (assign, maps) = enc_arrow(&e.to_base.assign, &e.to_base.maps);
    v.as_object_mut()
        .expect("object")
        .insert("base".into(), json!({ "target": enc_complex(&e.to_base.target), "assign": assign, "maps": maps }));
    v
}

pub fn dec_expansion(v: &Value) -> Result<TropicalExpansion> {
    let to_target = dec_morphism(v)?;
    let o = obj(v, "morphism")?;
    let Some(b) = opt_field(o, "base") else { return perr("an expansion needs a \"base\" section") };
    let bo = obj(b, "base")?;
    let base = dec_complex(field(bo, "target")?)?;
    let (assign, maps) = dec_arrow(bo, &to_target.source, &base)?;
    let to_base = ComplexMorphism::from_parts(to_target.source.clone(), base, assign, maps);
    Ok(TropicalExpansion { to_target, to_base })
}

pub fn is_expansion(v: &Value) -> bool {
    v.as_object().is_some_and(|o| opt_field(o, "base").is_some())
}

// ---------------------------------------------------------------------------------------------
// curves and maps

fn enc_graph(g: &Graph) -> Value {
    json!({ "vertices": g.vertices, "edges": g.edges.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(), "legs": g.legs })
}

fn dec_graph(v: &Value) -> Result<Graph> {
    let o = obj(v, "graph")?;
    let n = dec_usize(field(o, "vertices")?, "vertices")?;
    let edges = dec_list(field(o, "edges")?, "edges", |e| pair(e, "edge"))?;
    let legs = usizes(field(o, "legs")?, "legs")?;
    Graph::new(n, edges, legs).map_err(|e| CodecError::Parse(e.to_string()))
}

pub fn enc_curve(c: &TropicalCurveFamily) -> Value {
    json!({
        "graph": enc_graph(&c.graph),
        "genus": c.genus,
        "base": enc_cone(&c.base),
        "lengths": enc_mat(&c.lengths),
        "contracted": c.contracted,
    })
}

pub fn dec_curve(v: &Value) -> Result<TropicalCurveFamily> {
    let o = obj(v, "curve family")?;
    let graph = dec_graph(field(o, "graph")?)?;
    let genus = u32s(field(o, "genus")?, "genus")?;
    let base = dec_cone(field(o, "base")?)?;
    let lengths = dec_list(field(o, "lengths")?, "lengths", |l| dec_vec_n(l, base.ambient(), "length"))?;
    let contracted = match opt_field(o, "contracted") {
        Some(c) => dec_list(c, "contracted", |b| dec_bool(b, "contracted"))?,
        None => vec![false; graph.edges.len()],
    };
    TropicalCurveFamily::with_contracted(graph, genus, base, lengths, contracted).map_err(|e| CodecError::Parse(e.to_string()))
}

fn enc_edge(e: &EdgeData) -> Value {
    json!({ "cone": e.cone, "dir": enc_vec(&e.dir), "m": e.m })
}

fn dec_edge(v: &Value, target: &ConeComplex) -> Result<EdgeData> {
    let o = obj(v, "edge data")?;
    let cone = check_cone_id(target, dec_usize(field(o, "cone")?, "cone")?, "edge data")?;
    let dir = dec_vec_n(field(o, "dir")?, target.cone(cone).ambient(), "direction")?;
    Ok(EdgeData { cone, dir, m: dec_u32(field(o, "m")?, "m")? })
}

pub fn enc_map(f: &TropicalMapFamily) -> Value {
    json!({
        "curve": enc_curve(&f.curve),
        "target": enc_complex(&f.target),
        "vertex_cone": f.vertex_cone,
        "positions": f.positions.iter().map(enc_mat).collect::<Vec<_>>(),
        "edges": f.edges.iter().map(enc_edge).collect::<Vec<_>>(),
        "legs": f.legs.iter().map(enc_edge).collect::<Vec<_>>(),
    })
}

pub fn dec_map(v: &Value) -> Result<TropicalMapFamily> {
    let o = obj(v, "map family")?;
    let curve = dec_curve(field(o, "curve")?)?;
    let target = dec_complex(field(o, "target")?)?;
    let vertex_cone = usizes(field(o, "vertex_cone")?, "vertex_cone")?;
    for &c in &vertex_cone {
        check_cone_id(&target, c, "vertex_cone")?;
    }
    let k = curve.base.ambient();
    let positions = arr(field(o, "positions")?, "positions")?;
    if positions.len() != vertex_cone.len() {
        return perr("one position per vertex is required");
    }
    let positions = positions
        .iter()
        .zip(&vertex_cone)
        .map(|(p, &c)| dec_mat_shape(p, target.cone(c).ambient(), k, "position"))
        .collect::<Result<Vec<_>>>()?;
    let edges = dec_list(field(o, "edges")?, "edges", |e| dec_edge(e, &target))?;
    let legs = dec_list(field(o, "legs")?, "legs", |e| dec_edge(e, &target))?;
    TropicalMapFamily::new(curve, target, vertex_cone, positions, edges, legs).map_err(|e| CodecError::Parse(e.to_string()))
}

/// A map-family payload is one family or `{"families": [...]}`.
pub fn enc_universal(u: &UniversalFamily) -> Value {
    json!({ "families": u.families.iter().map(enc_map).collect::<Vec<_>>() })
}

pub fn dec_universal(v: &Value) -> Result<UniversalFamily> {
    let families = match v.as_object().and_then(|o| o.get("families")) {
        Some(fs) => dec_list(fs, "families", dec_map)?,
        None => vec![dec_map(v)?],
    };
    UniversalFamily::new(families).map_err(|e| CodecError::Parse(e.to_string()))
}

pub fn enc_type(t: &CombinatorialType) -> Value {
    json!({
        "graph": enc_graph(&t.graph),
        "genus": t.genus,
        "vertex_cone": t.vertex_cone,
        "edges": t.edges.iter().map(enc_edge).collect::<Vec<_>>(),
        "legs": t.legs.iter().map(enc_edge).collect::<Vec<_>>(),
        "leg_marked": t.leg_marked,
        "degree": t.degree,
    })
}

pub fn dec_type(v: &Value, target: &ConeComplex) -> Result<CombinatorialType> {
    let o = obj(v, "combinatorial type")?;
    let graph = dec_graph(field(o, "graph")?)?;
    let genus = u32s(field(o, "genus")?, "genus")?;
    let vertex_cone = usizes(field(o, "vertex_cone")?, "vertex_cone")?;
    for &c in &vertex_cone {
        check_cone_id(target, c, "vertex_cone")?;
    }
    let edges = dec_list(field(o, "edges")?, "edges", |e| dec_edge(e, target))?;
    let legs = dec_list(field(o, "legs")?, "legs", |e| dec_edge(e, target))?;
    let leg_marked = match opt_field(o, "leg_marked") {
        Some(m) => dec_list(m, "leg_marked", |b| dec_bool(b, "leg_marked"))?,
        None => vec![true; graph.legs.len()],
    };
    let degree = match opt_field(o, "degree") {
        Some(d) => dec_list(d, "degree", |s| s.as_str().map(String::from).ok_or_else(|| CodecError::Parse("degree labels are strings".into())))?,
        None => vec![String::new(); graph.vertices],
    };
    let n = graph.vertices;
    if genus.len() != n || vertex_cone.len() != n || degree.len() != n || edges.len() != graph.edges.len() || legs.len() != graph.legs.len() || leg_marked.len() != graph.legs.len() {
        return perr("combinatorial type sizes do not match its graph");
    }
    Ok(CombinatorialType { graph, genus, vertex_cone, edges, legs, leg_marked, degree })
}

// ---------------------------------------------------------------------------------------------
// degenerations and rigid types

pub fn enc_degeneration(d: &TropicalDegeneration) -> Value {
    json!({ "total": enc_complex(d.total()) })
}

pub fn dec_degeneration(v: &Value) -> Result<TropicalDegeneration> {
    let o = obj(v, "degeneration")?;
    let total = dec_complex(field(o, "total")?)?;
    TropicalDegeneration::new(total).map_err(|e| CodecError::Parse(e.to_string()))
}

/// A rigid-type document: a degeneration, a combinatorial type over it, and optional point
/// conditions `(vertex, point at height 1)`.
#[derive(Clone, Debug)]
pub struct RigidTypeDoc {
    pub degeneration: TropicalDegeneration,
    pub ty: CombinatorialType,
    pub points: Vec<(usize, QVec)>,
}

pub fn enc_rigid(d: &TropicalDegeneration, ty: &CombinatorialType, points: &[(usize, QVec)]) -> Value {
    json!({
        "degeneration": enc_degeneration(d),
        "type": enc_type(ty),
        "points": points.iter().map(|(v, p)| json!({ "vertex": v, "point": enc_vec(p) })).collect::<Vec<_>>(),
    })
}

pub fn dec_rigid(v: &Value) -> Result<RigidTypeDoc> {
    let o = obj(v, "rigid type")?;
    let degeneration = dec_degeneration(field(o, "degeneration")?)?;
    let ty = dec_type(field(o, "type")?, degeneration.total())?;
    let n = degeneration.fiber_ambient();
    let points = match opt_field(o, "points") {
        None => vec![],
        Some(ps) => dec_list(ps, "points", |p| {
            let po = obj(p, "point condition")?;
            let v = dec_usize(field(po, "vertex")?, "vertex")?;
            if v >= ty.graph.vertices {
                return perr(format!("point condition on missing vertex {v}"));
            }
            Ok((v, dec_vec_n(field(po, "point")?, n, "point")?))
        })?,
    };
    Ok(RigidTypeDoc { degeneration, ty, points })
}

// ---------------------------------------------------------------------------------------------
// cut maps

fn enc_origin(o: &LegOrigin) -> Value {
    match o {
        LegOrigin::Leg(l) => json!({ "leg": l }),
        LegOrigin::Node(e) => json!({ "node": e }),
    }
}

fn dec_origin(v: &Value) -> Result<LegOrigin> {
    let o = obj(v, "leg origin")?;
    match (opt_field(o, "leg"), opt_field(o, "node")) {
        (Some(l), None) => Ok(LegOrigin::Leg(dec_usize(l, "leg")?)),
        (None, Some(e)) => Ok(LegOrigin::Node(dec_usize(e, "node")?)),
        _ => perr("a leg origin is either {\"leg\": i} or {\"node\": e}"),
    }
}

pub fn enc_cut(c: &CutMap) -> Value {
    let pieces: Vec<Value> = c
        .pieces
        .iter()
        .map(|p| {
            json!({
                "component": p.component,
                "vertices": p.vertices,
                "genus": p.genus,
                "base": enc_cone(&p.base),
                "positions": p.positions.iter().map(enc_mat).collect::<Vec<_>>(),
                "legs": p.legs.iter().map(|l| json!({ "vertex": l.vertex, "dir": enc_vec(&l.dir), "m": l.m, "origin": enc_origin(&l.origin) })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let nodes: Vec<Value> = c
        .nodes
        .iter()
        .map(|n| json!({ "edge": n.edge, "divisor": n.divisor, "m": n.m, "ends": [n.ends.0, n.ends.1], "pieces": [n.pieces.0, n.pieces.1] }))
        .collect();
    json!({ "pieces": pieces, "nodes": nodes, "num_vertices": c.num_vertices, "leg_vertices": c.leg_vertices })
}

/// Decodes a cut map and checks that its indices fit the special fiber.
pub fn dec_cut(v: &Value, sf: &SpecialFiber) -> Result<CutMap> {
    let o = obj(v, "cut map")?;
    let num_vertices = dec_usize(field(o, "num_vertices")?, "num_vertices")?;
    let leg_vertices = usizes(field(o, "leg_vertices")?, "leg_vertices")?;
    let mut seen = BTreeSet::new();
    let pieces = dec_list(field(o, "pieces")?, "pieces", |p| {
        let po = obj(p, "piece")?;
        let component = dec_usize(field(po, "component")?, "component")?;
        let Some(comp) = sf.components.get(component) else { return perr(format!("piece on missing component {component}")) };
        let m = comp.stratum.dim();
        let vertices = usizes(field(po, "vertices")?, "vertices")?;
        let genus = u32s(field(po, "genus")?, "genus")?;
        let base = dec_cone(field(po, "base")?)?;
        let k = base.ambient();
        let positions = dec_list(field(po, "positions")?, "positions", |x| dec_mat_shape(x, m, k, "piece position"))?;
        if genus.len() != vertices.len() || positions.len() != vertices.len() {
            return perr("one genus and one position per piece vertex are required");
        }
        let legs = dec_list(field(po, "legs")?, "legs", |l| {
            let lo = obj(l, "piece leg")?;
            let vertex = dec_usize(field(lo, "vertex")?, "vertex")?;
            if !vertices.contains(&vertex) {
                return perr(format!("piece leg at vertex {vertex} outside its piece"));
            }
            Ok(ComponentLeg { vertex, dir: dec_vec_n(field(lo, "dir")?, m, "leg direction")?, m: dec_u32(field(lo, "m")?, "m")?, origin: dec_origin(field(lo, "origin")?)? })
        })?;
        Ok(ComponentMap { component, vertices, genus, base, positions, legs })
    })?;
    for p in &pieces {
        for &v in &p.vertices {
            if v >= num_vertices || !seen.insert(v) {
                return perr(format!("vertex {v} is missing from the curve or lies in two pieces"));
            }
        }
    }
    if seen.len() != num_vertices || leg_vertices.iter().any(|&v| v >= num_vertices) {
        return perr("the pieces must partition the vertices");
    }
    let nodes = dec_list(field(o, "nodes")?, "nodes", |n| {
        let no = obj(n, "node")?;
        let divisor = dec_usize(field(no, "divisor")?, "divisor")?;
        if divisor >= sf.divisors.len() {
            return perr(format!("node on missing divisor {divisor}"));
        }
        let ends = pair(field(no, "ends")?, "ends")?;
        let ps = pair(field(no, "pieces")?, "pieces")?;
        let inside = |v: usize, p: usize| pieces.get(p).is_some_and(|x| x.vertices.contains(&v));
        if !inside(ends.0, ps.0) || !inside(ends.1, ps.1) {
            return perr("node ends must lie in the named pieces");
        }
        Ok(NodePair { edge: dec_usize(field(no, "edge")?, "edge")?, divisor, m: dec_u32(field(no, "m")?, "m")?, ends, pieces: ps })
    })?;
    Ok(CutMap { pieces, nodes, num_vertices, leg_vertices })
}

// ---------------------------------------------------------------------------------------------
// count problems

#[derive(Clone, Debug)]
pub enum CountProblem {
    Planar(PlanarCountProblem),
    Degeneration { degeneration: TropicalDegeneration, degree: u32, points: Option<Vec<QVec>>, oracle: String },
}

pub fn enc_planar(p: &PlanarCountProblem) -> Value {
    let ends: Vec<Value> = p
        .ends
        .iter()
        .map(|e| json!({ "dir": enc_vec(&e.dir), "weight": e.weight, "offset": e.offset.as_ref().map(enc_q) }))
        .collect();
    json!({ "fan": enc_complex(&p.fan), "ends": ends, "points": p.points.iter().map(|x| enc_vec(x)).collect::<Vec<_>>() })
}

pub fn enc_degeneration_count(d: &TropicalDegeneration, degree: u32, points: Option<&[QVec]>, oracle: &str) -> Value {
    let mut v = json!({ "degeneration": enc_degeneration(d), "degree": degree, "oracle": oracle });
    if let Some(ps) = points {
        v.as_object_mut().expect("object").insert("points".into(), Value::Array(ps.iter().map(|x| enc_vec(x)).collect()));
    }
    v
}

/// Planar problems without points get `fill(n)` random ones.
pub fn dec_count(v: &Value, fill: impl Fn(usize) -> Vec<QVec>) -> Result<CountProblem> {
    let o = obj(v, "count problem")?;
    let points = match opt_field(o, "points") {
        Some(ps) => Some(dec_list(ps, "points", |p| dec_vec_n(p, 2, "point"))?),
        None => None,
    };
    if let Some(d) = opt_field(o, "degeneration") {
        let degeneration = dec_degeneration(d)?;
        let degree = dec_u32(field(o, "degree")?, "degree")?;
        if degree == 0 {
            return perr("degree must be positive");
        }
        let oracle = match opt_field(o, "oracle") {
            Some(s) => s.as_str().ok_or_else(|| CodecError::Parse("oracle must be a name".into()))?.to_string(),
            None => "planar".into(),
        };
        return Ok(CountProblem::Degeneration { degeneration, degree, points, oracle });
    }
    let fan = dec_complex(field(o, "fan")?)?;
    let ends = dec_list(field(o, "ends")?, "ends", |e| {
        let eo = obj(e, "end")?;
        Ok(PlanarEnd {
            dir: dec_vec_n(field(eo, "dir")?, 2, "end direction")?,
            weight: dec_u32(field(eo, "weight")?, "weight")?,
            offset: opt_field(eo, "offset").map(dec_q).transpose()?,
        })
    })?;
    let points = points.unwrap_or_else(|| {
        let fixed = ends.iter().filter(|e| e.offset.is_some()).count();
        fill(ends.len().saturating_sub(fixed + 1))
    });
    PlanarCountProblem::new(fan, ends, points).map(CountProblem::Planar).map_err(|e| CodecError::Parse(e.to_string()))
}

// ---------------------------------------------------------------------------------------------
// cells

pub fn enc_cell(c: &Cell) -> Value {
    json!({ "source": c.source, "vertices": enc_mat(&c.vertices), "rays": enc_mat(&c.rays) })
}
