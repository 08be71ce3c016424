//! Tropical maps from curve families to cone complexes: continuity, balancing, contact orders,
//! combinatorial types with their moduli cones, automorphisms, and transversality.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::complex::*;
use crate::cone::*;
use crate::curve::*;
use crate::linalg::*;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("malformed map: {0}")]
    Structure(String),
    #[error("target is not an embedded fan")]
    TargetNotEmbedded,
    #[error("combinatorial type has no realization")]
    InfeasibleType,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Image data of an edge or leg: the cone it maps into, its primitive direction (oriented
/// from the first endpoint to the second, or away from the vertex for legs) and the
/// expansion factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeData {
    pub cone: ConeId,
    pub dir: QVec,
    pub m: u32,
}

impl EdgeData {
    pub fn new(cone: ConeId, dir: QVec, m: u32) -> Self {
        EdgeData { cone, dir, m }
    }

    pub fn contracted(cone: ConeId, n: usize) -> Self {
        EdgeData { cone, dir: zeros(n), m: 0 }
    }

    fn flipped(&self) -> Self {
        EdgeData { cone: self.cone, dir: neg(&self.dir), m: self.m }
    }
}

/// Matrix of the face embedding `a -> b` in `target` (identity when `a == b`).
pub fn embedding(target: &ConeComplex, a: ConeId, b: ConeId) -> Option<QMat> {
    if a == b {
        return Some(identity(target.cone(a).ambient()));
    }
    target.face_map(a, b).map(|f| f.matrix)
}

/// A family of tropical maps over the base cone of `curve`. The position of vertex `v` is a
/// linear map from the base ambient into the ambient of `vertex_cone[v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalMapFamily {
    pub curve: TropicalCurveFamily,
    pub target: ConeComplex,
    pub vertex_cone: Vec<ConeId>,
    pub positions: Vec<QMat>,
    pub edges: Vec<EdgeData>,
    pub legs: Vec<EdgeData>,
}

impl TropicalMapFamily {
    /// Checks structure (sizes, cone incidences, directions, positions inside cones).
    /// Continuity is a separate check.
    pub fn new(
        curve: TropicalCurveFamily,
        target: ConeComplex,
        vertex_cone: Vec<ConeId>,
        positions: Vec<QMat>,
        edges: Vec<EdgeData>,
        legs: Vec<EdgeData>,
    ) -> Result<Self, MapError> {
        let bad = |s: String| Err(MapError::Structure(s));
        let g = &curve.graph;
        if vertex_cone.len() != g.vertices || positions.len() != g.vertices || edges.len() != g.edges.len() || legs.len() != g.legs.len() {
            return bad("size mismatch".into());
        }
        let k = curve.base.ambient();
        for v in 0..g.vertices {
            let c = target.cone(vertex_cone[v]);
            if positions[v].len() != c.ambient() || positions[v].iter().any(|r| r.len() != k) {
                return bad(format!("position of vertex {v} has the wrong shape"));
            }
            for r in curve.base.rays() {
                if !c.contains(&mat_vec(&positions[v], r)) {
                    return bad(format!("vertex {v} leaves its cone"));
                }
            }
        }
        let check_dir = |d: &EdgeData, what: String, ends: &[usize]| -> Result<(), MapError> {
            let c = target.cone(d.cone);
            if d.dir.len() != c.ambient() {
                return Err(MapError::Structure(format!("{what} direction has the wrong dimension")));
            }
            if d.m > 0 && (is_zero(&d.dir) || primitive(&d.dir) != d.dir) {
                return Err(MapError::Structure(format!("{what} direction is not primitive")));
            }
            for &v in ends {
                if embedding(&target, vertex_cone[v], d.cone).is_none() {
                    return Err(MapError::Structure(format!("{what}: cone of vertex {v} is not a face of the edge cone")));
                }
            }
            Ok(())
        };
        for (e, d) in edges.iter().enumerate() {
            let (a, b) = g.edges[e];
            check_dir(d, format!("edge {e}"), &[a, b])?;
        }
        for (l, d) in legs.iter().enumerate() {
            check_dir(d, format!("leg {l}"), &[g.legs[l]])?;
            if d.m > 0 && !target.cone(d.cone).contains(&d.dir) {
                return bad(format!("leg {l} points out of its cone"));
            }
        }
        Ok(TropicalMapFamily { curve, target, vertex_cone, positions, edges, legs })
    }

    /// Position of `v` pushed into the ambient of cone `c`.
    pub fn position_in(&self, v: usize, c: ConeId) -> Option<QMat> {
        let m = embedding(&self.target, self.vertex_cone[v], c)?;
        Some(mat_mul(&m, &self.positions[v], self.curve.base.ambient()))
    }

    /// Position of `v` at base point `p`.
    pub fn position_at(&self, v: usize, p: &[Q]) -> QVec {
        mat_vec(&self.positions[v], p)
    }

    pub fn combinatorial_type(&self) -> CombinatorialType {
        CombinatorialType {
            graph: self.curve.graph.clone(),
            genus: self.curve.genus.clone(),
            vertex_cone: self.vertex_cone.clone(),
            edges: self.edges.clone(),
            legs: self.legs.clone(),
            leg_marked: vec![true; self.legs.len()],
            degree: vec![String::new(); self.curve.graph.vertices],
        }
    }
}

/// Primitive direction of a leg's image, or zero if the leg is contracted.
pub fn contact_order(f: &TropicalMapFamily, leg: usize) -> QVec {
    let d = &f.legs[leg];
    if d.m == 0 || is_zero(&d.dir) {
        zeros(d.dir.len())
    } else {
        primitive(&d.dir)
    }
}

/// Checks `pos(w) - pos(v) = m_e * l(e) * u_e` on the base for every edge `e = (v, w)`.
/// Returns the first offending edge.
pub fn check_continuity(f: &TropicalMapFamily) -> Option<usize> {
    let base = &f.curve.base;
    for (e, d) in f.edges.iter().enumerate() {
        let (a, b) = f.curve.graph.edges[e];
        let (Some(pa), Some(pb)) = (f.position_in(a, d.cone), f.position_in(b, d.cone)) else {
            return Some(e);
        };
        let ok = base.rays().iter().all(|r| {
            let diff = sub(&mat_vec(&pb, r), &mat_vec(&pa, r));
            let expect = scale(&(q(d.m as i64) * dot(&f.curve.lengths[e], r)), &d.dir);
            diff == expect
        });
        if !ok {
            return Some(e);
        }
    }
    None
}

/// Balancing at every vertex for a map to an embedded fan.
pub fn check_balancing(f: &TropicalMapFamily) -> Result<Vec<bool>, MapError> {
    if !f.target.is_embedded() {
        return Err(MapError::TargetNotEmbedded);
    }
    let n = f.target.ambient().unwrap_or(0);
    let g = &f.curve.graph;
    let mut tot = vec![zeros(n); g.vertices];
    for (e, d) in f.edges.iter().enumerate() {
        let (a, b) = g.edges[e];
        let w = scale(&q(d.m as i64), &d.dir);
        tot[a] = add(&tot[a], &w);
        tot[b] = sub(&tot[b], &w);
    }
    for (l, d) in f.legs.iter().enumerate() {
        let v = g.legs[l];
        tot[v] = add(&tot[v], &scale(&q(d.m as i64), &d.dir));
    }
    Ok(tot.iter().map(|t| is_zero(t)).collect())
}

/// A map realized at one base point, in the common ambient of an embedded target.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RealizedMap {
    pub curve: MetricCurve,
    pub positions: Vec<QVec>,
    pub edges: Vec<(QVec, u32)>,
    pub legs: Vec<(QVec, u32)>,
}

impl RealizedMap {
    /// Image cells: vertices as points, edges as segments, legs as rays.
    pub fn image_cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for p in &self.positions {
            out.push(Cell { source: 0, vertices: vec![p.clone()], rays: vec![] });
        }
        for (e, &(a, b)) in self.curve.graph.edges.iter().enumerate() {
            if self.edges[e].1 > 0 {
                let mut vs = vec![self.positions[a].clone(), self.positions[b].clone()];
                vs.sort();
                out.push(Cell { source: 0, vertices: vs, rays: vec![] });
            }
        }
        for (l, &v) in self.curve.graph.legs.iter().enumerate() {
            if self.legs[l].1 > 0 {
                out.push(Cell { source: 0, vertices: vec![self.positions[v].clone()], rays: vec![primitive(&self.legs[l].0)] });
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Realizes a family at `p`: lengths are evaluated, zero-length edges contracted.
pub fn realize_map(f: &TropicalMapFamily, p: &[Q]) -> Result<RealizedMap, MapError> {
    if !f.target.is_embedded() {
        return Err(MapError::TargetNotEmbedded);
    }
    let curve = f.curve.realize(p)?;
    let g = &f.curve.graph;
    let lens: Vec<Q> = f.curve.lengths.iter().map(|l| dot(l, p)).collect();
    // surviving vertex classes are numbered by least original index, as in `contract`
    let mut uf = UnionFind::new(g.vertices);
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        if lens[e].is_zero() {
            uf.union(a, b);
        }
    }
    let reps: Vec<usize> = (0..g.vertices).filter(|&v| uf.find(v) == v).collect();
    let positions = reps.iter().map(|&v| f.position_at(v, p)).collect();
    let edges = (0..g.edges.len())
        .filter(|&e| !lens[e].is_zero())
        .map(|e| (f.edges[e].dir.clone(), f.edges[e].m))
        .collect();
    let legs = f.legs.iter().map(|d| (d.dir.clone(), d.m)).collect();
    Ok(RealizedMap { curve, positions, edges, legs })
}

/// Cells of an embedded fan viewed as a polyhedral complex.
pub fn fan_cells(fan: &ConeComplex) -> Vec<Cell> {
    let n = fan.ambient().unwrap_or(0);
    fan.cones()
        .iter()
        .enumerate()
        .map(|(i, c)| Cell { source: i, vertices: vec![zeros(n)], rays: c.rays().to_vec() })
        .collect()
}

fn same_cell(a: &Cell, b: &Cell) -> bool {
    let mut va = a.vertices.clone();
    let mut vb = b.vertices.clone();
    va.sort();
    vb.sort();
    let mut ra: Vec<QVec> = a.rays.iter().map(|r| primitive(r)).collect();
    let mut rb: Vec<QVec> = b.rays.iter().map(|r| primitive(r)).collect();
    ra.sort();
    rb.sort();
    va == vb && ra == rb
}

/// Every vertex lands on a 0-cell and every non-contracted edge or leg covers exactly a
/// 1-cell of the polyhedral complex `cells`.
pub fn transverse_to(r: &RealizedMap, cells: &[Cell]) -> Result<(), String> {
    let zero: Vec<&Cell> = cells.iter().filter(|c| c.dim() == 0).collect();
    for (v, p) in r.positions.iter().enumerate() {
        if !zero.iter().any(|c| &c.vertices[0] == p) {
            return Err(format!("vertex {v} maps to {p:?}, not a vertex of the target"));
        }
    }
    let one: Vec<&Cell> = cells.iter().filter(|c| c.dim() == 1).collect();
    for (e, &(a, b)) in r.curve.graph.edges.iter().enumerate() {
        if r.edges[e].1 == 0 {
            continue;
        }
        let mut vs = vec![r.positions[a].clone(), r.positions[b].clone()];
        vs.sort();
        let img = Cell { source: 0, vertices: vs, rays: vec![] };
        if !one.iter().any(|c| same_cell(c, &img)) {
            return Err(format!("edge {e} is not mapped onto an edge of the target"));
        }
    }
    for (l, &v) in r.curve.graph.legs.iter().enumerate() {
        if r.legs[l].1 == 0 {
            continue;
        }
        let img = Cell { source: 0, vertices: vec![r.positions[v].clone()], rays: vec![r.legs[l].0.clone()] };
        if !one.iter().any(|c| same_cell(c, &img)) {
            return Err(format!("leg {l} is not mapped onto a ray of the target"));
        }
    }
    Ok(())
}

/// Transversality to a static embedded fan at sample points of every face of the base.
pub fn is_combinatorially_transverse(f: &TropicalMapFamily) -> Result<Result<(), String>, MapError> {
    let cells = fan_cells(&f.target);
    for face in f.curve.base.faces() {
        for p in base_samples(&face) {
            let r = realize_map(f, &p)?;
            if let Err(w) = transverse_to(&r, &cells) {
                return Ok(Err(w));
            }
        }
    }
    Ok(Ok(()))
}

/// A combinatorial type: the curve graph and the decorations of the map, without positions
/// or lengths. `degree` is an opaque per-vertex label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CombinatorialType {
    pub graph: Graph,
    pub genus: Vec<u32>,
    pub vertex_cone: Vec<ConeId>,
    pub edges: Vec<EdgeData>,
    pub legs: Vec<EdgeData>,
    pub leg_marked: Vec<bool>,
    pub degree: Vec<String>,
}

/// Variables of a type's moduli cone: vertex positions (in the ambient of each vertex's cone)
/// followed by one length per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliCone {
    pub ty: CombinatorialType,
    pub cone: Cone,
    pub offsets: Vec<usize>,
}

impl ModuliCone {
    pub fn positions(&self, x: &[Q]) -> Vec<QVec> {
        (0..self.ty.graph.vertices).map(|v| x[self.offsets[v]..self.offsets[v + 1]].to_vec()).collect()
    }

    pub fn lengths(&self, x: &[Q]) -> Vec<Q> {
        let s = self.offsets[self.ty.graph.vertices];
        x[s..].to_vec()
    }

    /// The point of the moduli cone describing `f` at base point `p`.
    pub fn point_of(&self, f: &TropicalMapFamily, p: &[Q]) -> QVec {
        let mut x: QVec = (0..f.curve.graph.vertices).flat_map(|v| f.position_at(v, p)).collect();
        x.extend(f.curve.lengths.iter().map(|l| dot(l, p)));
        x
    }
}

/// The linear system cutting out a type's moduli cone, before any extreme rays are computed.
#[derive(Clone, Debug)]
pub struct ModuliSystem {
    pub dim: usize,
    pub ineqs: Vec<QVec>,
    pub eqs: Vec<QVec>,
    pub offsets: Vec<usize>,
}

pub fn moduli_system(t: &CombinatorialType, target: &ConeComplex) -> Result<ModuliSystem, MapError> {
    let nv = t.graph.vertices;
    let mut offsets = vec![0];
    for v in 0..nv {
        offsets.push(offsets[v] + target.cone(t.vertex_cone[v]).ambient());
    }
    let npos = offsets[nv];
    let dim = npos + t.graph.edges.len();
    let mut ineqs: Vec<QVec> = Vec::new();
    let mut eqs: Vec<QVec> = Vec::new();
    let place = |row: &mut QVec, off: usize, cov: &[Q]| {
        for (i, x) in cov.iter().enumerate() {
            row[off + i] += x;
        }
    };
    for v in 0..nv {
        let c = target.cone(t.vertex_cone[v]);
        for fct in c.facets() {
            let mut r = zeros(dim);
            place(&mut r, offsets[v], fct);
            ineqs.push(r);
        }
        for eq in c.equations() {
            let mut r = zeros(dim);
            place(&mut r, offsets[v], eq);
            eqs.push(r);
        }
    }
    for (e, d) in t.edges.iter().enumerate() {
        let (a, b) = t.graph.edges[e];
        ineqs.push(unit(dim, npos + e));
        let ma = embedding(target, t.vertex_cone[a], d.cone).ok_or(MapError::InfeasibleType)?;
        let mb = embedding(target, t.vertex_cone[b], d.cone).ok_or(MapError::InfeasibleType)?;
        // mb x_b - ma x_a - m * len * u = 0, one row per coordinate of the edge cone
        for i in 0..ma.len() {
            let mut r = zeros(dim);
            place(&mut r, offsets[b], &mb[i]);
            place(&mut r, offsets[a], &neg(&ma[i]));
            r[npos + e] -= q(d.m as i64) * &d.dir[i];
            eqs.push(r);
        }
    }
    Ok(ModuliSystem { dim, ineqs, eqs, offsets })
}

/// The cone of all positions and lengths realizing `t` in `target` (closure of the type's
/// locus). Fails if no point realizes the type with positive lengths and positions in the
/// relative interiors of their cones.
pub fn moduli_cone(t: &CombinatorialType, target: &ConeComplex) -> Result<ModuliCone, MapError> {
    let nv = t.graph.vertices;
    let sys = moduli_system(t, target)?;
    let cone = Cone::from_inequalities(sys.dim, &sys.ineqs, &sys.eqs).map_err(|_| MapError::InfeasibleType)?;
    let mc = ModuliCone { ty: t.clone(), cone, offsets: sys.offsets };
    // the relative interior of the closure must meet the open type locus
    let x = mc.cone.interior_point();
    let pos = mc.positions(&x);
    let lens = mc.lengths(&x);
    let open = (0..nv).all(|v| target.cone(t.vertex_cone[v]).in_relint(&pos[v])) && lens.iter().all(|l| l.is_positive());
    if !open {
        return Err(MapError::InfeasibleType);
    }
    Ok(mc)
}

/// A symmetry of a type: images of vertices, edges (with a flip flag) and legs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Automorphism {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, bool)>,
    pub legs: Vec<usize>,
}

impl Automorphism {
    fn compose(&self, other: &Automorphism) -> Automorphism {
        // self after other
        Automorphism {
            vertices: other.vertices.iter().map(|&v| self.vertices[v]).collect(),
            edges: other.edges.iter().map(|&(e, f)| (self.edges[e].0, self.edges[e].1 ^ f)).collect(),
            legs: other.legs.iter().map(|&l| self.legs[l]).collect(),
        }
    }

    fn identity(t: &CombinatorialType) -> Automorphism {
        Automorphism {
            vertices: (0..t.graph.vertices).collect(),
            edges: (0..t.graph.edges.len()).map(|e| (e, false)).collect(),
            legs: (0..t.graph.legs.len()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismGroup {
    pub order: usize,
    pub generators: Vec<Automorphism>,
}

fn all_automorphisms(t: &CombinatorialType) -> Vec<Automorphism> {
    let nv = t.graph.vertices;
    let vlabel = |v: usize| (t.genus[v], t.vertex_cone[v], t.degree[v].clone(), t.graph.valence(v));
    // breadth-first order, so each vertex after the first of its component has a placed neighbour
    let mut order = Vec::with_capacity(nv);
    let mut seen = vec![false; nv];
    for s in 0..nv {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut k = order.len();
        order.push(s);
        while k < order.len() {
            let v = order[k];
            k += 1;
            for &(a, b) in &t.graph.edges {
                let w = if a == v { b } else if b == v { a } else { continue };
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut vperm = vec![usize::MAX; nv];
    let mut used = vec![false; nv];
    extend_vertices(t, &order, 0, &mut vperm, &mut used, &vlabel, &mut out);
    out.sort();
    out
}

fn edges_between(t: &CombinatorialType, a: usize, b: usize) -> Vec<EdgeData> {
    let mut out: Vec<EdgeData> = t
        .graph
        .edges
        .iter()
        .zip(&t.edges)
        .filter_map(|(&(x, y), d)| if (x, y) == (a, b) { Some(d.clone()) } else if (x, y) == (b, a) { Some(d.flipped()) } else { None })
        .collect();
    out.sort();
    out
}

fn extend_vertices<F: Fn(usize) -> (u32, ConeId, String, usize)>(
    t: &CombinatorialType,
    order: &[usize],
    k: usize,
    vperm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    vlabel: &F,
    out: &mut Vec<Automorphism>,
) {
    if k == order.len() {
        for edges in edge_bijections(t, vperm) {
            for legs in leg_bijections(t, vperm) {
                out.push(Automorphism { vertices: vperm.clone(), edges: edges.clone(), legs });
            }
        }
        return;
    }
    let v = order[k];
    for w in 0..t.graph.vertices {
        if used[w] || vlabel(v) != vlabel(w) {
            continue;
        }
        let fits = order[..k].iter().all(|&u| edges_between(t, u, v) == edges_between(t, vperm[u], w));
        if fits {
            used[w] = true;
            vperm[v] = w;
            extend_vertices(t, order, k + 1, vperm, used, vlabel, out);
            used[w] = false;
        }
    }
}

fn edge_bijections(t: &CombinatorialType, vperm: &[usize]) -> Vec<Vec<(usize, bool)>> {
    let ne = t.graph.edges.len();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; ne];
    fn rec(t: &CombinatorialType, vperm: &[usize], e: usize, cur: &mut Vec<(usize, bool)>, used: &mut Vec<bool>, out: &mut Vec<Vec<(usize, bool)>>) {
        if e == t.graph.edges.len() {
            out.push(cur.clone());
            return;
        }
        let (a, b) = t.graph.edges[e];
        let (pa, pb) = (vperm[a], vperm[b]);
        for f in 0..t.graph.edges.len() {
            if used[f] {
                continue;
            }
            let (c, d) = t.graph.edges[f];
            for flip in [false, true] {
                let ok = if flip { (pa, pb) == (d, c) && t.edges[e].flipped() == t.edges[f] } else { (pa, pb) == (c, d) && t.edges[e] == t.edges[f] };
                if ok {
                    used[f] = true;
                    cur.push((f, flip));
                    rec(t, vperm, e + 1, cur, used, out);
                    cur.pop();
                    used[f] = false;
                }
            }
        }
    }
    rec(t, vperm, 0, &mut cur, &mut used, &mut out);
    out
}

fn leg_bijections(t: &CombinatorialType, vperm: &[usize]) -> Vec<Vec<usize>> {
    let nl = t.graph.legs.len();
    let mut out = Vec::new();
    fn rec(t: &CombinatorialType, vperm: &[usize], l: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if l == t.graph.legs.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..t.graph.legs.len() {
            let ok = !used[k]
                && vperm[t.graph.legs[l]] == t.graph.legs[k]
                && t.legs[l] == t.legs[k]
                && (k == l || (!t.leg_marked[l] && !t.leg_marked[k]));
            if ok {
                used[k] = true;
                cur.push(k);
                rec(t, vperm, l + 1, cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    rec(t, vperm, 0, &mut Vec::new(), &mut vec![false; nl], &mut out);
    out
}

/// Automorphisms of a type: graph symmetries preserving genus, markings, cones and edge data.
pub fn automorphisms(t: &CombinatorialType) -> AutomorphismGroup {
    let all = all_automorphisms(t);
    // greedy generating set
    let mut gens: Vec<Automorphism> = Vec::new();
    let mut group = vec![Automorphism::identity(t)];
    for a in &all {
        if group.contains(a) {
            continue;
        }
        gens.push(a.clone());
        group = closure(&gens, Automorphism::identity(t));
    }
    AutomorphismGroup { order: all.len(), generators: gens }
}

fn closure(gens: &[Automorphism], id: Automorphism) -> Vec<Automorphism> {
    let mut set: BTreeMap<Automorphism, ()> = BTreeMap::new();
    set.insert(id.clone(), ());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.compose(&x);
            if set.insert(y.clone(), ()).is_none() {
                frontier.push(y);
            }
        }
    }
    set.into_keys().collect()
}

/// Order of the automorphism group, as a rational for weighting.
pub fn aut_weight(t: &CombinatorialType) -> Q {
    Q::one() / q(automorphisms(t).order as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::p2_fan;

    /// Tropical line with its vertex at `pos` (a point of the plane, fixed over the base
    /// `R>=0` by scaling) in the P2 fan.
    fn line_at_origin() -> TropicalMapFamily {
        let fan = p2_fan();
        let zero = fan.find(&Cone::zero(2)).unwrap();
        let dirs = [[1, 0], [0, 1], [-1, -1]];
        let legs: Vec<EdgeData> = dirs
            .iter()
            .map(|d| EdgeData::new(fan.find(&Cone::from_ints(2, &[d])).unwrap(), qv(d), 1))
            .collect();
        let curve = TropicalCurveFamily::new(Graph::new(1, vec![], vec![0, 0, 0]).unwrap(), vec![0], Cone::from_ints(1, &[&[1]]), vec![]).unwrap();
        TropicalMapFamily::new(curve, fan, vec![zero], vec![vec![zeros(1); 2]], vec![], legs).unwrap()
    }

    #[test]
    fn contact_orders() {
        let f = line_at_origin();
        assert_eq!(contact_order(&f, 2), qv(&[-1, -1]));
        assert_eq!(primitive(&qv(&[2, 2])), qv(&[1, 1]));
    }

    #[test]
    fn line_is_balanced_and_transverse() {
        let f = line_at_origin();
        assert_eq!(check_balancing(&f).unwrap(), vec![true]);
        assert_eq!(check_continuity(&f), None);
        assert_eq!(is_combinatorially_transverse(&f).unwrap(), Ok(()));
        let mut g = f.clone();
        g.legs[0].m = 2;
        assert_eq!(check_balancing(&g).unwrap(), vec![false]);
    }

    /// A segment in the positive quadrant of the P2 fan from (1,1) to (2,1), lengths in t.
    fn segment() -> TropicalMapFamily {
        let fan = p2_fan();
        let quad = fan.find(&Cone::from_ints(2, &[&[1, 0], &[0, 1]])).unwrap();
        let curve = TropicalCurveFamily::new(Graph::new(2, vec![(0, 1)], vec![]).unwrap(), vec![0, 0], Cone::from_ints(1, &[&[1]]), vec![qv(&[1])]).unwrap();
        let pos = |x: i64, y: i64| vec![qv(&[x]), qv(&[y])];
        TropicalMapFamily::new(curve, fan, vec![quad, quad], vec![pos(1, 1), pos(2, 1)], vec![EdgeData::new(quad, qv(&[1, 0]), 1)], vec![]).unwrap()
    }

    #[test]
    fn continuity_detects_perturbation() {
        let f = segment();
        assert_eq!(check_continuity(&f), None);
        let mut g = f.clone();
        g.positions[1][0] = qv(&[3]);
        assert_eq!(check_continuity(&g), Some(0));
        assert!(is_combinatorially_transverse(&f).unwrap().is_err());
    }

    #[test]
    fn moduli_cone_dimensions() {
        let f = line_at_origin();
        let mc = moduli_cone(&f.combinatorial_type(), &f.target).unwrap();
        assert_eq!(mc.cone.dim(), 0);

        let fan = p2_fan();
        let quad = fan.find(&Cone::from_ints(2, &[&[1, 0], &[0, 1]])).unwrap();
        let mut t = f.combinatorial_type();
        t.vertex_cone = vec![quad];
        let mc = moduli_cone(&t, &fan).unwrap();
        assert_eq!(mc.cone.dim(), 2);

        let ray = ConeComplex::from_fan(1, vec![Cone::from_ints(1, &[&[1]])]).unwrap();
        let r = ray.find(&Cone::from_ints(1, &[&[1]])).unwrap();
        let t = CombinatorialType {
            graph: Graph::new(1, vec![], vec![0]).unwrap(),
            genus: vec![0],
            vertex_cone: vec![r],
            edges: vec![],
            legs: vec![EdgeData::new(r, qv(&[1]), 1)],
            leg_marked: vec![true],
            degree: vec![String::new()],
        };
        assert_eq!(moduli_cone(&t, &ray).unwrap().cone.dim(), 1);
    }

    #[test]
    fn infeasible_type() {
        // an edge of positive length from the apex back to the apex
        let f = line_at_origin();
        let mut t = f.combinatorial_type();
        let ray = t.legs[0].cone;
        t.graph = Graph::new(2, vec![(0, 1)], vec![0, 0, 0]).unwrap();
        t.genus = vec![0, 0];
        t.vertex_cone = vec![t.vertex_cone[0]; 2];
        t.degree = vec![String::new(); 2];
        t.edges = vec![EdgeData::new(ray, qv(&[1, 0]), 1)];
        assert_eq!(moduli_cone(&t, &f.target), Err(MapError::InfeasibleType));
    }

    #[test]
    fn moduli_round_trip() {
        let f = segment();
        let mc = moduli_cone(&f.combinatorial_type(), &f.target).unwrap();
        assert!(mc.cone.contains(&mc.point_of(&f, &qv(&[3]))));
    }

    fn bare_type(nv: usize, edges: Vec<(usize, usize)>, legs: Vec<usize>, marked: Vec<bool>) -> CombinatorialType {
        CombinatorialType {
            graph: Graph::new(nv, edges.clone(), legs.clone()).unwrap(),
            genus: vec![0; nv],
            vertex_cone: vec![0; nv],
            edges: edges.iter().map(|_| EdgeData::contracted(0, 1)).collect(),
            legs: legs.iter().map(|_| EdgeData::contracted(0, 1)).collect(),
            leg_marked: marked,
            degree: vec![String::new(); nv],
        }
    }

    #[test]
    fn automorphism_orders() {
        let tree = bare_type(2, vec![(0, 1)], vec![0, 0, 1], vec![true; 3]);
        assert_eq!(automorphisms(&tree).order, 1);
        let mut par = bare_type(2, vec![(0, 1), (0, 1)], vec![0, 1], vec![true; 2]);
        par.edges = vec![EdgeData::new(0, qv(&[1]), 1); 2];
        let g = automorphisms(&par);
        assert_eq!(g.order, 2);
        assert_eq!(g.generators.len(), 1);
        let star = bare_type(1, vec![], vec![0, 0, 0], vec![false; 3]);
        let g = automorphisms(&star);
        assert_eq!(g.order, 6);
        assert_eq!(closure(&g.generators, Automorphism::identity(&star)).len(), 6);
    }
}
