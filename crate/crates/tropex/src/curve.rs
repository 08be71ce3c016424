//! Tropical curves, their families over cones, metric realizations, nodal curves glued at
//! infinity, and the tropical half of the logarithmic stability criterion.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cone::*;
use crate::linalg::*;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("vertex {0} does not exist")]
    BadVertex(usize),
    #[error("length of edge {0} is negative somewhere on the base")]
    NegativeLength(usize),
    #[error("length of edge {0} vanishes on the base but the edge is not flagged as contracted")]
    ZeroLength(usize),
    #[error("length of edge {0} is not integral on the base lattice")]
    LengthNotIntegral(usize),
    #[error("length of edge {0} has the wrong dimension")]
    LengthDimension(usize),
    #[error("genus function has the wrong size")]
    GenusSize,
    #[error("split pieces are not nonnegative on the base")]
    SplitNotNonnegative,
    #[error("split pieces do not add up to the edge length")]
    SplitDoesNotSum,
    #[error("split pieces are not integral; pass the lattice refinement flag")]
    SplitNotIntegral,
    #[error("point is not in the base cone")]
    PointNotInBase,
    #[error("invalid gluing: {0}")]
    BadGluing(String),
}

/// A finite graph with legs. Edge `i` joins `edges[i].0` and `edges[i].1`; leg `j` (marking
/// `j + 1`) is attached at `legs[j]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub legs: Vec<usize>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>, legs: Vec<usize>) -> Result<Self, CurveError> {
        for &(a, b) in &edges {
            for v in [a, b] {
                if v >= vertices {
                    return Err(CurveError::BadVertex(v));
                }
            }
        }
        if let Some(&v) = legs.iter().find(|&&v| v >= vertices) {
            return Err(CurveError::BadVertex(v));
        }
        Ok(Graph { vertices, edges, legs })
    }

    /// Number of half-edges and legs at `v` (a loop counts twice).
    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum::<usize>()
            + self.legs.iter().filter(|&&l| l == v).count()
    }

    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        (0..self.vertices).filter(|&v| uf.find(v) == v).count()
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn betti(&self) -> usize {
        self.edges.len() + self.components() - self.vertices
    }

    /// Edges at `v` as `(edge, other endpoint)`; a loop appears twice.
    pub fn incident(&self, v: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if a == v {
                out.push((i, b));
            }
            if b == v {
                out.push((i, a));
            }
        }
        out
    }
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    pub(crate) fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
    /// Unions two classes, keeping the smaller representative.
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
    }
}

/// A family of tropical curves over the cone `base`: each edge length is a covector that is
/// nonnegative and integral on `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCurveFamily {
    pub graph: Graph,
    pub genus: Vec<u32>,
    pub base: Cone,
    pub lengths: Vec<QVec>,
    /// Edges allowed to have length identically zero over the base.
    pub contracted: Vec<bool>,
}

/// Values of the covector `l` on the rays of `c`.
fn values_on_rays(l: &[Q], c: &Cone) -> Vec<Q> {
    c.rays().iter().map(|r| dot(l, r)).collect()
}

fn nonneg_on(l: &[Q], c: &Cone) -> bool {
    values_on_rays(l, c).iter().all(|x| !x.is_negative())
}

fn zero_on(l: &[Q], c: &Cone) -> bool {
    values_on_rays(l, c).iter().all(|x| x.is_zero())
}

fn integral_on(l: &[Q], c: &Cone) -> bool {
    c.span_lattice_basis().iter().all(|b| dot(l, b).is_integer())
}

/// Two covectors agree as functions on the span of `c`.
fn agree_on(a: &[Q], b: &[Q], c: &Cone) -> bool {
    values_on_rays(a, c) == values_on_rays(b, c)
}

impl TropicalCurveFamily {
    pub fn new(graph: Graph, genus: Vec<u32>, base: Cone, lengths: Vec<QVec>) -> Result<Self, CurveError> {
        let contracted = vec![false; graph.edges.len()];
        Self::with_contracted(graph, genus, base, lengths, contracted)
    }

    pub fn with_contracted(graph: Graph, genus: Vec<u32>, base: Cone, lengths: Vec<QVec>, contracted: Vec<bool>) -> Result<Self, CurveError> {
        if genus.len() != graph.vertices {
            return Err(CurveError::GenusSize);
        }
        if lengths.len() != graph.edges.len() || contracted.len() != graph.edges.len() {
            return Err(CurveError::LengthDimension(lengths.len()));
        }
        for (e, l) in lengths.iter().enumerate() {
            if l.len() != base.ambient() {
                return Err(CurveError::LengthDimension(e));
            }
            if !nonneg_on(l, &base) {
                return Err(CurveError::NegativeLength(e));
            }
            if base.dim() > 0 && zero_on(l, &base) && !contracted[e] {
                return Err(CurveError::ZeroLength(e));
            }
            if !integral_on(l, &base) {
                return Err(CurveError::LengthNotIntegral(e));
            }
        }
        Ok(TropicalCurveFamily { graph, genus, base, lengths, contracted })
    }

    /// A single curve with fixed positive lengths, as a family over the ray `R>=0` with
    /// lengths scaling linearly.
    pub fn over_ray(graph: Graph, genus: Vec<u32>, lengths: &[i64]) -> Result<Self, CurveError> {
        let base = Cone::from_ints(1, &[&[1]]);
        Self::new(graph, genus, base, lengths.iter().map(|&x| qv(&[x])).collect())
    }

    pub fn genus(&self) -> u32 {
        self.graph.betti() as u32 + self.genus.iter().sum::<u32>()
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.vertices
    }

    /// Evaluates the lengths at `p` and contracts edges of length zero.
    pub fn realize(&self, p: &[Q]) -> Result<MetricCurve, CurveError> {
        if !self.base.contains(p) {
            return Err(CurveError::PointNotInBase);
        }
        let vals: Vec<Q> = self.lengths.iter().map(|l| dot(l, p)).collect();
        Ok(MetricCurve::contract(&self.graph, &self.genus, vals))
    }

    /// Splits edge `e` at a new genus-0 vertex; the new pieces have lengths `a` and `b`.
    /// With `refine_lattice`, the base lattice is refined until both pieces are integral.
    pub fn subdivide_edge(&self, e: usize, a: &[Q], b: &[Q], refine_lattice: bool) -> Result<Self, CurveError> {
        if !nonneg_on(a, &self.base) || !nonneg_on(b, &self.base) {
            return Err(CurveError::SplitNotNonnegative);
        }
        if !agree_on(&add(a, b), &self.lengths[e], &self.base) {
            return Err(CurveError::SplitDoesNotSum);
        }
        let mut base = self.base.clone();
        if !integral_on(a, &base) || !integral_on(b, &base) {
            if !refine_lattice {
                return Err(CurveError::SplitNotIntegral);
            }
            base = base.relattice(base.lattice().refine_by(&[a.to_vec(), b.to_vec()]));
        }
        let mut c = self.clone();
        c.base = base;
        let w = c.graph.vertices;
        let (u, v) = c.graph.edges[e];
        c.graph.vertices += 1;
        c.genus.push(0);
        c.graph.edges[e] = (u, w);
        c.graph.edges.push((w, v));
        c.lengths[e] = a.to_vec();
        c.lengths.push(b.to_vec());
        let flag = c.contracted[e];
        c.contracted.push(flag);
        Ok(c)
    }

    /// Puts a new genus-0 vertex on leg `leg`, joined to the old endpoint by an edge of length
    /// `len`; the leg moves to the new vertex.
    pub fn subdivide_leg(&self, leg: usize, len: &[Q]) -> Result<Self, CurveError> {
        if !nonneg_on(len, &self.base) {
            return Err(CurveError::SplitNotNonnegative);
        }
        if !integral_on(len, &self.base) {
            return Err(CurveError::SplitNotIntegral);
        }
        if self.base.dim() > 0 && zero_on(len, &self.base) {
            return Err(CurveError::ZeroLength(self.graph.edges.len()));
        }
        let mut c = self.clone();
        let w = c.graph.vertices;
        let u = c.graph.legs[leg];
        c.graph.vertices += 1;
        c.genus.push(0);
        c.graph.edges.push((u, w));
        c.graph.legs[leg] = w;
        c.lengths.push(len.to_vec());
        c.contracted.push(false);
        Ok(c)
    }

    /// Whether the tropical moduli map from the base is injective: the edge lengths span the
    /// dual of the base's linear span.
    pub fn moduli_map_injective(&self) -> bool {
        let span = self.base.span_basis();
        let restricted: Vec<QVec> = self.lengths.iter().map(|l| span.iter().map(|b| dot(l, b)).collect()).collect();
        rank_of(&restricted) == span.len()
    }
}

/// A metric graph: all bounded edges have positive rational length; legs are unbounded.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetricCurve {
    pub graph: Graph,
    pub genus: Vec<u32>,
    pub lengths: Vec<Q>,
}

impl MetricCurve {
    /// Contracts the zero-length edges of a graph with given lengths. Surviving vertices are
    /// numbered by their least original index, surviving edges keep their relative order.
    pub fn contract(graph: &Graph, genus: &[u32], lengths: Vec<Q>) -> MetricCurve {
        let n = graph.vertices;
        let mut uf = UnionFind::new(n);
        for (i, &(a, b)) in graph.edges.iter().enumerate() {
            if lengths[i].is_zero() {
                uf.union(a, b);
            }
        }
        let reps: Vec<usize> = (0..n).filter(|&v| uf.find(v) == v).collect();
        let index: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut new_genus = vec![0u32; reps.len()];
        let mut class_size = vec![0usize; reps.len()];
        for v in 0..n {
            let r = index[&uf.find(v)];
            new_genus[r] += genus[v];
            class_size[r] += 1;
        }
        let mut contracted_edges = vec![0usize; reps.len()];
        let mut edges = Vec::new();
        let mut lens = Vec::new();
        for (i, &(a, b)) in graph.edges.iter().enumerate() {
            let (ra, rb) = (index[&uf.find(a)], index[&uf.find(b)]);
            if lengths[i].is_zero() {
                contracted_edges[ra] += 1;
            } else {
                edges.push((ra, rb));
                lens.push(lengths[i].clone());
            }
        }
        for r in 0..reps.len() {
            // loops collapsed inside a class raise its genus
            new_genus[r] += (contracted_edges[r] + 1 - class_size[r]) as u32;
        }
        let legs = graph.legs.iter().map(|&v| index[&uf.find(v)]).collect();
        MetricCurve { graph: Graph { vertices: reps.len(), edges, legs }, genus: new_genus, lengths: lens }
    }

    pub fn genus(&self) -> u32 {
        self.graph.betti() as u32 + self.genus.iter().sum::<u32>()
    }
}

/// Which components are stable as schematic curves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StabilityContext {
    pub stable_vertices: BTreeSet<usize>,
}

impl StabilityContext {
    /// Declares stable exactly the vertices with `2g - 2 + valence > 0`.
    pub fn combinatorial(c: &TropicalCurveFamily) -> Self {
        let stable_vertices = (0..c.graph.vertices)
            .filter(|&v| 2 * c.genus[v] as usize + c.graph.valence(v) > 2)
            .collect();
        StabilityContext { stable_vertices }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityCondition {
    /// The underlying curve is semistable.
    A,
    /// The tropical moduli map is injective.
    B,
    /// Every strictly semistable rational component supports a node with stable parameter.
    C,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub ok: bool,
    pub failing: Option<StabilityCondition>,
    pub witness_vertex: Option<usize>,
}

/// Lengths of all simple paths (and simple cycles) between stable vertices, as covectors.
fn strongly_stable_lengths(c: &TropicalCurveFamily, stable: &BTreeSet<usize>) -> Vec<QVec> {
    let n = c.base.ambient();
    let mut out: Vec<QVec> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for &s in stable {
        let mut used = vec![false; c.graph.edges.len()];
        let mut on_path = vec![false; c.graph.vertices];
        on_path[s] = true;
        walk(c, stable, s, s, &mut used, &mut on_path, &mut vec![], &mut seen, &mut out, n);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    c: &TropicalCurveFamily,
    stable: &BTreeSet<usize>,
    start: usize,
    v: usize,
    used: &mut Vec<bool>,
    on_path: &mut Vec<bool>,
    path: &mut Vec<usize>,
    seen: &mut BTreeSet<Vec<usize>>,
    out: &mut Vec<QVec>,
    n: usize,
) {
    for (e, w) in c.graph.incident(v) {
        if used[e] {
            continue;
        }
        let closes = w == start;
        if on_path[w] && !closes {
            continue;
        }
        used[e] = true;
        path.push(e);
        if stable.contains(&w) {
            let mut key = path.clone();
            key.sort();
            if seen.insert(key) {
                out.push(sum(&path.iter().map(|&i| c.lengths[i].clone()).collect::<Vec<_>>(), n));
            }
        }
        if !closes {
            on_path[w] = true;
            walk(c, stable, start, w, used, on_path, path, seen, out, n);
            on_path[w] = false;
        }
        path.pop();
        used[e] = false;
    }
}

/// Decides the logarithmic stability criterion. Semistability of the underlying curve and
/// injectivity of the moduli map are supplied by the caller (`semistable` is additionally
/// checked combinatorially); the node condition is decided by exact linear algebra.
pub fn check_log_stability(c: &TropicalCurveFamily, ctx: &StabilityContext, moduli_map_injective: bool, semistable: bool) -> StabilityReport {
    let fail = |cond, v| StabilityReport { ok: false, failing: Some(cond), witness_vertex: v };
    if !semistable {
        return fail(StabilityCondition::A, None);
    }
    if let Some(v) = (0..c.graph.vertices).find(|&v| c.genus[v] == 0 && c.graph.valence(v) < 2) {
        return fail(StabilityCondition::A, Some(v));
    }
    if !moduli_map_injective {
        return fail(StabilityCondition::B, None);
    }
    let span = c.base.span_basis();
    let restrict = |l: &QVec| -> QVec { span.iter().map(|b| dot(l, b)).collect() };
    let strong: Vec<QVec> = strongly_stable_lengths(c, &ctx.stable_vertices).iter().map(restrict).collect();
    let strong_rank = rank_of(&strong);
    for v in 0..c.graph.vertices {
        let strictly_semistable = c.genus[v] == 0 && c.graph.valence(v) == 2 && !ctx.stable_vertices.contains(&v);
        if !strictly_semistable {
            continue;
        }
        let supported = c.graph.incident(v).iter().any(|&(e, _)| {
            let mut t = strong.clone();
            t.push(restrict(&c.lengths[e]));
            rank_of(&t) == strong_rank
        });
        if !supported {
            return fail(StabilityCondition::C, Some(v));
        }
    }
    StabilityReport { ok: true, failing: None, witness_vertex: None }
}

/// Components glued pairwise at the infinite points of legs: `(component, leg)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodalTropicalCurve {
    pub components: Vec<TropicalCurveFamily>,
    pub gluing: Vec<((usize, usize), (usize, usize))>,
}

/// A component cut out of a nodal curve: its legs that were glued carry the pair label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledComponent {
    pub curve: TropicalCurveFamily,
    pub pair_labels: BTreeMap<usize, usize>,
}

impl NodalTropicalCurve {
    pub fn new(components: Vec<TropicalCurveFamily>, gluing: Vec<((usize, usize), (usize, usize))>) -> Result<Self, CurveError> {
        let mut used = BTreeSet::new();
        for &(a, b) in &gluing {
            for (c, l) in [a, b] {
                if c >= components.len() || l >= components[c].graph.legs.len() {
                    return Err(CurveError::BadGluing(format!("leg {l} of component {c} does not exist")));
                }
                if !used.insert((c, l)) {
                    return Err(CurveError::BadGluing(format!("leg {l} of component {c} is glued twice")));
                }
            }
        }
        Ok(NodalTropicalCurve { components, gluing })
    }

    /// Sum of component genera plus the loops of the gluing graph.
    pub fn genus(&self) -> u32 {
        let g = Graph {
            vertices: self.components.len(),
            edges: self.gluing.iter().map(|&((a, _), (b, _))| (a, b)).collect(),
            legs: vec![],
        };
        self.components.iter().map(|c| c.genus()).sum::<u32>() + g.betti() as u32
    }
}

/// Splits a nodal curve at its infinite edges; pair `i` labels both of its legs with `i`.
pub fn cut_at_infinite_edges(n: &NodalTropicalCurve) -> Vec<LabeledComponent> {
    let mut out: Vec<LabeledComponent> = n
        .components
        .iter()
        .map(|c| LabeledComponent { curve: c.clone(), pair_labels: BTreeMap::new() })
        .collect();
    for (i, &((ca, la), (cb, lb))) in n.gluing.iter().enumerate() {
        out[ca].pair_labels.insert(la, i);
        out[cb].pair_labels.insert(lb, i);
    }
    out
}

/// Inverse of [`cut_at_infinite_edges`].
pub fn reglue(parts: &[LabeledComponent]) -> Result<NodalTropicalCurve, CurveError> {
    let mut ends: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (c, p) in parts.iter().enumerate() {
        for (&leg, &label) in &p.pair_labels {
            ends.entry(label).or_default().push((c, leg));
        }
    }
    let mut gluing = Vec::new();
    for (label, e) in ends {
        if e.len() != 2 {
            return Err(CurveError::BadGluing(format!("label {label} is used {} times", e.len())));
        }
        gluing.push((e[0], e[1]));
    }
    NodalTropicalCurve::new(parts.iter().map(|p| p.curve.clone()).collect(), gluing)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point_curve(g: u32) -> TropicalCurveFamily {
        TropicalCurveFamily::new(Graph::new(1, vec![], vec![]).unwrap(), vec![g], Cone::zero(0), vec![]).unwrap()
    }

    #[test]
    fn genus_examples() {
        assert_eq!(point_curve(2).genus(), 2);
        let tri = TropicalCurveFamily::over_ray(Graph::new(3, vec![(0, 1), (1, 2), (2, 0)], vec![]).unwrap(), vec![0; 3], &[1, 1, 1]).unwrap();
        assert_eq!(tri.genus(), 1);
        let theta = TropicalCurveFamily::over_ray(Graph::new(2, vec![(0, 1); 3], vec![]).unwrap(), vec![0; 2], &[1, 2, 3]).unwrap();
        assert_eq!(theta.genus(), 2);
    }

    fn quadrant_path() -> TropicalCurveFamily {
        let base = Cone::from_ints(2, &[&[1, 0], &[0, 1]]);
        let g = Graph::new(3, vec![(0, 1), (1, 2)], vec![0, 0, 2, 2]).unwrap();
        TropicalCurveFamily::new(g, vec![0; 3], base, vec![qv(&[1, 0]), qv(&[1, 1])]).unwrap()
    }

    #[test]
    fn realize_evaluates_and_contracts() {
        let c = quadrant_path();
        let m = c.realize(&qv(&[2, 3])).unwrap();
        assert_eq!(m.lengths, vec![q(2), q(5)]);
        let m0 = c.realize(&qv(&[0, 3])).unwrap();
        assert_eq!(m0.graph.vertices, 2);
        assert_eq!(m0.graph.legs, vec![0, 0, 1, 1]);
        assert_eq!(m0.genus(), 0);
    }

    #[test]
    fn contracting_a_loop_raises_vertex_genus() {
        let g = Graph::new(2, vec![(0, 1), (0, 1)], vec![]).unwrap();
        let m = MetricCurve::contract(&g, &[0, 0], vec![q(0), q(0)]);
        assert_eq!(m.genus, vec![1]);
    }

    #[test]
    fn subdivide_edge_cases() {
        let c = quadrant_path();
        let s = c.subdivide_edge(1, &qv(&[1, 0]), &qv(&[0, 1]), false).unwrap();
        assert_eq!(s.genus(), 0);
        assert_eq!(s.graph.vertices, 4);
        assert_eq!(c.subdivide_edge(1, &qv(&[1, 0]), &qv(&[1, 0]), false), Err(CurveError::SplitDoesNotSum));
        assert_eq!(c.subdivide_edge(1, &qv(&[1, 0]), &qv(&[-1, 1]), false), Err(CurveError::SplitNotNonnegative));

        let ray = TropicalCurveFamily::over_ray(Graph::new(2, vec![(0, 1)], vec![0, 0, 1, 1]).unwrap(), vec![0, 0], &[1]).unwrap();
        let half = vec![q(1) / q(2)];
        assert_eq!(ray.subdivide_edge(0, &half, &half, false), Err(CurveError::SplitNotIntegral));
        let r = ray.subdivide_edge(0, &half, &half, true).unwrap();
        assert_eq!(r.base.lattice().covolume(), q(2));
        assert_eq!(r.base.rays(), &[qv(&[2])]);
    }

    #[test]
    fn first_example_is_unstable() {
        let c = TropicalCurveFamily::new(Graph::new(1, vec![], vec![0]).unwrap(), vec![0], Cone::zero(0), vec![]).unwrap();
        let r = check_log_stability(&c, &StabilityContext::default(), true, true);
        assert!(!r.ok);
    }

    #[test]
    fn subdividing_between_stable_vertices_stays_stable() {
        let base = Cone::from_ints(1, &[&[1]]);
        let g = Graph::new(2, vec![(0, 1)], vec![0, 0, 1, 1]).unwrap();
        let c = TropicalCurveFamily::new(g, vec![0, 0], base, vec![qv(&[2])]).unwrap();
        let ctx = StabilityContext::combinatorial(&c);
        assert!(check_log_stability(&c, &ctx, c.moduli_map_injective(), true).ok);
        let s = c.subdivide_edge(0, &qv(&[1]), &qv(&[1]), false).unwrap();
        assert!(check_log_stability(&s, &ctx, s.moduli_map_injective(), true).ok);
    }

    #[test]
    fn semistable_bubble_without_stable_parameter() {
        // a bubble on a leg whose new length is independent of every stable path
        let base = Cone::from_ints(2, &[&[1, 0], &[0, 1]]);
        let g = Graph::new(2, vec![(0, 1)], vec![0, 0, 1, 1]).unwrap();
        let c = TropicalCurveFamily::new(g, vec![0, 0], base, vec![qv(&[1, 0])]).unwrap();
        let ctx = StabilityContext::combinatorial(&c);
        let s = c.subdivide_leg(0, &qv(&[0, 1])).unwrap();
        assert!(s.moduli_map_injective());
        let r = check_log_stability(&s, &ctx, true, true);
        assert_eq!(r.failing, Some(StabilityCondition::C));
        assert_eq!(r.witness_vertex, Some(2));
    }

    #[test]
    fn cut_and_reglue() {
        let a = TropicalCurveFamily::new(Graph::new(1, vec![], vec![0, 0, 0]).unwrap(), vec![0], Cone::zero(0), vec![]).unwrap();
        let n = NodalTropicalCurve::new(vec![a.clone(), a.clone(), a], vec![((0, 0), (1, 0)), ((1, 1), (2, 0))]).unwrap();
        let parts = cut_at_infinite_edges(&n);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[1].pair_labels.len(), 2);
        assert_eq!(reglue(&parts).unwrap(), n);
        assert_eq!(n.genus(), 0);
        assert!(NodalTropicalCurve::new(n.components.clone(), vec![((0, 0), (1, 0)), ((0, 0), (2, 0))]).is_err());
    }
}
