//! Transversalization: subdivide the target, the curve and the base of a family of tropical
//! maps until the target is equidimensional and reduced over the base and every cone of the
//! curve maps onto a cone of the subdivided target.
//!
//! The target of a family over a base fan `M` is embedded in `R^k × R^n` (base coordinates
//! first). Images of curve cones are split along walls taken from their own facets and
//! equations, but only where two images meet badly, so an input that is already transverse
//! comes back unchanged.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::complex::*;
use crate::cone::*;
use crate::curve::*;
use crate::fan::*;
use crate::linalg::*;
use crate::map::*;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransversalizeError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
    #[error("image of a curve cone is not strictly convex")]
    ImageNotStrictlyConvex,
    #[error("invalid input: {0}")]
    Input(String),
    #[error("conclusion not reached: {0}")]
    Verification(String),
}

impl From<ConeError> for TransversalizeError {
    fn from(e: ConeError) -> Self {
        match e {
            ConeError::NotStrictlyConvex | ConeError::ImageNotStrictlyConvex => TransversalizeError::ImageNotStrictlyConvex,
            e => TransversalizeError::Complex(e.into()),
        }
    }
}

type Result<T> = std::result::Result<T, TransversalizeError>;

// ---------------------------------------------------------------------------------------------
// walls

fn canonical_wall(w: &[Q]) -> QVec {
    let p = primitive(w);
    match p.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => neg(&p),
        _ => p,
    }
}

/// Facet normals and span equations of `cones`, as canonical primitive covectors.
pub fn walls_of(cones: &[Cone]) -> Vec<QVec> {
    let mut out: BTreeSet<QVec> = BTreeSet::new();
    for c in cones {
        for w in c.facets().iter().chain(c.equations()) {
            if !is_zero(w) {
                out.insert(canonical_wall(w));
            }
        }
    }
    out.into_iter().collect()
}

fn cuts(w: &[Q], c: &Cone) -> bool {
    let vals: Vec<Q> = c.rays().iter().map(|r| dot(w, r)).collect();
    vals.iter().any(Signed::is_positive) && vals.iter().any(Signed::is_negative)
}

/// The hyperplane `w = 0` contains the span of `c` or supports `c` along a facet.
fn defines(w: &[Q], c: &Cone) -> bool {
    let vals: Vec<Q> = c.rays().iter().map(|r| dot(w, r)).collect();
    if vals.iter().all(Zero::is_zero) {
        return true;
    }
    if vals.iter().any(Signed::is_positive) && vals.iter().any(Signed::is_negative) {
        return false;
    }
    let tight: Vec<QVec> = c.rays().iter().zip(&vals).filter(|(_, v)| v.is_zero()).map(|(r, _)| r.clone()).collect();
    rank_of(&tight) + 1 == c.dim()
}

fn meet_properly(a: &Cone, b: &Cone) -> bool {
    if a.rays() == b.rays() {
        return true;
    }
    if a.contains_cone(b) {
        return a.has_face(b);
    }
    if b.contains_cone(a) {
        return b.has_face(a);
    }
    let x = a.intersect(b);
    a.has_face(&x) && b.has_face(&x)
}

fn split_all(c: &Cone, walls: &[&QVec]) -> Vec<Cone> {
    let mut pieces = vec![c.clone()];
    for w in walls {
        pieces = split_by_hyperplane(&pieces, w);
    }
    pieces
}

/// Splits the cones of `input` along hyperplanes from `walls` until any two pieces meet in a
/// common face. A pair that meets badly is split along the walls defining the other member;
/// pairs that already meet properly are left alone. Returns the pieces of each input cone.
pub fn refine_to_fan(input: &[Cone], walls: &[QVec]) -> Result<Vec<Vec<Cone>>> {
    let mut alive: Vec<Option<(usize, Cone)>> = input.iter().cloned().enumerate().map(Some).collect();
    let mut proper: BTreeSet<(usize, usize)> = BTreeSet::new();
    loop {
        let ids: Vec<usize> = (0..alive.len()).filter(|&i| alive[i].is_some()).collect();
        let mut bad = None;
        'scan: for (x, &i) in ids.iter().enumerate() {
            for &j in &ids[x + 1..] {
                if proper.contains(&(i, j)) {
                    continue;
                }
                let (a, b) = (&alive[i].as_ref().unwrap().1, &alive[j].as_ref().unwrap().1);
                if meet_properly(a, b) {
                    proper.insert((i, j));
                } else {
                    bad = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = bad else { break };
        let (ta, a) = alive[i].clone().unwrap();
        let (tb, b) = alive[j].clone().unwrap();
        let mut wa: Vec<&QVec> = walls.iter().filter(|w| defines(w, &b) && cuts(w, &a)).collect();
        let mut wb: Vec<&QVec> = walls.iter().filter(|w| defines(w, &a) && cuts(w, &b)).collect();
        if wa.is_empty() && wb.is_empty() {
            wa = walls.iter().filter(|w| cuts(w, &a)).collect();
            wb = walls.iter().filter(|w| cuts(w, &b)).collect();
            if wa.is_empty() && wb.is_empty() {
                return Err(TransversalizeError::Verification(format!("no wall separates {a:?} and {b:?}")));
            }
        }
        for (id, tag, c, ws) in [(i, ta, a, wa), (j, tb, b, wb)] {
            if ws.is_empty() {
                continue;
            }
            alive[id] = None;
            for p in split_all(&c, &ws) {
                alive.push(Some((tag, p)));
            }
        }
    }
    let mut out = vec![Vec::new(); input.len()];
    for (tag, c) in alive.into_iter().flatten() {
        out[tag].push(c);
    }
    for v in &mut out {
        v.sort();
        v.dedup();
    }
    Ok(out)
}

fn close_under_faces(cones: &[Cone], n: usize) -> Vec<Cone> {
    let mut all: Vec<Cone> = vec![Cone::zero(n)];
    for c in cones {
        all.extend(c.faces());
    }
    all.sort();
    all.dedup();
    all
}

/// Subdivision of an embedded fan in which every cone of `images` (each lying in the support)
/// is a union of cones.
pub fn subdivide_target_for_cone_images(target: &ConeComplex, images: &[Cone]) -> Result<Subdivision> {
    let n = target.ambient().ok_or(ComplexError::NotEmbedded)?;
    let maxes: Vec<Cone> = target.maximal_cones().iter().map(|c| c.relattice(Lattice::standard(n))).collect();
    let mut input = maxes.clone();
    input.extend(images.iter().cloned());
    let walls = walls_of(&input);
    let pieces = refine_to_fan(&input, &walls)?;
    let fine: Vec<Cone> = pieces[..maxes.len()].iter().flatten().cloned().collect();
    let fine = ConeComplex::from_fan(n, fine)?;
    let lat = target.cone(0).lattice().clone();
    Ok(Subdivision::of_fans(fine.relattice(&lat), target.clone())?)
}

// ---------------------------------------------------------------------------------------------
// families over a base fan

/// Maps to one embedded target over the maximal cones of a base fan, one family per cone.
/// All base cones share a lattice and are full-dimensional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalFamily {
    pub base: ConeComplex,
    pub target: ConeComplex,
    pub families: Vec<TropicalMapFamily>,
    /// `base_cone[i]` is the cone of `base` carrying `families[i]`.
    pub base_cone: Vec<ConeId>,
}

impl UniversalFamily {
    pub fn new(families: Vec<TropicalMapFamily>) -> Result<Self> {
        let first = families.first().ok_or_else(|| TransversalizeError::Input("no families".into()))?;
        let target = first.target.clone();
        if !target.is_embedded() {
            return Err(MapError::TargetNotEmbedded.into());
        }
        let k = first.curve.base.ambient();
        let lat = first.curve.base.lattice().clone();
        let mut cones = Vec::new();
        for f in &families {
            if f.target != target {
                return Err(TransversalizeError::Input("families have different targets".into()));
            }
            let b = &f.curve.base;
            if b.ambient() != k || b.dim() != k || b.lattice() != &lat {
                return Err(TransversalizeError::Input("base cones must be full-dimensional with a common lattice".into()));
            }
            cones.push(b.relattice(Lattice::standard(k)));
        }
        let base = ConeComplex::from_fan(k, cones.clone())?.relattice(&lat);
        let mut base_cone = Vec::new();
        for c in &cones {
            let id = base.find(&c.relattice(lat.clone())).expect("base cone present");
            if base_cone.contains(&id) {
                return Err(TransversalizeError::Input("two families over the same base cone".into()));
            }
            base_cone.push(id);
        }
        Ok(UniversalFamily { base, target, families, base_cone })
    }

    pub fn base_dim(&self) -> usize {
        self.base.ambient().unwrap_or(0)
    }

    pub fn target_dim(&self) -> usize {
        self.target.ambient().unwrap_or(0)
    }

    fn base_lattice(&self) -> Lattice {
        self.base.cone(0).lattice().clone()
    }
}

/// A cone of the universal curve: a vertex section, an edge or a leg of one family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Piece {
    Vertex(usize),
    Edge(usize),
    Leg(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveConeImage {
    pub family: usize,
    pub piece: Piece,
    pub image: Cone,
}

/// `(r, A r)` in `R^k × R^n`.
fn lift(r: &[Q], a: &QMat) -> QVec {
    let mut v = r.to_vec();
    v.extend(mat_vec(a, r));
    v
}

fn base_projection(k: usize, n: usize) -> QMat {
    (0..k).map(|i| unit(k + n, i)).collect()
}

fn target_projection(k: usize, n: usize) -> QMat {
    (0..n).map(|i| unit(k + n, k + i)).collect()
}

/// `(0, u)` in `R^k × R^n`.
fn vertical(k: usize, u: &[Q]) -> QVec {
    let mut v = zeros(k);
    v.extend(u.iter().cloned());
    v
}

/// Images of all cones of the universal curve in `R^k × R^n`.
pub fn curve_cone_images(u: &UniversalFamily) -> Result<Vec<CurveConeImage>> {
    let (k, n) = (u.base_dim(), u.target_dim());
    let mut out = Vec::new();
    for (fi, f) in u.families.iter().enumerate() {
        let rays = f.curve.base.rays();
        let g = &f.curve.graph;
        for v in 0..g.vertices {
            let gens = rays.iter().map(|r| lift(r, &f.positions[v])).collect();
            out.push(CurveConeImage { family: fi, piece: Piece::Vertex(v), image: Cone::new(k + n, gens)? });
        }
        for (e, &(a, b)) in g.edges.iter().enumerate() {
            let mut gens: Vec<QVec> = rays.iter().map(|r| lift(r, &f.positions[a])).collect();
            gens.extend(rays.iter().map(|r| lift(r, &f.positions[b])));
            out.push(CurveConeImage { family: fi, piece: Piece::Edge(e), image: Cone::new(k + n, gens)? });
        }
        for (l, &v) in g.legs.iter().enumerate() {
            let mut gens: Vec<QVec> = rays.iter().map(|r| lift(r, &f.positions[v])).collect();
            if f.legs[l].m > 0 {
                gens.push(vertical(k, &f.legs[l].dir));
            }
            out.push(CurveConeImage { family: fi, piece: Piece::Leg(l), image: Cone::new(k + n, gens)? });
        }
    }
    Ok(out)
}

/// The auxiliary expansion: the images of curve cones, split until they form a fan.
pub fn expand_target(images: &[CurveConeImage], ambient: usize) -> Result<ConeComplex> {
    let cones: Vec<Cone> = images.iter().map(|i| i.image.clone()).collect();
    let walls = walls_of(&cones);
    let pieces: Vec<Cone> = refine_to_fan(&cones, &walls)?.into_iter().flatten().collect();
    Ok(ConeComplex::embedded_unchecked(close_under_faces(&pieces, ambient)))
}

// ---------------------------------------------------------------------------------------------
// base flattening and lattices

fn global_matrix(m: &ComplexMorphism) -> Result<QMat> {
    let first = m.maps.first().ok_or_else(|| TransversalizeError::Input("empty source".into()))?;
    if m.maps.iter().any(|f| f.matrix != first.matrix) {
        return Err(TransversalizeError::Input("morphism is not induced by one matrix".into()));
    }
    Ok(first.matrix.clone())
}

fn pull_covector(l: &[Q], f: &QMat, m: usize) -> QVec {
    (0..m).map(|j| (0..l.len()).fold(Q::zero(), |acc, i| acc + &l[i] * &f[i][j])).collect()
}

fn project(f: &QMat, c: &Cone) -> Cone {
    let k = f.len();
    Cone::new(k, c.rays().iter().map(|r| mat_vec(f, r)).collect()).expect("image of a cone inside a base cone")
}

/// `{κ ∩ f^{-1}(β)}` over maximal source cones `κ` and base cones `β` inside `f(κ)` of the same
/// dimension, closed under faces.
fn pull_back_source(source: &ConeComplex, fine: &ConeComplex, f: &QMat) -> Vec<Cone> {
    let m = source.ambient().unwrap_or(0);
    let mut out = Vec::new();
    for kappa in source.maximal_cones() {
        let img = project(f, &kappa);
        for beta in fine.cones() {
            if beta.dim() != img.dim() || !img.contains_cone(beta) {
                continue;
            }
            let mut ineqs = kappa.facets().to_vec();
            ineqs.extend(beta.facets().iter().map(|l| pull_covector(l, f, m)));
            let mut eqs = kappa.equations().to_vec();
            eqs.extend(beta.equations().iter().map(|l| pull_covector(l, f, m)));
            let x = Cone::from_inequalities(m, &ineqs, &eqs).expect("subcone of a pointed cone");
            out.push(x);
        }
    }
    close_under_faces(&out, m)
}

/// Result of [`flatten_base`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flattening {
    pub base: Subdivision,
    pub morphism: ComplexMorphism,
}

/// Subdivides the base of a linear morphism of embedded fans until every source cone maps onto
/// a union of base cones, then pulls the subdivision back to the source.
pub fn flatten_base(m: &ComplexMorphism) -> Result<Flattening> {
    let f = global_matrix(m)?;
    let k = m.target.ambient().ok_or(ComplexError::NotEmbedded)?;
    let std = Lattice::standard(k);
    let maxes: Vec<Cone> = m.target.maximal_cones().iter().map(|c| c.relattice(std.clone())).collect();
    let mut projections: Vec<Cone> = m.source.cones().iter().map(|c| project(&f, c)).filter(|c| c.dim() > 0).collect();
    projections.sort();
    projections.dedup();
    let mut input = maxes.clone();
    input.extend(projections);
    let walls = walls_of(&input);
    let pieces = refine_to_fan(&input, &walls)?;
    let fine: Vec<Cone> = pieces[..maxes.len()].iter().flatten().cloned().collect();
    let fine = ConeComplex::from_fan(k, fine)?;
    finish_flattening(m, &f, fine)
}

fn finish_flattening(m: &ComplexMorphism, f: &QMat, fine: ConeComplex) -> Result<Flattening> {
    let src_n = m.source.ambient().ok_or(ComplexError::NotEmbedded)?;
    let src_lat = m.source.cone(0).lattice().clone();
    let base_lat = m.target.cone(0).lattice().clone();
    let source = ConeComplex::embedded_unchecked(pull_back_source(&m.source, &fine, f)).relattice(&src_lat);
    let _ = src_n;
    let fine = fine.relattice(&base_lat);
    let morphism = ComplexMorphism::linear(source, fine.clone(), f.clone())?;
    let base = Subdivision::of_fans(fine, m.target.clone())?;
    Ok(Flattening { base, morphism })
}

/// How the base lattice was refined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationRecord {
    pub lattice: Lattice,
    pub source_lattice: Lattice,
    /// Index of the new lattice in the old one, on the span of each base cone.
    pub indices: Vec<(ConeId, BigInt)>,
}

impl SaturationRecord {
    pub fn is_trivial(&self) -> bool {
        self.indices.iter().all(|(_, i)| i.is_one())
    }
}

/// Refines the base lattice of an equidimensional linear morphism until it is reduced; the
/// source lattice is pulled back.
pub fn saturate_base_lattices(m: &ComplexMorphism) -> Result<(ComplexMorphism, SaturationRecord)> {
    saturate_with(m, &[], None)
}

fn reducedness_indices(m: &ComplexMorphism, f: &QMat, src: &Lattice, base: &Lattice) -> Vec<BigInt> {
    m.source
        .cones()
        .iter()
        .map(|c| {
            let map = IntegralLinearMap { source: src.clone(), target: base.clone(), matrix: f.clone() };
            image_lattice_index(&map, &c.relattice(src.clone()))
        })
        .collect()
}

fn saturate_with(m: &ComplexMorphism, covs: &[QVec], start: Option<&Lattice>) -> Result<(ComplexMorphism, SaturationRecord)> {
    let f = global_matrix(m)?;
    let k = m.target.ambient().ok_or(ComplexError::NotEmbedded)?;
    let src_n = m.source.ambient().ok_or(ComplexError::NotEmbedded)?;
    let base0 = m.target.cone(0).lattice().clone();
    let src0 = m.source.cone(0).lattice().clone();
    let mut base = start.cloned().unwrap_or_else(|| base0.clone());
    if !covs.is_empty() {
        base = base.refine_by(covs);
    }
    let src_for = |b: &Lattice| src0.intersect(&b.preimage(&f, src_n));
    // cones over full-dimensional base cones force the base lattice into their image lattice
    let src = src_for(&base);
    for c in m.source.cones() {
        if project(&f, c).dim() == k {
            let c = c.relattice(src.clone());
            let imgs: Vec<QVec> = c.span_lattice_basis().iter().map(|b| mat_vec(&f, b)).collect();
            base = base.intersect(&Lattice::generated(&imgs, k));
        }
    }
    let mut src = src_for(&base);
    let idx = reducedness_indices(m, &f, &src, &base);
    let d = idx.iter().fold(BigInt::one(), |acc, i| acc.lcm(i));
    if !d.is_one() {
        base = base.scaled(&Q::from_integer(d));
        src = src_for(&base);
        if let Some(bad) = reducedness_indices(m, &f, &src, &base).iter().find(|i| !i.is_one()) {
            return Err(TransversalizeError::Verification(format!("lattice index {bad} after saturation")));
        }
    }
    let indices = (0..m.target.len())
        .map(|b| {
            let span = m.target.cone(b).span_basis();
            (b, base.index_on(&span) / base0.index_on(&span))
        })
        .collect();
    let morphism = ComplexMorphism::linear(m.source.relattice(&src), m.target.relattice(&base), f)?;
    Ok((morphism, SaturationRecord { lattice: base, source_lattice: src, indices }))
}

// ---------------------------------------------------------------------------------------------
// curve subdivision

/// A curve family with edges and legs subdivided at increasing parameter covectors.
#[derive(Clone, Debug)]
struct Subdivided {
    curve: TropicalCurveFamily,
    /// Parameter covectors along each old edge, from `0` to its length, with the vertices met.
    edge_chain: Vec<Vec<(QVec, usize)>>,
    /// Edges inserted along each old edge, in order.
    edge_pieces: Vec<Vec<usize>>,
    /// Parameters along each leg, starting at `0` at the old vertex.
    leg_chain: Vec<Vec<(QVec, usize)>>,
    leg_pieces: Vec<Vec<usize>>,
}

fn subdivide_curve(c: &TropicalCurveFamily, base: Cone, edge_breaks: &[Vec<QVec>], leg_breaks: &[Vec<QVec>]) -> Result<Subdivided> {
    let k = base.ambient();
    let g = &c.graph;
    let mut nv = g.vertices;
    let mut genus = c.genus.clone();
    let mut edges = g.edges.clone();
    let mut lengths = c.lengths.clone();
    let mut contracted = c.contracted.clone();
    let mut legs = g.legs.clone();
    let mut edge_chain = Vec::new();
    let mut edge_pieces = Vec::new();
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        let mut chain = vec![(zeros(k), a)];
        for phi in &edge_breaks[e] {
            chain.push((phi.clone(), nv));
            genus.push(0);
            nv += 1;
        }
        chain.push((c.lengths[e].clone(), b));
        let mut pieces = Vec::new();
        for w in chain.windows(2) {
            let len = sub(&w[1].0, &w[0].0);
            let id = if pieces.is_empty() {
                e
            } else {
                edges.push((0, 0));
                lengths.push(zeros(k));
                contracted.push(false);
                edges.len() - 1
            };
            edges[id] = (w[0].1, w[1].1);
            lengths[id] = len;
            pieces.push(id);
        }
        edge_chain.push(chain);
        edge_pieces.push(pieces);
    }
    let mut leg_chain = Vec::new();
    let mut leg_pieces = Vec::new();
    for (l, &v) in g.legs.iter().enumerate() {
        let mut chain = vec![(zeros(k), v)];
        let mut pieces = Vec::new();
        for phi in &leg_breaks[l] {
            let prev = chain.last().unwrap().clone();
            chain.push((phi.clone(), nv));
            genus.push(0);
            edges.push((prev.1, nv));
            lengths.push(sub(phi, &prev.0));
            contracted.push(false);
            pieces.push(edges.len() - 1);
            nv += 1;
        }
        legs[l] = chain.last().unwrap().1;
        leg_chain.push(chain);
        leg_pieces.push(pieces);
    }
    let graph = Graph::new(nv, edges, legs)?;
    let curve = TropicalCurveFamily::with_contracted(graph, genus, base, lengths, contracted)?;
    Ok(Subdivided { curve, edge_chain, edge_pieces, leg_chain, leg_pieces })
}

/// Position matrix `A + m u φ` of the point at parameter `φ` along a direction `u`.
fn moved(a: &QMat, u: &[Q], m: u32, phi: &[Q]) -> QMat {
    a.iter()
        .zip(u)
        .map(|(row, uj)| {
            let c = uj * q(m as i64);
            row.iter().zip(phi).map(|(x, p)| x + &c * p).collect()
        })
        .collect()
}

/// `[I_k; A]`: the position in `R^k × R^n` of a point with target position `A`.
fn graph_matrix(a: &QMat, k: usize) -> QMat {
    let mut m: QMat = (0..k).map(|i| unit(k, i)).collect();
    m.extend(a.iter().cloned());
    m
}

/// The covector `s = φ(p)` describing a section cone `kappa` (injective over a full-dimensional
/// base cone) inside the image of a segment `(p, A p + s m u)`.
fn section_parameter(kappa: &Cone, a: &QMat, u: &[Q], m: u32, k: usize) -> Option<QVec> {
    let uu = dot(u, u) * q(m as i64);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for r in kappa.rays() {
        let (rb, rf) = r.split_at(k);
        let off = sub(rf, &mat_vec(a, rb));
        rows.push(rb.to_vec());
        rhs.push(dot(&off, u) / &uu);
    }
    solve(&rows, &rhs, k)
}

/// Parameters, increasing over the relative interior of `beta`, at which the image of a segment
/// or ray from position `a` in direction `u` passes through a section cone of `sigma`.
fn breakpoints(sigma: &ConeComplex, image: &Cone, beta: &Cone, a: &QMat, u: &[Q], m: u32, upper: Option<&QVec>) -> Vec<QVec> {
    let k = beta.ambient();
    if m == 0 {
        return vec![];
    }
    let c = beta.interior_point();
    let mut found: Vec<(Q, QVec)> = Vec::new();
    for kappa in sigma.cones() {
        if kappa.dim() != k || !image.contains_cone(kappa) {
            continue;
        }
        let proj = Cone::new(k, kappa.rays().iter().map(|r| r[..k].to_vec()).collect());
        let Ok(proj) = proj else { continue };
        if proj.dim() != k || !proj.contains_cone(beta) {
            continue;
        }
        let Some(phi) = section_parameter(kappa, a, u, m, k) else { continue };
        let at = dot(&phi, &c);
        if !at.is_positive() || upper.is_some_and(|l| at >= dot(l, &c)) {
            continue;
        }
        if !found.iter().any(|(x, _)| *x == at) {
            found.push((at, phi));
        }
    }
    found.sort_by(|x, y| x.0.cmp(&y.0));
    found.into_iter().map(|(_, p)| p).collect()
}

// ---------------------------------------------------------------------------------------------
// transversalizing families

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalizeOptions {
    /// Greedily merge adjacent maximal base cones when all conclusions survive.
    pub merge: bool,
}

impl Default for TransversalizeOptions {
    fn default() -> Self {
        TransversalizeOptions { merge: true }
    }
}

/// The refined family over one maximal cone of the subdivided base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedFamily {
    pub base_cone: ConeId,
    pub input: usize,
    pub map: TropicalMapFamily,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalizationResult {
    pub input: UniversalFamily,
    /// Subdivided base (with its refined lattice) mapping to the input base.
    pub base_subdivision: Subdivision,
    /// The expanded target over the subdivided base, mapping to the original target.
    pub target_expansion: TropicalExpansion,
    pub refined: Vec<RefinedFamily>,
    pub saturation: SaturationRecord,
}

impl TransversalizationResult {
    pub fn base(&self) -> &ConeComplex {
        self.base_subdivision.fine()
    }

    pub fn curve_subdivision(&self) -> Vec<&TropicalCurveFamily> {
        self.refined.iter().map(|r| &r.map.curve).collect()
    }

    /// Section cones of the expansion over maximal base cone `b`, as position matrices
    /// (`n × k`), sorted by their value at the interior point of `b`.
    pub fn fiber_vertices(&self, b: ConeId) -> Vec<QMat> {
        let e = &self.target_expansion.to_base;
        let beta = self.base().cone(b);
        let k = beta.ambient();
        let c = beta.interior_point();
        let mut out: Vec<(QVec, QMat)> = Vec::new();
        for (i, kappa) in e.source.cones().iter().enumerate() {
            if e.assign[i] != b || kappa.dim() != k {
                continue;
            }
            let rows: Vec<QVec> = kappa.rays().iter().map(|r| r[..k].to_vec()).collect();
            let n = kappa.ambient() - k;
            let a: QMat = (0..n)
                .map(|j| {
                    let rhs: Vec<Q> = kappa.rays().iter().map(|r| r[k + j].clone()).collect();
                    solve(&rows, &rhs, k).expect("section over a full-dimensional cone")
                })
                .collect();
            out.push((mat_vec(&a, &c), a));
        }
        out.sort();
        out.into_iter().map(|(_, a)| a).collect()
    }
}

fn assemble(u: &UniversalFamily, sigma0: &ConeComplex, fine: &ConeComplex, start: Option<&Lattice>) -> Result<TransversalizationResult> {
    let (k, n) = (u.base_dim(), u.target_dim());
    let pi = base_projection(k, n);
    let std_k = Lattice::standard(k);
    let images = curve_cone_images(u)?;
    let fine_std = fine.relattice(&std_k);
    // which input family lies over each maximal cone of the fine base
    let mut over = Vec::new();
    for b in fine_std.maximal() {
        let beta = fine_std.cone(b);
        let i = (0..u.families.len())
            .find(|&i| u.families[i].curve.base.relattice(std_k.clone()).contains_cone(beta))
            .ok_or_else(|| TransversalizeError::Input("base subdivision leaves the input base".into()))?;
        over.push((b, i));
    }
    let image_of = |fi: usize, p: Piece| -> &Cone { &images.iter().find(|x| x.family == fi && x.piece == p).unwrap().image };
    // breakpoints along edges and legs over each maximal fine cone
    let mut breaks = Vec::new();
    let mut covs: Vec<QVec> = Vec::new();
    for &(b, i) in &over {
        let f = &u.families[i];
        let beta = fine_std.cone(b);
        let g = &f.curve.graph;
        let eb: Vec<Vec<QVec>> = (0..g.edges.len())
            .map(|e| {
                let d = &f.edges[e];
                breakpoints(sigma0, image_of(i, Piece::Edge(e)), beta, &f.positions[g.edges[e].0], &d.dir, d.m, Some(&f.curve.lengths[e]))
            })
            .collect();
        let lb: Vec<Vec<QVec>> = (0..g.legs.len())
            .map(|l| {
                let d = &f.legs[l];
                breakpoints(sigma0, image_of(i, Piece::Leg(l)), beta, &f.positions[g.legs[l]], &d.dir, d.m, None)
            })
            .collect();
        covs.extend(eb.iter().flatten().cloned());
        covs.extend(lb.iter().flatten().cloned());
        breaks.push((eb, lb));
    }
    covs.sort();
    covs.dedup();
    // pull the auxiliary expansion back to the fine base and saturate
    let std_src = Lattice::standard(k + n);
    let sigma1 = ConeComplex::embedded_unchecked(pull_back_source(sigma0, &fine_std, &pi));
    let m1 = ComplexMorphism::linear(sigma1, fine.relattice(&u.base_lattice()), pi.clone())?;
    let m1 = ComplexMorphism::from_parts(m1.source.relattice(&std_src), m1.target, m1.assign, m1.maps);
    let (m2, saturation) = saturate_with(&m1, &covs, start)?;
    let sigma = m2.source.clone();
    let base = m2.target.clone();
    let src_lat = saturation.source_lattice.clone();
    let find = |gens: Vec<QVec>| -> Result<ConeId> {
        let c = Cone::with_lattice(src_lat.clone(), gens)?;
        sigma.find(&c).ok_or_else(|| TransversalizeError::Verification(format!("image {c:?} is not a cone of the expansion")))
    };
    let mut refined = Vec::new();
    for (&(b, i), (eb, lb)) in over.iter().zip(&breaks) {
        let f = &u.families[i];
        let g = &f.curve.graph;
        let beta = base.cone(b).clone();
        let rays = beta.rays().to_vec();
        let sd = subdivide_curve(&f.curve, beta, eb, lb)?;
        let nv = sd.curve.graph.vertices;
        let mut pos: Vec<Option<QMat>> = vec![None; nv];
        for v in 0..g.vertices {
            pos[v] = Some(f.positions[v].clone());
        }
        for (e, chain) in sd.edge_chain.iter().enumerate() {
            let d = &f.edges[e];
            let a = &f.positions[g.edges[e].0];
            for (phi, w) in &chain[1..chain.len() - 1] {
                pos[*w] = Some(moved(a, &d.dir, d.m, phi));
            }
        }
        for (l, chain) in sd.leg_chain.iter().enumerate() {
            let d = &f.legs[l];
            let a = &f.positions[g.legs[l]];
            for (phi, w) in &chain[1..] {
                pos[*w] = Some(moved(a, &d.dir, d.m, phi));
            }
        }
        let pos: Vec<QMat> = pos.into_iter().map(|p| p.expect("every vertex placed")).collect();
        let section = |a: &QMat| -> Vec<QVec> { rays.iter().map(|r| lift(r, a)).collect() };
        let mut vertex_cone = Vec::new();
        for p in &pos {
            vertex_cone.push(find(section(p))?);
        }
        let mut edges = vec![EdgeData::contracted(0, k + n); sd.curve.graph.edges.len()];
        for (e, pieces) in sd.edge_pieces.iter().enumerate() {
            let d = &f.edges[e];
            for (x, &id) in pieces.iter().enumerate() {
                let (a, b) = sd.curve.graph.edges[id];
                let _ = x;
                if d.m == 0 {
                    edges[id] = EdgeData::contracted(vertex_cone[a], k + n);
                } else {
                    let mut gens = section(&pos[a]);
                    gens.extend(section(&pos[b]));
                    edges[id] = EdgeData::new(find(gens)?, vertical(k, &d.dir), d.m);
                }
            }
        }
        let mut legs = Vec::new();
        for (l, pieces) in sd.leg_pieces.iter().enumerate() {
            let d = &f.legs[l];
            for &id in pieces {
                let (a, b) = sd.curve.graph.edges[id];
                let mut gens = section(&pos[a]);
                gens.extend(section(&pos[b]));
                edges[id] = EdgeData::new(find(gens)?, vertical(k, &d.dir), d.m);
            }
            let v = sd.curve.graph.legs[l];
            if d.m == 0 {
                legs.push(EdgeData::contracted(vertex_cone[v], k + n));
            } else {
                let mut gens = section(&pos[v]);
                gens.push(vertical(k, &d.dir));
                legs.push(EdgeData::new(find(gens)?, vertical(k, &d.dir), d.m));
            }
        }
        let positions = pos.iter().map(|a| graph_matrix(a, k)).collect();
        let map = TropicalMapFamily::new(sd.curve, sigma.clone(), vertex_cone, positions, edges, legs)?;
        refined.push(RefinedFamily { base_cone: b, input: i, map });
    }
    let to_target = ComplexMorphism::linear(sigma.clone(), u.target.clone(), target_projection(k, n))?;
    let base_subdivision = Subdivision::of_fans(base, u.base.clone())?;
    let result = TransversalizationResult {
        input: u.clone(),
        base_subdivision,
        target_expansion: TropicalExpansion { to_target, to_base: m2 },
        refined,
        saturation,
    };
    let report = verify_conclusions(&result);
    if let Some(w) = report.failure() {
        return Err(TransversalizeError::Verification(w));
    }
    Ok(result)
}

fn auxiliary(u: &UniversalFamily) -> Result<ConeComplex> {
    let images = curve_cone_images(u)?;
    expand_target(&images, u.base_dim() + u.target_dim())
}

/// Subdivides target, curve and base of `u` so that the expansion is equidimensional and
/// reduced over the base and every curve cone maps onto a cone of the expansion.
pub fn transversalize_family(u: &UniversalFamily, opts: &TransversalizeOptions) -> Result<TransversalizationResult> {
    let (k, n) = (u.base_dim(), u.target_dim());
    let sigma0 = auxiliary(u)?;
    let m0 = ComplexMorphism::linear(sigma0.clone(), u.base.relattice(&Lattice::standard(k)), base_projection(k, n))?;
    let flat = flatten_base(&m0)?;
    let mut result = assemble(u, &sigma0, flat.base.fine(), None)?;
    if opts.merge {
        result = merge_base(u, &sigma0, result)?;
    }
    Ok(result)
}

/// Hyperplanes spanned by codimension-one cones of `fine` that pass through the interior of a
/// maximal cone of `coarse`.
fn interior_walls(fine: &ConeComplex, coarse: &[Cone], k: usize) -> Vec<QVec> {
    let std = Lattice::standard(k);
    let mut out = BTreeSet::new();
    for c in fine.cones() {
        if c.dim() + 1 != k {
            continue;
        }
        let c = c.relattice(std.clone());
        if coarse.iter().any(|m| m.dim() == k && m.in_relint(&c.interior_point())) {
            out.insert(canonical_wall(&c.equations()[0]));
        }
    }
    out.into_iter().collect()
}

fn arrangement(coarse: &[Cone], walls: &[QVec], k: usize) -> Option<ConeComplex> {
    let mut pieces = Vec::new();
    for c in coarse {
        let mut cs = vec![c.clone()];
        for w in walls {
            cs = split_by_hyperplane(&cs, w);
        }
        pieces.extend(cs);
    }
    ConeComplex::from_fan(k, pieces).ok()
}

/// Coarsens the base while the conclusions survive: first by dropping whole hyperplanes from
/// the arrangement of interior walls, then by merging adjacent pairs with convex union.
fn merge_base(u: &UniversalFamily, sigma0: &ConeComplex, result: TransversalizationResult) -> Result<TransversalizationResult> {
    let k = u.base_dim();
    let std = Lattice::standard(k);
    let lat = u.base_lattice();
    let coarse: Vec<Cone> = u.base.maximal_cones().iter().map(|c| c.relattice(std.clone())).collect();
    let mut walls = interior_walls(result.base(), &coarse, k);
    let mut best = None;
    if !walls.is_empty() {
        let mut i = 0;
        while i < walls.len() {
            let mut fewer = walls.clone();
            fewer.remove(i);
            match arrangement(&coarse, &fewer, k).map(|f| assemble(u, sigma0, &f.relattice(&lat), None)) {
                Some(Ok(r)) => {
                    walls = fewer;
                    best = Some(r);
                }
                _ => i += 1,
            }
        }
        if best.is_none() {
            best = arrangement(&coarse, &walls, k).and_then(|f| assemble(u, sigma0, &f.relattice(&lat), None).ok());
        }
    }
    let mut result = match best {
        Some(r) if r.base().maximal().len() <= result.base().maximal().len() => r,
        _ => result,
    };
    'again: loop {
        let maxes: Vec<Cone> = result.base().maximal_cones().iter().map(|c| c.relattice(std.clone())).collect();
        for i in 0..maxes.len() {
            for j in i + 1..maxes.len() {
                let shared = maxes[i].intersect(&maxes[j]);
                if shared.dim() + 1 != k {
                    continue;
                }
                let Some(un) = convex_union(&maxes[i], &maxes[j], &shared) else { continue };
                if !coarse.iter().any(|c| c.contains_cone(&un)) {
                    continue;
                }
                let mut cand: Vec<Cone> = maxes.iter().enumerate().filter(|&(x, _)| x != i && x != j).map(|(_, c)| c.clone()).collect();
                cand.push(un);
                let Ok(fan) = ConeComplex::from_fan(k, cand) else { continue };
                if let Ok(r) = assemble(u, sigma0, &fan.relattice(&lat), None) {
                    result = r;
                    continue 'again;
                }
            }
        }
        return Ok(result);
    }
}

/// Refines the base of a result further (`finer` must subdivide its base) and pulls back.
pub fn pull_back_result(r: &TransversalizationResult, finer: &ConeComplex) -> Result<TransversalizationResult> {
    let sigma0 = auxiliary(&r.input)?;
    let lat = r.input.base_lattice();
    let out = assemble(&r.input, &sigma0, &finer.relattice(&lat), Some(&r.saturation.lattice))?;
    Subdivision::of_fans(out.base().clone(), r.base().clone())?;
    Ok(out)
}

/// A result refining two results for the same input, with the refinement maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonSolution {
    pub result: TransversalizationResult,
    pub to_first: Subdivision,
    pub to_second: Subdivision,
}

pub fn common_solution(a: &TransversalizationResult, b: &TransversalizationResult) -> Result<CommonSolution> {
    if a.input != b.input {
        return Err(TransversalizeError::Input("results solve different families".into()));
    }
    let base = common_refinement(a.base(), b.base())?;
    let sigma0 = auxiliary(&a.input)?;
    let start = a.saturation.lattice.intersect(&b.saturation.lattice);
    let result = assemble(&a.input, &sigma0, &base.relattice(&a.input.base_lattice()), Some(&start))?;
    let to_first = Subdivision::of_fans(result.base().clone(), a.base().clone())?;
    let to_second = Subdivision::of_fans(result.base().clone(), b.base().clone())?;
    for other in [a, b] {
        let fine = result.target_expansion.total().clone();
        let coarse = other.target_expansion.total().clone();
        Subdivision::of_fans(fine, coarse)?;
    }
    Ok(CommonSolution { result, to_first, to_second })
}

// ---------------------------------------------------------------------------------------------
// verification

/// The three conclusions, each `None` when it holds or a witness when it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConclusionReport {
    pub equidimensional: Option<String>,
    pub reduced: Option<String>,
    pub transverse: Option<String>,
}

impl ConclusionReport {
    pub fn all_ok(&self) -> bool {
        self.failure().is_none()
    }

    pub fn failure(&self) -> Option<String> {
        self.equidimensional.clone().or(self.reduced.clone()).or(self.transverse.clone())
    }
}

/// Lattice `N ⊕ Z` for the parameter along an edge.
fn with_parameter(l: &Lattice) -> Lattice {
    let k = l.rank;
    let cols: Vec<QVec> = l
        .basis_vectors()
        .into_iter()
        .map(|mut b| {
            b.push(Q::zero());
            b
        })
        .chain(std::iter::once(unit(k + 1, k)))
        .collect();
    Lattice::with_basis(transpose(&cols, k + 1)).expect("block lattice")
}

/// Edge and leg cones of a curve family in `(p, s)` coordinates.
fn curve_cones(c: &TropicalCurveFamily) -> Vec<Cone> {
    let k = c.base.ambient();
    let lat = with_parameter(c.base.lattice());
    let ext = |r: &QVec, s: Q| {
        let mut v = r.clone();
        v.push(s);
        v
    };
    let mut out = Vec::new();
    for l in &c.lengths {
        let mut gens: Vec<QVec> = c.base.rays().iter().map(|r| ext(r, Q::zero())).collect();
        gens.extend(c.base.rays().iter().map(|r| ext(r, dot(l, r))));
        out.push(Cone::with_lattice(lat.clone(), gens).expect("edge cone"));
    }
    if !c.graph.legs.is_empty() {
        let mut gens: Vec<QVec> = c.base.rays().iter().map(|r| ext(r, Q::zero())).collect();
        gens.push(unit(k + 1, k));
        out.push(Cone::with_lattice(lat, gens).expect("leg cone"));
    }
    out
}

/// Equidimensionality and reducedness of a curve family over its base cone.
pub fn check_curve_over_base(c: &TropicalCurveFamily) -> (Option<String>, Option<String>) {
    let k = c.base.ambient();
    let lat = with_parameter(c.base.lattice());
    let proj = IntegralLinearMap { source: lat, target: c.base.lattice().clone(), matrix: base_projection(k, 1) };
    for (x, cone) in curve_cones(c).iter().enumerate() {
        for face in cone.faces() {
            let img = match image_cone(&proj, &face) {
                Ok(i) => i,
                Err(e) => return (Some(format!("curve cone {x}: {e}")), None),
            };
            if !c.base.has_face(&img) {
                return (Some(format!("a face of curve cone {x} does not map onto a face of the base")), None);
            }
            let idx = image_lattice_index(&proj, &face);
            if !idx.is_one() {
                return (None, Some(format!("a face of curve cone {x} has lattice index {idx} over the base")));
            }
        }
    }
    for (e, l) in c.lengths.iter().enumerate() {
        if c.base.lattice().basis_vectors().iter().any(|b| !dot(l, b).is_integer()) {
            return (None, Some(format!("length of edge {e} is not integral on the base lattice")));
        }
    }
    (None, None)
}

/// Images of the cones of `f` (vertex sections, edges, legs) must be cones of its target.
pub fn check_face_images(f: &TropicalMapFamily) -> Option<String> {
    if let Some(e) = check_continuity(f) {
        return Some(format!("edge {e} is not continuous"));
    }
    let rays = f.curve.base.rays();
    let n = f.target.ambient().unwrap_or(0);
    let lat = f.target.cone(0).lattice().clone();
    let img = |gens: Vec<QVec>| Cone::with_lattice(lat.clone(), gens).ok();
    let g = &f.curve.graph;
    let section = |v: usize| -> Vec<QVec> { rays.iter().map(|r| mat_vec(&f.positions[v], r)).collect() };
    for v in 0..g.vertices {
        if img(section(v)).as_ref().map(|c| c.rays()) != Some(f.target.cone(f.vertex_cone[v]).rays()) {
            return Some(format!("vertex {v} does not map onto a cone"));
        }
    }
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        let mut gens = section(a);
        gens.extend(section(b));
        let expect = if f.edges[e].m == 0 { f.vertex_cone[a] } else { f.edges[e].cone };
        if img(gens).as_ref().map(|c| c.rays()) != Some(f.target.cone(expect).rays()) {
            return Some(format!("edge {e} does not map onto a cone"));
        }
    }
    for (l, &v) in g.legs.iter().enumerate() {
        let mut gens = section(v);
        if f.legs[l].m > 0 {
            gens.push(f.legs[l].dir.clone());
        }
        let expect = if f.legs[l].m == 0 { f.vertex_cone[v] } else { f.legs[l].cone };
        if img(gens).as_ref().map(|c| c.rays()) != Some(f.target.cone(expect).rays()) {
            return Some(format!("leg {l} does not map onto a cone"));
        }
    }
    let _ = n;
    None
}

pub fn verify_conclusions(r: &TransversalizationResult) -> ConclusionReport {
    let e = &r.target_expansion.to_base;
    let mut equidimensional = match check_equidimensional(e) {
        EquidimReport { ok: true, .. } => None,
        EquidimReport { witness, .. } => Some(format!("expansion cone {} does not surject onto its base cone", witness.unwrap_or(0))),
    };
    let mut reduced = match check_reduced(e) {
        ReducedReport { ok: true, .. } => None,
        ReducedReport { witness, .. } => Some(format!("expansion cone lattice index {witness:?}")),
    };
    let mut transverse = None;
    for rf in &r.refined {
        let (eq, red) = check_curve_over_base(&rf.map.curve);
        equidimensional = equidimensional.or(eq);
        reduced = reduced.or(red);
        transverse = transverse.or(check_face_images(&rf.map).map(|w| format!("over base cone {}: {w}", rf.base_cone)));
    }
    ConclusionReport { equidimensional, reduced, transverse }
}

// ---------------------------------------------------------------------------------------------
// special cases

/// One cell of the orderings fan in the smooth-divisor case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiCell {
    pub base_cone: ConeId,
    /// Distinct vertex heights as covectors, increasing over the cell.
    pub vertex_images: Vec<QVec>,
    pub curve: TropicalCurveFamily,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiSubdivision {
    pub base: ConeComplex,
    pub cells: Vec<LiCell>,
}

impl LiSubdivision {
    /// Vertices of the subdivision of `R>=0` over a point of cell `i`: `0` and the images.
    pub fn target_vertices_at(&self, i: usize, p: &[Q]) -> Vec<Q> {
        let mut v: Vec<Q> = self.cells[i].vertex_images.iter().map(|h| dot(h, p)).collect();
        v.push(Q::zero());
        v.sort();
        v.dedup();
        v
    }
}

fn is_ray_target(t: &ConeComplex) -> bool {
    t.ambient() == Some(1) && t.maximal_cones().iter().map(|c| c.rays().to_vec()).collect::<Vec<_>>() == vec![vec![qv(&[1])]]
}

/// The expansion of `R>=0` at the vertex images, with the base cut into the cones on which the
/// order of the images is fixed and the curve subdivided at preimages of the new vertices.
pub fn li_subdivision(f: &TropicalMapFamily) -> Result<LiSubdivision> {
    if !is_ray_target(&f.target) {
        return Err(TransversalizeError::Input("target is not the ray".into()));
    }
    let tau = &f.curve.base;
    let k = tau.ambient();
    let g = &f.curve.graph;
    let h: Vec<QVec> = f.positions.iter().map(|p| p[0].clone()).collect();
    let mut walls = BTreeSet::new();
    for a in &h {
        for b in &h {
            let d = sub(a, b);
            if !is_zero(&d) {
                walls.insert(canonical_wall(&d));
            }
        }
    }
    let mut pieces = vec![tau.relattice(Lattice::standard(k))];
    for w in &walls {
        pieces = split_by_hyperplane(&pieces, w);
    }
    let fan = ConeComplex::from_fan(k, pieces)?;
    let mut cells = Vec::new();
    let mut covs = Vec::new();
    let mut raw = Vec::new();
    for b in fan.maximal() {
        let beta = fan.cone(b);
        let c = beta.interior_point();
        let mut imgs: Vec<(Q, QVec)> = h.iter().map(|x| (dot(x, &c), x.clone())).collect();
        imgs.sort();
        imgs.dedup_by(|x, y| x.0 == y.0);
        let between = |lo: &Q, hi: &Q| -> Vec<&QVec> { imgs.iter().filter(|(v, _)| v > lo && v < hi).map(|(_, x)| x).collect() };
        let mut eb = Vec::new();
        for (e, &(a, bv)) in g.edges.iter().enumerate() {
            let d = &f.edges[e];
            if d.m == 0 {
                eb.push(vec![]);
                continue;
            }
            let step = q(d.m as i64) * &d.dir[0];
            let (ha, hb) = (dot(&h[a], &c), dot(&h[bv], &c));
            let (lo, hi) = if ha < hb { (ha, hb) } else { (hb, ha) };
            let mut phis: Vec<QVec> = between(&lo, &hi).into_iter().map(|x| scale(&step.recip(), &sub(x, &h[a]))).collect();
            phis.sort_by_key(|p| dot(p, &c));
            eb.push(phis);
        }
        let mut lb = Vec::new();
        for (l, &v) in g.legs.iter().enumerate() {
            let d = &f.legs[l];
            if d.m == 0 || !d.dir[0].is_positive() {
                lb.push(vec![]);
                continue;
            }
            let hv = dot(&h[v], &c);
            let mut phis: Vec<QVec> = imgs
                .iter()
                .filter(|(x, _)| *x > hv)
                .map(|(_, x)| scale(&q(d.m as i64).recip(), &sub(x, &h[v])))
                .collect();
            phis.sort_by_key(|p| dot(p, &c));
            lb.push(phis);
        }
        covs.extend(eb.iter().flatten().cloned());
        covs.extend(lb.iter().flatten().cloned());
        raw.push((b, imgs.into_iter().map(|(_, x)| x).collect::<Vec<_>>(), eb, lb));
    }
    let lat = if covs.is_empty() { tau.lattice().clone() } else { tau.lattice().refine_by(&covs) };
    for (b, vertex_images, eb, lb) in raw {
        let beta = fan.cone(b).relattice(lat.clone());
        let curve = subdivide_curve(&f.curve, beta, &eb, &lb)?.curve;
        cells.push(LiCell { base_cone: b, vertex_images, curve });
    }
    Ok(LiSubdivision { base: fan.relattice(&lat), cells })
}

/// Compares a transversalization of a family to the ray with its Li subdivision: same maximal
/// base cones and the same vertex heights over each.
pub fn compare_with_li(r: &TransversalizationResult, li: &LiSubdivision) -> std::result::Result<(), String> {
    let std_k = |c: &Cone| c.relattice(Lattice::standard(c.ambient()));
    let mine: BTreeSet<Cone> = r.base().maximal_cones().iter().map(std_k).collect();
    let theirs: BTreeSet<Cone> = li.base.maximal_cones().iter().map(std_k).collect();
    if mine != theirs {
        return Err(format!("base subdivisions differ: {mine:?} vs {theirs:?}"));
    }
    for b in r.base().maximal() {
        let beta = std_k(r.base().cone(b));
        let cell = li
            .cells
            .iter()
            .find(|c| std_k(li.base.cone(c.base_cone)) == beta)
            .ok_or_else(|| format!("no Li cell over {beta:?}"))?;
        let heights: Vec<QVec> = r.fiber_vertices(b).into_iter().map(|a| a[0].clone()).collect();
        if heights != cell.vertex_images {
            return Err(format!("vertex images over {beta:?} differ: {heights:?} vs {:?}", cell.vertex_images));
        }
    }
    Ok(())
}

/// Result of transversalizing a single map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointwiseResult {
    /// Cells of the subdivided target meeting the image: vertices, segments and rays.
    pub cells: Vec<Cell>,
    pub map: RealizedMap,
}

/// The family over `R>=0` obtained by scaling a single map.
pub fn cone_over_map(target: &ConeComplex, r: &RealizedMap) -> Result<TropicalMapFamily> {
    let n = target.ambient().ok_or(ComplexError::NotEmbedded)?;
    let g = &r.curve.graph;
    if r.positions.len() != g.vertices || r.edges.len() != g.edges.len() || r.legs.len() != g.legs.len() {
        return Err(TransversalizeError::Input("map and curve sizes differ".into()));
    }
    let mut covs: Vec<QVec> = r.curve.lengths.iter().map(|l| vec![l.clone()]).collect();
    covs.extend(r.positions.iter().flatten().map(|x| vec![x.clone()]));
    let lat = Lattice::standard(1).refine_by(&covs);
    let base = Cone::with_lattice(lat, vec![qv(&[1])])?;
    let lengths = r.curve.lengths.iter().map(|l| vec![l.clone()]).collect();
    let curve = TropicalCurveFamily::new(g.clone(), r.curve.genus.clone(), base, lengths)?;
    let locate = |x: &[Q]| target.locate(x).ok_or(TransversalizeError::Input("map leaves the target".into()));
    let vertex_cone = r.positions.iter().map(|p| locate(p)).collect::<Result<Vec<_>>>()?;
    let positions = r.positions.iter().map(|p| p.iter().map(|x| vec![x.clone()]).collect()).collect();
    let mut edges = Vec::new();
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        let (dir, m) = &r.edges[e];
        if *m == 0 {
            edges.push(EdgeData::contracted(vertex_cone[a], n));
        } else {
            let mid = scale(&qr(1, 2), &add(&r.positions[a], &r.positions[b]));
            edges.push(EdgeData::new(locate(&mid)?, primitive(dir), *m));
        }
    }
    let mut legs = Vec::new();
    for (l, &v) in g.legs.iter().enumerate() {
        let (dir, m) = &r.legs[l];
        if *m == 0 {
            legs.push(EdgeData::contracted(vertex_cone[v], n));
        } else {
            legs.push(EdgeData::new(locate(&add(&r.positions[v], dir))?, primitive(dir), *m));
        }
    }
    Ok(TropicalMapFamily::new(curve, target.clone(), vertex_cone, positions, edges, legs)?)
}

/// Subdivides the target and the curve of a single map so that vertices land on vertices and
/// edges on edges; only cells meeting the image are kept.
pub fn transversalize_pointwise(target: &ConeComplex, r: &RealizedMap) -> Result<PointwiseResult> {
    let fam = cone_over_map(target, r)?;
    let u = UniversalFamily::new(vec![fam])?;
    let res = transversalize_family(&u, &TransversalizeOptions { merge: false })?;
    let e = &res.target_expansion.to_base;
    let ray = (0..e.target.len()).find(|&i| e.target.cone(i).dim() == 1).expect("base ray");
    let one = qv(&[1]);
    let drop = |v: &QVec| v[1..].to_vec();
    let mut cells: Vec<Cell> = fiber_at(e, ray, &one)
        .into_iter()
        .map(|c| Cell { source: c.source, vertices: c.vertices.iter().map(drop).collect(), rays: c.rays.iter().map(drop).collect() })
        .collect();
    cells.sort();
    let rf = &res.refined[0].map;
    let real = realize_map(rf, &one)?;
    let map = RealizedMap {
        curve: real.curve,
        positions: real.positions.iter().map(drop).collect(),
        edges: real.edges.iter().map(|(d, m)| (drop(d), *m)).collect(),
        legs: real.legs.iter().map(|(d, m)| (drop(d), *m)).collect(),
    };
    Ok(PointwiseResult { cells, map })
}

/// Subdivides the edges and legs of a family at the points where their images cross cones of
/// `fine`, a subdivision of the family's target. The crossings must vary linearly over the base.
pub fn pull_back_to_curve(f: &TropicalMapFamily, fine: &ConeComplex) -> Result<TropicalMapFamily> {
    let n = fine.ambient().ok_or(ComplexError::NotEmbedded)?;
    let tau = &f.curve.base;
    let k = tau.ambient();
    let c = tau.interior_point();
    let g = &f.curve.graph;
    let walls = walls_of(fine.cones());
    let carrier = |x: &[Q]| fine.locate(x).ok_or(TransversalizeError::Input("map leaves the subdivided target".into()));
    // candidate parameters are where a wall is crossed; keep those where the carrier changes
    let crossings = |a: &QMat, u: &[Q], m: u32, upper: Option<&QVec>| -> Result<Vec<QVec>> {
        if m == 0 {
            return Ok(vec![]);
        }
        let mu = q(m as i64);
        let mut cands: Vec<(Q, QVec)> = Vec::new();
        for w in &walls {
            let wu = dot(w, u) * &mu;
            if wu.is_zero() {
                continue;
            }
            let wa: QVec = (0..k).map(|j| (0..n).fold(Q::zero(), |acc, i| acc + &w[i] * &a[i][j])).collect();
            let phi = scale(&(-wu.recip()), &wa);
            let at = dot(&phi, &c);
            if at.is_positive() && upper.is_none_or(|l| at < dot(l, &c)) && !cands.iter().any(|(x, _)| *x == at) {
                cands.push((at, phi));
            }
        }
        cands.sort_by(|x, y| x.0.cmp(&y.0));
        let point = |s: &Q| add(&mat_vec(a, &c), &scale(&(s * &mu), u));
        let mut keep = Vec::new();
        for (i, (s, phi)) in cands.iter().enumerate() {
            let prev = if i == 0 { Q::zero() } else { cands[i - 1].0.clone() };
            let next = match (cands.get(i + 1), upper) {
                (Some((x, _)), _) => x.clone(),
                (None, Some(l)) => dot(l, &c),
                (None, None) => s + q(1),
            };
            let here = carrier(&point(s))?;
            let before = carrier(&point(&((&prev + s) / q(2))))?;
            let after = carrier(&point(&((s + &next) / q(2))))?;
            if here != before || here != after {
                keep.push(phi.clone());
            }
        }
        Ok(keep)
    };
    let eb = (0..g.edges.len())
        .map(|e| crossings(&f.positions[g.edges[e].0], &f.edges[e].dir, f.edges[e].m, Some(&f.curve.lengths[e])))
        .collect::<Result<Vec<_>>>()?;
    let lb = (0..g.legs.len())
        .map(|l| crossings(&f.positions[g.legs[l]], &f.legs[l].dir, f.legs[l].m, None))
        .collect::<Result<Vec<_>>>()?;
    let covs: Vec<QVec> = eb.iter().chain(&lb).flatten().cloned().collect();
    let lat = if covs.is_empty() { tau.lattice().clone() } else { tau.lattice().refine_by(&covs) };
    let sd = subdivide_curve(&f.curve, tau.relattice(lat), &eb, &lb)
        .map_err(|_| TransversalizeError::Input("crossings are not linear over the base; flatten the base first".into()))?;
    let nv = sd.curve.graph.vertices;
    let mut pos: Vec<QMat> = f.positions.clone();
    pos.resize(nv, vec![]);
    for (e, chain) in sd.edge_chain.iter().enumerate() {
        for (phi, w) in &chain[1..chain.len() - 1] {
            pos[*w] = moved(&f.positions[g.edges[e].0], &f.edges[e].dir, f.edges[e].m, phi);
        }
    }
    for (l, chain) in sd.leg_chain.iter().enumerate() {
        for (phi, w) in &chain[1..] {
            pos[*w] = moved(&f.positions[g.legs[l]], &f.legs[l].dir, f.legs[l].m, phi);
        }
    }
    let at = |v: usize| mat_vec(&pos[v], &c);
    let vertex_cone = (0..nv).map(|v| carrier(&at(v))).collect::<Result<Vec<_>>>()?;
    let mut edges = vec![EdgeData::contracted(0, n); sd.curve.graph.edges.len()];
    for (e, pieces) in sd.edge_pieces.iter().enumerate() {
        for &id in pieces {
            let (a, b) = sd.curve.graph.edges[id];
            edges[id] = if f.edges[e].m == 0 {
                EdgeData::contracted(vertex_cone[a], n)
            } else {
                EdgeData::new(carrier(&scale(&qr(1, 2), &add(&at(a), &at(b))))?, f.edges[e].dir.clone(), f.edges[e].m)
            };
        }
    }
    let mut legs = Vec::new();
    for (l, pieces) in sd.leg_pieces.iter().enumerate() {
        let d = &f.legs[l];
        for &id in pieces {
            let (a, b) = sd.curve.graph.edges[id];
            edges[id] = EdgeData::new(carrier(&scale(&qr(1, 2), &add(&at(a), &at(b))))?, d.dir.clone(), d.m);
        }
        let v = sd.curve.graph.legs[l];
        legs.push(if d.m == 0 { EdgeData::contracted(vertex_cone[v], n) } else { EdgeData::new(carrier(&add(&at(v), &d.dir))?, d.dir.clone(), d.m) });
    }
    Ok(TropicalMapFamily::new(sd.curve, fine.clone(), vertex_cone, pos, edges, legs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::p2_fan;

    fn quadrant() -> ConeComplex {
        ConeComplex::from_fan(2, vec![Cone::from_ints(2, &[&[1, 0], &[0, 1]])]).unwrap()
    }

    fn ray() -> ConeComplex {
        ray_base()
    }

    fn std_maxes(c: &ConeComplex) -> BTreeSet<Cone> {
        c.maximal_cones().iter().map(|x| x.relattice(Lattice::standard(x.ambient()))).collect()
    }

    #[test]
    fn diagonal_ray_splits_quadrant() {
        let s = subdivide_target_for_cone_images(&quadrant(), &[Cone::from_ints(2, &[&[1, 1]])]).unwrap();
        assert_eq!(s.fine().maximal().len(), 2);
        let s = subdivide_target_for_cone_images(&quadrant(), &[Cone::from_ints(2, &[&[1, 0]])]).unwrap();
        assert!(s.is_trivial());
    }

    #[test]
    fn two_rays_in_quadrant() {
        let rays = [Cone::from_ints(2, &[&[1, 2]]), Cone::from_ints(2, &[&[2, 1]])];
        let s = subdivide_target_for_cone_images(&quadrant(), &rays).unwrap();
        assert_eq!(s.fine().maximal().len(), 3);
        for r in &rays {
            assert!(s.fine().find(r).is_some());
        }
    }

    #[test]
    fn refine_is_idempotent_on_fans() {
        let fan = p2_fan();
        let cones = fan.maximal_cones();
        let pieces = refine_to_fan(&cones, &walls_of(&cones)).unwrap();
        assert!(pieces.iter().all(|p| p.len() == 1));
    }

    #[test]
    fn flatten_shear() {
        let m = ComplexMorphism::linear(quadrant(), quadrant(), vec![qv(&[1, 0]), qv(&[1, 1])]).unwrap();
        assert!(!check_equidimensional(&m).ok);
        let f = flatten_base(&m).unwrap();
        assert_eq!(f.base.fine().maximal().len(), 2);
        assert!(f.base.fine().find(&Cone::from_ints(2, &[&[1, 1]])).is_some());
        assert!(check_equidimensional(&f.morphism).ok);
        assert_eq!(f.morphism.source.maximal().len(), 1);
        let sum = ComplexMorphism::linear(quadrant(), ray(), vec![qv(&[1, 1])]).unwrap();
        assert!(flatten_base(&sum).unwrap().base.is_trivial());
    }

    #[test]
    fn saturation_examples() {
        let double = ComplexMorphism::linear(ray(), ray(), vec![qv(&[2])]).unwrap();
        assert!(!check_reduced(&double).ok);
        let (m, rec) = saturate_base_lattices(&double).unwrap();
        assert!(check_reduced(&m).ok);
        let one = m.target.find(&Cone::from_ints(1, &[&[1]]).relattice(rec.lattice.clone())).unwrap();
        assert_eq!(rec.indices[one].1, BigInt::from(2));
        let (_, rec) = saturate_base_lattices(&ComplexMorphism::linear(ray(), ray(), vec![qv(&[1])]).unwrap()).unwrap();
        assert!(rec.is_trivial());
        let diag = ComplexMorphism::linear(quadrant(), quadrant(), vec![qv(&[1, 0]), qv(&[0, 3])]).unwrap();
        let (m, rec) = saturate_base_lattices(&diag).unwrap();
        assert!(check_reduced(&m).ok);
        let mut idx: Vec<BigInt> = rec.indices.iter().filter(|(c, _)| m.target.cone(*c).dim() == 1).map(|(_, i)| i.clone()).collect();
        idx.sort();
        assert_eq!(idx, vec![BigInt::from(1), BigInt::from(3)]);
    }

    /// The segment from `(t,t)` to `(2t,t)` in the P2 fan over `t >= 0`.
    fn segment() -> TropicalMapFamily {
        let fan = p2_fan();
        let quad = fan.find(&Cone::from_ints(2, &[&[1, 0], &[0, 1]])).unwrap();
        let curve = TropicalCurveFamily::new(Graph::new(2, vec![(0, 1)], vec![]).unwrap(), vec![0, 0], Cone::from_ints(1, &[&[1]]), vec![qv(&[1])]).unwrap();
        let pos = |x: i64, y: i64| vec![qv(&[x]), qv(&[y])];
        TropicalMapFamily::new(curve, fan, vec![quad, quad], vec![pos(1, 1), pos(2, 1)], vec![EdgeData::new(quad, qv(&[1, 0]), 1)], vec![]).unwrap()
    }

    #[test]
    fn transverse_segment_is_kept() {
        let u = UniversalFamily::new(vec![segment()]).unwrap();
        let r = transversalize_family(&u, &TransversalizeOptions::default()).unwrap();
        assert!(verify_conclusions(&r).all_ok());
        assert!(r.base_subdivision.is_trivial());
        assert_eq!(r.refined[0].map.curve.graph, segment().curve.graph);
    }

    /// A root at height 0 over the quadrant with one child per length covector, each edge
    /// climbing with slope 1, and one leg at the root.
    fn li_family(lengths: &[[i64; 2]]) -> TropicalMapFamily {
        let target = ray();
        let zero = target.find(&Cone::zero(1)).unwrap();
        let one = target.find(&Cone::from_ints(1, &[&[1]])).unwrap();
        let base = Cone::from_ints(2, &[&[1, 0], &[0, 1]]);
        let nv = lengths.len() + 1;
        let graph = Graph::new(nv, (1..nv).map(|v| (0, v)).collect(), vec![0]).unwrap();
        let curve = TropicalCurveFamily::new(graph, vec![0; nv], base, lengths.iter().map(|l| qv(l)).collect()).unwrap();
        let mut positions = vec![vec![qv(&[0, 0])]];
        positions.extend(lengths.iter().map(|l| vec![qv(l)]));
        let mut cones = vec![zero];
        cones.extend(lengths.iter().map(|_| one));
        let edges = lengths.iter().map(|_| EdgeData::new(one, qv(&[1]), 1)).collect();
        TropicalMapFamily::new(curve, target, cones, positions, edges, vec![EdgeData::new(one, qv(&[1]), 1)]).unwrap()
    }

    #[test]
    fn li_orderings_fan() {
        let f = li_family(&[[1, 0], [0, 1]]);
        let li = li_subdivision(&f).unwrap();
        assert_eq!(li.base.maximal().len(), 2);
        assert!(li.base.find(&Cone::from_ints(2, &[&[1, 1]])).is_some());
        for cell in &li.cells {
            assert_eq!(cell.vertex_images.len(), 3);
            // two bounded target edges over a generic point
            let p = li.base.cone(cell.base_cone).interior_point();
            assert_eq!(li.target_vertices_at(0, &p).len(), 3);
            // the lower edge is cut once and the leg twice
            assert_eq!(cell.curve.graph.vertices, 6);
        }
        let u = UniversalFamily::new(vec![f]).unwrap();
        let r = transversalize_family(&u, &TransversalizeOptions::default()).unwrap();
        compare_with_li(&r, &li).unwrap();
    }

    #[test]
    fn li_fixed_heights() {
        // heights 0 < a < b as constants over the ray
        let target = ray();
        let zero = target.find(&Cone::zero(1)).unwrap();
        let one = target.find(&Cone::from_ints(1, &[&[1]])).unwrap();
        let graph = Graph::new(3, vec![(0, 1), (1, 2)], vec![]).unwrap();
        let curve = TropicalCurveFamily::new(graph, vec![0; 3], Cone::from_ints(1, &[&[1]]), vec![qv(&[2]), qv(&[3])]).unwrap();
        let f = TropicalMapFamily::new(
            curve,
            target,
            vec![zero, one, one],
            vec![vec![qv(&[0])], vec![qv(&[2])], vec![qv(&[5])]],
            vec![EdgeData::new(one, qv(&[1]), 1), EdgeData::new(one, qv(&[1]), 1)],
            vec![],
        )
        .unwrap();
        let li = li_subdivision(&f).unwrap();
        assert_eq!(li.target_vertices_at(0, &qv(&[1])), qv(&[0, 2, 5]));
        let zero = ray().find(&Cone::zero(1)).unwrap();
        let graph = Graph::new(2, vec![(0, 1)], vec![]).unwrap();
        let curve = TropicalCurveFamily::new(graph, vec![0; 2], Cone::from_ints(1, &[&[1]]), vec![qv(&[1])]).unwrap();
        let flat = TropicalMapFamily::new(curve, ray(), vec![zero; 2], vec![vec![qv(&[0])]; 2], vec![EdgeData::contracted(zero, 1)], vec![]).unwrap();
        let li = li_subdivision(&flat).unwrap();
        assert_eq!(li.target_vertices_at(0, &qv(&[1])), qv(&[0]));
        assert_eq!(li.cells[0].curve.graph.vertices, 2);
    }

    #[test]
    fn idempotent_on_own_output() {
        for seed in 0..25 {
            let u = crate::samples::random_universal_family(seed, 6);
            let r = transversalize_family(&u, &TransversalizeOptions::default()).unwrap();
            let again = UniversalFamily::new(r.refined.iter().map(|f| f.map.clone()).collect()).unwrap();
            let r2 = transversalize_family(&again, &TransversalizeOptions::default()).unwrap();
            assert!(r2.base_subdivision.is_trivial(), "seed {seed}");
            assert!(r2.saturation.is_trivial(), "seed {seed}");
            assert_eq!(r2.target_expansion.total().len(), r.target_expansion.total().len(), "seed {seed}");
            for (a, b) in r.refined.iter().zip(&r2.refined) {
                assert_eq!(a.map.curve.graph, b.map.curve.graph, "seed {seed}");
            }
        }
    }

    #[test]
    fn pull_back_keeps_conclusions() {
        let f = li_family(&[[1, 0], [0, 1]]);
        let u = UniversalFamily::new(vec![f]).unwrap();
        let r = transversalize_family(&u, &TransversalizeOptions::default()).unwrap();
        let b = r.base().clone();
        let quad = b.maximal()[0];
        let ray = b.cone(quad).interior_point();
        let finer = crate::fan::stellar_subdivide(&b, quad, &ray).unwrap();
        let r2 = pull_back_result(&r, finer.fine()).unwrap();
        assert!(verify_conclusions(&r2).all_ok());
        assert_eq!(r2.base().maximal().len(), 3);
    }

    #[test]
    fn common_solution_of_stellar_refinements() {
        let f = li_family(&[[1, 1]]);
        let u = UniversalFamily::new(vec![f]).unwrap();
        let r = transversalize_family(&u, &TransversalizeOptions::default()).unwrap();
        assert!(r.base_subdivision.is_trivial());
        let same = common_solution(&r, &r).unwrap();
        assert_eq!(same.result.base().len(), r.base().len());
        let b = r.base().clone();
        let quad = b.maximal()[0];
        let a1 = pull_back_result(&r, crate::fan::stellar_subdivide(&b, quad, &qv(&[1, 2])).unwrap().fine()).unwrap();
        let a2 = pull_back_result(&r, crate::fan::stellar_subdivide(&b, quad, &qv(&[2, 1])).unwrap().fine()).unwrap();
        let c = common_solution(&a1, &a2).unwrap();
        assert!(verify_conclusions(&c.result).all_ok());
        assert_eq!(c.result.base().maximal().len(), 3);
        let c = common_solution(&r, &a1).unwrap();
        assert_eq!(std_maxes(c.result.base()), std_maxes(a1.base()));
    }

    #[test]
    fn pointwise_line_is_unchanged() {
        let fan = p2_fan();
        let curve = MetricCurve::contract(&Graph::new(1, vec![], vec![0, 0, 0]).unwrap(), &[0], vec![]);
        let legs = [[1, 0], [0, 1], [-1, -1]].iter().map(|d| (qv(d), 1)).collect();
        let line = RealizedMap { curve, positions: vec![qv(&[0, 0])], edges: vec![], legs };
        let p = transversalize_pointwise(&fan, &line).unwrap();
        assert_eq!(p.map.curve.graph.vertices, 1);
        transverse_to(&p.map, &p.cells).unwrap();
    }

    #[test]
    fn pointwise_interior_vertex() {
        let fan = p2_fan();
        let curve = MetricCurve::contract(&Graph::new(1, vec![], vec![0, 0]).unwrap(), &[0], vec![]);
        let legs = vec![(qv(&[1, 0]), 1), (qv(&[0, 1]), 1)];
        let m = RealizedMap { curve, positions: vec![qv(&[1, 2])], edges: vec![], legs };
        let p = transversalize_pointwise(&fan, &m).unwrap();
        assert!(p.cells.iter().any(|c| c.dim() == 0 && c.vertices == vec![qv(&[1, 2])]));
        transverse_to(&p.map, &p.cells).unwrap();
    }

    #[test]
    fn pull_back_to_curve_splits_crossing_edge() {
        let f = segment();
        let walls = Subdivision::of_fans(
            crate::fan::stellar_subdivide(&f.target, f.edges[0].cone, &qv(&[3, 2])).unwrap().fine().clone(),
            f.target.clone(),
        )
        .unwrap();
        let g = pull_back_to_curve(&f, walls.fine()).unwrap();
        assert_eq!(g.curve.graph.edges.len(), 2);
        assert_eq!(check_continuity(&g), None);
        let away = crate::fan::stellar_subdivide(&f.target, f.edges[0].cone, &qv(&[1, 3])).unwrap();
        let g = pull_back_to_curve(&f, away.fine()).unwrap();
        assert_eq!(g.curve.graph.edges.len(), 1);
    }
}
