//! Degenerations `π: Σ → R≥0`: extended complexes and their strata at infinity, the special
//! fiber, rigid types with multiplicities, cutting at infinite edges, gluing through evaluations,
//! smoothing, and the product modification by lifted stellar subdivisions.
//!
//! The total space `Σ` is an embedded fan in `R^n × R` with `π` the last coordinate. The fiber
//! over `t = 1` is the polyhedral complex `Σ_η`; its vertices are the horizontal rays of `Σ`.


use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::complex::*;
use crate::cone::*;
use crate::curve::*;
use crate::fan::*;
use crate::linalg::*;
use crate::map::*;
use crate::transversalize::{flatten_base, saturate_base_lattices, SaturationRecord, TransversalizeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DegenerationError {
    #[error("the projection does not surject onto R>=0")]
    NotSurjective,
    #[error("bounded edge {0} has finite length at infinity")]
    FiniteBoundedEdgeFound(usize),
    #[error("cone {0} of the ambient complex is not simplicial")]
    NotSimplicial(ConeId),
    #[error("evaluations at edge {0} differ")]
    EvaluationMismatch(usize),
    #[error("evaluation at edge {0} is not a vertex of its divisor")]
    EvaluationNotVertex(usize),
    #[error("not transverse: {0}")]
    NotTransverse(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
    #[error(transparent)]
    Transversalize(#[from] TransversalizeError),
}

impl From<ConeError> for DegenerationError {
    fn from(e: ConeError) -> Self {
        DegenerationError::Complex(e.into())
    }
}

type Result<T> = std::result::Result<T, DegenerationError>;

fn input<T>(s: impl Into<String>) -> Result<T> {
    Err(DegenerationError::Input(s.into()))
}

// ---------------------------------------------------------------------------------------------
// quotients and strata

/// Rows of an integral map `R^n → R^n / span`, surjective on lattices.
///
/// When `span` contains a ray `(v, 1)` with `v` integral the rows are `x_j - v_j t` composed
/// with a quotient of the remaining span, so component coordinates are the local affine chart
/// of the fiber at `v`.
pub fn quotient_matrix(span: &[QVec], n: usize) -> QMat {
    if rank_of(span) == 0 {
        return identity(n);
    }
    let chart_ray = span.iter().map(|r| primitive(r)).filter(|r| r[n - 1].is_one()).min();
    match chart_ray {
        Some(v) => {
            let chart: QMat = (0..n - 1)
                .map(|j| {
                    let mut row = unit(n, j);
                    row[n - 1] = -v[j].clone();
                    row
                })
                .collect();
            let rest: Vec<QVec> = span.iter().map(|s| mat_vec(&chart, s)).filter(|s| !is_zero(s)).collect();
            let inner = quotient_matrix_plain(&rest, n - 1);
            mat_mul(&inner, &chart, n)
        }
        None => quotient_matrix_plain(span, n),
    }
}

fn quotient_matrix_plain(span: &[QVec], n: usize) -> QMat {
    if rank_of(span) == 0 {
        return identity(n);
    }
    let ann: Vec<QVec> = nullspace(&span.to_vec(), n).iter().map(|v| primitive(v)).collect();
    saturation_basis(&ann, n)
}

/// A lift of `y` through `quotient` with last coordinate `t`.
pub fn lift_through(quotient: &QMat, y: &[Q], t: &Q) -> Option<QVec> {
    let n = quotient.first().map(|r| r.len())?;
    let mut m = quotient.clone();
    m.push(unit(n, n - 1));
    let mut b = y.to_vec();
    b.push(t.clone());
    solve(&m, &b, n)
}

/// The star of a cone `F` modulo its span: the stratum at infinity of the extended complex
/// where the coordinates along `F` are infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub face: ConeId,
    pub quotient: QMat,
    pub star: ConeComplex,
    /// For each cone of `star`, the cone of the ambient complex it is the image of.
    pub origin: Vec<ConeId>,
}

impl Stratum {
    pub fn dim(&self) -> usize {
        self.quotient.len()
    }

    pub fn project(&self, x: &[Q]) -> QVec {
        mat_vec(&self.quotient, x)
    }

    /// The cone of the star whose image is `c`, if `c` contains the face.
    pub fn cone_of(&self, c: ConeId) -> Option<ConeId> {
        self.origin.iter().position(|&o| o == c)
    }
}

/// The stratum of `face` using the canonical quotient.
pub fn stratum(c: &ConeComplex, face: ConeId) -> Result<Stratum> {
    let n = c.ambient().ok_or(ComplexError::NotEmbedded)?;
    let qm = quotient_matrix(c.cone(face).rays(), n);
    stratum_with(c, face, qm)
}

/// The stratum of `face` for a given quotient map (rows annihilating the face).
pub fn stratum_with(c: &ConeComplex, face: ConeId, quotient: QMat) -> Result<Stratum> {
    let m = quotient.len();
    let over: Vec<ConeId> = (0..c.len()).filter(|&g| g == face || c.is_face(face, g)).collect();
    let image = |g: ConeId| -> Result<Cone> {
        let rays: Vec<QVec> = c.cone(g).rays().iter().map(|r| mat_vec(&quotient, r)).filter(|r| !is_zero(r)).collect();
        Ok(Cone::new(m, rays)?)
    };
    let images = over.iter().map(|&g| image(g)).collect::<Result<Vec<_>>>()?;
    let star = ConeComplex::from_fan(m, images.clone())?;
    let origin = (0..star.len())
        .map(|s| {
            let i = images.iter().position(|im| im == star.cone(s)).expect("star cone is an image");
            over[i]
        })
        .collect();
    Ok(Stratum { face, quotient, star, origin })
}

/// A point of the extended complex: a finite point of the stratum of `face`, or of the interior
/// when `face` is `None`. Infinity never appears as a coordinate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExtendedPoint {
    pub face: Option<ConeId>,
    pub point: QVec,
}

/// A cone complex with its strata at infinity, one per nonzero cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedComplex {
    pub interior: ConeComplex,
    pub strata: Vec<Stratum>,
}

pub fn extend(sigma: &ConeComplex) -> Result<ExtendedComplex> {
    let strata = (0..sigma.len()).filter(|&f| sigma.cone(f).dim() > 0).map(|f| stratum(sigma, f)).collect::<Result<Vec<_>>>()?;
    Ok(ExtendedComplex { interior: sigma.clone(), strata })
}

impl ExtendedComplex {
    pub fn stratum(&self, face: ConeId) -> Option<&Stratum> {
        self.strata.iter().find(|s| s.face == face)
    }

    /// Pairs `(σ, F)` with `F` a nonzero face of `σ`: the faces at infinity of each extended cone.
    pub fn faces_at_infinity(&self) -> Vec<(ConeId, ConeId)> {
        let c = &self.interior;
        let mut out = Vec::new();
        for s in 0..c.len() {
            for st in &self.strata {
                if st.face == s || c.is_face(st.face, s) {
                    out.push((s, st.face));
                }
            }
        }
        out
    }

    /// Whether the stratum of `g` lies in the closure of the stratum of `f` (reverses the face
    /// order of the cones).
    pub fn in_closure(&self, f: ConeId, g: ConeId) -> bool {
        f == g || self.interior.is_face(f, g)
    }

    /// `lim x + λ d` as `λ → ∞`.
    pub fn limit(&self, x: &[Q], d: &[Q]) -> Result<ExtendedPoint> {
        if is_zero(d) {
            return Ok(ExtendedPoint { face: None, point: x.to_vec() });
        }
        let face = self.interior.locate(d).ok_or(ComplexError::OutsideSupport)?;
        let st = self.stratum(face).expect("nonzero cone has a stratum");
        Ok(ExtendedPoint { face: Some(face), point: st.project(x) })
    }
}

// ---------------------------------------------------------------------------------------------
// degenerations and the special fiber

/// A family `π: Σ → R≥0`, `π` the last coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalDegeneration {
    pub projection: ComplexMorphism,
}

impl TropicalDegeneration {
    pub fn new(total: ConeComplex) -> Result<Self> {
        let n = total.ambient().ok_or(ComplexError::NotEmbedded)?;
        if n == 0 {
            return Err(DegenerationError::NotSurjective);
        }
        let pi = vec![unit(n, n - 1)];
        let projection = ComplexMorphism::linear(total, ray_base(), pi).map_err(|_| DegenerationError::NotSurjective)?;
        let d = TropicalDegeneration { projection };
        if d.vertices().is_empty() {
            return Err(DegenerationError::NotSurjective);
        }
        Ok(d)
    }

    pub fn total(&self) -> &ConeComplex {
        &self.projection.source
    }

    /// Dimension of the fibers' ambient space.
    pub fn fiber_ambient(&self) -> usize {
        self.total().ambient().expect("embedded") - 1
    }

    /// Rays with positive height, with the vertex of `Σ_η` they pass through.
    pub fn vertices(&self) -> Vec<(ConeId, QVec)> {
        let c = self.total();
        let n = self.fiber_ambient();
        (0..c.len())
            .filter(|&i| c.cone(i).dim() == 1 && c.cone(i).rays()[0][n].is_positive())
            .map(|i| {
                let r = &c.cone(i).rays()[0];
                (i, scale(&r[n].recip(), &r[..n]))
            })
            .collect()
    }

    /// Cells of `Σ_η` at height `t`, in `R^n`.
    pub fn fiber_cells(&self, t: &Q) -> Vec<Cell> {
        let n = self.fiber_ambient();
        let mut cells: Vec<Cell> = fiber(&self.projection, t)
            .expect("base is the ray")
            .into_iter()
            .map(|c| Cell { source: c.source, vertices: c.vertices.iter().map(|v| v[..n].to_vec()).collect(), rays: c.rays.iter().map(|v| v[..n].to_vec()).collect() })
            .collect();
        cells.sort();
        cells
    }

    pub fn generic_fiber(&self) -> Vec<Cell> {
        self.fiber_cells(&Q::one())
    }

    /// Largest dimension of a cell of the generic fiber.
    pub fn max_fiber_dim(&self) -> usize {
        self.generic_fiber().iter().map(|c| c.dim()).max().unwrap_or(0)
    }

    pub fn special_fiber(&self) -> Result<SpecialFiber> {
        let c = self.total();
        let vs = self.vertices();
        let mut components = Vec::new();
        for (ray, vertex) in &vs {
            components.push(Component { ray: *ray, vertex: vertex.clone(), stratum: stratum(c, *ray)? });
        }
        let mut divisors = Vec::new();
        for e in 0..c.len() {
            let cone = c.cone(e);
            if cone.dim() != 2 {
                continue;
            }
            let ends: Vec<usize> = cone.rays().iter().filter_map(|r| vs.iter().position(|(i, _)| c.cone(*i).rays()[0] == *r)).collect();
            if ends.len() != 2 {
                continue;
            }
            let (a, b) = (ends[0].min(ends[1]), ends[0].max(ends[1]));
            let u = sub(&vs[b].1, &vs[a].1);
            divisors.push(GluingDivisor { cone: e, ends: (a, b), direction: primitive(&u), length: lattice_length(&u), stratum: stratum(c, e)? });
        }
        Ok(SpecialFiber { components, divisors })
    }

    /// The base change `t ↦ k t`: the generic fiber is scaled by `k`.
    pub fn base_change(&self, k: u32) -> Result<Self> {
        let c = self.total();
        let n = self.fiber_ambient();
        let kq = q(k as i64);
        let cones = c
            .maximal_cones()
            .iter()
            .map(|s| {
                let rays = s.rays().iter().map(|r| {
                    let mut r = r.clone();
                    r[n] = &r[n] / &kq;
                    primitive(&r)
                });
                Cone::new(n + 1, rays.collect())
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        TropicalDegeneration::new(ConeComplex::from_fan(n + 1, cones)?)
    }
}

/// The component of the special fiber through the vertex `vertex` of `Σ_η`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub ray: ConeId,
    pub vertex: QVec,
    pub stratum: Stratum,
}

/// The divisor along which two components meet, one per bounded edge of `Σ_η`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingDivisor {
    pub cone: ConeId,
    pub ends: (usize, usize),
    /// Primitive direction from `ends.0` to `ends.1`.
    pub direction: QVec,
    /// Lattice length of the bounded edge at height 1.
    pub length: Q,
    pub stratum: Stratum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialFiber {
    pub components: Vec<Component>,
    pub divisors: Vec<GluingDivisor>,
}

impl SpecialFiber {
    pub fn component_of_ray(&self, ray: ConeId) -> Option<usize> {
        self.components.iter().position(|c| c.ray == ray)
    }

    pub fn divisor_of_cone(&self, cone: ConeId) -> Option<usize> {
        self.divisors.iter().position(|d| d.cone == cone)
    }

    pub fn divisor_between(&self, a: usize, b: usize) -> Option<usize> {
        self.divisors.iter().position(|d| d.ends == (a.min(b), a.max(b)))
    }

    pub fn is_connected(&self) -> bool {
        let g = Graph { vertices: self.components.len(), edges: self.divisors.iter().map(|d| d.ends).collect(), legs: vec![] };
        self.components.is_empty() || g.components() == 1
    }

    /// For divisor `d` and one of its ends, the ray of that component's star pointing to it.
    pub fn divisor_ray(&self, d: usize, end: usize) -> Option<ConeId> {
        let div = &self.divisors[d];
        self.components[end].stratum.cone_of(div.cone)
    }
}

/// Splits every non-simplicial maximal cone by pulling its least ray. Proper faces must be
/// simplicial, which holds for fans in dimension at most 3.
pub fn triangulate(c: &ConeComplex) -> Result<ConeComplex> {
    let n = c.ambient().ok_or(ComplexError::NotEmbedded)?;
    let mut out = Vec::new();
    for m in c.maximal() {
        let s = c.cone(m);
        if s.is_simplicial() {
            out.push(s.clone());
            continue;
        }
        let r0 = s.rays().iter().min().expect("nonzero cone").clone();
        for g in s.facet_cones() {
            if g.rays().contains(&r0) {
                continue;
            }
            if !g.is_simplicial() {
                return Err(DegenerationError::NotSimplicial(c.find(&g).unwrap_or(m)));
            }
            let mut rays = g.rays().to_vec();
            rays.push(r0.clone());
            out.push(Cone::new(n, rays)?);
        }
    }
    Ok(ConeComplex::from_fan(n, out)?)
}

// ---------------------------------------------------------------------------------------------
// rigid types

/// A combinatorial type whose moduli cone is a ray surjecting onto `R≥0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidType {
    pub ty: CombinatorialType,
    pub moduli: ModuliCone,
    /// Primitive generator of the moduli ray.
    pub generator: QVec,
    /// Index of `π(generator)` in `Z`.
    pub m_rho: u64,
    pub aut_order: usize,
}

impl RigidType {
    /// `None` when the type is infeasible, not rigid, or vertical.
    pub fn new(d: &TropicalDegeneration, ty: &CombinatorialType) -> Result<Option<Self>> {
        Self::constrained(d, ty, &[])
    }

    /// As [`RigidType::new`], with vertex `v` required to pass through the point `p` of the fiber
    /// at height 1 for each `(v, p)`.
    pub fn constrained(d: &TropicalDegeneration, ty: &CombinatorialType, points: &[(usize, QVec)]) -> Result<Option<Self>> {
        let target = d.total();
        if ty.graph.vertices == 0 {
            return input("type without vertices");
        }
        let n = d.fiber_ambient();
        // with point conditions the cone is usually a ray, so skip the unconstrained cone
        let (cone, offsets) = if points.is_empty() {
            match moduli_cone(ty, target) {
                Ok(mc) => (mc.cone, mc.offsets),
                Err(MapError::InfeasibleType) => return Ok(None),
                Err(e) => return Err(e.into()),
            }
        } else {
            let mut sys = match moduli_system(ty, target) {
                Ok(s) => s,
                Err(MapError::InfeasibleType) => return Ok(None),
                Err(e) => return Err(e.into()),
            };
            for (v, p) in points {
                let off = sys.offsets[*v];
                for j in 0..n {
                    let mut row = zeros(sys.dim);
                    row[off + j] = Q::one();
                    row[off + n] = -p[j].clone();
                    sys.eqs.push(row);
                }
            }
            match Cone::from_inequalities(sys.dim, &sys.ineqs, &sys.eqs) {
                Ok(c) => (c, sys.offsets),
                Err(_) => return Ok(None),
            }
        };
        let dim = cone.ambient();
        let mc = ModuliCone { ty: ty.clone(), cone, offsets };
        if mc.cone.dim() != 1 {
            return Ok(None);
        }
        let g = mc.cone.rays()[0].clone();
        let height = mc.offsets[0] + n;
        let mut pi = zeros(dim);
        pi[height] = Q::one();
        if !dot(&pi, &g).is_positive() {
            return Ok(None);
        }
        // the open type locus must survive the point conditions
        let pos = mc.positions(&g);
        let lens = mc.lengths(&g);
        let open = (0..ty.graph.vertices).all(|v| target.cone(ty.vertex_cone[v]).in_relint(&pos[v])) && lens.iter().all(|l| l.is_positive());
        if !open {
            return Ok(None);
        }
        let m_rho = match lattice_index(&IntegralLinearMap::standard(vec![pi], dim), &mc.cone) {
            Index::Finite(i) => i.to_u64().expect("index fits in u64"),
            Index::Infinite => return Ok(None),
        };
        let aut_order = automorphisms(ty).order;
        Ok(Some(RigidType { ty: ty.clone(), moduli: mc, generator: g, m_rho, aut_order }))
    }

    /// Height of the generator: every vertex lies over `π(generator)`.
    fn height(&self) -> Q {
        let n = self.moduli.offsets[1] - self.moduli.offsets[0] - 1;
        self.generator[self.moduli.offsets[0] + n].clone()
    }

    /// Vertex positions over height 1.
    pub fn positions(&self) -> Vec<QVec> {
        let h = self.height().recip();
        self.moduli.positions(&self.generator).iter().map(|p| scale(&h, p)).collect()
    }

    /// Edge lengths over height 1.
    pub fn lengths(&self) -> Vec<Q> {
        let h = self.height();
        self.moduli.lengths(&self.generator).iter().map(|l| l / &h).collect()
    }

    /// `m_ρ / |Aut|`.
    pub fn weight(&self) -> Q {
        Q::new(BigInt::from(self.m_rho), BigInt::from(self.aut_order))
    }

    /// The family over the moduli ray, parametrized by height.
    pub fn family(&self, d: &TropicalDegeneration) -> Result<TropicalMapFamily> {
        let positions = self.positions();
        let lengths = self.lengths();
        family_over_height(d, &self.ty, &positions, &lengths)
    }
}

/// The family of a type over `R≥0` with the given positions and lengths at height 1, over the
/// coarsest base lattice making them integral.
fn family_over_height(d: &TropicalDegeneration, ty: &CombinatorialType, positions: &[QVec], lengths: &[Q]) -> Result<TropicalMapFamily> {
    let mut covs: Vec<QVec> = lengths.iter().map(|l| vec![l.clone()]).collect();
    covs.extend(positions.iter().flatten().map(|x| vec![x.clone()]));
    let base = Cone::with_lattice(Lattice::standard(1).refine_by(&covs), vec![qv(&[1])])?;
    let curve = TropicalCurveFamily::new(ty.graph.clone(), ty.genus.clone(), base, lengths.iter().map(|l| vec![l.clone()]).collect())?;
    let pos = positions.iter().map(|p| p.iter().map(|x| vec![x.clone()]).collect()).collect();
    Ok(TropicalMapFamily::new(curve, d.total().clone(), ty.vertex_cone.clone(), pos, ty.edges.clone(), ty.legs.clone())?)
}

/// The rigid types among `types`, in order.
pub fn enumerate_rigid_types(d: &TropicalDegeneration, types: &[CombinatorialType]) -> Result<Vec<RigidType>> {
    let mut out = Vec::new();
    for t in types {
        if let Some(r) = RigidType::new(d, t)? {
            out.push(r);
        }
    }
    Ok(out)
}

/// `∏ m_e` over the bounded edges.
pub fn mu_degree(t: &RigidType) -> u64 {
    t.ty.edges.iter().filter(|e| e.m > 0).map(|e| e.m as u64).product()
}

/// What a bounded edge or leg becomes at the point at infinity of a rigid ray.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AtInfinity {
    MarkedRay { leg: usize },
    InfiniteEdge { edge: usize },
}

/// Classifies the edges and legs of a family over a ray at its point at infinity.
pub fn check_edges_at_infinity(f: &TropicalMapFamily) -> Result<Vec<AtInfinity>> {
    let base = &f.curve.base;
    if base.dim() != 1 {
        return input("family is not over a ray");
    }
    let g = &base.rays()[0];
    let mut out = Vec::new();
    for (e, l) in f.curve.lengths.iter().enumerate() {
        if !dot(l, g).is_positive() {
            return Err(DegenerationError::FiniteBoundedEdgeFound(e));
        }
        out.push(AtInfinity::InfiniteEdge { edge: e });
    }
    out.extend((0..f.curve.graph.legs.len()).map(|leg| AtInfinity::MarkedRay { leg }));
    Ok(out)
}

// ---------------------------------------------------------------------------------------------
// cutting

/// Where a leg of a component map comes from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LegOrigin {
    Leg(usize),
    /// Half of the cut bounded edge.
    Node(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLeg {
    /// Original vertex id.
    pub vertex: usize,
    /// Direction in the component's coordinates.
    pub dir: QVec,
    pub m: u32,
    pub origin: LegOrigin,
}

/// The part of a cut curve mapping to one component: a disjoint union of stars, with vertex
/// positions linear over `base` in the component's coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentMap {
    pub component: usize,
    pub vertices: Vec<usize>,
    pub genus: Vec<u32>,
    pub base: Cone,
    pub positions: Vec<QMat>,
    pub legs: Vec<ComponentLeg>,
}

impl ComponentMap {
    fn local(&self, v: usize) -> usize {
        self.vertices.iter().position(|&x| x == v).expect("vertex of this piece")
    }

    pub fn position_of(&self, v: usize, b: &[Q]) -> QVec {
        mat_vec(&self.positions[self.local(v)], b)
    }

    /// The map at base point `b` as a realized map in the component's coordinates.
    pub fn realize(&self, b: &[Q]) -> RealizedMap {
        let nv = self.vertices.len();
        let legs: Vec<usize> = self.legs.iter().map(|l| self.local(l.vertex)).collect();
        let graph = Graph { vertices: nv, edges: vec![], legs };
        RealizedMap {
            curve: MetricCurve { graph, genus: self.genus.clone(), lengths: vec![] },
            positions: self.positions.iter().map(|p| mat_vec(p, b)).collect(),
            edges: vec![],
            legs: self.legs.iter().map(|l| (l.dir.clone(), l.m)).collect(),
        }
    }

    /// The piece as a family of maps into the component's star fan.
    pub fn family(&self, sf: &SpecialFiber) -> Result<TropicalMapFamily> {
        let star = &sf.components[self.component].stratum.star;
        let n = star.ambient().expect("embedded");
        let c = self.base.interior_point();
        let legs: Vec<usize> = self.legs.iter().map(|l| self.local(l.vertex)).collect();
        let graph = Graph::new(self.vertices.len(), vec![], legs)?;
        let curve = TropicalCurveFamily::new(graph, self.genus.clone(), self.base.clone(), vec![])?;
        let at: Vec<QVec> = self.positions.iter().map(|p| mat_vec(p, &c)).collect();
        let locate = |x: &[Q]| star.locate(x).ok_or_else(|| DegenerationError::Input("piece leaves its component".into()));
        let vertex_cone = at.iter().map(|x| locate(x)).collect::<Result<Vec<_>>>()?;
        let mut leg_data = Vec::new();
        for l in &self.legs {
            if l.m == 0 {
                leg_data.push(EdgeData::contracted(vertex_cone[self.local(l.vertex)], n));
            } else {
                leg_data.push(EdgeData::new(locate(&add(&at[self.local(l.vertex)], &l.dir))?, l.dir.clone(), l.m));
            }
        }
        Ok(TropicalMapFamily::new(curve, star.clone(), vertex_cone, self.positions.clone(), vec![], leg_data)?)
    }
}

/// A cut bounded edge: its divisor and the original vertices it joined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodePair {
    pub edge: usize,
    pub divisor: usize,
    pub m: u32,
    pub ends: (usize, usize),
    pub pieces: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutMap {
    pub pieces: Vec<ComponentMap>,
    /// One per bounded edge, in edge order.
    pub nodes: Vec<NodePair>,
    pub num_vertices: usize,
    pub leg_vertices: Vec<usize>,
}

impl CutMap {
    pub fn piece_of(&self, v: usize) -> usize {
        self.pieces.iter().position(|p| p.vertices.contains(&v)).expect("every vertex lies in a piece")
    }
}

/// Splits the limit of a rigid family at its infinite bounded edges, one piece per component
/// met by the curve.
pub fn cut(d: &TropicalDegeneration, sf: &SpecialFiber, f: &TropicalMapFamily) -> Result<CutMap> {
    if f.target != *d.total() {
        return input("family does not map to the degeneration");
    }
    check_edges_at_infinity(f)?;
    let g = &f.curve.graph;
    let c = d.total();
    let comp_of = (0..g.vertices)
        .map(|v| {
            sf.component_of_ray(f.vertex_cone[v])
                .ok_or_else(|| DegenerationError::NotTransverse(format!("vertex {v} does not lie on a vertex of the generic fiber")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = comp_of.clone();
    order.sort();
    order.dedup();
    let mut pieces: Vec<ComponentMap> = order
        .iter()
        .map(|&k| {
            let vertices: Vec<usize> = (0..g.vertices).filter(|&v| comp_of[v] == k).collect();
            let m = sf.components[k].stratum.dim();
            ComponentMap {
                component: k,
                genus: vertices.iter().map(|&v| f.curve.genus[v]).collect(),
                positions: vertices.iter().map(|_| vec![vec![]; m]).collect(),
                vertices,
                base: Cone::zero(0),
                legs: vec![],
            }
        })
        .collect();
    let piece = |v: usize| order.iter().position(|&k| k == comp_of[v]).expect("component with a piece");
    let local_dir = |v: usize, dir: &QVec, m: u32| -> Result<(QVec, u32)> {
        let y = sf.components[comp_of[v]].stratum.project(dir);
        if is_zero(&y) {
            return Err(DegenerationError::NotTransverse(format!("a direction at vertex {v} is contracted in its component")));
        }
        let len = lattice_length(&y);
        if !len.is_integer() {
            return input("direction is not integral");
        }
        Ok((primitive(&y), m * len.to_integer().to_u32().expect("small expansion factor")))
    };
    let mut nodes = Vec::new();
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        let data = &f.edges[e];
        if data.m == 0 {
            return Err(DegenerationError::NotTransverse(format!("edge {e} is contracted")));
        }
        let divisor = sf
            .divisor_of_cone(data.cone)
            .ok_or_else(|| DegenerationError::NotTransverse(format!("edge {e} does not lie over a bounded edge of the generic fiber")))?;
        let ends = sf.divisors[divisor].ends;
        if (comp_of[a].min(comp_of[b]), comp_of[a].max(comp_of[b])) != ends {
            return Err(DegenerationError::NotTransverse(format!("edge {e} joins components its divisor does not")));
        }
        let (da, ma) = local_dir(a, &data.dir, data.m)?;
        let (db, mb) = local_dir(b, &neg(&data.dir), data.m)?;
        let (pa, pb) = (piece(a), piece(b));
        pieces[pa].legs.push(ComponentLeg { vertex: a, dir: da, m: ma, origin: LegOrigin::Node(e) });
        pieces[pb].legs.push(ComponentLeg { vertex: b, dir: db, m: mb, origin: LegOrigin::Node(e) });
        nodes.push(NodePair { edge: e, divisor, m: data.m, ends: (a, b), pieces: (pa, pb) });
    }
    for (l, &v) in g.legs.iter().enumerate() {
        let data = &f.legs[l];
        let (dir, m) = if data.m == 0 { (zeros(sf.components[comp_of[v]].stratum.dim()), 0) } else { local_dir(v, &data.dir, data.m)? };
        pieces[piece(v)].legs.push(ComponentLeg { vertex: v, dir, m, origin: LegOrigin::Leg(l) });
    }
    let _ = c;
    Ok(CutMap { pieces, nodes, num_vertices: g.vertices, leg_vertices: g.legs.clone() })
}

// ---------------------------------------------------------------------------------------------
// gluing

/// Component maps at chosen base points whose evaluations agree at every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedConfiguration {
    pub cut: CutMap,
    pub base_points: Vec<QVec>,
    /// Evaluation of each node in its divisor's coordinates.
    pub evaluations: Vec<QVec>,
}

/// Checks the evaluations at every node: both sides must agree and land on a vertex of the
/// divisor's fiber (the origin when there is no modification).
pub fn glue(sf: &SpecialFiber, cut: &CutMap, base_points: &[QVec], modification: Option<&ModifiedProduct>) -> Result<GluedConfiguration> {
    if base_points.len() != cut.pieces.len() {
        return input("one base point per piece is required");
    }
    for (p, b) in cut.pieces.iter().zip(base_points) {
        if b.len() != p.base.ambient() || !p.base.contains(b) {
            return input("base point outside its piece's base");
        }
    }
    let mut evaluations = Vec::new();
    for node in &cut.nodes {
        let div = &sf.divisors[node.divisor];
        let ev = |v: usize, piece: usize| -> QVec {
            let p = &cut.pieces[piece];
            let y = p.position_of(v, &base_points[piece]);
            let x = lift_through(&sf.components[p.component].stratum.quotient, &y, &Q::zero()).expect("quotient is surjective");
            div.stratum.project(&x)
        };
        let a = ev(node.ends.0, node.pieces.0);
        let b = ev(node.ends.1, node.pieces.1);
        if a != b {
            return Err(DegenerationError::EvaluationMismatch(node.edge));
        }
        let ok = match modification {
            None => is_zero(&a),
            Some(m) => m.divisor_vertices(sf, node.divisor, &m.global_point(base_points)).contains(&a),
        };
        if !ok {
            return Err(DegenerationError::EvaluationNotVertex(node.edge));
        }
        evaluations.push(a);
    }
    Ok(GluedConfiguration { cut: cut.clone(), base_points: base_points.to_vec(), evaluations })
}

// ---------------------------------------------------------------------------------------------
// smoothing

/// Reassembles a glued configuration into a family over `R≥0`: vertices move along their
/// component rays and each node becomes an edge of length `ℓ_e / m_e` over the bounded edge of
/// the generic fiber.
pub fn smooth(d: &TropicalDegeneration, sf: &SpecialFiber, g: &GluedConfiguration) -> Result<TropicalMapFamily> {
    let cut = &g.cut;
    let n = d.fiber_ambient();
    let c = d.total();
    let nv = cut.num_vertices;
    let mut comp = vec![0; nv];
    let mut genus = vec![0; nv];
    for (i, p) in cut.pieces.iter().enumerate() {
        for (j, &v) in p.vertices.iter().enumerate() {
            if !is_zero(&p.position_of(v, &g.base_points[i])) {
                return Err(DegenerationError::NotTransverse(format!("vertex {v} is not at its component's vertex")));
            }
            comp[v] = p.component;
            genus[v] = p.genus[j];
        }
    }
    let height1 = |v: usize| -> QVec {
        let mut x = sf.components[comp[v]].vertex.clone();
        x.push(Q::one());
        x
    };
    let positions: Vec<QVec> = (0..nv).map(height1).collect();
    let vertex_cone: Vec<ConeId> = (0..nv).map(|v| sf.components[comp[v]].ray).collect();
    let mut edges = Vec::new();
    let mut edge_data = Vec::new();
    let mut lengths = Vec::new();
    for node in &cut.nodes {
        let (a, b) = node.ends;
        let u = sub(&sf.components[comp[b]].vertex, &sf.components[comp[a]].vertex);
        let mut dir = primitive(&u);
        dir.push(Q::zero());
        edges.push((a, b));
        edge_data.push(EdgeData::new(sf.divisors[node.divisor].cone, dir, node.m));
        lengths.push(lattice_length(&u) / q(node.m as i64));
    }
    let mut leg_data = Vec::new();
    for (l, &v) in cut.leg_vertices.iter().enumerate() {
        let p = &cut.pieces[cut.piece_of(v)];
        let leg = p.legs.iter().find(|x| x.origin == LegOrigin::Leg(l)).ok_or_else(|| DegenerationError::Input(format!("leg {l} missing")))?;
        if leg.m == 0 {
            leg_data.push(EdgeData::contracted(vertex_cone[v], n + 1));
            continue;
        }
        let x = lift_through(&sf.components[comp[v]].stratum.quotient, &scale(&q(leg.m as i64), &leg.dir), &Q::zero()).expect("quotient is surjective");
        let len = lattice_length(&x);
        if !len.is_integer() {
            return input(format!("leg {l} lifts to a non-integral direction"));
        }
        let dir = primitive(&x);
        let cone = c.locate(&add(&positions[v], &dir)).ok_or(ComplexError::OutsideSupport)?;
        leg_data.push(EdgeData::new(cone, dir, len.to_integer().to_u32().expect("small expansion factor")));
    }
    let graph = Graph::new(nv, edges, cut.leg_vertices.clone())?;
    let ty = CombinatorialType {
        graph,
        genus,
        vertex_cone,
        edges: edge_data,
        legs: leg_data,
        leg_marked: vec![true; cut.leg_vertices.len()],
        degree: vec![String::new(); nv],
    };
    let f = family_over_height(d, &ty, &positions, &lengths)?;
    if let Some(e) = check_continuity(&f) {
        return input(format!("smoothed family is discontinuous at edge {e}"));
    }
    Ok(f)
}

/// The smoothed family realized at height `eta`.
pub fn smooth_at(f: &TropicalMapFamily, eta: &Q) -> Result<RealizedMap> {
    Ok(realize_map(f, std::slice::from_ref(eta))?)
}

// ---------------------------------------------------------------------------------------------
// lifted stellar subdivisions

/// A stellar subdivision of the interior and the ray it was made at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedStellar {
    pub subdivision: Subdivision,
    pub ray: QVec,
}

/// The stellar subdivision of the interior at the lift `Σ a_i g_i + weight · Σ f` of a point
/// `Σ a_i ḡ_i` of the stratum of `face` (`f` the rays of the face, `g_i` the other rays of the
/// carrying cone). Weight 1 lifts points, weight 0 lifts directions. `None` when the point lies
/// on a ray of the stratum, where the induced subdivision is trivial.
pub fn lift_stellar_to_interior(total: &ConeComplex, face: ConeId, point: &[Q], weight: &Q) -> Result<Option<LiftedStellar>> {
    let st = stratum(total, face)?;
    lift_stellar_in(total, &st, point, weight)
}

fn lift_stellar_in(total: &ConeComplex, st: &Stratum, point: &[Q], weight: &Q) -> Result<Option<LiftedStellar>> {
    let n = total.ambient().ok_or(ComplexError::NotEmbedded)?;
    let s = st.star.locate(point).ok_or_else(|| DegenerationError::Input("point outside the stratum".into()))?;
    if st.star.cone(s).dim() <= 1 {
        return Ok(None);
    }
    let tau = st.origin[s];
    for m in total.maximal() {
        if (m == tau || total.is_face(tau, m)) && !total.cone(m).is_simplicial() {
            return Err(DegenerationError::NotSimplicial(m));
        }
    }
    let face_rays = total.cone(st.face).rays().to_vec();
    let others: Vec<QVec> = total.cone(tau).rays().iter().filter(|r| !face_rays.contains(r)).cloned().collect();
    let images: Vec<QVec> = others.iter().map(|r| st.project(r)).collect();
    let a = span_coefficients(&images, point).ok_or_else(|| DegenerationError::Input("point outside its cone's span".into()))?;
    let mut ray = scale(weight, &sum(&face_rays, n));
    let mut carrier: Vec<QVec> = if weight.is_positive() { face_rays.clone() } else { vec![] };
    for (ai, g) in a.iter().zip(&others) {
        if ai.is_positive() {
            ray = add(&ray, &scale(ai, g));
            carrier.push(g.clone());
        }
    }
    if carrier.len() <= 1 {
        return Ok(None);
    }
    let id = total.find(&Cone::new(n, carrier)?).expect("face of a cone in the complex");
    let ray = primitive(&ray);
    let subdivision = stellar_subdivide(total, id, &ray)?;
    Ok(Some(LiftedStellar { subdivision, ray }))
}

// ---------------------------------------------------------------------------------------------
// product modification

/// `K × Σ` subdivided by lifted stellars until every component map is transverse inside its
/// stratum, with `K` the product of the pieces' bases (each a point or the ray).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModifiedProduct {
    /// The unmodified total space `Σ`.
    pub sigma: ConeComplex,
    pub total: ConeComplex,
    /// Dimension of `K`; its coordinates come first.
    pub k: usize,
    /// The coordinate of `K` carrying each piece's base, if any.
    pub coordinates: Vec<Option<usize>>,
    /// Rays added, in order.
    pub stellars: Vec<QVec>,
    /// The flattened and saturated projection to `K`, when `K` is not a point.
    pub to_base: Option<ComplexMorphism>,
    pub saturation: Option<SaturationRecord>,
    /// Axioms 1 to 3 of a tropical expansion for the projection to `K`.
    pub axioms: Vec<AxiomResult>,
}

fn block_quotient(k: usize, q_sigma: &QMat) -> QMat {
    let n1 = q_sigma.first().map(|r| r.len()).unwrap_or(0);
    let mut rows: QMat = (0..k).map(|i| unit(k + n1, i)).collect();
    for r in q_sigma {
        let mut row = zeros(k);
        row.extend(r.iter().cloned());
        rows.push(row);
    }
    rows
}

fn lift_ray(k: usize, r: &[Q]) -> QVec {
    let mut x = zeros(k);
    x.extend(r.iter().cloned());
    x
}

fn orthant(k: usize) -> Result<ConeComplex> {
    let c = if k == 0 { Cone::zero(0) } else { Cone::new(k, (0..k).map(|i| unit(k, i)).collect())? };
    Ok(ConeComplex::from_fan(k, vec![c])?)
}

fn product_with_orthant(sigma: &ConeComplex, k: usize) -> Result<ConeComplex> {
    let n1 = sigma.ambient().ok_or(ComplexError::NotEmbedded)?;
    let cones = sigma
        .maximal_cones()
        .iter()
        .map(|s| {
            let mut rays: Vec<QVec> = (0..k).map(|i| unit(k + n1, i)).collect();
            rays.extend(s.rays().iter().map(|r| lift_ray(k, r)));
            Cone::new(k + n1, rays)
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(ConeComplex::from_fan(k + n1, cones)?)
}

impl ModifiedProduct {
    /// The stratum of `{0} × c` for a cone `c` of `Σ`, with quotient `id_K ⊕ q_sigma`.
    fn product_stratum(&self, c: ConeId, q_sigma: &QMat) -> Result<Stratum> {
        let n = self.total.ambient().expect("embedded");
        let lifted = Cone::new(n, self.sigma.cone(c).rays().iter().map(|r| lift_ray(self.k, r)).collect())?;
        let id = self.total.find(&lifted).ok_or_else(|| DegenerationError::Input("cone was subdivided by the modification".into()))?;
        stratum_with(&self.total, id, block_quotient(self.k, q_sigma))
    }

    /// The point of `K` made of the pieces' base points.
    pub fn global_point(&self, base_points: &[QVec]) -> QVec {
        let mut b = zeros(self.k);
        for (c, p) in self.coordinates.iter().zip(base_points) {
            if let Some(i) = c {
                b[*i] = p[0].clone();
            }
        }
        b
    }

    /// Cells of a product stratum over the point `b` of `K`, without the `K` coordinates.
    fn stratum_cells(&self, st: &Stratum, b: &[Q]) -> Result<Vec<Cell>> {
        let m = st.dim();
        let k = self.k;
        let proj: QMat = (0..k).map(|i| unit(m, i)).collect();
        let base = orthant(k)?;
        let morph = ComplexMorphism::linear(st.star.clone(), base.clone(), proj)?;
        let bid = base.locate(b).ok_or(ComplexError::OutsideSupport)?;
        let mut cells: Vec<Cell> = fiber_at(&morph, bid, b)
            .into_iter()
            .map(|c| Cell { source: c.source, vertices: c.vertices.iter().map(|v| v[k..].to_vec()).collect(), rays: c.rays.iter().map(|v| v[k..].to_vec()).collect() })
            .collect();
        cells.sort();
        Ok(cells)
    }

    /// Cells of component `c` over the point `b` of `K`.
    pub fn component_cells(&self, sf: &SpecialFiber, c: usize, b: &[Q]) -> Result<Vec<Cell>> {
        let comp = &sf.components[c];
        let st = self.product_stratum(comp.ray, &comp.stratum.quotient)?;
        self.stratum_cells(&st, b)
    }

    /// Vertices of the divisor's fiber over `b`.
    pub fn divisor_vertices(&self, sf: &SpecialFiber, divisor: usize, b: &[Q]) -> Vec<QVec> {
        let div = &sf.divisors[divisor];
        let Ok(st) = self.product_stratum(div.cone, &div.stratum.quotient) else { return vec![] };
        let Ok(cells) = self.stratum_cells(&st, b) else { return vec![] };
        let mut out: Vec<QVec> = cells.into_iter().filter(|c| c.dim() == 0).map(|c| c.vertices[0].clone()).collect();
        out.sort();
        out
    }

    /// The modified degeneration when `K` is a point.
    pub fn degeneration(&self) -> Result<TropicalDegeneration> {
        if self.k != 0 {
            return input("the product has a positive-dimensional base");
        }
        TropicalDegeneration::new(self.total.clone())
    }
}

/// Subdivides `K × Σ` by lifted stellars at the vertex images and directions of the component
/// maps until each is transverse inside its stratum at sampled base points, then flattens and
/// saturates the projection to `K`. `Σ` must be simplicial (see [`triangulate`]).
pub fn modify_product(d: &TropicalDegeneration, sf: &SpecialFiber, pieces: &[ComponentMap]) -> Result<ModifiedProduct> {
    let sigma = d.total();
    let mut coordinates = Vec::new();
    let mut k = 0;
    for p in pieces {
        match (p.base.ambient(), p.base.dim()) {
            (0, _) => coordinates.push(None),
            (1, 1) if p.base.rays()[0][0].is_positive() => {
                coordinates.push(Some(k));
                k += 1;
            }
            _ => return input("piece bases must be a point or the ray"),
        }
    }
    let mut mp = ModifiedProduct {
        sigma: sigma.clone(),
        total: product_with_orthant(sigma, k)?,
        k,
        coordinates,
        stellars: vec![],
        to_base: None,
        saturation: None,
        axioms: vec![],
    };
    const MAX_ROUNDS: usize = 64;
    for _ in 0..MAX_ROUNDS {
        let mut changed = false;
        'pieces: for (i, p) in pieces.iter().enumerate() {
            let comp = &sf.components[p.component];
            let st = mp.product_stratum(comp.ray, &comp.stratum.quotient)?;
            let mut requests: Vec<(QVec, Q)> = Vec::new();
            if let Some(ci) = mp.coordinates[i] {
                for pos in &p.positions {
                    let col: QVec = pos.iter().map(|r| r[0].clone()).collect();
                    if !is_zero(&col) {
                        let mut pt = unit(k, ci);
                        pt.extend(col);
                        requests.push((pt, Q::one()));
                    }
                }
            }
            for l in p.legs.iter().filter(|l| l.m > 0) {
                requests.push((lift_ray(k, &l.dir), Q::zero()));
            }
            for (pt, w) in requests {
                if let Some(ls) = lift_stellar_in(&mp.total, &st, &pt, &w)? {
                    mp.total = ls.subdivision.fine().clone();
                    mp.stellars.push(ls.ray);
                    changed = true;
                    break 'pieces;
                }
            }
        }
        if !changed {
            break;
        }
    }
    for (i, p) in pieces.iter().enumerate() {
        let mut samples = base_samples(&p.base);
        samples.push(zeros(p.base.ambient()));
        for b in samples {
            let mut gp = vec![Q::one(); k];
            if let Some(ci) = mp.coordinates[i] {
                gp[ci] = b[0].clone();
            }
            let cells = mp.component_cells(sf, p.component, &gp)?;
            transverse_to(&p.realize(&b), &cells).map_err(|w| DegenerationError::NotTransverse(format!("piece {i}: {w}")))?;
        }
    }
    if k > 0 {
        let n = mp.total.ambient().expect("embedded");
        let proj: QMat = (0..k).map(|i| unit(n, i)).collect();
        let m = ComplexMorphism::linear(mp.total.clone(), orthant(k)?, proj)?;
        let fl = flatten_base(&m)?;
        let (m2, rec) = saturate_base_lattices(&fl.morphism)?;
        let to_target = ComplexMorphism::linear(m2.source.clone(), product_with_orthant(sigma, k)?, identity(n))?;
        let report = verify_expansion_axioms(&TropicalExpansion { to_target, to_base: m2.clone() });
        mp.axioms = report.axioms[..3].to_vec();
        mp.to_base = Some(m2);
        mp.saturation = Some(rec);
    }
    Ok(mp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn id_of(c: &ConeComplex, rays: &[&[i64]]) -> ConeId {
        let n = c.ambient().unwrap();
        c.find(&Cone::from_ints(n, rays)).expect("cone in complex")
    }

    /// A chain of vertices on the given rays of the line degeneration, joined by edges over the
    /// bounded edges between consecutive rays.
    fn p1_chain(d: &TropicalDegeneration, xs: &[i64], ms: &[u32]) -> CombinatorialType {
        let c = d.total();
        let nv = xs.len();
        let vertex_cone = xs.iter().map(|&x| id_of(c, &[&[x, 1]])).collect();
        let edges = (0..nv - 1)
            .map(|i| {
                let cone = id_of(c, &[&[xs[i], 1], &[xs[i + 1], 1]]);
                EdgeData::new(cone, qv(&[(xs[i + 1] - xs[i]).signum(), 0]), ms[i])
            })
            .collect();
        CombinatorialType {
            graph: Graph::new(nv, (0..nv - 1).map(|i| (i, i + 1)).collect(), vec![]).unwrap(),
            genus: vec![0; nv],
            vertex_cone,
            edges,
            legs: vec![],
            leg_marked: vec![],
            degree: vec![String::new(); nv],
        }
    }

    fn rigid(d: &TropicalDegeneration, t: &CombinatorialType) -> RigidType {
        RigidType::new(d, t).unwrap().expect("rigid")
    }

    #[test]
    fn extend_ray_and_zero_cone() {
        let e = extend(&ray_base()).unwrap();
        assert_eq!(e.strata.len(), 1);
        assert_eq!(e.strata[0].dim(), 0);
        let z = extend(&ConeComplex::from_fan(2, vec![Cone::zero(2)]).unwrap()).unwrap();
        assert!(z.strata.is_empty());
        assert!(z.faces_at_infinity().is_empty());
    }

    #[test]
    fn extend_p2() {
        let p2 = p2_fan();
        let e = extend(&p2).unwrap();
        assert_eq!(p2.maximal().len(), 3);
        assert_eq!(e.strata.len(), 6);
        for st in &e.strata {
            match p2.cone(st.face).dim() {
                // the stratum at infinity of a ray is a tropical line: two opposite rays
                1 => {
                    assert_eq!(st.dim(), 1);
                    assert_eq!(st.star.rays().len(), 2);
                    assert_eq!(st.star.maximal().len(), 2);
                }
                2 => assert_eq!(st.dim(), 0),
                _ => unreachable!(),
            }
        }
        // three rays with one face each, three 2-cones with three each
        assert_eq!(e.faces_at_infinity().len(), 12);
        let r = id_of(&p2, &[&[1, 0]]);
        let s = id_of(&p2, &[&[1, 0], &[0, 1]]);
        assert!(e.in_closure(r, s));
        assert!(!e.in_closure(s, r));
    }

    #[test]
    fn limits_land_in_strata() {
        let p2 = p2_fan();
        let e = extend(&p2).unwrap();
        let x = qv(&[3, 5]);
        let l = e.limit(&x, &qv(&[1, 2])).unwrap();
        assert_eq!(l.face, Some(id_of(&p2, &[&[1, 0], &[0, 1]])));
        assert!(l.point.is_empty());
        let l = e.limit(&x, &qv(&[2, 0])).unwrap();
        assert_eq!(l.face, Some(id_of(&p2, &[&[1, 0]])));
        assert_eq!(l.point.len(), 1);
        assert_eq!(l.point[0].abs(), q(5));
        assert_eq!(e.limit(&x, &zeros(2)).unwrap().face, None);
    }

    #[test]
    fn line_degenerates_into_three_components() {
        let d = p1_three_components();
        let sf = d.special_fiber().unwrap();
        assert_eq!(sf.components.len(), 3);
        assert_eq!(sf.divisors.len(), 2);
        assert!(sf.is_connected());
        for c in &sf.components {
            assert_eq!(c.stratum.dim(), 1);
            assert_eq!(c.stratum.star.rays().len(), 2);
        }
        let vs: Vec<QVec> = sf.components.iter().map(|c| c.vertex.clone()).collect();
        assert_eq!(vs, vec![qv(&[-1]), qv(&[0]), qv(&[1])]);
        for dv in &sf.divisors {
            assert_eq!(dv.stratum.dim(), 0);
            assert_eq!(dv.length, q(1));
        }
    }

    #[test]
    fn square_degenerates_into_four_planes() {
        let d = square_degeneration();
        let sf = d.special_fiber().unwrap();
        assert_eq!(sf.components.len(), 4);
        assert_eq!(sf.divisors.len(), 4);
        assert!(sf.is_connected());
        for c in &sf.components {
            let star = &c.stratum.star;
            assert_eq!(star.rays().len(), 3);
            assert_eq!(star.maximal().len(), 3);
            // a complete fan: the rays sum to zero
            assert!(is_zero(&sum(&star.rays(), 2)));
        }
        for dv in &sf.divisors {
            assert_eq!(dv.length, q(2));
            assert_eq!(dv.stratum.star.rays().len(), 2);
        }
    }

    #[test]
    fn plane_degenerates_with_a_triple_point() {
        let d = p2_four_planes();
        let sf = d.special_fiber().unwrap();
        assert_eq!(sf.components.len(), 4);
        assert_eq!(sf.divisors.len(), 3);
        assert_eq!(d.max_fiber_dim(), 2);
        for c in &sf.components {
            assert_eq!(c.stratum.star.maximal().len(), 3);
            assert!(is_zero(&sum(&c.stratum.star.rays(), 2)));
        }
        let center = sf.components.iter().position(|c| is_zero(&c.vertex)).unwrap();
        assert!(sf.divisors.iter().all(|dv| dv.ends.0 == center || dv.ends.1 == center));
    }

    #[test]
    fn constant_family_has_one_component() {
        let cones = p2_fan()
            .maximal_cones()
            .iter()
            .map(|c| {
                let mut rays: Vec<QVec> = c.rays().iter().map(|r| lift_ray(0, &[r.clone(), vec![Q::zero()]].concat())).collect();
                rays.push(qv(&[0, 0, 1]));
                Cone::new(3, rays).unwrap()
            })
            .collect();
        let d = TropicalDegeneration::new(ConeComplex::from_fan(3, cones).unwrap()).unwrap();
        let sf = d.special_fiber().unwrap();
        assert_eq!(sf.components.len(), 1);
        assert!(sf.divisors.is_empty());
        let mut got = sf.components[0].stratum.star.maximal_cones();
        let mut want = p2_fan().maximal_cones();
        got.sort();
        want.sort();
        assert_eq!(got, want);
        // a vertex free to move inside a cone, or sitting at height zero, is not rigid
        let c = d.total();
        let moving = CombinatorialType {
            graph: Graph::new(1, vec![], vec![]).unwrap(),
            genus: vec![0],
            vertex_cone: vec![id_of(c, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])],
            edges: vec![],
            legs: vec![],
            leg_marked: vec![],
            degree: vec![String::new()],
        };
        let mut vertical = moving.clone();
        vertical.vertex_cone = vec![id_of(c, &[&[1, 0, 0]])];
        assert!(enumerate_rigid_types(&d, &[moving, vertical]).unwrap().is_empty());
    }

    #[test]
    fn projection_must_be_surjective() {
        let flat = ConeComplex::from_fan(2, vec![Cone::from_ints(2, &[&[1, 0], &[-1, 1]])]);
        // the cone leaves t >= 0 only if it has a negative height; here it does not, but a
        // purely horizontal fan has no vertices
        let only_vertical = ConeComplex::from_fan(2, vec![Cone::from_ints(2, &[&[1, 0]])]).unwrap();
        assert_eq!(TropicalDegeneration::new(only_vertical), Err(DegenerationError::NotSurjective));
        let below = ConeComplex::from_fan(2, vec![Cone::from_ints(2, &[&[0, -1]])]).unwrap();
        assert_eq!(TropicalDegeneration::new(below), Err(DegenerationError::NotSurjective));
        assert!(TropicalDegeneration::new(flat.unwrap()).is_ok());
    }

    #[test]
    fn rigid_multiplicities_on_the_line() {
        let d = p1_three_components();
        for (m, want) in [(1, 1), (2, 2), (3, 3)] {
            let r = rigid(&d, &p1_chain(&d, &[-1, 0], &[m]));
            assert_eq!(r.m_rho, want);
            assert_eq!(r.aut_order, 1);
            assert_eq!(mu_degree(&r), m as u64);
        }
        let r = rigid(&d, &p1_chain(&d, &[-1, 0, 1], &[2, 3]));
        assert_eq!(r.m_rho, 6);
        assert_eq!(mu_degree(&r), 6);
        assert_eq!(r.lengths(), vec![qr(1, 2), qr(1, 3)]);
    }

    #[test]
    fn rigid_multiplicity_on_the_square() {
        let d = square_degeneration();
        let c = d.total();
        let top = id_of(c, &[&[1, 1, 1], &[-1, 1, 1]]);
        for (m, want) in [(1, 1), (2, 1), (3, 3)] {
            let t = CombinatorialType {
                graph: Graph::new(2, vec![(0, 1)], vec![]).unwrap(),
                genus: vec![0, 0],
                vertex_cone: vec![id_of(c, &[&[1, 1, 1]]), id_of(c, &[&[-1, 1, 1]])],
                edges: vec![EdgeData::new(top, qv(&[-1, 0, 0]), m)],
                legs: vec![],
                leg_marked: vec![],
                degree: vec![String::new(); 2],
            };
            assert_eq!(rigid(&d, &t).m_rho, want, "m = {m}");
        }
    }

    #[test]
    fn mu_degree_examples() {
        let d = p1_three_components();
        assert_eq!(mu_degree(&rigid(&d, &p1_chain(&d, &[-1, 0, 1], &[1, 1]))), 1);
        let d5 = d.base_change(5).unwrap();
        assert_eq!(mu_degree(&rigid(&d5, &p1_chain(&d5, &[-5, 0], &[5]))), 5);
    }

    #[test]
    fn edges_at_infinity() {
        let d = p1_three_components();
        let mut t = p1_chain(&d, &[-1, 0], &[1]);
        let zero = id_of(d.total(), &[&[0, 1]]);
        let leg_cone = id_of(d.total(), &[&[0, 1], &[1, 1]]);
        t.graph = Graph::new(2, vec![(0, 1)], vec![1]).unwrap();
        t.legs = vec![EdgeData::contracted(zero, 2)];
        t.leg_marked = vec![true];
        let f = rigid(&d, &t).family(&d).unwrap();
        assert_eq!(check_edges_at_infinity(&f).unwrap(), vec![AtInfinity::InfiniteEdge { edge: 0 }, AtInfinity::MarkedRay { leg: 0 }]);
        // two vertices on one ray joined by an edge of constant length zero
        let curve = TropicalCurveFamily::with_contracted(Graph::new(2, vec![(0, 1)], vec![]).unwrap(), vec![0, 0], Cone::from_ints(1, &[&[1]]), vec![qv(&[0])], vec![true]).unwrap();
        let pos = vec![vec![qv(&[0]), qv(&[1])]; 2];
        let f = TropicalMapFamily::new(curve, d.total().clone(), vec![zero, zero], pos, vec![EdgeData::contracted(zero, 2)], vec![]).unwrap();
        assert_eq!(check_edges_at_infinity(&f), Err(DegenerationError::FiniteBoundedEdgeFound(0)));
        let _ = leg_cone;
    }

    fn round_trip(d: &TropicalDegeneration, r: &RigidType) {
        let sf = d.special_fiber().unwrap();
        let f = r.family(d).unwrap();
        let cut_map = cut(d, &sf, &f).unwrap();
        let points: Vec<QVec> = cut_map.pieces.iter().map(|_| vec![]).collect();
        let glued = glue(&sf, &cut_map, &points, None).unwrap();
        let back = smooth(d, &sf, &glued).unwrap();
        assert_eq!(back, f);
        for eta in [qr(1, 2), q(1), q(2), qr(7, 3), q(10)] {
            assert_eq!(smooth_at(&back, &eta).unwrap(), realize_map(&f, &[eta]).unwrap());
        }
    }

    #[test]
    fn cut_the_line() {
        let d = p1_three_components();
        let sf = d.special_fiber().unwrap();
        let f = rigid(&d, &p1_chain(&d, &[-1, 0], &[1])).family(&d).unwrap();
        let c = cut(&d, &sf, &f).unwrap();
        assert_eq!(c.pieces.len(), 2);
        assert_eq!(c.nodes.len(), 1);
        assert_eq!(c.pieces[0].legs[0].dir, qv(&[1]));
        assert_eq!(c.pieces[1].legs[0].dir, qv(&[-1]));
        let f = rigid(&d, &p1_chain(&d, &[1, 0, -1], &[1, 2])).family(&d).unwrap();
        let c = cut(&d, &sf, &f).unwrap();
        assert_eq!((c.pieces.len(), c.nodes.len()), (3, 2));
        for p in &c.pieces {
            let fam = p.family(&sf).unwrap();
            assert_eq!(fam.curve.graph.vertices, 1);
        }
    }

    #[test]
    fn cut_without_nodes_is_one_piece() {
        let d = p1_three_components();
        let sf = d.special_fiber().unwrap();
        let c = d.total();
        let t = CombinatorialType {
            graph: Graph::new(1, vec![], vec![0, 0]).unwrap(),
            genus: vec![0],
            vertex_cone: vec![id_of(c, &[&[1, 1]])],
            edges: vec![],
            legs: vec![EdgeData::new(id_of(c, &[&[1, 1], &[1, 0]]), qv(&[1, 0]), 1), EdgeData::contracted(id_of(c, &[&[1, 1]]), 2)],
            leg_marked: vec![false, true],
            degree: vec![String::new()],
        };
        let r = rigid(&d, &t);
        let cm = cut(&d, &sf, &r.family(&d).unwrap()).unwrap();
        assert_eq!(cm.pieces.len(), 1);
        assert!(cm.nodes.is_empty());
        round_trip(&d, &r);
    }

    #[test]
    fn round_trips() {
        let d = p1_three_components();
        for (xs, ms) in [(vec![-1, 0], vec![1]), (vec![-1, 0], vec![2]), (vec![-1, 0, 1], vec![2, 3]), (vec![1, 0, -1, 0], vec![1, 1, 2])] {
            round_trip(&d, &rigid(&d, &p1_chain(&d, &xs, &ms)));
        }
    }

    #[test]
    fn smoothing_divides_by_the_expansion_factor() {
        let d = p1_three_components().base_change(6).unwrap();
        let sf = d.special_fiber().unwrap();
        for (m, want) in [(2, 3), (1, 6)] {
            let r = rigid(&d, &p1_chain(&d, &[0, 6], &[m]));
            let cm = cut(&d, &sf, &r.family(&d).unwrap()).unwrap();
            let g = glue(&sf, &cm, &[vec![], vec![]], None).unwrap();
            let f = smooth(&d, &sf, &g).unwrap();
            assert_eq!(f.curve.lengths, vec![vec![q(want)]]);
        }
    }

    /// Two one-vertex pieces in the components at `(1,1)` and `(-1,1)` of the square
    /// degeneration, joined across the top edge, both vertices moving down by `offsets`.
    fn square_pair(offsets: (Q, Q)) -> (TropicalDegeneration, SpecialFiber, CutMap) {
        let d = square_degeneration();
        let sf = d.special_fiber().unwrap();
        let comp = |x: i64, y: i64| sf.components.iter().position(|c| c.vertex == qv(&[x, y])).unwrap();
        let (a, b) = (comp(1, 1), comp(-1, 1));
        let divisor = sf.divisor_between(a, b).unwrap();
        let ray = Cone::from_ints(1, &[&[1]]);
        let piece = |component: usize, v: usize, off: &Q, dir: i64| ComponentMap {
            component,
            vertices: vec![v],
            genus: vec![0],
            base: ray.clone(),
            positions: vec![vec![vec![q(0)], vec![off.clone()]]],
            legs: vec![ComponentLeg { vertex: v, dir: qv(&[dir, 0]), m: 1, origin: LegOrigin::Node(0) }],
        };
        let cm = CutMap {
            pieces: vec![piece(a, 0, &offsets.0, -1), piece(b, 1, &offsets.1, 1)],
            nodes: vec![NodePair { edge: 0, divisor, m: 1, ends: (0, 1), pieces: (0, 1) }],
            num_vertices: 2,
            leg_vertices: vec![],
        };
        (d, sf, cm)
    }

    #[test]
    fn glue_checks_evaluations() {
        let one = vec![vec![q(1)], vec![q(1)]];
        let (d, sf, cm) = square_pair((q(0), q(0)));
        let g = glue(&sf, &cm, &one, None).unwrap();
        assert_eq!(g.evaluations, vec![qv(&[0])]);
        let f = smooth(&d, &sf, &g).unwrap();
        assert_eq!(f.curve.lengths, vec![vec![q(2)]]);
        let (_, sf, cm) = square_pair((qr(-1, 2), qr(-1, 3)));
        assert_eq!(glue(&sf, &cm, &one, None), Err(DegenerationError::EvaluationMismatch(0)));
        let (_, sf, cm) = square_pair((qr(-1, 2), qr(-1, 2)));
        assert_eq!(glue(&sf, &cm, &one, None), Err(DegenerationError::EvaluationNotVertex(0)));
        // at the apex of the base both vertices sit at their component's origin
        assert!(glue(&sf, &cm, &[vec![q(0)], vec![q(0)]], None).is_ok());
    }

    #[test]
    fn glue_on_the_line_is_accepted() {
        let d = p1_three_components();
        let sf = d.special_fiber().unwrap();
        let f = rigid(&d, &p1_chain(&d, &[-1, 0, 1], &[1, 1])).family(&d).unwrap();
        let cm = cut(&d, &sf, &f).unwrap();
        let g = glue(&sf, &cm, &[vec![], vec![], vec![]], None).unwrap();
        assert_eq!(g.evaluations, vec![vec![], vec![]]);
    }

    fn triangulated_square() -> TropicalDegeneration {
        TropicalDegeneration::new(triangulate(square_degeneration().total()).unwrap()).unwrap()
    }

    fn component_ray(d: &TropicalDegeneration, v: &[i64]) -> ConeId {
        let mut r: Vec<i64> = v.to_vec();
        r.push(1);
        id_of(d.total(), &[&r])
    }

    fn star_rays(c: &ConeComplex, ray: ConeId) -> usize {
        stratum(c, ray).unwrap().star.rays().len()
    }

    #[test]
    fn lifted_stellar_needs_simplicial_cones() {
        let d = square_degeneration();
        let v = component_ray(&d, &[1, 1]);
        let err = lift_stellar_to_interior(d.total(), v, &qv(&[-2, -1]), &q(1)).unwrap_err();
        assert!(matches!(err, DegenerationError::NotSimplicial(_)));
    }

    #[test]
    fn lifted_stellar_at_an_existing_ray_is_trivial() {
        let d = triangulated_square();
        let v = component_ray(&d, &[1, 1]);
        assert_eq!(lift_stellar_to_interior(d.total(), v, &qv(&[-3, 0]), &q(1)).unwrap(), None);
        assert_eq!(lift_stellar_to_interior(d.total(), v, &zeros(2), &q(1)).unwrap(), None);
    }

    #[test]
    fn lifted_stellar_subdivides_adjacent_components() {
        let d = triangulated_square();
        let c = d.total();
        let v = component_ray(&d, &[1, 1]);
        let ls = lift_stellar_to_interior(c, v, &qv(&[-2, -1]), &q(1)).unwrap().unwrap();
        assert_eq!(ls.ray, qv(&[0, 1, 2]));
        let fine = ls.subdivision.fine();
        assert_eq!(star_rays(fine, fine.find(c.cone(v)).unwrap()), star_rays(c, v) + 1);
        for w in [[-1, 1], [-1, -1]] {
            let w = component_ray(&d, &w);
            assert_eq!(star_rays(fine, fine.find(c.cone(w)).unwrap()), star_rays(c, w) + 1);
        }
        let untouched = component_ray(&d, &[1, -1]);
        assert_eq!(star_rays(fine, fine.find(c.cone(untouched)).unwrap()), star_rays(c, untouched));
    }

    fn sorted_maximal(c: &ConeComplex) -> Vec<Cone> {
        let mut m = c.maximal_cones();
        m.sort();
        m
    }

    #[test]
    fn lifted_stellars_commute() {
        let d = triangulated_square();
        let c = d.total();
        let a = (component_ray(&d, &[1, 1]), qv(&[-2, -1]));
        let b = (component_ray(&d, &[1, -1]), qv(&[-1, 2]));
        let apply = |c: &ConeComplex, (face, p): &(ConeId, QVec)| -> ConeComplex {
            let face = c.find(d.total().cone(*face)).unwrap();
            lift_stellar_to_interior(c, face, p, &q(1)).unwrap().unwrap().subdivision.fine().clone()
        };
        let ab = apply(&apply(c, &a), &b);
        let ba = apply(&apply(c, &b), &a);
        assert_eq!(sorted_maximal(&ab), sorted_maximal(&ba));
        // two points in the same cone: the orders differ but share a common refinement
        let b2 = (a.0, qv(&[-3, -1]));
        let x = apply(&apply(c, &a), &b2);
        let y = apply(&apply(c, &b2), &a);
        let common = common_refinement(&x, &y).unwrap();
        assert!(Subdivision::of_fans(common.clone(), x).is_ok());
        assert!(Subdivision::of_fans(common, y).is_ok());
    }

    #[test]
    fn transverse_pieces_need_no_modification() {
        let d = p1_three_components();
        let sf = d.special_fiber().unwrap();
        let f = rigid(&d, &p1_chain(&d, &[-1, 0, 1], &[1, 2])).family(&d).unwrap();
        let cm = cut(&d, &sf, &f).unwrap();
        let mp = modify_product(&d, &sf, &cm.pieces).unwrap();
        assert!(mp.stellars.is_empty());
        assert_eq!(mp.k, 0);
        let g = glue(&sf, &cm, &[vec![], vec![], vec![]], Some(&mp)).unwrap();
        assert_eq!(g.evaluations.len(), 2);
    }

    #[test]
    fn transversality_in_one_component_forces_another() {
        let d = triangulated_square();
        let sf = d.special_fiber().unwrap();
        let a = sf.component_of_ray(component_ray(&d, &[1, 1])).unwrap();
        let piece = ComponentMap {
            component: a,
            vertices: vec![0],
            genus: vec![0],
            base: Cone::zero(0),
            positions: vec![vec![vec![]; 2]],
            legs: vec![ComponentLeg { vertex: 0, dir: qv(&[-2, -1]), m: 1, origin: LegOrigin::Leg(0) }],
        };
        let mp = modify_product(&d, &sf, &[piece]).unwrap();
        assert_eq!(mp.stellars, vec![qv(&[-1, 0, 1])]);
        // the new ray is a vertex on the left side of the square, splitting that gluing divisor
        let md = mp.degeneration().unwrap();
        let msf = md.special_fiber().unwrap();
        assert_eq!(msf.components.len(), 5);
        let mid = msf.components.iter().position(|c| c.vertex == qv(&[-1, 0])).unwrap();
        for w in [[-1, 1], [-1, -1], [1, 1]] {
            let w = msf.components.iter().position(|c| c.vertex == qv(&w)).unwrap();
            assert!(msf.divisor_between(mid, w).is_some());
        }
    }

    #[test]
    fn one_moving_vertex_needs_one_stellar() {
        let d = triangulated_square();
        let sf = d.special_fiber().unwrap();
        let a = sf.component_of_ray(component_ray(&d, &[1, 1])).unwrap();
        let piece = ComponentMap {
            component: a,
            vertices: vec![0],
            genus: vec![0],
            base: Cone::from_ints(1, &[&[1]]),
            positions: vec![vec![vec![q(-1)], vec![qr(-1, 2)]]],
            legs: vec![ComponentLeg { vertex: 0, dir: zeros(2), m: 0, origin: LegOrigin::Leg(0) }],
        };
        let mp = modify_product(&d, &sf, &[piece]).unwrap();
        assert_eq!(mp.stellars, vec![qv(&[2, 1, 2, 3])]);
        assert!(mp.axioms.iter().all(|a| a.ok), "{:?}", mp.axioms);
        assert!(!mp.saturation.as_ref().unwrap().is_trivial());
    }

    #[test]
    fn offset_pair_cannot_be_modified() {
        let (d, _, cm) = square_pair((qr(-1, 2), qr(-1, 2)));
        let d = TropicalDegeneration::new(triangulate(d.total()).unwrap()).unwrap();
        let sf = d.special_fiber().unwrap();
        let err = modify_product(&d, &sf, &cm.pieces).unwrap_err();
        assert!(matches!(err, DegenerationError::NotTransverse(_)), "{err:?}");
    }
}
