//! Cone complexes as finite posets of cones glued along face embeddings, morphisms between
//! them, and the verifiers for subdivisions and tropical expansions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cone::*;
use crate::linalg::*;

pub type ConeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("cone error: {0}")]
    Cone(#[from] ConeError),
    #[error("cones {0} and {1} do not meet along a common face")]
    NotAFan(ConeId, ConeId),
    #[error("complex is not embedded in a single vector space")]
    NotEmbedded,
    #[error("source cone {0} is not mapped into its assigned cone")]
    BadAssignment(ConeId),
    #[error("point is not in the support")]
    OutsideSupport,
    #[error("ray is not in the relative interior of cone {0} (or the cone is a ray)")]
    RayNotInInterior(ConeId),
    #[error("unknown cone id {0}")]
    UnknownCone(ConeId),
    #[error("base is not the ray R>=0")]
    BaseNotRay,
}

/// A finite poset of cones with face embeddings. `faces[(f, c)]` embeds the ambient space of
/// cone `f` into that of cone `c`, mapping `f` isomorphically onto a proper face of `c`.
#[derive(Clone, PartialEq, Eq)]
pub struct ConeComplex {
    cones: Vec<Cone>,
    faces: BTreeMap<(ConeId, ConeId), IntegralLinearMap>,
}

impl fmt::Debug for ConeComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConeComplex").field("cones", &self.cones).finish()
    }
}

impl ConeComplex {
    /// A fan in `Q^n`: closes `cones` under faces and verifies that cones meet in faces.
    pub fn from_fan(n: usize, cones: Vec<Cone>) -> Result<Self, ComplexError> {
        let mut all: Vec<Cone> = vec![Cone::zero(n)];
        for c in &cones {
            if c.ambient() != n {
                return Err(ConeError::DimensionMismatch { expected: n, got: c.ambient() }.into());
            }
            for f in c.faces() {
                all.push(f);
            }
        }
        all.sort();
        all.dedup();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                let (a, b) = (&all[i], &all[j]);
                if a.contains_cone(b) || b.contains_cone(a) {
                    continue;
                }
                if a.relints_meet(b) {
                    return Err(ComplexError::NotAFan(i, j));
                }
                let x = a.intersect(b);
                if !a.has_face(&x) || !b.has_face(&x) {
                    return Err(ComplexError::NotAFan(i, j));
                }
            }
        }
        // a cone contained in another must be a face of it
        for i in 0..all.len() {
            for j in 0..all.len() {
                if i != j && all[j].contains_cone(&all[i]) && !all[j].has_face(&all[i]) {
                    return Err(ComplexError::NotAFan(i, j));
                }
            }
        }
        Ok(Self::embedded_unchecked(all))
    }

    /// Fan from cones already closed under faces and meeting properly.
    pub(crate) fn embedded_unchecked(mut all: Vec<Cone>) -> Self {
        all.sort();
        all.dedup();
        let mut faces = BTreeMap::new();
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                if i != j && b.has_face(a) {
                    let m = IntegralLinearMap::identity(Lattice::standard(a.ambient()));
                    let m = IntegralLinearMap { source: a.lattice().clone(), target: b.lattice().clone(), ..m };
                    faces.insert((i, j), m);
                }
            }
        }
        ConeComplex { cones: all, faces }
    }

    /// Abstract complex from explicit parts; face maps are checked to be face embeddings.
    pub fn from_parts(cones: Vec<Cone>, faces: BTreeMap<(ConeId, ConeId), IntegralLinearMap>) -> Result<Self, ComplexError> {
        for (&(f, c), m) in &faces {
            let (fc, cc) = (cones.get(f).ok_or(ComplexError::UnknownCone(f))?, cones.get(c).ok_or(ComplexError::UnknownCone(c))?);
            let img = image_cone(m, fc)?;
            if !cc.has_face(&img) || !lattice_index(m, fc).is_one() {
                return Err(ComplexError::BadAssignment(f));
            }
        }
        Ok(ConeComplex { cones, faces })
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, id: ConeId) -> &Cone {
        &self.cones[id]
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn face_relation(&self) -> &BTreeMap<(ConeId, ConeId), IntegralLinearMap> {
        &self.faces
    }

    pub fn dim(&self) -> usize {
        self.cones.iter().map(Cone::dim).max().unwrap_or(0)
    }

    pub fn ambient(&self) -> Option<usize> {
        let n = self.cones.first()?.ambient();
        self.cones.iter().all(|c| c.ambient() == n).then_some(n)
    }

    pub fn is_embedded(&self) -> bool {
        self.ambient().is_some() && self.faces.values().all(|m| m.matrix == identity(m.src_dim()))
    }

    pub fn is_face(&self, f: ConeId, c: ConeId) -> bool {
        f == c || self.faces.contains_key(&(f, c))
    }

    /// Embedding of cone `f` into cone `c` (identity when equal).
    pub fn face_map(&self, f: ConeId, c: ConeId) -> Option<IntegralLinearMap> {
        if f == c {
            return Some(IntegralLinearMap::identity(self.cones[f].lattice().clone()));
        }
        self.faces.get(&(f, c)).cloned()
    }

    pub fn faces_of(&self, c: ConeId) -> Vec<ConeId> {
        (0..self.len()).filter(|&f| self.is_face(f, c)).collect()
    }

    pub fn cofaces(&self, f: ConeId) -> Vec<ConeId> {
        (0..self.len()).filter(|&c| self.is_face(f, c)).collect()
    }

    pub fn maximal(&self) -> Vec<ConeId> {
        (0..self.len()).filter(|&c| self.cofaces(c).len() == 1).collect()
    }

    pub fn maximal_cones(&self) -> Vec<Cone> {
        self.maximal().into_iter().map(|i| self.cones[i].clone()).collect()
    }

    pub fn find(&self, c: &Cone) -> Option<ConeId> {
        self.cones.iter().position(|x| x == c || (x.rays() == c.rays() && x.ambient() == c.ambient()))
    }

    /// For an embedded complex: the cone whose relative interior contains `x`.
    pub fn locate(&self, x: &[Q]) -> Option<ConeId> {
        (0..self.len()).find(|&i| self.cones[i].in_relint(x))
    }

    pub fn contains_point(&self, x: &[Q]) -> bool {
        self.locate(x).is_some()
    }

    /// Subcomplex of cones of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> ConeComplex {
        let keep: Vec<ConeId> = (0..self.len()).filter(|&i| self.cones[i].dim() <= k).collect();
        self.subcomplex(&keep)
    }

    /// Subcomplex on the given ids (which must be closed under faces); ids are renumbered in order.
    pub fn subcomplex(&self, keep: &[ConeId]) -> ConeComplex {
        let pos = |i: ConeId| keep.iter().position(|&k| k == i);
        let cones = keep.iter().map(|&i| self.cones[i].clone()).collect();
        let faces = self
            .faces
            .iter()
            .filter_map(|(&(f, c), m)| Some(((pos(f)?, pos(c)?), m.clone())))
            .collect();
        ConeComplex { cones, faces }
    }

    /// The same complex with every cone carrying the lattice `l`; cone ids are preserved.
    pub fn relattice(&self, l: &Lattice) -> ConeComplex {
        let cones = self.cones.iter().map(|c| c.relattice(l.clone())).collect();
        let faces = self
            .faces
            .iter()
            .map(|(&k, m)| (k, IntegralLinearMap { source: l.clone(), target: l.clone(), matrix: m.matrix.clone() }))
            .collect();
        ConeComplex { cones, faces }
    }

    /// Rays (1-dimensional cones) of an embedded complex, as primitive vectors.
    pub fn rays(&self) -> Vec<QVec> {
        self.cones.iter().filter(|c| c.dim() == 1).map(|c| c.rays()[0].clone()).collect()
    }
}

/// A morphism of cone complexes given cone by cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexMorphism {
    pub source: ConeComplex,
    pub target: ConeComplex,
    pub assign: Vec<ConeId>,
    pub maps: Vec<IntegralLinearMap>,
}

impl ComplexMorphism {
    /// Checked constructor: every source cone must map into its assigned cone, with image
    /// meeting the relative interior (minimality).
    pub fn new(source: ConeComplex, target: ConeComplex, assign: Vec<ConeId>, maps: Vec<IntegralLinearMap>) -> Result<Self, ComplexError> {
        let m = Self::from_parts(source, target, assign, maps);
        for i in 0..m.source.len() {
            let t = m.target.cone(m.assign[i]);
            let img: Vec<QVec> = m.source.cone(i).rays().iter().map(|r| m.maps[i].apply(r)).collect();
            if !img.iter().all(|x| t.contains(x)) || !t.in_relint(&sum(&img, t.ambient())) {
                return Err(ComplexError::BadAssignment(i));
            }
        }
        Ok(m)
    }

    /// Unchecked constructor (used for deliberately malformed fixtures).
    pub fn from_parts(source: ConeComplex, target: ConeComplex, assign: Vec<ConeId>, maps: Vec<IntegralLinearMap>) -> Self {
        let maps = maps
            .into_iter()
            .zip(&assign)
            .enumerate()
            .map(|(i, (m, &a))| IntegralLinearMap {
                source: source.cone(i).lattice().clone(),
                target: target.cone(a).lattice().clone(),
                matrix: m.matrix,
            })
            .collect();
        ComplexMorphism { source, target, assign, maps }
    }

    /// Morphism of embedded fans induced by one global matrix; each source cone is assigned
    /// to the target cone whose relative interior contains the image of its interior point.
    pub fn linear(source: ConeComplex, target: ConeComplex, matrix: QMat) -> Result<Self, ComplexError> {
        if !source.is_embedded() || !target.is_embedded() {
            return Err(ComplexError::NotEmbedded);
        }
        let src_n = source.ambient().unwrap_or(0);
        let f = IntegralLinearMap::standard(matrix, src_n);
        let mut assign = Vec::new();
        for (i, c) in source.cones().iter().enumerate() {
            let p = f.apply(&c.interior_point());
            let t = target.locate(&p).ok_or(ComplexError::BadAssignment(i))?;
            assign.push(t);
        }
        let maps = vec![f; source.len()];
        Self::new(source, target, assign, maps)
    }

    pub fn identity(c: ConeComplex) -> Self {
        let assign: Vec<ConeId> = (0..c.len()).collect();
        let maps = c.cones().iter().map(|x| IntegralLinearMap::identity(x.lattice().clone())).collect();
        ComplexMorphism { source: c.clone(), target: c, assign, maps }
    }

    /// Map from source cone `i` into target cone `t` (which must contain the assigned cone).
    pub fn map_into(&self, i: ConeId, t: ConeId) -> Option<IntegralLinearMap> {
        let fm = self.target.face_map(self.assign[i], t)?;
        Some(self.maps[i].then(&fm))
    }

    pub fn image(&self, i: ConeId) -> Result<Cone, ConeError> {
        image_cone(&self.maps[i], self.source.cone(i))
    }

    /// For embedded complexes with a common matrix: apply it to a point.
    pub fn apply_global(&self, x: &[Q]) -> Option<QVec> {
        let i = self.source.locate(x)?;
        Some(self.maps[i].apply(x))
    }

    /// Composition `other ∘ self`.
    pub fn then(&self, other: &ComplexMorphism) -> Result<ComplexMorphism, ComplexError> {
        let mut assign = Vec::new();
        let mut maps = Vec::new();
        for i in 0..self.source.len() {
            let mid = self.assign[i];
            let m = self.maps[i].then(&other.maps[mid]);
            let img = image_cone(&m, self.source.cone(i))?;
            let tgt = other.assign[mid];
            // the assigned cone is the smallest face containing the image
            let p = img.interior_point();
            let best = other
                .target
                .faces_of(tgt)
                .into_iter()
                .filter_map(|f| {
                    let fm = other.target.face_map(f, tgt)?;
                    let fc = image_cone(&fm, other.target.cone(f)).ok()?;
                    fc.in_relint(&p).then_some((f, fm))
                })
                .next();
            let Some((f, fm)) = best else {
                return Err(ComplexError::BadAssignment(i));
            };
            // pull back into the face's coordinates
            let inv = left_inverse(&fm.matrix, fm.src_dim()).ok_or(ComplexError::BadAssignment(i))?;
            let mm = mat_mul(&inv, &m.matrix, m.src_dim());
            assign.push(f);
            maps.push(IntegralLinearMap::standard(mm, m.src_dim()));
        }
        Ok(Self::from_parts(self.source.clone(), other.target.clone(), assign, maps))
    }
}

/// A left inverse of an injective matrix (rows = tgt), i.e. `L * m = I`.
pub(crate) fn left_inverse(m: &QMat, src: usize) -> Option<QMat> {
    let mt = transpose(m, src);
    let mtm = mat_mul(&mt, m, src);
    let inv = inverse(&mtm)?;
    Some(mat_mul(&inv, &mt, m.len()))
}

/// Witness for a failed subdivision check: a point of a target cone covered `coverage` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageWitness {
    pub target_cone: ConeId,
    pub point: QVec,
    pub coverage: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionReport {
    pub ok: bool,
    pub non_injective: Option<ConeId>,
    pub witness: Option<CoverageWitness>,
}

fn count_cover(pieces: &[Cone], x: &[Q]) -> usize {
    pieces.iter().filter(|p| p.in_relint(x)).count()
}

fn off_wall_point(pieces: &[Cone], target: &Cone, base: &QVec, dir: &QVec) -> Option<QVec> {
    let mut eps = Q::one();
    for _ in 0..40 {
        let x = add(base, &scale(&eps, dir));
        let on_wall = pieces.iter().any(|p| p.facets().iter().any(|c| dot(c, &x).is_zero()));
        if target.in_relint(&x) && !on_wall {
            return Some(x);
        }
        eps /= q(2);
    }
    None
}

/// Checks that the images of the full-dimensional pieces tile `target` exactly once.
fn tile_check(pieces: &[Cone], target: &Cone) -> Option<(QVec, usize)> {
    if pieces.is_empty() {
        return Some((target.interior_point(), 0));
    }
    for (i, p) in pieces.iter().enumerate() {
        if !target.contains_cone(p) {
            let r = p.rays().iter().find(|r| !target.contains(r)).expect("some ray outside");
            return Some((r.clone(), 0));
        }
        for f in p.facet_cones() {
            let fp = f.interior_point();
            let into = sub(&p.interior_point(), &fp);
            if target.facets().iter().any(|c| f.rays().iter().all(|r| dot(c, r).is_zero())) {
                continue;
            }
            let normal = p
                .facets()
                .iter()
                .find(|c| f.rays().iter().all(|r| dot(c, r).is_zero()))
                .expect("facet has a normal")
                .clone();
            let partners: Vec<usize> = (0..pieces.len())
                .filter(|&j| j != i && pieces[j].has_face(&f) && dot(&normal, &pieces[j].interior_point()).is_negative())
                .collect();
            if partners.len() != 1 {
                let out = neg(&into);
                if let Some(x) = off_wall_point(pieces, target, &fp, &out) {
                    let c = count_cover(pieces, &x);
                    return Some((x, c));
                }
                return Some((fp, partners.len()));
            }
        }
    }
    let x = pieces[0].interior_point();
    let c = count_cover(pieces, &x);
    (c != 1).then_some((x, c))
}

/// Whether `m` is a subdivision: injective on cones and support-preserving.
pub fn verify_subdivision(m: &ComplexMorphism) -> SubdivisionReport {
    for i in 0..m.source.len() {
        if !matches!(lattice_index(&m.maps[i], m.source.cone(i)), Index::Finite(_)) {
            return SubdivisionReport { ok: false, non_injective: Some(i), witness: None };
        }
    }
    let mut order: Vec<ConeId> = (0..m.target.len()).collect();
    order.sort_by_key(|&t| std::cmp::Reverse(m.target.cone(t).dim()));
    for t in order {
        let tc = m.target.cone(t);
        let assigned: Vec<ConeId> = (0..m.source.len()).filter(|&i| m.assign[i] == t).collect();
        let mut pieces = Vec::new();
        for &i in &assigned {
            match m.image(i) {
                Ok(img) if img.dim() == tc.dim() => pieces.push(img),
                Ok(_) => {}
                Err(_) => return SubdivisionReport { ok: false, non_injective: Some(i), witness: None },
            }
        }
        if let Some((point, coverage)) = tile_check(&pieces, tc) {
            return SubdivisionReport {
                ok: false,
                non_injective: None,
                witness: Some(CoverageWitness { target_cone: t, point, coverage }),
            };
        }
        // lower-dimensional source cones over t must be walls between pieces
        for &i in &assigned {
            let Ok(img) = m.image(i) else { continue };
            if img.dim() < tc.dim() && !pieces.iter().any(|p| p.has_face(&img)) {
                return SubdivisionReport {
                    ok: false,
                    non_injective: None,
                    witness: Some(CoverageWitness { target_cone: t, point: img.interior_point(), coverage: 2 }),
                };
            }
        }
    }
    SubdivisionReport { ok: true, non_injective: None, witness: None }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquidimReport {
    pub ok: bool,
    pub witness: Option<ConeId>,
}

/// True iff each source cone surjects onto its assigned target cone.
pub fn check_equidimensional(m: &ComplexMorphism) -> EquidimReport {
    for i in 0..m.source.len() {
        let ok = match m.image(i) {
            Ok(img) => {
                let t = m.target.cone(m.assign[i]);
                img.rays() == t.rays()
            }
            Err(_) => false,
        };
        if !ok {
            return EquidimReport { ok: false, witness: Some(i) };
        }
    }
    EquidimReport { ok: true, witness: None }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedReport {
    pub ok: bool,
    pub witness: Option<(ConeId, BigInt)>,
}

/// True iff every cone's lattice surjects onto the lattice of its image cone.
pub fn check_reduced(m: &ComplexMorphism) -> ReducedReport {
    for i in 0..m.source.len() {
        let idx = image_lattice_index(&m.maps[i], m.source.cone(i));
        if !idx.is_one() {
            return ReducedReport { ok: false, witness: Some((i, idx)) };
        }
    }
    ReducedReport { ok: true, witness: None }
}

/// A polyhedral cell `conv(vertices) + cone(rays)` lying in source cone `source`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub source: ConeId,
    pub vertices: Vec<QVec>,
    pub rays: Vec<QVec>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        let mut dirs: Vec<QVec> = self.vertices.iter().skip(1).map(|v| sub(v, &self.vertices[0])).collect();
        dirs.extend(self.rays.iter().cloned());
        rank_of(&dirs)
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    /// Homogenized cone `cone{(v,1), (r,0)}`.
    pub fn homogenize(&self) -> Cone {
        let n = self.vertices[0].len();
        let mut gens: Vec<QVec> = self
            .vertices
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.push(Q::one());
                w
            })
            .collect();
        gens.extend(self.rays.iter().map(|r| {
            let mut w = r.clone();
            w.push(Q::zero());
            w
        }));
        Cone::new(n + 1, gens).expect("cells are pointed after homogenization")
    }

    pub fn map(&self, f: &IntegralLinearMap) -> Cell {
        Cell {
            source: self.source,
            vertices: self.vertices.iter().map(|v| f.apply(v)).collect(),
            rays: self.rays.iter().map(|r| f.apply(r)).collect(),
        }
    }

    pub fn barycenter(&self) -> QVec {
        let n = self.vertices[0].len();
        let k = q(self.vertices.len() as i64);
        let mut p = scale(&k.recip(), &sum(&self.vertices, n));
        for r in &self.rays {
            p = add(&p, r);
        }
        p
    }
}

/// The fiber of `m` over the point `p` of base cone `b`: one cell per source cone meeting it.
pub fn fiber_at(m: &ComplexMorphism, b: ConeId, p: &[Q]) -> Vec<Cell> {
    let mut cells = Vec::new();
    for i in 0..m.source.len() {
        if !m.target.is_face(m.assign[i], b) {
            continue;
        }
        let Some(f) = m.map_into(i, b) else { continue };
        let c = m.source.cone(i);
        let n = c.ambient();
        // homogenized: {(x,s): x in c, f(x) = s p, s >= 0}
        let mut ineqs: Vec<QVec> = c.facets().iter().map(|v| { let mut w = v.clone(); w.push(Q::zero()); w }).collect();
        ineqs.push(unit(n + 1, n));
        let mut eqs: Vec<QVec> = c.equations().iter().map(|v| { let mut w = v.clone(); w.push(Q::zero()); w }).collect();
        for (j, row) in f.matrix.iter().enumerate() {
            let mut w = row.clone();
            w.push(-p[j].clone());
            eqs.push(w);
        }
        let Ok(h) = Cone::from_inequalities(n + 1, &ineqs, &eqs) else { continue };
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for r in h.rays() {
            let s = &r[n];
            if s.is_positive() {
                vertices.push(scale(&s.recip(), &r[..n]));
            } else {
                rays.push(r[..n].to_vec());
            }
        }
        if vertices.is_empty() {
            continue;
        }
        // keep only cells whose relative interior lies in the relative interior of cone i
        let cell = Cell { source: i, vertices, rays };
        if c.in_relint(&cell.barycenter()) {
            cells.push(cell);
        }
    }
    cells.sort();
    cells
}

/// Fiber of a family over the ray `R>=0` at height `t`.
pub fn fiber(m: &ComplexMorphism, t: &Q) -> Result<Vec<Cell>, ComplexError> {
    let ray = base_ray_id(&m.target)?;
    Ok(fiber_at(m, ray, std::slice::from_ref(t)))
}

fn base_ray_id(base: &ConeComplex) -> Result<ConeId, ComplexError> {
    let ray = Cone::from_ints(1, &[&[1]]);
    if base.len() != 2 {
        return Err(ComplexError::BaseNotRay);
    }
    (0..base.len()).find(|&i| base.cone(i).rays() == ray.rays()).ok_or(ComplexError::BaseNotRay)
}

/// The base `R>=0` as a complex.
pub fn ray_base() -> ConeComplex {
    ConeComplex::from_fan(1, vec![Cone::from_ints(1, &[&[1]])]).expect("ray")
}

/// A tropical expansion: `total` maps to the target `Σ` and to the base `Δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalExpansion {
    pub to_target: ComplexMorphism,
    pub to_base: ComplexMorphism,
}

impl TropicalExpansion {
    pub fn total(&self) -> &ConeComplex {
        &self.to_target.source
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomResult {
    pub ok: bool,
    pub witness: Option<String>,
}

impl AxiomResult {
    fn pass() -> Self {
        AxiomResult { ok: true, witness: None }
    }
    fn fail(w: String) -> Self {
        AxiomResult { ok: false, witness: Some(w) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionReport {
    pub axioms: [AxiomResult; 4],
}

impl ExpansionReport {
    pub fn all_ok(&self) -> bool {
        self.axioms.iter().all(|a| a.ok)
    }
    pub fn failing(&self) -> Vec<usize> {
        (0..4).filter(|&i| !self.axioms[i].ok).map(|i| i + 1).collect()
    }
}

fn fmt_vec(v: &[Q]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

/// Sample points of a base cone: its interior point and a second, differently weighted one.
pub fn base_samples(c: &Cone) -> Vec<QVec> {
    let n = c.ambient();
    let a = c.interior_point();
    let b = sum(&c.rays().iter().enumerate().map(|(i, r)| scale(&q(2 * i as i64 + 3), r)).collect::<Vec<_>>(), n);
    if a == b { vec![a] } else { vec![a, b] }
}

fn check_fiber_embeds(e: &TropicalExpansion, b: ConeId, p: &[Q]) -> Option<String> {
    let cells = fiber_at(&e.to_base, b, p);
    let tg = &e.to_target;
    let mut imgs: Vec<(usize, Cell, Cone)> = Vec::new();
    for c in &cells {
        let f = &tg.maps[c.source];
        let img = c.map(f);
        let t = tg.target.cone(tg.assign[c.source]);
        if !img.vertices.iter().all(|v| t.contains(v)) || !img.rays.iter().all(|r| t.contains(r)) {
            return Some(format!("fiber cell of cone {} leaves target cone {}", c.source, tg.assign[c.source]));
        }
        if img.dim() != c.dim() {
            return Some(format!("fiber cell of cone {} is collapsed by the map to the target", c.source));
        }
        imgs.push((tg.assign[c.source], img.clone(), img.homogenize()));
    }
    for i in 0..imgs.len() {
        for j in i + 1..imgs.len() {
            if imgs[i].0 != imgs[j].0 {
                continue;
            }
            if imgs[i].2.relints_meet(&imgs[j].2) {
                let x = imgs[i].2.intersect(&imgs[j].2).interior_point();
                let n = x.len() - 1;
                let pt = scale(&x[n].recip(), &x[..n]);
                return Some(format!(
                    "fiber cells of cones {} and {} overlap at {} over base point {}",
                    imgs[i].1.source, imgs[j].1.source, fmt_vec(&pt), fmt_vec(p)
                ));
            }
        }
    }
    None
}

/// Verifies the four expansion axioms, each with a witness on failure.
pub fn verify_expansion_axioms(e: &TropicalExpansion) -> ExpansionReport {
    let a1 = match check_equidimensional(&e.to_base) {
        EquidimReport { ok: true, .. } => AxiomResult::pass(),
        EquidimReport { witness, .. } => AxiomResult::fail(format!("cone {} does not surject onto its base cone", witness.unwrap_or(0))),
    };
    let a2 = match check_reduced(&e.to_base) {
        ReducedReport { ok: true, .. } => AxiomResult::pass(),
        ReducedReport { witness: Some((c, idx)), .. } => AxiomResult::fail(format!("cone {c} has lattice index {idx} over the base")),
        ReducedReport { .. } => AxiomResult::fail("reducedness failed".into()),
    };
    let mut a3 = AxiomResult::pass();
    'outer: for b in 0..e.to_base.target.len() {
        for p in base_samples(e.to_base.target.cone(b)) {
            if let Some(w) = check_fiber_embeds(e, b, &p) {
                a3 = AxiomResult::fail(w);
                break 'outer;
            }
        }
    }
    let a4 = check_generic_iso(e);
    ExpansionReport { axioms: [a1, a2, a3, a4] }
}

fn check_generic_iso(e: &TropicalExpansion) -> AxiomResult {
    let tb = &e.to_base;
    let tg = &e.to_target;
    let over_zero: Vec<ConeId> = (0..tb.source.len())
        .filter(|&i| tb.source.cone(i).rays().iter().all(|r| is_zero(&tb.maps[i].apply(r))))
        .collect();
    let skel: Vec<ConeId> = (0..tg.target.len()).filter(|&t| tg.target.cone(t).dim() <= 1).collect();
    let mut hit: BTreeMap<ConeId, ConeId> = BTreeMap::new();
    for &i in &over_zero {
        let t = tg.assign[i];
        let img = match tg.image(i) {
            Ok(c) => c,
            Err(_) => return AxiomResult::fail(format!("cone {i} over 0 has a non-convex image")),
        };
        if tg.target.cone(t).dim() > 1 {
            return AxiomResult::fail(format!("cone {i} over 0 maps to cone {t} of dimension {}", tg.target.cone(t).dim()));
        }
        if img.rays() != tg.target.cone(t).rays() || !lattice_index(&tg.maps[i], tb.source.cone(i)).is_one() {
            return AxiomResult::fail(format!("cone {i} over 0 is not mapped isomorphically onto cone {t}"));
        }
        if let Some(prev) = hit.insert(t, i) {
            return AxiomResult::fail(format!("cones {prev} and {i} over 0 both map onto cone {t}"));
        }
    }
    for t in skel {
        if !hit.contains_key(&t) {
            return AxiomResult::fail(format!("skeleton cone {t} {:?} is missing from the fiber over 0", tg.target.cone(t)));
        }
    }
    AxiomResult::pass()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadrant() -> ConeComplex {
        ConeComplex::from_fan(2, vec![Cone::from_ints(2, &[&[1, 0], &[0, 1]])]).unwrap()
    }

    #[test]
    fn fan_closure() {
        let c = quadrant();
        assert_eq!(c.len(), 4);
        assert_eq!(c.maximal().len(), 1);
        assert!(c.is_embedded());
    }

    #[test]
    fn overlapping_cones_rejected() {
        let r = ConeComplex::from_fan(2, vec![Cone::from_ints(2, &[&[1, 0], &[1, 2]]), Cone::from_ints(2, &[&[1, 1], &[0, 1]])]);
        assert!(matches!(r, Err(ComplexError::NotAFan(_, _))));
    }

    #[test]
    fn identity_is_subdivision() {
        assert!(verify_subdivision(&ComplexMorphism::identity(quadrant())).ok);
    }

    #[test]
    fn split_quadrant_is_subdivision() {
        let split = ConeComplex::from_fan(2, vec![Cone::from_ints(2, &[&[1, 0], &[1, 1]]), Cone::from_ints(2, &[&[1, 1], &[0, 1]])]).unwrap();
        let m = ComplexMorphism::linear(split.clone(), quadrant(), identity(2)).unwrap();
        assert!(verify_subdivision(&m).ok);
        // drop one maximal cone
        let half = ConeComplex::from_fan(2, vec![Cone::from_ints(2, &[&[1, 0], &[1, 1]])]).unwrap();
        let m = ComplexMorphism::linear(half, quadrant(), identity(2)).unwrap();
        let r = verify_subdivision(&m);
        assert!(!r.ok);
        let w = r.witness.unwrap();
        assert_eq!(w.coverage, 0);
        assert!(Cone::from_ints(2, &[&[1, 1], &[0, 1]]).in_relint(&w.point));
    }

    #[test]
    fn equidim_and_reduced() {
        let ray = ray_base();
        let proj = ComplexMorphism::linear(quadrant(), ray.clone(), vec![qv(&[1, 0])]);
        // (x,y) -> x sends the y-axis to 0: fine, and the quadrant onto the ray
        assert!(check_equidimensional(&proj.unwrap()).ok);
        let shear = ComplexMorphism::new(
            quadrant(),
            quadrant(),
            (0..4).map(|i| if quadrant().cone(i).dim() == 2 { 3 } else { i }).collect(),
            vec![IntegralLinearMap::from_ints(&[&[1, 0], &[1, 1]], 2); 4],
        );
        assert!(shear.is_err() || !check_equidimensional(&shear.unwrap()).ok);
        let doubling = ComplexMorphism::linear(ray.clone(), ray, vec![qv(&[2])]).unwrap();
        let r = check_reduced(&doubling);
        assert!(!r.ok);
        assert_eq!(r.witness.unwrap().1, BigInt::from(2));
    }
}
