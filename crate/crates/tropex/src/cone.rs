//! Rational polyhedral cones with integral lattices, and integral linear maps between them.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::*;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error("cone contains a line")]
    NotStrictlyConvex,
    #[error("image cone contains a line")]
    ImageNotStrictlyConvex,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("lattice basis is singular or not integral")]
    BadLattice,
}

/// A full-rank lattice inside `Q^rank`, given by integral basis columns. `None` means `Z^rank`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    pub rank: usize,
    pub basis_change: Option<QMat>,
}

impl Lattice {
    pub fn standard(rank: usize) -> Self {
        Lattice { rank, basis_change: None }
    }

    pub fn with_basis(basis: QMat) -> Result<Self, ConeError> {
        let n = basis.len();
        if basis.iter().any(|r| r.len() != n || !is_integral(r)) || det(&basis).is_zero() {
            return Err(ConeError::BadLattice);
        }
        if basis == identity(n) {
            return Ok(Self::standard(n));
        }
        Ok(Lattice { rank: n, basis_change: Some(basis) })
    }

    /// Lattice coordinates of an ambient vector.
    pub fn coords(&self, v: &[Q]) -> QVec {
        match &self.basis_change {
            None => v.to_vec(),
            Some(b) => solve(b, v, self.rank).expect("invertible basis"),
        }
    }

    pub fn from_coords(&self, c: &[Q]) -> QVec {
        match &self.basis_change {
            None => c.to_vec(),
            Some(b) => mat_vec(b, c),
        }
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        is_integral(&self.coords(v))
    }

    /// Primitive lattice vector on the ray through `v`.
    pub fn primitive(&self, v: &[Q]) -> QVec {
        self.from_coords(&primitive(&self.coords(v)))
    }

    pub fn basis_vectors(&self) -> Vec<QVec> {
        (0..self.rank).map(|j| self.from_coords(&unit(self.rank, j))).collect()
    }

    /// Index of `self` in `Z^rank`.
    pub fn covolume(&self) -> Q {
        match &self.basis_change {
            None => Q::one(),
            Some(b) => det(b).abs(),
        }
    }
}

impl Lattice {
    fn from_basis_vectors(vs: Vec<QVec>, n: usize) -> Lattice {
        let m = transpose(&vs, n);
        Lattice::with_basis(m).expect("integral full-rank basis")
    }

    /// Full-rank lattice generated by rational vectors.
    pub fn generated(gens: &[QVec], n: usize) -> Lattice {
        Self::from_basis_vectors(lattice_basis(gens, n), n)
    }

    /// `self ∩ other`.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let n = self.rank;
        let mut duals = dual_basis(&self.basis_vectors(), n);
        duals.extend(dual_basis(&other.basis_vectors(), n));
        let sum = lattice_basis(&duals, n);
        Self::from_basis_vectors(dual_basis(&sum, n), n)
    }

    /// `{x in Z^m : f(x) in self}` for a rational matrix `f` (`rank × m`).
    pub fn preimage(&self, f: &QMat, m: usize) -> Lattice {
        let n = self.rank;
        let mut gens: Vec<QVec> = (0..m).map(|i| unit(m, i)).collect();
        for l in dual_basis(&self.basis_vectors(), n) {
            gens.push((0..m).map(|j| (0..n).fold(Q::zero(), |acc, i| acc + &l[i] * &f[i][j])).collect());
        }
        let sum = lattice_basis(&gens, m);
        Self::from_basis_vectors(dual_basis(&sum, m), m)
    }

    /// `{x in self : l(x) in Z for every covector l}`.
    pub fn refine_by(&self, covs: &[QVec]) -> Lattice {
        let n = self.rank;
        let basis = self.basis_vectors();
        let rows: QMat = covs.iter().map(|l| basis.iter().map(|b| dot(l, b)).collect()).collect();
        let k = Lattice::standard(covs.len()).preimage(&rows, n);
        Self::from_basis_vectors(k.basis_vectors().iter().map(|y| self.from_coords(y)).collect(), n)
    }

    /// `k · self`.
    pub fn scaled(&self, k: &Q) -> Lattice {
        Self::from_basis_vectors(self.basis_vectors().iter().map(|b| scale(k, b)).collect(), self.rank)
    }

    /// Index of `self` in `Z^rank` restricted to a subspace spanned by `span`.
    pub fn index_on(&self, span: &[QVec]) -> BigInt {
        if span.is_empty() {
            return BigInt::one();
        }
        let n = self.rank;
        let std = saturation_basis(&span.iter().map(|v| primitive(v)).collect::<Vec<_>>(), n);
        let mine: Vec<QVec> = saturation_basis(&span.iter().map(|v| primitive(&self.coords(v))).collect::<Vec<_>>(), n)
            .iter()
            .map(|c| self.from_coords(c))
            .collect();
        index_in_saturation(&mine.iter().map(|v| span_coefficients(&std, v).expect("same span")).collect::<Vec<_>>(), std.len())
    }
}

/// A strictly convex rational polyhedral cone. Rays are primitive in the cone's lattice and
/// sorted; facet normals and the equations of the linear span are derived at construction.
#[derive(Clone)]
pub struct Cone {
    lattice: Lattice,
    rays: Vec<QVec>,
    facets: Vec<QVec>,
    equations: Vec<QVec>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.rays == other.rays
    }
}
impl Eq for Cone {}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient(), self.dim(), &self.rays, &self.lattice).cmp(&(other.ambient(), other.dim(), &other.rays, &other.lattice))
    }
}
impl std::hash::Hash for Cone {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rays.hash(state);
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone⟨")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "⟩ in Q^{}", self.ambient())
    }
}

/// Extreme rays of the pointed cone `{y : rows·y >= 0}` in `Q^k` (double description).
/// Requires `rank(rows) == k`.
pub(crate) fn dd_extreme_rays(rows: &[QVec], k: usize) -> Vec<QVec> {
    if k == 0 {
        return vec![];
    }
    // initial simplicial cone from k independent rows
    let mut basis_idx: Vec<usize> = Vec::new();
    let mut chosen: Vec<QVec> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut t = chosen.clone();
        t.push(r.clone());
        if rank(&t, k) == t.len() {
            chosen = t;
            basis_idx.push(i);
            if chosen.len() == k {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), k, "double description needs a pointed cone");
    let inv = inverse(&chosen).expect("independent rows");
    let zero_set = |y: &QVec| -> Vec<bool> { rows.iter().map(|r| dot(r, y).is_zero()).collect() };
    let mut rays: Vec<(QVec, Vec<bool>)> = (0..k)
        .map(|j| {
            let y = primitive(&(0..k).map(|i| inv[i][j].clone()).collect::<Vec<_>>());
            let z = zero_set(&y);
            (y, z)
        })
        .collect();
    let mut processed = vec![false; rows.len()];
    for &i in &basis_idx {
        processed[i] = true;
    }
    for (ai, a) in rows.iter().enumerate() {
        if processed[ai] {
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|(y, _)| dot(a, y)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let negs: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<(QVec, Vec<bool>)> = (0..rays.len())
            .filter(|&i| !vals[i].is_negative())
            .map(|i| rays[i].clone())
            .collect();
        for &p in &pos {
            for &n in &negs {
                let common: Vec<usize> = (0..rows.len())
                    .filter(|&j| processed[j] && rays[p].1[j] && rays[n].1[j])
                    .collect();
                if common.len() + 2 < k {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&o| o != p && o != n)
                    .all(|o| !common.iter().all(|&j| rays[o].1[j]));
                if !adjacent {
                    continue;
                }
                let y = primitive(&sub(&scale(&vals[p], &rays[n].0), &scale(&vals[n], &rays[p].0)));
                let z = zero_set(&y);
                next.push((y, z));
            }
        }
        rays = next;
        processed[ai] = true;
    }
    let mut out: Vec<QVec> = rays.into_iter().map(|(y, _)| y).collect();
    out.sort();
    out.dedup();
    out
}

impl Cone {
    pub fn zero(n: usize) -> Self {
        Cone {
            lattice: Lattice::standard(n),
            rays: vec![],
            facets: vec![],
            equations: (0..n).map(|i| unit(n, i)).collect(),
        }
    }

    /// Cone generated by `gens` in the standard lattice of `Q^n`.
    pub fn new(n: usize, gens: Vec<QVec>) -> Result<Self, ConeError> {
        Self::with_lattice(Lattice::standard(n), gens)
    }

    /// Shorthand for tests and fixtures: integer generators in the standard lattice.
    pub fn from_ints(n: usize, gens: &[&[i64]]) -> Self {
        Self::new(n, gens.iter().map(|g| qv(g)).collect()).expect("valid cone")
    }

    pub fn with_lattice(lattice: Lattice, gens: Vec<QVec>) -> Result<Self, ConeError> {
        let n = lattice.rank;
        for g in &gens {
            if g.len() != n {
                return Err(ConeError::DimensionMismatch { expected: n, got: g.len() });
            }
        }
        let gens: Vec<QVec> = gens.into_iter().filter(|g| !is_zero(g)).collect();
        if gens.is_empty() {
            let mut z = Cone::zero(n);
            z.lattice = lattice;
            return Ok(z);
        }
        let (basis, piv) = rref(&gens, n);
        let k = basis.len();
        let coords = |v: &QVec| -> QVec { piv.iter().map(|&p| v[p].clone()).collect() };
        let gcoords: Vec<QVec> = gens.iter().map(coords).collect();
        let dual = dd_extreme_rays(&gcoords, k);
        if rank_of(&dual) < k {
            return Err(ConeError::NotStrictlyConvex);
        }
        let lift = |y: &QVec| -> QVec {
            let mut c = zeros(n);
            for (j, &p) in piv.iter().enumerate() {
                c[p] = y[j].clone();
            }
            primitive(&c)
        };
        let facets: Vec<QVec> = dual.iter().map(lift).collect();
        let equations = nullspace(&basis, n).into_iter().map(|e| primitive(&e)).collect();
        let mut rays: Vec<QVec> = Vec::new();
        for (g, gc) in gens.iter().zip(&gcoords) {
            let tight: Vec<QVec> = dual.iter().filter(|y| dot(y, gc).is_zero()).cloned().collect();
            if k == 1 || rank(&tight, k) == k - 1 {
                rays.push(lattice.primitive(g));
            }
        }
        rays.sort();
        rays.dedup();
        Ok(Cone { lattice, rays, facets, equations })
    }

    /// The cone `{x : ineqs·x >= 0, eqs·x = 0}` in `Q^n`, which must be pointed.
    pub fn from_inequalities(n: usize, ineqs: &[QVec], eqs: &[QVec]) -> Result<Self, ConeError> {
        let sub_basis: Vec<QVec> = if eqs.is_empty() {
            (0..n).map(|i| unit(n, i)).collect()
        } else {
            nullspace(&eqs.to_vec(), n)
        };
        let k = sub_basis.len();
        if k == 0 {
            return Ok(Cone::zero(n));
        }
        let rows: Vec<QVec> = ineqs
            .iter()
            .map(|c| sub_basis.iter().map(|b| dot(c, b)).collect())
            .collect();
        if rank(&rows, k) < k {
            return Err(ConeError::NotStrictlyConvex);
        }
        let ys = dd_extreme_rays(&rows, k);
        let gens: Vec<QVec> = ys
            .iter()
            .map(|y| sum(&y.iter().zip(&sub_basis).map(|(c, b)| scale(c, b)).collect::<Vec<_>>(), n))
            .collect();
        Cone::new(n, gens)
    }

    pub fn ambient(&self) -> usize {
        self.lattice.rank
    }

    pub fn dim(&self) -> usize {
        self.ambient() - self.equations.len()
    }

    pub fn rays(&self) -> &[QVec] {
        &self.rays
    }

    pub fn facets(&self) -> &[QVec] {
        &self.facets
    }

    pub fn equations(&self) -> &[QVec] {
        &self.equations
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim()
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.equations.iter().all(|e| dot(e, x).is_zero()) && self.facets.iter().all(|c| !dot(c, x).is_negative())
    }

    pub fn in_relint(&self, x: &[Q]) -> bool {
        self.equations.iter().all(|e| dot(e, x).is_zero()) && self.facets.iter().all(|c| dot(c, x).is_positive())
    }

    /// A canonical relative-interior point: the sum of the rays.
    pub fn interior_point(&self) -> QVec {
        sum(&self.rays, self.ambient())
    }

    pub fn span_basis(&self) -> Vec<QVec> {
        row_basis(&self.rays, self.ambient())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
    }

    /// Rays tight on the given covector.
    fn tight(&self, c: &QVec) -> Vec<usize> {
        (0..self.rays.len()).filter(|&i| dot(c, &self.rays[i]).is_zero()).collect()
    }

    fn sub_cone(&self, idx: &[usize]) -> Cone {
        Cone::with_lattice(self.lattice.clone(), idx.iter().map(|&i| self.rays[i].clone()).collect())
            .expect("faces of strictly convex cones are strictly convex")
    }

    /// All faces, including the zero cone and the cone itself, sorted by dimension then rays.
    pub fn faces(&self) -> Vec<Cone> {
        let all: Vec<usize> = (0..self.rays.len()).collect();
        let mut seen: Vec<Vec<usize>> = vec![all.clone()];
        let mut queue = vec![all];
        while let Some(f) = queue.pop() {
            for c in &self.facets {
                let t = self.tight(c);
                let g: Vec<usize> = f.iter().copied().filter(|i| t.contains(i)).collect();
                if !seen.contains(&g) {
                    seen.push(g.clone());
                    queue.push(g);
                }
            }
        }
        if !seen.iter().any(|f| f.is_empty()) {
            seen.push(vec![]);
        }
        let mut faces: Vec<Cone> = seen.iter().map(|f| self.sub_cone(f)).collect();
        faces.sort();
        faces.dedup();
        faces
    }

    pub fn facet_cones(&self) -> Vec<Cone> {
        let d = self.dim();
        self.faces().into_iter().filter(|f| f.dim() + 1 == d).collect()
    }

    /// Whether `other` is a face of `self`.
    pub fn has_face(&self, other: &Cone) -> bool {
        if other.ambient() != self.ambient() || !self.contains_cone(other) {
            return false;
        }
        if other.rays.is_empty() {
            return true;
        }
        let p = other.interior_point();
        let tight: Vec<usize> = (0..self.rays.len())
            .filter(|&i| {
                self.facets
                    .iter()
                    .filter(|c| dot(c, &p).is_zero())
                    .all(|c| dot(c, &self.rays[i]).is_zero())
            })
            .collect();
        let face = self.sub_cone(&tight);
        face.rays == other.rays
    }

    /// Smallest face of `self` containing `x` (which must lie in the cone).
    pub fn carrier_face(&self, x: &[Q]) -> Cone {
        let idx: Vec<usize> = (0..self.rays.len())
            .filter(|&i| self.facets.iter().filter(|c| dot(c, x).is_zero()).all(|c| dot(c, &self.rays[i]).is_zero()))
            .collect();
        self.sub_cone(&idx)
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let n = self.ambient();
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        Cone::from_inequalities(n, &ineqs, &eqs).expect("intersection of pointed cones is pointed")
    }

    /// Whether relative interiors of the two cones meet.
    pub fn relints_meet(&self, other: &Cone) -> bool {
        let c = self.intersect(other);
        let p = c.interior_point();
        self.in_relint(&p) && other.in_relint(&p)
    }

    /// The same cone in a different lattice of the same ambient space.
    pub fn relattice(&self, lattice: Lattice) -> Cone {
        Cone::with_lattice(lattice, self.rays.clone()).expect("same support")
    }

    /// Lattice of the linear span, as a basis of `span ∩ N`.
    pub fn span_lattice_basis(&self) -> Vec<QVec> {
        let n = self.ambient();
        let coords: Vec<QVec> = self.rays.iter().map(|r| self.lattice.coords(r)).collect();
        saturation_basis(&coords, n).iter().map(|c| self.lattice.from_coords(c)).collect()
    }
}

/// Either a finite positive index or an infinite one (rank drop).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

impl Index {
    pub fn is_one(&self) -> bool {
        matches!(self, Index::Finite(i) if i.is_one())
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(i) => write!(f, "{i}"),
            Index::Infinite => write!(f, "inf"),
        }
    }
}

/// A linear map `Q^src -> Q^tgt` sending `source` into `target` (matrix is `tgt × src`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralLinearMap {
    pub source: Lattice,
    pub target: Lattice,
    pub matrix: QMat,
}

impl IntegralLinearMap {
    pub fn new(source: Lattice, target: Lattice, matrix: QMat) -> Result<Self, ConeError> {
        if matrix.len() != target.rank || matrix.iter().any(|r| r.len() != source.rank) {
            return Err(ConeError::DimensionMismatch { expected: target.rank, got: matrix.len() });
        }
        let m = IntegralLinearMap { source, target, matrix };
        for b in m.source.basis_vectors() {
            if !m.target.contains(&m.apply(&b)) {
                return Err(ConeError::BadLattice);
            }
        }
        Ok(m)
    }

    pub fn standard(matrix: QMat, src: usize) -> Self {
        let tgt = matrix.len();
        Self::new(Lattice::standard(src), Lattice::standard(tgt), matrix).expect("integral matrix")
    }

    pub fn from_ints(rows: &[&[i64]], src: usize) -> Self {
        Self::standard(rows.iter().map(|r| qv(r)).collect(), src)
    }

    pub fn identity(l: Lattice) -> Self {
        let n = l.rank;
        IntegralLinearMap { source: l.clone(), target: l, matrix: crate::linalg::identity(n) }
    }

    pub fn src_dim(&self) -> usize {
        self.source.rank
    }

    pub fn tgt_dim(&self) -> usize {
        self.target.rank
    }

    pub fn apply(&self, v: &[Q]) -> QVec {
        mat_vec(&self.matrix, v)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &IntegralLinearMap) -> IntegralLinearMap {
        IntegralLinearMap {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: mat_mul(&other.matrix, &self.matrix, self.src_dim()),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.matrix == crate::linalg::identity(self.src_dim())
    }
}

/// Cone spanned by the images of the rays of `c`.
pub fn image_cone(f: &IntegralLinearMap, c: &Cone) -> Result<Cone, ConeError> {
    if c.ambient() != f.src_dim() {
        return Err(ConeError::DimensionMismatch { expected: f.src_dim(), got: c.ambient() });
    }
    let imgs: Vec<QVec> = c.rays().iter().map(|r| f.apply(r)).collect();
    Cone::with_lattice(f.target.clone(), imgs).map_err(|e| match e {
        ConeError::NotStrictlyConvex => ConeError::ImageNotStrictlyConvex,
        e => e,
    })
}

/// Index of `f(N_c)` in the lattice of the span of `f(c)`; `Infinite` if `f` drops rank on `c`.
pub fn lattice_index(f: &IntegralLinearMap, c: &Cone) -> Index {
    let basis = c.span_lattice_basis();
    let imgs: Vec<QVec> = basis.iter().map(|b| f.target.coords(&f.apply(b))).collect();
    if rank_of(&imgs) < basis.len() {
        return Index::Infinite;
    }
    Index::Finite(index_in_saturation(&imgs, f.tgt_dim()))
}

/// Index of `f(N_c)` in the saturation of its span, for any (possibly non-injective) `f`.
/// This is the reducedness index for projections.
pub fn image_lattice_index(f: &IntegralLinearMap, c: &Cone) -> BigInt {
    let imgs: Vec<QVec> = c.span_lattice_basis().iter().map(|b| f.target.coords(&f.apply(b))).collect();
    index_in_saturation(&imgs, f.tgt_dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrant_faces() {
        let c = Cone::from_ints(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(c.faces().len(), 4);
        assert_eq!(c.facets().len(), 2);
        let r = Cone::from_ints(1, &[&[1]]);
        assert_eq!(r.faces().len(), 2);
    }

    #[test]
    fn redundant_generators_dropped() {
        let c = Cone::from_ints(2, &[&[1, 0], &[0, 1], &[1, 1], &[2, 0]]);
        assert_eq!(c.rays(), &[qv(&[0, 1]), qv(&[1, 0])]);
    }

    #[test]
    fn half_plane_rejected() {
        assert_eq!(Cone::new(2, vec![qv(&[1, 0]), qv(&[-1, 0]), qv(&[0, 1])]), Err(ConeError::NotStrictlyConvex));
    }

    #[test]
    fn image_of_quadrant() {
        let q2 = Cone::from_ints(2, &[&[1, 0], &[0, 1]]);
        let shear = IntegralLinearMap::from_ints(&[&[1, 0], &[1, 1]], 2);
        assert_eq!(image_cone(&shear, &q2).unwrap(), Cone::from_ints(2, &[&[1, 1], &[0, 1]]));
        let proj = IntegralLinearMap::from_ints(&[&[1, 0]], 2);
        assert_eq!(image_cone(&proj, &q2).unwrap(), Cone::from_ints(1, &[&[1]]));
    }

    #[test]
    fn indices() {
        let ray = Cone::from_ints(1, &[&[1]]);
        let two = IntegralLinearMap::from_ints(&[&[2]], 1);
        assert_eq!(lattice_index(&two, &ray), Index::Finite(BigInt::from(2)));
        let q2 = Cone::from_ints(2, &[&[1, 0], &[0, 1]]);
        let d13 = IntegralLinearMap::from_ints(&[&[1, 0], &[0, 3]], 2);
        assert_eq!(lattice_index(&d13, &q2), Index::Finite(BigInt::from(3)));
        let proj = IntegralLinearMap::from_ints(&[&[1, 0]], 2);
        assert_eq!(lattice_index(&proj, &q2), Index::Infinite);
        assert_eq!(image_lattice_index(&proj, &q2), BigInt::from(1));
        let sum2 = IntegralLinearMap::from_ints(&[&[2, 2]], 2);
        assert_eq!(image_lattice_index(&sum2, &q2), BigInt::from(2));
    }

    #[test]
    fn lattice_operations() {
        let a = Lattice::with_basis(vec![qv(&[2, 0]), qv(&[0, 1])]).unwrap();
        let b = Lattice::with_basis(vec![qv(&[1, 0]), qv(&[0, 3])]).unwrap();
        assert_eq!(a.intersect(&b).covolume(), q(6));
        let pre = Lattice::standard(1).scaled(&q(2)).preimage(&vec![qv(&[1, 1])], 2);
        assert_eq!(pre.covolume(), q(2));
        assert!(pre.contains(&qv(&[1, 1])) && !pre.contains(&qv(&[1, 0])));
        assert_eq!(b.index_on(&[qv(&[0, 1])]), BigInt::from(3));
        assert_eq!(b.index_on(&[qv(&[1, 0])]), BigInt::from(1));
    }

    #[test]
    fn octant_in_three_space() {
        let c = Cone::from_ints(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        assert_eq!(c.rays().len(), 3);
        assert_eq!(c.faces().len(), 8);
        let lower = Cone::from_ints(3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert!(c.has_face(&lower));
        assert!(!c.has_face(&Cone::from_ints(3, &[&[1, 1, 0]])));
    }
}
