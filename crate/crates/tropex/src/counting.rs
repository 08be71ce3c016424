//! Genus-0 counts in the plane and through triple-point degenerations.
//!
//! [`enumerate_rigid_planar`] finds every rational tropical curve of a given degree through
//! generic points, with Mikhalkin multiplicities. [`run_algorithm`] orients a rigid tree,
//! pushes point and fundamental classes from the marked points to an exit end through a
//! [`VertexOracle`], and pairs the result with the exit divisor.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::*;
use crate::cone::*;
use crate::curve::Graph;
use crate::degeneration::{mu_degree, DegenerationError, RigidType, TropicalDegeneration};
use crate::linalg::*;
use crate::map::*;

#[derive(Debug, Error)]
pub enum CountingError {
    #[error("constraints are not in general position: {0}")]
    NonGenericConfiguration(String),
    #[error("no valid orientation: the type must be a tree with an end of positive contact order")]
    NoValidOrientation,
    #[error("unsupported vertex geometry: {0}")]
    UnsupportedGeometry(String),
    #[error("the generic fiber has a cell of dimension {0}; at most 2 is supported")]
    DimensionTooHigh(usize),
    #[error("no vertex oracle named {0:?}")]
    UnknownOracle(String),
    #[error("invalid counting input: {0}")]
    Input(String),
    #[error(transparent)]
    Degeneration(#[from] DegenerationError),
}

pub type Result<T> = std::result::Result<T, CountingError>;

fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(CountingError::Input(msg.into()))
}

fn non_generic<T>(msg: impl Into<String>) -> Result<T> {
    Err(CountingError::NonGenericConfiguration(msg.into()))
}

fn det2(a: &[Q], b: &[Q]) -> Q {
    &a[0] * &b[1] - &a[1] * &b[0]
}

// ---------------------------------------------------------------------------------------------
// planar problems

/// An end of a planar count: primitive direction, weight, and optionally the fixed line
/// `{x : det(dir, x) = offset}` it must run along.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlanarEnd {
    pub dir: QVec,
    pub weight: u32,
    pub offset: Option<Q>,
}

impl PlanarEnd {
    pub fn free(dir: QVec, weight: u32) -> Self {
        PlanarEnd { dir, weight, offset: None }
    }

    pub fn fixed(dir: QVec, weight: u32, offset: Q) -> Self {
        PlanarEnd { dir, weight, offset: Some(offset) }
    }
}

/// Rational curves in a toric surface with the given ends through the given points. The
/// number of points plus fixed ends is one less than the number of ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarCountProblem {
    pub fan: ConeComplex,
    pub ends: Vec<PlanarEnd>,
    pub points: Vec<QVec>,
}

/// Checks that `fan` is a complete fan of 2-dimensional cones in the plane.
pub fn check_complete_fan(fan: &ConeComplex) -> Result<()> {
    if fan.ambient() != Some(2) {
        return Err(CountingError::UnsupportedGeometry("component fan is not in the plane".into()));
    }
    let max = fan.maximal();
    if max.is_empty() || max.iter().any(|&c| fan.cone(c).dim() != 2) {
        return Err(CountingError::UnsupportedGeometry("component fan is not pure of dimension 2".into()));
    }
    for r in (0..fan.len()).filter(|&i| fan.cone(i).dim() == 1) {
        if max.iter().filter(|&&c| fan.is_face(r, c)).count() != 2 {
            return Err(CountingError::UnsupportedGeometry("component fan is not complete".into()));
        }
    }
    Ok(())
}

/// Sorts plane vectors counterclockwise starting from the positive x-axis.
fn angular_cmp(a: &[Q], b: &[Q]) -> std::cmp::Ordering {
    let half = |v: &[Q]| if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| Q::zero().cmp(&det2(a, b)))
}

/// The complete fan whose rays are the primitive directions in `dirs`, with opposite rays
/// added where needed.
pub fn star_fan(dirs: &[QVec]) -> Result<ConeComplex> {
    let mut rays: Vec<QVec> = dirs.iter().filter(|d| !is_zero(d)).map(|d| primitive(d)).collect();
    if rays.is_empty() {
        return Err(CountingError::UnsupportedGeometry("vertex without directions".into()));
    }
    if rank_of(&rays) < 2 {
        let u = &rays[0];
        rays.push(vec![-u[1].clone(), u[0].clone()]);
    }
    let positively_spanning = |rs: &[QVec]| {
        let mut s = rs.to_vec();
        s.sort_by(|a, b| angular_cmp(a, b));
        s.dedup();
        (0..s.len()).all(|i| det2(&s[i], &s[(i + 1) % s.len()]).is_positive())
    };
    if !positively_spanning(&rays) {
        let negs: Vec<QVec> = rays.iter().map(|r| neg(r)).collect();
        rays.extend(negs);
    }
    rays.sort_by(|a, b| angular_cmp(a, b));
    rays.dedup();
    let cones = (0..rays.len())
        .map(|i| Cone::new(2, vec![rays[i].clone(), rays[(i + 1) % rays.len()].clone()]))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| CountingError::UnsupportedGeometry(e.to_string()))?;
    ConeComplex::from_fan(2, cones).map_err(|e| CountingError::UnsupportedGeometry(e.to_string()))
}

impl PlanarCountProblem {
    pub fn new(fan: ConeComplex, ends: Vec<PlanarEnd>, points: Vec<QVec>) -> Result<Self> {
        check_complete_fan(&fan)?;
        let rays = fan.rays();
        let mut balance = zeros(2);
        for e in &ends {
            if e.dir.len() != 2 || is_zero(&e.dir) || primitive(&e.dir) != e.dir {
                return input(format!("end direction {:?} is not a primitive plane vector", e.dir));
            }
            if e.weight == 0 {
                return input("end of weight 0");
            }
            if !rays.contains(&e.dir) {
                return Err(CountingError::UnsupportedGeometry(format!("end direction {:?} is not a ray of the fan", e.dir)));
            }
            balance = add(&balance, &scale(&q(e.weight as i64), &e.dir));
        }
        if !is_zero(&balance) {
            return input("ends are not balanced");
        }
        if points.iter().any(|p| p.len() != 2) {
            return input("points must lie in the plane");
        }
        let fixed = ends.iter().filter(|e| e.offset.is_some()).count();
        if points.len() + fixed + 1 != ends.len() {
            return input(format!("{} ends need {} point or end conditions, got {}", ends.len(), ends.len().saturating_sub(1), points.len() + fixed));
        }
        if points.len() > 63 {
            return input("at most 63 points");
        }
        Ok(PlanarCountProblem { fan, ends, points })
    }

    /// Degree `d` curves in the tropical projective plane through `points`.
    pub fn projective_plane(d: u32, points: Vec<QVec>) -> Result<Self> {
        let fan = crate::fixtures::p2_fan();
        let ends = fan.rays().into_iter().flat_map(|r| std::iter::repeat_n(PlanarEnd::free(r, 1), d as usize)).collect();
        Self::new(fan, ends, points)
    }

    pub fn with_points(&self, points: Vec<QVec>) -> Self {
        PlanarCountProblem { fan: self.fan.clone(), ends: self.ends.clone(), points }
    }
}

/// Ends of the same free direction and weight are interchangeable; fixed ends are each their
/// own class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndClass {
    pub end: PlanarEnd,
    pub count: usize,
}

fn end_classes(ends: &[PlanarEnd]) -> Vec<EndClass> {
    let mut free: BTreeMap<(QVec, u32), usize> = BTreeMap::new();
    let mut fixed = Vec::new();
    for e in ends {
        if e.offset.is_some() {
            fixed.push(EndClass { end: e.clone(), count: 1 });
        } else {
            *free.entry((e.dir.clone(), e.weight)).or_default() += 1;
        }
    }
    let mut out: Vec<EndClass> = free.into_iter().map(|((dir, weight), count)| EndClass { end: PlanarEnd::free(dir, weight), count }).collect();
    out.extend(fixed);
    out
}

/// A tropical curve found by [`enumerate_rigid_planar`]. Edges run from `a` to `b` along the
/// primitive `dir`; ends leave their vertex (none for a straight line) in their class direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarCurve {
    pub vertices: Vec<QVec>,
    pub edges: Vec<(usize, usize, QVec, u32)>,
    pub ends: Vec<(Option<usize>, usize)>,
    pub points: Vec<(usize, usize)>,
    pub multiplicity: Q,
}

impl PlanarCurve {
    fn signature(&self) -> (Vec<(QVec, QVec, u32)>, Vec<(Option<QVec>, usize)>, Vec<(QVec, usize)>) {
        let pos = |v: &usize| self.vertices[*v].clone();
        let mut edges: Vec<(QVec, QVec, u32)> = self
            .edges
            .iter()
            .map(|(a, b, _, m)| {
                let (x, y) = (pos(a), pos(b));
                if x <= y {
                    (x, y, *m)
                } else {
                    (y, x, *m)
                }
            })
            .collect();
        edges.sort();
        let mut ends: Vec<(Option<QVec>, usize)> = self.ends.iter().map(|(v, k)| (v.as_ref().map(pos), *k)).collect();
        ends.sort();
        let mut points: Vec<(QVec, usize)> = self.points.iter().map(|(v, j)| (pos(v), *j)).collect();
        points.sort();
        (edges, ends, points)
    }

    /// Trivalent vertices with their Mikhalkin multiplicity.
    pub fn vertex_multiplicities(&self, classes: &[EndClass]) -> Vec<(usize, BigInt)> {
        let mut out = Vec::new();
        for v in 0..self.vertices.len() {
            let mut dirs: Vec<QVec> = Vec::new();
            for (a, b, u, m) in &self.edges {
                if *a == v {
                    dirs.push(scale(&q(*m as i64), u));
                } else if *b == v {
                    dirs.push(scale(&q(-(*m as i64)), u));
                }
            }
            for (w, k) in &self.ends {
                if *w == Some(v) {
                    dirs.push(scale(&q(classes[*k].end.weight as i64), &classes[*k].end.dir));
                }
            }
            if dirs.len() == 3 {
                out.push((v, to_int(&det2(&dirs[0], &dirs[1]).abs())));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct PlanarEnumeration {
    pub classes: Vec<EndClass>,
    pub curves: Vec<PlanarCurve>,
    pub total: Q,
}

// A rooted partial curve: a subtree hanging off one edge, the root edge pointing away from it
// with weighted direction `w`. Fixed ones have a rigid root line `det(w, x) = c`; free ones
// form a segment of a one-parameter family, parametrized by `τ = det(w, x)` on the root line,
// with vertex positions `p + τ q` for `τ` in the open interval `(lo, hi)`.
#[derive(Clone, Debug)]
struct Partial {
    w: QVec,
    free: bool,
    c: Q,
    root: Option<usize>,
    bare: Option<usize>,
    verts: Vec<(QVec, QVec)>,
    edges: Vec<(usize, usize, QVec)>,
    ends: Vec<(usize, usize)>,
    points: Vec<(usize, usize)>,
    lo: Option<Q>,
    hi: Option<Q>,
    mult: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    counts: Vec<u8>,
    mask: u64,
}

impl Key {
    fn size(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum::<usize>() + self.mask.count_ones() as usize
    }
}

fn slack(key: &Key, classes: &[EndClass]) -> i64 {
    let ends: i64 = key.counts.iter().map(|&c| c as i64).sum();
    let fixed = key.counts.iter().zip(classes).filter(|(&c, k)| c > 0 && k.end.offset.is_some()).count() as i64;
    ends - fixed - key.mask.count_ones() as i64
}

fn at(p: &(QVec, QVec), t: &Q) -> QVec {
    add(&p.0, &scale(t, &p.1))
}

impl Partial {
    fn leaf(k: usize, class: &EndClass) -> Partial {
        let m = q(class.end.weight as i64);
        let w = scale(&-m.clone(), &class.end.dir);
        let (free, c) = match &class.end.offset {
            Some(o) => (false, -(&m * o)),
            None => (true, Q::zero()),
        };
        Partial { w, free, c, root: None, bare: Some(k), verts: vec![], edges: vec![], ends: vec![], points: vec![], lo: None, hi: None, mult: BigInt::one() }
    }

    /// Copies `other` into `self`'s arrays and returns the index shift.
    fn absorb(&mut self, other: &Partial) -> usize {
        let s = self.verts.len();
        self.verts.extend(other.verts.iter().cloned());
        self.edges.extend(other.edges.iter().map(|(a, b, w)| (a + s, b + s, w.clone())));
        self.ends.extend(other.ends.iter().map(|(v, k)| (v + s, *k)));
        self.points.extend(other.points.iter().map(|(v, j)| (v + s, *j)));
        s
    }

    /// Attaches the root edge (or bare end) of a child, whose root index is already shifted.
    fn attach(&mut self, root: Option<usize>, bare: Option<usize>, w: &QVec, at: usize) {
        match (root, bare) {
            (Some(r), _) => self.edges.push((r, at, w.clone())),
            (None, Some(k)) => self.ends.push((at, k)),
            (None, None) => unreachable!("partial curve without root"),
        }
    }

    fn in_interval(&self, t: &Q) -> Option<bool> {
        if self.lo.as_ref() == Some(t) || self.hi.as_ref() == Some(t) {
            return None;
        }
        Some(self.lo.as_ref().is_none_or(|l| l < t) && self.hi.as_ref().is_none_or(|h| t < h))
    }
}

fn merge_fixed(a: &Partial, b: &Partial) -> Result<Option<Partial>> {
    let d = det2(&a.w, &b.w);
    if d.is_zero() {
        return Ok(None);
    }
    let x = scale(&d.recip(), &sub(&scale(&a.c, &b.w), &scale(&b.c, &a.w)));
    for part in [a, b] {
        if let Some(r) = part.root {
            let s = dot(&sub(&x, &part.verts[r].0), &part.w);
            if s.is_zero() {
                return non_generic("two vertices of a partial curve coincide");
            }
            if s.is_negative() {
                return Ok(None);
            }
        }
    }
    let mut out = a.clone();
    let shift = out.absorb(b);
    let v = out.verts.len();
    out.verts.push((x.clone(), zeros(2)));
    out.attach(a.root, a.bare, &a.w, v);
    out.attach(b.root.map(|r| r + shift), b.bare, &b.w, v);
    out.w = add(&a.w, &b.w);
    out.c = det2(&out.w, &x);
    out.root = Some(v);
    out.bare = None;
    out.mult = &a.mult * &b.mult * to_int(&d.abs());
    Ok(Some(out))
}

// `a` fixed, `b` free: the new vertex slides along `a`'s root line as `b` moves.
fn merge_mixed(a: &Partial, b: &Partial) -> Result<Option<Partial>> {
    let d = det2(&a.w, &b.w);
    if d.is_zero() {
        return Ok(None);
    }
    let x0 = scale(&(&a.c / &d), &b.w);
    let x1 = scale(&-d.recip(), &a.w);
    let mut lo = b.lo.clone();
    let mut hi = b.hi.clone();
    // alpha + beta τ > 0
    let mut conds: Vec<(Q, Q)> = Vec::new();
    if let Some(r) = a.root {
        conds.push((dot(&sub(&x0, &a.verts[r].0), &a.w), dot(&x1, &a.w)));
    }
    if let Some(r) = b.root {
        let (p, qq) = &b.verts[r];
        conds.push((dot(&sub(&x0, p), &b.w), dot(&sub(&x1, qq), &b.w)));
    }
    for (alpha, beta) in conds {
        if beta.is_zero() {
            if alpha.is_zero() {
                return non_generic("an edge of a partial curve has length zero throughout");
            }
            if alpha.is_negative() {
                return Ok(None);
            }
            continue;
        }
        let bound = -(&alpha / &beta);
        if beta.is_positive() {
            if lo.as_ref().is_none_or(|l| *l < bound) {
                lo = Some(bound);
            }
        } else if hi.as_ref().is_none_or(|h| bound < *h) {
            hi = Some(bound);
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l >= h {
            return Ok(None);
        }
    }
    let w = add(&a.w, &b.w);
    let alpha0 = det2(&w, &x0);
    let beta0 = det2(&w, &x1);
    // τ = (τ' - alpha0) / beta0
    let reparam = |p: &(QVec, QVec)| -> (QVec, QVec) {
        let qq = scale(&beta0.recip(), &p.1);
        (sub(&p.0, &scale(&alpha0, &qq)), qq)
    };
    let map = |t: &Q| &alpha0 + &beta0 * t;
    let (nlo, nhi) = if beta0.is_positive() { (lo.as_ref().map(map), hi.as_ref().map(map)) } else { (hi.as_ref().map(map), lo.as_ref().map(map)) };
    let mut out = a.clone();
    out.verts = a.verts.iter().map(|(p, _)| (p.clone(), zeros(2))).collect();
    let shift = out.verts.len();
    out.verts.extend(b.verts.iter().map(reparam));
    out.edges.extend(b.edges.iter().map(|(x, y, u)| (x + shift, y + shift, u.clone())));
    out.ends.extend(b.ends.iter().map(|(v, k)| (v + shift, *k)));
    out.points.extend(b.points.iter().map(|(v, j)| (v + shift, *j)));
    let v = out.verts.len();
    out.verts.push(reparam(&(x0, x1)));
    out.attach(a.root, a.bare, &a.w, v);
    out.attach(b.root.map(|r| r + shift), b.bare, &b.w, v);
    out.w = w;
    out.free = true;
    out.c = Q::zero();
    out.root = Some(v);
    out.bare = None;
    out.lo = nlo;
    out.hi = nhi;
    out.mult = &a.mult * &b.mult * to_int(&d.abs());
    Ok(Some(out))
}

fn merge_point(a: &Partial, j: usize, p: &QVec) -> Result<Option<Partial>> {
    if !a.free {
        if det2(&a.w, p) == a.c && a.root.is_none_or(|r| !dot(&sub(p, &a.verts[r].0), &a.w).is_negative()) {
            return non_generic(format!("point {j} lies on a rigid partial curve"));
        }
        return Ok(None);
    }
    let t = det2(&a.w, p);
    match a.in_interval(&t) {
        None => return non_generic(format!("point {j} forces an edge of length zero")),
        Some(false) => return Ok(None),
        Some(true) => {}
    }
    if let Some(r) = a.root {
        let s = dot(&sub(p, &at(&a.verts[r], &t)), &a.w);
        if s.is_zero() {
            return non_generic(format!("point {j} sits on a vertex"));
        }
        if s.is_negative() {
            return Ok(None);
        }
    }
    let mut out = a.clone();
    out.verts = a.verts.iter().map(|pq| (at(pq, &t), zeros(2))).collect();
    let v = out.verts.len();
    out.verts.push((p.clone(), zeros(2)));
    out.attach(a.root, a.bare, &a.w, v);
    out.points.push((v, j));
    out.free = false;
    out.c = t;
    out.root = Some(v);
    out.bare = None;
    out.lo = None;
    out.hi = None;
    Ok(Some(out))
}

/// All rational tropical curves solving `p`, each once, with multiplicity the product of
/// `|det(m₁u₁, m₂u₂)|` over trivalent vertices divided by the weights of the fixed ends.
///
/// Curves are assembled bottom-up from partial curves rooted at one end of the first free
/// class: a partial curve either has a rigid root line or moves in a one-parameter family
/// that a point or a rigid partner pins down.
pub fn enumerate_rigid_planar(p: &PlanarCountProblem) -> Result<PlanarEnumeration> {
    let classes = end_classes(&p.ends);
    let root_class = classes.iter().position(|c| c.end.offset.is_none()).ok_or_else(|| CountingError::Input("no free end".into()))?;
    let mut cap: Vec<u8> = classes.iter().map(|c| c.count as u8).collect();
    cap[root_class] -= 1;
    let full_mask: u64 = if p.points.is_empty() { 0 } else { (1u64 << p.points.len()) - 1 };
    let target = Key { counts: cap.clone(), mask: full_mask };
    let target_size = target.size();

    let mut levels: Vec<BTreeMap<Key, Vec<Partial>>> = vec![BTreeMap::new(); target_size.max(1) + 1];
    for (k, c) in classes.iter().enumerate() {
        if cap[k] == 0 {
            continue;
        }
        let mut counts = vec![0u8; classes.len()];
        counts[k] = 1;
        levels[1].insert(Key { counts, mask: 0 }, vec![Partial::leaf(k, c)]);
    }
    for size in 2..=target_size {
        let mut next: BTreeMap<Key, Vec<Partial>> = BTreeMap::new();
        for (key, list) in &levels[size - 1] {
            if slack(key, &classes) != 1 {
                continue;
            }
            for (j, pt) in p.points.iter().enumerate() {
                if key.mask & (1 << j) != 0 {
                    continue;
                }
                let nk = Key { counts: key.counts.clone(), mask: key.mask | (1 << j) };
                for a in list {
                    if let Some(r) = merge_point(a, j, pt)? {
                        next.entry(nk.clone()).or_default().push(r);
                    }
                }
            }
        }
        for s1 in 1..=size / 2 {
            let s2 = size - s1;
            for (k1, l1) in &levels[s1] {
                for (k2, l2) in &levels[s2] {
                    if s1 == s2 && k1 >= k2 {
                        continue;
                    }
                    if k1.mask & k2.mask != 0 || slack(k1, &classes) + slack(k2, &classes) > 1 {
                        continue;
                    }
                    let counts: Vec<u8> = k1.counts.iter().zip(&k2.counts).map(|(a, b)| a + b).collect();
                    if counts.iter().zip(&cap).any(|(c, m)| c > m) {
                        continue;
                    }
                    let nk = Key { counts, mask: k1.mask | k2.mask };
                    for a in l1 {
                        for b in l2 {
                            let r = match (a.free, b.free) {
                                (false, false) => merge_fixed(a, b)?,
                                (false, true) => merge_mixed(a, b)?,
                                (true, false) => merge_mixed(b, a)?,
                                (true, true) => None,
                            };
                            if let Some(r) = r {
                                next.entry(nk.clone()).or_default().push(r);
                            }
                        }
                    }
                }
            }
        }
        levels[size] = next;
    }

    let fixed_weights: BigInt = classes.iter().filter(|c| c.end.offset.is_some()).map(|c| BigInt::from(c.end.weight)).product();
    let mut seen = BTreeSet::new();
    let mut curves = Vec::new();
    if let Some(finals) = levels[target_size].get(&target) {
        for t in finals.iter().filter(|t| !t.free) {
            let verts: Vec<QVec> = t.verts.iter().map(|(p, _)| p.clone()).collect();
            let mut ends: Vec<(Option<usize>, usize)> = t.ends.iter().map(|(v, k)| (Some(*v), *k)).collect();
            match (t.root, t.bare) {
                (Some(r), _) => ends.push((Some(r), root_class)),
                (None, Some(k)) => {
                    ends.push((None, k));
                    ends.push((None, root_class));
                }
                (None, None) => unreachable!("partial curve without root"),
            }
            let curve = PlanarCurve {
                vertices: verts,
                edges: t.edges.iter().map(|(a, b, w)| (*a, *b, primitive(w), to_i64(&lattice_length(w)) as u32)).collect(),
                ends,
                points: t.points.clone(),
                multiplicity: Q::new(t.mult.clone(), fixed_weights.clone()),
            };
            if seen.insert(curve.signature()) {
                curves.push(curve);
            }
        }
    }
    curves.sort_by_key(|a| a.signature());
    let total = curves.iter().fold(Q::zero(), |s, c| s + &c.multiplicity);
    Ok(PlanarEnumeration { classes, curves, total })
}

/// Random points with small rational coordinates.
pub fn random_points(n: usize, seed: u64) -> Vec<QVec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| vec![qr(rng.gen_range(-2000..=2000), 97), qr(rng.gen_range(-2000..=2000), 89)]).collect()
}

/// The configuration a run actually used, and how many perturbations it took to get there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericityCertificate {
    pub seed: u64,
    pub attempts: usize,
    pub points: Vec<QVec>,
}

impl GenericityCertificate {
    pub fn perturbed(&self) -> bool {
        self.attempts > 1
    }
}

const MAX_ATTEMPTS: usize = 16;

/// Moves every point by a small random rational amount.
pub fn perturb(points: &[QVec], rng: &mut ChaCha8Rng) -> Vec<QVec> {
    points.iter().map(|p| p.iter().map(|x| x + qr(rng.gen_range(-1000..=1000), 1_000_003)).collect()).collect()
}

/// Runs `f` on the points, perturbing them after each non-generic failure.
pub fn with_generic_points<T>(points: &[QVec], seed: u64, mut f: impl FnMut(&[QVec]) -> Result<T>) -> Result<(T, GenericityCertificate)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = points.to_vec();
    let mut last = String::new();
    for attempt in 1..=MAX_ATTEMPTS {
        match f(&pts) {
            Ok(v) => return Ok((v, GenericityCertificate { seed, attempts: attempt, points: pts })),
            Err(CountingError::NonGenericConfiguration(msg)) => last = msg,
            Err(e) => return Err(e),
        }
        pts = perturb(&pts, &mut rng);
    }
    non_generic(format!("still degenerate after {MAX_ATTEMPTS} perturbations: {last}"))
}

/// [`enumerate_rigid_planar`], perturbing the points until they are generic.
pub fn enumerate_generic(p: &PlanarCountProblem, seed: u64) -> Result<(PlanarEnumeration, GenericityCertificate)> {
    with_generic_points(&p.points, seed, |pts| enumerate_rigid_planar(&p.with_points(pts.to_vec())))
}

// ---------------------------------------------------------------------------------------------
// orientation

/// A rigid tree directed towards an exit end: every vertex but the root has one outgoing edge,
/// the root's outgoing edge is the exit leg, and every other leg is incoming.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedRigidGraph {
    pub root: usize,
    pub exit: usize,
    /// The edge from each vertex to its parent; `None` at the root.
    pub parent: Vec<Option<usize>>,
    /// Children before parents, the root last.
    pub order: Vec<usize>,
}

impl OrientedRigidGraph {
    pub fn children(&self, t: &CombinatorialType, v: usize) -> Vec<usize> {
        (0..t.graph.edges.len()).filter(|&e| self.parent_vertex(t, e) == Some(v)).collect()
    }

    /// The head of edge `e` under this orientation.
    pub fn parent_vertex(&self, t: &CombinatorialType, e: usize) -> Option<usize> {
        let (a, b) = t.graph.edges[e];
        if self.parent[a] == Some(e) {
            Some(b)
        } else if self.parent[b] == Some(e) {
            Some(a)
        } else {
            None
        }
    }
}

fn is_tree(g: &Graph) -> bool {
    if g.vertices == 0 || g.edges.len() + 1 != g.vertices {
        return false;
    }
    g.components() == 1
}

/// Orients `t` towards the leg `exit`, which must have positive contact order.
pub fn orient_at(t: &CombinatorialType, exit: usize) -> Result<OrientedRigidGraph> {
    if !is_tree(&t.graph) || exit >= t.legs.len() || t.legs[exit].m == 0 {
        return Err(CountingError::NoValidOrientation);
    }
    let root = t.graph.legs[exit];
    let nv = t.graph.vertices;
    let mut parent = vec![None; nv];
    let mut seen = vec![false; nv];
    seen[root] = true;
    let mut bfs = vec![root];
    let mut k = 0;
    while k < bfs.len() {
        let v = bfs[k];
        k += 1;
        for (e, &(a, b)) in t.graph.edges.iter().enumerate() {
            let w = if a == v { b } else if b == v { a } else { continue };
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(e);
                bfs.push(w);
            }
        }
    }
    bfs.reverse();
    Ok(OrientedRigidGraph { root, exit, parent, order: bfs })
}

/// Every valid orientation, one per leg of positive contact order.
pub fn orientations(t: &CombinatorialType) -> Vec<OrientedRigidGraph> {
    (0..t.legs.len()).filter_map(|l| orient_at(t, l).ok()).collect()
}

/// The orientation whose exit leg sits at the least vertex (least leg index among ties).
pub fn orient(t: &CombinatorialType) -> Result<OrientedRigidGraph> {
    let exit = (0..t.legs.len()).filter(|&l| t.legs[l].m > 0).min_by_key(|&l| (t.graph.legs[l], l)).ok_or(CountingError::NoValidOrientation)?;
    orient_at(t, exit)
}

// ---------------------------------------------------------------------------------------------
// classes and vertex operators

/// A class on a divisor that is a tropical line: `point · [pt] + fundamental · [D]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorClass {
    pub point: Q,
    pub fundamental: Q,
}

impl DivisorClass {
    pub fn zero() -> Self {
        DivisorClass { point: Q::zero(), fundamental: Q::zero() }
    }

    pub fn point_class() -> Self {
        DivisorClass { point: Q::one(), fundamental: Q::zero() }
    }

    pub fn fundamental_class() -> Self {
        DivisorClass { point: Q::zero(), fundamental: Q::one() }
    }

    pub fn add(&self, o: &Self) -> Self {
        DivisorClass { point: &self.point + &o.point, fundamental: &self.fundamental + &o.fundamental }
    }

    pub fn scale(&self, c: &Q) -> Self {
        DivisorClass { point: c * &self.point, fundamental: c * &self.fundamental }
    }

    pub fn is_zero(&self) -> bool {
        self.point.is_zero() && self.fundamental.is_zero()
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·pt + {}·[D]", self.point, self.fundamental)
    }
}

/// The class carried by a bounded edge towards its head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    pub edge: usize,
    pub class: DivisorClass,
}

/// What an oracle sees at one vertex: the component fan, the directions and contact orders of
/// every edge and end at the vertex (the degree), which of them is outgoing, which carry
/// incoming classes, and how many marked points sit on the vertex.
#[derive(Clone, Debug)]
pub struct VertexStar {
    pub fan: ConeComplex,
    pub ends: Vec<(QVec, u32)>,
    pub out: usize,
    pub incoming: Vec<usize>,
    pub points: usize,
}

pub trait VertexOracle: Send + Sync {
    fn name(&self) -> &str;

    /// The outgoing class, given one class per entry of `star.incoming`. Must be linear in
    /// each slot.
    fn apply(&self, star: &VertexStar, incoming: &[DivisorClass]) -> Result<DivisorClass>;
}

/// Genus-0 counts on a toric surface through [`enumerate_rigid_planar`].
#[derive(Clone, Copy, Debug, Default)]
pub struct PlanarOracle;

impl PlanarOracle {
    /// Rigid local count with the ends in `fixed` on generic lines and the marked points at
    /// generic positions.
    pub fn count(&self, star: &VertexStar, fixed: &[usize]) -> Result<Q> {
        let ends: Vec<PlanarEnd> = star
            .ends
            .iter()
            .enumerate()
            .map(|(i, (u, m))| {
                let k = i as i64;
                let offset = fixed.contains(&i).then(|| qr(7 * k + 3, 11) + qr(1, k + 5));
                PlanarEnd { dir: primitive(u), weight: *m, offset }
            })
            .collect();
        let points: Vec<QVec> = (0..star.points as i64).map(|j| vec![qr(13 * j + 5, 17), qr(-19 * j + 2, 23)]).collect();
        let problem = PlanarCountProblem::new(star.fan.clone(), ends, points)?;
        Ok(enumerate_generic(&problem, 0)?.0.total)
    }
}

impl VertexOracle for PlanarOracle {
    fn name(&self) -> &str {
        "planar"
    }

    fn apply(&self, star: &VertexStar, incoming: &[DivisorClass]) -> Result<DivisorClass> {
        check_complete_fan(&star.fan)?;
        let e = star.ends.len();
        if e == 0 || star.ends.iter().any(|(u, m)| *m == 0 || is_zero(u)) {
            return Err(CountingError::UnsupportedGeometry("vertex of degree 0".into()));
        }
        if incoming.len() != star.incoming.len() {
            return input("one class per incoming edge");
        }
        let mut out = DivisorClass::zero();
        // expand each incoming class in the point/fundamental basis
        for choice in 0..(1u64 << incoming.len()) {
            let mut coeff = Q::one();
            let mut fixed = Vec::new();
            for (i, c) in incoming.iter().enumerate() {
                if choice & (1 << i) != 0 {
                    coeff *= &c.point;
                    fixed.push(star.incoming[i]);
                } else {
                    coeff *= &c.fundamental;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            let conditions = fixed.len() + star.points;
            if conditions + 1 == e {
                out.point += coeff * self.count(star, &fixed)?;
            } else if conditions + 2 == e {
                fixed.push(star.out);
                out.fundamental += coeff * self.count(star, &fixed)?;
            }
        }
        Ok(out)
    }
}

pub fn gw_vertex_operator_planar(star: &VertexStar, incoming: &[DivisorClass]) -> Result<DivisorClass> {
    PlanarOracle.apply(star, incoming)
}

/// Named vertex oracles; `planar` is always present.
pub struct OracleRegistry {
    oracles: BTreeMap<String, Box<dyn VertexOracle>>,
}

impl Default for OracleRegistry {
    fn default() -> Self {
        let mut r = OracleRegistry { oracles: BTreeMap::new() };
        r.register(Box::new(PlanarOracle));
        r
    }
}

impl OracleRegistry {
    pub fn register(&mut self, oracle: Box<dyn VertexOracle>) {
        self.oracles.insert(oracle.name().to_string(), oracle);
    }

    pub fn get(&self, name: &str) -> Result<&dyn VertexOracle> {
        self.oracles.get(name).map(|o| o.as_ref()).ok_or_else(|| CountingError::UnknownOracle(name.to_string()))
    }

    pub fn names(&self) -> Vec<&str> {
        self.oracles.keys().map(|s| s.as_str()).collect()
    }
}

// ---------------------------------------------------------------------------------------------
// the algorithm on a rigid type

fn check_planar_degeneration(d: &TropicalDegeneration) -> Result<()> {
    if d.fiber_ambient() != 2 {
        return Err(CountingError::UnsupportedGeometry(format!("fibers live in dimension {}", d.fiber_ambient())));
    }
    let dim = d.max_fiber_dim();
    if dim > 2 {
        return Err(CountingError::DimensionTooHigh(dim));
    }
    Ok(())
}

/// The star of vertex `v` of `t` under orientation `o`.
pub fn vertex_star(t: &CombinatorialType, o: &OrientedRigidGraph, v: usize, n: usize) -> Result<VertexStar> {
    let mut ends = Vec::new();
    let mut out = None;
    let mut incoming = Vec::new();
    for (e, &(a, b)) in t.graph.edges.iter().enumerate() {
        let dir = if a == v {
            t.edges[e].dir[..n].to_vec()
        } else if b == v {
            neg(&t.edges[e].dir[..n])
        } else {
            continue;
        };
        if t.edges[e].m == 0 {
            return Err(CountingError::UnsupportedGeometry(format!("contracted edge {e}")));
        }
        if o.parent[v] == Some(e) {
            out = Some(ends.len());
        } else {
            incoming.push(ends.len());
        }
        ends.push((dir, t.edges[e].m));
    }
    let mut points = 0;
    for (l, &w) in t.graph.legs.iter().enumerate() {
        if w != v {
            continue;
        }
        if t.legs[l].m == 0 {
            if t.leg_marked[l] {
                points += 1;
            }
            continue;
        }
        if o.root == v && o.exit == l {
            out = Some(ends.len());
        }
        ends.push((t.legs[l].dir[..n].to_vec(), t.legs[l].m));
    }
    let out = out.ok_or(CountingError::NoValidOrientation)?;
    let fan = star_fan(&ends.iter().map(|(u, _)| u.clone()).collect::<Vec<_>>())?;
    Ok(VertexStar { fan, ends, out, incoming, points })
}

/// Classes on every bounded edge and on the exit end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Propagation {
    pub orientation: OrientedRigidGraph,
    pub edges: Vec<EdgeClass>,
    pub exit: DivisorClass,
}

/// Pushes classes from the leaves to the exit through `oracle`.
pub fn propagate(d: &TropicalDegeneration, t: &RigidType, o: &OrientedRigidGraph, oracle: &dyn VertexOracle) -> Result<Propagation> {
    check_planar_degeneration(d)?;
    let ty = &t.ty;
    let n = d.fiber_ambient();
    let mut classes: BTreeMap<usize, DivisorClass> = BTreeMap::new();
    let mut exit = None;
    for &v in &o.order {
        let star = vertex_star(ty, o, v, n)?;
        let kids = o.children(ty, v);
        // incoming ends of the star are listed in edge order, as are the children
        let inc: Vec<DivisorClass> = kids.iter().map(|e| classes[e].clone()).collect();
        let c = oracle.apply(&star, &inc)?;
        match o.parent[v] {
            Some(e) => {
                classes.insert(e, c);
            }
            None => exit = Some(c),
        }
    }
    Ok(Propagation {
        orientation: o.clone(),
        edges: classes.into_iter().map(|(edge, class)| EdgeClass { edge, class }).collect(),
        exit: exit.ok_or(CountingError::NoValidOrientation)?,
    })
}

/// The contribution of one rigid type under orientation `o`: `∏ m_e` times the point
/// coefficient of the exit class. The weight `m_ρ/|Aut ρ|` is applied by the caller.
pub fn run_algorithm_oriented(d: &TropicalDegeneration, t: &RigidType, o: &OrientedRigidGraph, oracle: &dyn VertexOracle) -> Result<Q> {
    let p = propagate(d, t, o, oracle)?;
    Ok(q(mu_degree(t) as i64) * p.exit.point)
}

pub fn run_algorithm(d: &TropicalDegeneration, t: &RigidType, oracle: &dyn VertexOracle) -> Result<Q> {
    run_algorithm_oriented(d, t, &orient(&t.ty)?, oracle)
}

/// `Σ_ρ m_ρ/|Aut ρ| · run_algorithm(ρ)`.
pub fn aggregate(d: &TropicalDegeneration, types: &[RigidType], oracle: &dyn VertexOracle) -> Result<Q> {
    let mut total = Q::zero();
    for t in types {
        total += t.weight() * run_algorithm(d, t, oracle)?;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------------------------
// comparing the generic fiber with the degeneration

/// The fan of unbounded directions of the generic fiber.
pub fn recession_fan(d: &TropicalDegeneration) -> Result<ConeComplex> {
    let c = d.total();
    let n = d.fiber_ambient();
    let cones: Vec<Cone> = (0..c.len())
        .filter(|&i| c.cone(i).dim() == n && c.cone(i).rays().iter().all(|r| r[n].is_zero()))
        .map(|i| Cone::new(n, c.cone(i).rays().iter().map(|r| r[..n].to_vec()).collect()))
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CountingError::UnsupportedGeometry(e.to_string()))?;
    ConeComplex::from_fan(n, cones).map_err(|e| CountingError::UnsupportedGeometry(e.to_string()))
}

/// Degree `k` curves in the generic fiber: each recession ray `k` times.
pub fn generic_fiber_problem(d: &TropicalDegeneration, k: u32, points: Vec<QVec>) -> Result<PlanarCountProblem> {
    check_planar_degeneration(d)?;
    let fan = recession_fan(d)?;
    let ends = fan.rays().into_iter().flat_map(|r| std::iter::repeat_n(PlanarEnd::free(r, 1), k as usize)).collect();
    PlanarCountProblem::new(fan, ends, points)
}

// A plane curve split at its crossings with the walls of the generic fiber.
#[derive(Clone, Debug)]
struct Refined {
    vertices: Vec<QVec>,
    point_of: Vec<Option<usize>>,
    edges: Vec<(usize, usize, QVec, u32)>,
    ends: Vec<(usize, QVec, u32)>,
}

// Parameters in (0, hi) (hi = None for a ray) where `a + λ u` crosses a wall of the fiber.
fn crossings(walls: &[Cell], a: &QVec, u: &QVec, hi: Option<&Q>) -> Result<Vec<Q>> {
    let mut out = Vec::new();
    for w in walls {
        let v0 = &w.vertices[0];
        let (e, bounded) = if w.vertices.len() == 2 { (sub(&w.vertices[1], v0), true) } else { (w.rays[0].clone(), false) };
        let d = det2(u, &e);
        let rel = sub(v0, a);
        if d.is_zero() {
            if det2(u, &rel).is_zero() {
                return non_generic("a curve edge runs along a wall");
            }
            continue;
        }
        // a + λu = v0 + μe
        let lambda = det2(&rel, &e) / &d;
        let mu = det2(&rel, u) / &d;
        let mu_in = !mu.is_negative() && (!bounded || mu <= Q::one());
        if !mu_in {
            continue;
        }
        let lam_in = !lambda.is_negative() && hi.is_none_or(|h| lambda <= *h);
        if !lam_in {
            continue;
        }
        if lambda.is_zero() || hi == Some(&lambda) {
            return non_generic("a curve vertex lies on a wall");
        }
        if mu.is_zero() || (bounded && mu.is_one()) {
            return non_generic("a curve passes through a vertex of the fiber");
        }
        out.push(lambda);
    }
    out.sort();
    if out.windows(2).any(|w| w[0] == w[1]) {
        return non_generic("a curve crosses two walls at once");
    }
    Ok(out)
}

fn refine(curve: &PlanarCurve, classes: &[EndClass], walls: &[Cell]) -> Result<Refined> {
    let mut r = Refined { vertices: curve.vertices.clone(), point_of: vec![None; curve.vertices.len()], edges: vec![], ends: vec![] };
    for (v, j) in &curve.points {
        r.point_of[*v] = Some(*j);
    }
    for (a, b, u, m) in &curve.edges {
        let delta = sub(&curve.vertices[*b], &curve.vertices[*a]);
        let len = lattice_length(&delta);
        let cuts = crossings(walls, &curve.vertices[*a], u, Some(&len))?;
        let mut prev = *a;
        for lam in cuts {
            let x = add(&curve.vertices[*a], &scale(&lam, u));
            r.vertices.push(x);
            r.point_of.push(None);
            let v = r.vertices.len() - 1;
            r.edges.push((prev, v, u.clone(), *m));
            prev = v;
        }
        r.edges.push((prev, *b, u.clone(), *m));
    }
    for (v, k) in &curve.ends {
        let v = v.ok_or_else(|| CountingError::Input("a straight line has no vertex to anchor".into()))?;
        let u = classes[*k].end.dir.clone();
        let m = classes[*k].end.weight;
        let cuts = crossings(walls, &curve.vertices[v], &u, None)?;
        let mut prev = v;
        for lam in cuts {
            let x = add(&curve.vertices[v], &scale(&lam, &u));
            r.vertices.push(x);
            r.point_of.push(None);
            let w = r.vertices.len() - 1;
            r.edges.push((prev, w, u.clone(), m));
            prev = w;
        }
        r.ends.push((prev, u, m));
    }
    Ok(r)
}

fn lift(x: &[Q], scale_by: &Q) -> QVec {
    let mut y = scale(scale_by, x);
    y.push(Q::one());
    y
}

fn horizontal(u: &[Q]) -> QVec {
    let mut y = u.to_vec();
    y.push(Q::zero());
    y
}

/// The rigid type of `r` (scaled by `k`) in the degeneration, with its point conditions.
fn type_of(d: &TropicalDegeneration, r: &Refined, points: &[QVec], k: &Q) -> Result<RigidType> {
    let c = d.total();
    let locate = |x: &QVec| c.locate(x).ok_or_else(|| CountingError::Input(format!("{x:?} is outside the degeneration")));
    let vertex_cone: Vec<ConeId> = r.vertices.iter().map(|x| locate(&lift(x, k))).collect::<Result<_>>()?;
    let mut edge_data = Vec::new();
    for (a, b, u, m) in &r.edges {
        let mid = scale(&qr(1, 2), &add(&r.vertices[*a], &r.vertices[*b]));
        edge_data.push(EdgeData::new(locate(&lift(&mid, k))?, horizontal(u), *m));
    }
    let mut legs = Vec::new();
    let mut leg_data = Vec::new();
    let mut marked = Vec::new();
    for (v, u, m) in &r.ends {
        legs.push(*v);
        leg_data.push(EdgeData::new(locate(&lift(&add(&r.vertices[*v], u), k))?, horizontal(u), *m));
        marked.push(false);
    }
    let mut constraints = Vec::new();
    for (v, j) in r.point_of.iter().enumerate() {
        if let Some(j) = j {
            legs.push(v);
            leg_data.push(EdgeData::contracted(vertex_cone[v], 3));
            marked.push(true);
            constraints.push((v, scale(k, &points[*j])));
        }
    }
    let nv = r.vertices.len();
    let ty = CombinatorialType {
        graph: Graph::new(nv, r.edges.iter().map(|(a, b, _, _)| (*a, *b)).collect(), legs).map_err(DegenerationError::from)?,
        genus: vec![0; nv],
        vertex_cone,
        edges: edge_data,
        legs: leg_data,
        leg_marked: marked,
        degree: vec![String::new(); nv],
    };
    RigidType::constrained(d, &ty, &constraints)?.ok_or_else(|| CountingError::Input("a curve through the points gives a non-rigid type".into()))
}

/// One rigid type's share of the degeneration count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeContribution {
    pub vertices: usize,
    pub multiplicity: Q,
    pub m_rho_before: u64,
    pub m_rho: u64,
    pub aut_order: usize,
    pub value: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub degree: u32,
    pub direct: Q,
    pub via_degeneration: Q,
    pub base_change: u64,
    pub types: Vec<TypeContribution>,
    pub certificate: GenericityCertificate,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.direct == self.via_degeneration
    }
}

/// Counts degree-`k` rational curves through `points` in the generic fiber directly, and again
/// as `Σ_ρ m_ρ/|Aut ρ| · run_algorithm(ρ)` over the rigid types of the limits of those curves,
/// after a base change making every `m_ρ` equal to 1.
pub fn degeneration_consistency(d: &TropicalDegeneration, k: u32, points: &[QVec], seed: u64, oracle: &dyn VertexOracle) -> Result<ConsistencyReport> {
    check_planar_degeneration(d)?;
    let walls: Vec<Cell> = d.generic_fiber().into_iter().filter(|c| c.dim() == 1).collect();
    let base = generic_fiber_problem(d, k, points.to_vec())?;
    let ((direct, refined, before), cert) = with_generic_points(points, seed, |pts| {
        let e = enumerate_rigid_planar(&base.with_points(pts.to_vec()))?;
        let refined: Vec<(Refined, Q)> = e.curves.iter().map(|c| Ok((refine(c, &e.classes, &walls)?, c.multiplicity.clone()))).collect::<Result<_>>()?;
        let before: Vec<u64> = refined.iter().map(|(r, _)| Ok(type_of(d, r, pts, &Q::one())?.m_rho)).collect::<Result<_>>()?;
        Ok((e.total, refined, before))
    })?;
    let l = before.iter().fold(1u64, |acc, m| acc.lcm(m));
    let dl = if l == 1 { d.clone() } else { d.base_change(l.to_u32().ok_or_else(|| CountingError::Input("base change too large".into()))?)? };
    let lq = q(l as i64);
    let mut types = Vec::new();
    let mut via = Q::zero();
    for ((r, mult), m0) in refined.iter().zip(&before) {
        let t = type_of(&dl, r, &cert.points, &lq)?;
        let value = run_algorithm(&dl, &t, oracle)?;
        via += t.weight() * &value;
        types.push(TypeContribution { vertices: t.ty.graph.vertices, multiplicity: mult.clone(), m_rho_before: *m0, m_rho: t.m_rho, aut_order: t.aut_order, value });
    }
    Ok(ConsistencyReport { degree: k, direct, via_degeneration: via, base_change: l, types, certificate: cert })
}
