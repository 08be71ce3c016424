//! Subdivisions of embedded fans: stellar subdivision, domains of linearity of piecewise
//! linear expressions, common refinements, and piecewise linear functions.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::complex::*;
use crate::cone::*;
use crate::linalg::*;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubdivisionError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("not a subdivision: {0:?}")]
    NotASubdivision(SubdivisionReport),
    #[error("covectors disagree on the shared face of cones {0} and {1}")]
    Incompatible(ConeId, ConeId),
}

/// A subdivision, recorded as the morphism from the finer complex to the coarser one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub morphism: ComplexMorphism,
}

impl Subdivision {
    pub fn new(morphism: ComplexMorphism) -> Result<Self, SubdivisionError> {
        let r = verify_subdivision(&morphism);
        if !r.ok {
            return Err(SubdivisionError::NotASubdivision(r));
        }
        Ok(Subdivision { morphism })
    }

    /// The refinement map of embedded fans with the same support.
    pub fn of_fans(fine: ConeComplex, coarse: ConeComplex) -> Result<Self, SubdivisionError> {
        let n = coarse.ambient().ok_or(ComplexError::NotEmbedded)?;
        Self::new(ComplexMorphism::linear(fine, coarse, identity(n))?)
    }

    pub fn fine(&self) -> &ConeComplex {
        &self.morphism.source
    }

    pub fn coarse(&self) -> &ConeComplex {
        &self.morphism.target
    }

    pub fn is_trivial(&self) -> bool {
        self.fine().len() == self.coarse().len()
    }
}

/// Stellar subdivision of an embedded fan at `ray`, which must lie in the relative interior of
/// cone `id` of dimension at least 2.
pub fn stellar_subdivide(c: &ConeComplex, id: ConeId, ray: &[Q]) -> Result<Subdivision, SubdivisionError> {
    let n = c.ambient().ok_or(ComplexError::NotEmbedded)?;
    let tau = c.cone(id);
    if tau.dim() < 2 || !tau.in_relint(ray) {
        return Err(ComplexError::RayNotInInterior(id).into());
    }
    let ray = primitive(ray);
    let mut out = Vec::new();
    for m in c.maximal() {
        let sigma = c.cone(m);
        if !c.is_face(id, m) {
            out.push(sigma.clone());
            continue;
        }
        for g in sigma.faces() {
            if g.dim() + 1 != sigma.dim() || g.contains_cone(tau) {
                continue;
            }
            let mut gens = g.rays().to_vec();
            gens.push(ray.clone());
            out.push(Cone::new(n, gens).map_err(ComplexError::from)?);
        }
    }
    let fine = ConeComplex::from_fan(n, out)?;
    Subdivision::of_fans(fine, c.clone())
}

/// Split every maximal cone of `cones` along the hyperplane `l = 0` where it crosses.
pub fn split_by_hyperplane(cones: &[Cone], l: &[Q]) -> Vec<Cone> {
    let mut out = Vec::new();
    for c in cones {
        let vals: Vec<Q> = c.rays().iter().map(|r| dot(l, r)).collect();
        let has_pos = vals.iter().any(Signed::is_positive);
        let has_neg = vals.iter().any(Signed::is_negative);
        if !(has_pos && has_neg) {
            out.push(c.clone());
            continue;
        }
        for sgn in [q(1), q(-1)] {
            let mut ineqs = c.facets().to_vec();
            ineqs.push(scale(&sgn, l));
            let h = Cone::from_inequalities(c.ambient(), &ineqs, c.equations()).expect("pointed");
            out.push(h);
        }
    }
    out
}

/// A formal piecewise linear expression built from covectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlExpr {
    Lin(QVec),
    Abs(Box<PlExpr>),
    Neg(Box<PlExpr>),
    Scale(Q, Box<PlExpr>),
    Sum(Vec<PlExpr>),
    Max(Vec<PlExpr>),
    Min(Vec<PlExpr>),
}

impl PlExpr {
    pub fn lin(v: QVec) -> Self {
        PlExpr::Lin(v)
    }

    /// `-Σ |l_j|`, the bending function used to cut images of cones out as unions of cones.
    pub fn neg_sum_abs(ls: &[QVec]) -> Self {
        PlExpr::Neg(Box::new(PlExpr::Sum(ls.iter().map(|l| PlExpr::Abs(Box::new(PlExpr::Lin(l.clone())))).collect())))
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        match self {
            PlExpr::Lin(v) => dot(v, x),
            PlExpr::Abs(e) => e.eval(x).abs(),
            PlExpr::Neg(e) => -e.eval(x),
            PlExpr::Scale(c, e) => c * e.eval(x),
            PlExpr::Sum(es) => es.iter().fold(Q::zero(), |a, e| a + e.eval(x)),
            PlExpr::Max(es) => es.iter().map(|e| e.eval(x)).max().expect("nonempty max"),
            PlExpr::Min(es) => es.iter().map(|e| e.eval(x)).min().expect("nonempty min"),
        }
    }

    /// The linear function agreeing with `self` on a cone on which it is linear, read off at
    /// the interior point `p`.
    pub fn linear_part(&self, p: &[Q]) -> QVec {
        match self {
            PlExpr::Lin(v) => v.clone(),
            PlExpr::Abs(e) => {
                let l = e.linear_part(p);
                if dot(&l, p).is_negative() { neg(&l) } else { l }
            }
            PlExpr::Neg(e) => neg(&e.linear_part(p)),
            PlExpr::Scale(c, e) => scale(c, &e.linear_part(p)),
            PlExpr::Sum(es) => es.iter().fold(zeros(p.len()), |a, e| add(&a, &e.linear_part(p))),
            PlExpr::Max(es) => es.iter().max_by_key(|e| e.eval(p)).expect("nonempty").linear_part(p),
            PlExpr::Min(es) => es.iter().min_by_key(|e| e.eval(p)).expect("nonempty").linear_part(p),
        }
    }

    fn refine(&self, cones: Vec<Cone>) -> Vec<Cone> {
        match self {
            PlExpr::Lin(_) => cones,
            PlExpr::Abs(e) => {
                let mut out = Vec::new();
                for c in e.refine(cones) {
                    let l = e.linear_part(&c.interior_point());
                    out.extend(split_by_hyperplane(&[c], &l));
                }
                out
            }
            PlExpr::Neg(e) | PlExpr::Scale(_, e) => e.refine(cones),
            PlExpr::Sum(es) => es.iter().fold(cones, |cs, e| e.refine(cs)),
            PlExpr::Max(es) | PlExpr::Min(es) => {
                let cs = es.iter().fold(cones, |cs, e| e.refine(cs));
                let mut out = Vec::new();
                for c in cs {
                    let p = c.interior_point();
                    let ls: Vec<QVec> = es.iter().map(|e| e.linear_part(&p)).collect();
                    let mut pieces = vec![c];
                    for i in 0..ls.len() {
                        for j in i + 1..ls.len() {
                            pieces = split_by_hyperplane(&pieces, &sub(&ls[i], &ls[j]));
                        }
                    }
                    out.extend(pieces);
                }
                out
            }
        }
    }
}

/// Merge adjacent maximal cones on which `phi` has the same linear part whenever their union
/// is a cone; repeats until nothing merges.
fn merge_linear(phi: &PlExpr, mut cones: Vec<Cone>) -> Vec<Cone> {
    loop {
        let mut merged = false;
        'search: for i in 0..cones.len() {
            for j in i + 1..cones.len() {
                let (a, b) = (&cones[i], &cones[j]);
                if a.dim() != b.dim() {
                    continue;
                }
                let shared = a.intersect(b);
                if shared.dim() + 1 != a.dim() {
                    continue;
                }
                if phi.linear_part(&a.interior_point()) != phi.linear_part(&b.interior_point()) {
                    continue;
                }
                let Some(u) = convex_union(a, b, &shared) else { continue };
                {
                    cones.remove(j);
                    cones.remove(i);
                    cones.push(u);
                    merged = true;
                    break 'search;
                }
            }
        }
        if !merged {
            cones.sort();
            return cones;
        }
    }
}

/// The cone `a ∪ b` when it is convex; `shared` is their common facet.
pub(crate) fn convex_union(a: &Cone, b: &Cone, shared: &Cone) -> Option<Cone> {
    let mut gens = a.rays().to_vec();
    gens.extend(b.rays().iter().cloned());
    let u = Cone::new(a.ambient(), gens).ok()?;
    let h = a.facets().iter().find(|c| shared.rays().iter().all(|r| dot(c, r).is_zero()))?.clone();
    let half = |sign: Q| {
        let mut ineqs = u.facets().to_vec();
        ineqs.push(scale(&sign, &h));
        Cone::from_inequalities(u.ambient(), &ineqs, u.equations()).ok()
    };
    (half(q(1))?.rays() == a.rays() && half(q(-1))?.rays() == b.rays()).then_some(u)
}

/// Domains of linearity of `phi` on the cone `c`, as a fan subdividing `c`.
pub fn domains_of_linearity(phi: &PlExpr, c: &Cone) -> ConeComplex {
    let pieces = phi.refine(vec![c.clone()]);
    let pieces = merge_linear(phi, pieces);
    ConeComplex::from_fan(c.ambient(), pieces).expect("refinement of a cone is a fan")
}

/// Refinement of every maximal cone of an embedded fan by `phi`.
pub fn refine_fan(phi: &PlExpr, fan: &ConeComplex) -> Result<ConeComplex, ComplexError> {
    let n = fan.ambient().ok_or(ComplexError::NotEmbedded)?;
    let mut out = Vec::new();
    for c in fan.maximal_cones() {
        out.extend(merge_linear(phi, phi.refine(vec![c])));
    }
    ConeComplex::from_fan(n, out)
}

/// Coarsest common refinement of two subdivisions of the same support.
pub fn common_refinement(a: &ConeComplex, b: &ConeComplex) -> Result<ConeComplex, ComplexError> {
    let n = a.ambient().ok_or(ComplexError::NotEmbedded)?;
    let mut cells = Vec::new();
    for x in a.maximal_cones() {
        for y in b.maximal_cones() {
            let z = x.intersect(&y);
            if z.dim() == x.dim().min(y.dim()) && (x.relints_meet(&y)) {
                cells.push(z);
            }
        }
    }
    cells.sort();
    cells.dedup();
    ConeComplex::from_fan(n, cells)
}

/// A piecewise linear function on an embedded fan: one covector per maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction {
    pub carrier: ConeComplex,
    pub per_cone: BTreeMap<ConeId, QVec>,
}

impl PLFunction {
    pub fn new(carrier: ConeComplex, per_cone: BTreeMap<ConeId, QVec>) -> Result<Self, SubdivisionError> {
        let ids: Vec<ConeId> = per_cone.keys().copied().collect();
        for (x, &i) in ids.iter().enumerate() {
            for &j in &ids[x + 1..] {
                let shared = carrier.cone(i).intersect(carrier.cone(j));
                let d = sub(&per_cone[&i], &per_cone[&j]);
                if shared.rays().iter().any(|r| !dot(&d, r).is_zero()) {
                    return Err(SubdivisionError::Incompatible(i, j));
                }
            }
        }
        Ok(PLFunction { carrier, per_cone })
    }

    /// Restriction of an expression to a fan on whose maximal cones it is linear.
    pub fn from_expr(phi: &PlExpr, carrier: ConeComplex) -> Result<Self, SubdivisionError> {
        let per_cone = carrier
            .maximal()
            .into_iter()
            .map(|i| (i, phi.linear_part(&carrier.cone(i).interior_point())))
            .collect();
        Self::new(carrier, per_cone)
    }

    pub fn eval(&self, x: &[Q]) -> Option<Q> {
        self.per_cone.iter().find(|(&i, _)| self.carrier.cone(i).contains(x)).map(|(_, v)| dot(v, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadrant() -> Cone {
        Cone::from_ints(2, &[&[1, 0], &[0, 1]])
    }

    #[test]
    fn stellar_in_quadrant() {
        let f = ConeComplex::from_fan(2, vec![quadrant()]).unwrap();
        let s = stellar_subdivide(&f, f.find(&quadrant()).unwrap(), &qv(&[1, 1])).unwrap();
        assert_eq!(s.fine().maximal().len(), 2);
        let ray = f.find(&Cone::from_ints(2, &[&[1, 0]])).unwrap();
        assert!(matches!(stellar_subdivide(&f, ray, &qv(&[1, 0])), Err(SubdivisionError::Complex(ComplexError::RayNotInInterior(_)))));
    }

    #[test]
    fn stellar_in_octant() {
        let oct = Cone::from_ints(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let f = ConeComplex::from_fan(3, vec![oct.clone()]).unwrap();
        let s = stellar_subdivide(&f, f.find(&oct).unwrap(), &qv(&[1, 1, 1])).unwrap();
        assert_eq!(s.fine().maximal().len(), 3);
    }

    #[test]
    fn abs_difference_splits_diagonal() {
        let phi = PlExpr::neg_sum_abs(&[qv(&[1, -1])]);
        let d = domains_of_linearity(&phi, &quadrant());
        assert_eq!(d.maximal().len(), 2);
        assert!(d.find(&Cone::from_ints(2, &[&[1, 1]])).is_some());
        let lin = domains_of_linearity(&PlExpr::lin(qv(&[1, 2])), &quadrant());
        assert_eq!(lin.maximal().len(), 1);
    }

    #[test]
    fn plane_by_abs_values_unchanged() {
        let fan = ConeComplex::from_fan(
            2,
            vec![
                Cone::from_ints(2, &[&[1, 0], &[0, 1]]),
                Cone::from_ints(2, &[&[-1, 0], &[0, 1]]),
                Cone::from_ints(2, &[&[-1, 0], &[0, -1]]),
                Cone::from_ints(2, &[&[1, 0], &[0, -1]]),
            ],
        )
        .unwrap();
        let phi = PlExpr::neg_sum_abs(&[qv(&[1, 0]), qv(&[0, 1])]);
        let r = refine_fan(&phi, &fan).unwrap();
        assert_eq!(r.len(), fan.len());
        assert!(PLFunction::from_expr(&phi, r).is_ok());
    }

    #[test]
    fn refinement_of_two_splits() {
        let f = ConeComplex::from_fan(2, vec![quadrant()]).unwrap();
        let id = f.find(&quadrant()).unwrap();
        let a = stellar_subdivide(&f, id, &qv(&[1, 1])).unwrap();
        let b = stellar_subdivide(&f, id, &qv(&[1, 2])).unwrap();
        let c = common_refinement(a.fine(), b.fine()).unwrap();
        assert_eq!(c.maximal().len(), 3);
        let same = common_refinement(a.fine(), a.fine()).unwrap();
        assert_eq!(&same, a.fine());
    }
}
