//! Small worked examples used by tests, the CLI and the acceptance suite.

use crate::complex::*;
use crate::degeneration::TropicalDegeneration;
use crate::cone::*;
use crate::linalg::*;

/// The fan over the square with vertices `(±1,±1)`.
pub fn square_fan() -> ConeComplex {
    let c = [[1, 1], [-1, 1], [-1, -1], [1, -1]];
    let cones = (0..4)
        .map(|i| Cone::from_ints(2, &[&c[i], &c[(i + 1) % 4]]))
        .collect();
    ConeComplex::from_fan(2, cones).expect("square fan")
}

/// The fan of the projective plane with rays `(1,0)`, `(0,1)`, `(-1,-1)`.
pub fn p2_fan() -> ConeComplex {
    let r = [[1, 0], [0, 1], [-1, -1]];
    let cones = (0..3)
        .map(|i| Cone::from_ints(2, &[&r[i], &r[(i + 1) % 3]]))
        .collect();
    ConeComplex::from_fan(2, cones).expect("P2 fan")
}

fn square_total_cones(drop_corner: bool, extra: bool) -> Vec<Cone> {
    let c = [[1, 1], [-1, 1], [-1, -1], [1, -1]];
    let mut cones = Vec::new();
    for i in 0..4 {
        let [a, b] = c[i];
        let [x, y] = c[(i + 1) % 4];
        cones.push(Cone::from_ints(3, &[&[a, b, 1], &[x, y, 1]]));
        if !(drop_corner && i == 0) {
            cones.push(Cone::from_ints(3, &[&[a, b, 1], &[a, b, 0]]));
        } else {
            cones.push(Cone::from_ints(3, &[&[a, b, 1]]));
        }
    }
    if extra {
        cones.push(Cone::from_ints(3, &[&[1, 1, 1], &[1, 0, 1]]));
    }
    cones
}

fn closed(cones: Vec<Cone>) -> Vec<Cone> {
    let mut all: Vec<Cone> = cones.iter().flat_map(|c| c.faces()).collect();
    all.sort();
    all.dedup();
    all
}

fn expansion_from(total: ConeComplex, base_scale: i64) -> TropicalExpansion {
    let to_target = ComplexMorphism::linear(total.clone(), square_fan(), vec![qv(&[1, 0, 0]), qv(&[0, 1, 0])])
        .expect("projection to the square fan");
    let to_base = ComplexMorphism::linear(total, ray_base(), vec![qv(&[0, 0, base_scale])]).expect("height map");
    TropicalExpansion { to_target, to_base }
}

/// The degeneration of the square-fan surface into four planes: over height `t` the fiber is
/// the square with corners `(±t,±t)` and a ray out of each corner.
pub fn four_p2_expansion() -> TropicalExpansion {
    let total = ConeComplex::from_fan(3, square_total_cones(false, false)).expect("total fan");
    expansion_from(total, 1)
}

/// Deliberately broken variants of [`four_p2_expansion`], each violating one axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExpansionMutant {
    /// A cone over the apex is assigned to the base ray.
    NonEquidimensional,
    /// The height map is doubled, so the base lattice is hit with index 2.
    CoarsenedLattice,
    /// An extra edge in the fiber overlaps an existing one.
    BrokenFiberEmbedding,
    /// One unbounded corner ray is missing from the fiber over 0.
    DroppedSkeletonRay,
}

impl ExpansionMutant {
    pub const ALL: [ExpansionMutant; 4] = [
        ExpansionMutant::NonEquidimensional,
        ExpansionMutant::CoarsenedLattice,
        ExpansionMutant::BrokenFiberEmbedding,
        ExpansionMutant::DroppedSkeletonRay,
    ];

    /// The (1-based) axiom this mutant is built to violate.
    pub fn axiom(self) -> usize {
        match self {
            ExpansionMutant::NonEquidimensional => 1,
            ExpansionMutant::CoarsenedLattice => 2,
            ExpansionMutant::BrokenFiberEmbedding => 3,
            ExpansionMutant::DroppedSkeletonRay => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExpansionMutant::NonEquidimensional => "non-equidimensional reassignment",
            ExpansionMutant::CoarsenedLattice => "coarsened lattice",
            ExpansionMutant::BrokenFiberEmbedding => "broken fiber embedding",
            ExpansionMutant::DroppedSkeletonRay => "dropped skeleton ray",
        }
    }
}

pub fn four_p2_mutant(m: ExpansionMutant) -> TropicalExpansion {
    match m {
        ExpansionMutant::NonEquidimensional => {
            let mut e = four_p2_expansion();
            let tb = &e.to_base;
            let corner = Cone::from_ints(3, &[&[1, 1, 0]]);
            let i = tb.source.find(&corner).expect("corner ray");
            let ray = tb.target.find(&Cone::from_ints(1, &[&[1]])).expect("base ray");
            let mut assign = tb.assign.clone();
            assign[i] = ray;
            e.to_base = ComplexMorphism::from_parts(tb.source.clone(), tb.target.clone(), assign, tb.maps.clone());
            e
        }
        ExpansionMutant::CoarsenedLattice => {
            let total = ConeComplex::from_fan(3, square_total_cones(false, false)).expect("total fan");
            expansion_from(total, 2)
        }
        ExpansionMutant::BrokenFiberEmbedding => {
            let total = ConeComplex::embedded_unchecked(closed(square_total_cones(false, true)));
            expansion_from(total, 1)
        }
        ExpansionMutant::DroppedSkeletonRay => {
            let total = ConeComplex::from_fan(3, square_total_cones(true, false)).expect("total fan");
            expansion_from(total, 1)
        }
    }
}

fn degeneration_of(n: usize, cones: &[&[&[i64]]]) -> TropicalDegeneration {
    let cones = cones.iter().map(|c| Cone::from_ints(n, c)).collect();
    TropicalDegeneration::new(ConeComplex::from_fan(n, cones).expect("total fan")).expect("degeneration")
}

/// The line degenerating into three components: the fiber over `t` is `R` subdivided at
/// `-t, 0, t`.
pub fn p1_three_components() -> TropicalDegeneration {
    degeneration_of(
        2,
        &[
            &[&[-1, 0], &[-1, 1]],
            &[&[-1, 1], &[0, 1]],
            &[&[0, 1], &[1, 1]],
            &[&[1, 1], &[1, 0]],
        ],
    )
}

/// The surface of the square fan degenerating into four planes: the fiber over `t` is the
/// square with corners `(±t,±t)`, the strips over its sides, and the corner rays.
pub fn square_degeneration() -> TropicalDegeneration {
    let c = [[1, 1], [-1, 1], [-1, -1], [1, -1]];
    let mut cones = vec![Cone::from_ints(3, &[&[1, 1, 1], &[-1, 1, 1], &[-1, -1, 1], &[1, -1, 1]])];
    for i in 0..4 {
        let [a, b] = c[i];
        let [x, y] = c[(i + 1) % 4];
        cones.push(Cone::from_ints(3, &[&[a, b, 1], &[x, y, 1], &[a, b, 0], &[x, y, 0]]));
    }
    TropicalDegeneration::new(ConeComplex::from_fan(3, cones).expect("total fan")).expect("degeneration")
}

/// The plane degenerating into four planes with a triple point: vertices `(0,0)`, `(1,0)`,
/// `(0,1)`, `(-1,-1)`, bounded edges from the origin to the other three, and recession fan
/// with rays `(1,1)`, `(-1,0)`, `(0,-1)`.
pub fn p2_four_planes() -> TropicalDegeneration {
    degeneration_of(
        3,
        &[
            &[&[1, 0, 1], &[0, 0, 1], &[0, 1, 1], &[1, 1, 0]],
            &[&[1, 0, 1], &[0, 0, 1], &[-1, -1, 1], &[0, -1, 0]],
            &[&[0, 1, 1], &[0, 0, 1], &[-1, -1, 1], &[-1, 0, 0]],
            &[&[1, 0, 1], &[1, 1, 0], &[0, -1, 0]],
            &[&[0, 1, 1], &[1, 1, 0], &[-1, 0, 0]],
            &[&[-1, -1, 1], &[-1, 0, 0], &[0, -1, 0]],
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_p2_passes_all_axioms() {
        let r = verify_expansion_axioms(&four_p2_expansion());
        assert!(r.all_ok(), "{r:?}");
    }

    #[test]
    fn mutants_fail_exactly_their_axiom() {
        for m in ExpansionMutant::ALL {
            let r = verify_expansion_axioms(&four_p2_mutant(m));
            assert_eq!(r.failing(), vec![m.axiom()], "{m:?}: {r:?}");
            assert!(r.axioms[m.axiom() - 1].witness.is_some());
        }
    }

    #[test]
    fn four_p2_fibers() {
        let e = four_p2_expansion();
        let f1 = fiber(&e.to_base, &q(1)).unwrap();
        let count = |d: usize, bounded: bool| f1.iter().filter(|c| c.dim() == d && c.is_bounded() == bounded).count();
        assert_eq!((count(0, true), count(1, true), count(1, false)), (4, 4, 4));
        let f0 = fiber(&e.to_base, &q(0)).unwrap();
        assert_eq!(f0.len(), 5);
    }
}
