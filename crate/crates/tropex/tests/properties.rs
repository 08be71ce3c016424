use num_traits::Zero;
use proptest::prelude::*;

use tropex::complex::*;
use tropex::cone::*;
use tropex::counting::*;
use tropex::curve::*;
use tropex::fan::*;
use tropex::fixtures::*;
use tropex::linalg::*;
use tropex::samples::{random_edge_subdivision, random_stable_curve};

fn int_vec(n: usize, r: i64) -> impl Strategy<Value = QVec> {
    prop::collection::vec(-r..=r, n).prop_map(|v| qv(&v))
}

fn int_mat(rows: usize, cols: usize, r: i64) -> impl Strategy<Value = QMat> {
    prop::collection::vec(int_vec(cols, r), rows)
}

fn cone_gens() -> impl Strategy<Value = (usize, Vec<QVec>)> {
    (1usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(int_vec(n, 3), 1..=5)))
}

fn orthant(n: usize) -> Cone {
    Cone::new(n, (0..n).map(|i| unit(n, i)).collect()).unwrap()
}

fn index_of(f: &IntegralLinearMap, c: &Cone) -> Option<num_bigint::BigInt> {
    match lattice_index(f, c) {
        Index::Finite(i) => Some(i),
        Index::Infinite => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn generators_and_inequalities_agree((n, gens) in cone_gens()) {
        let c = Cone::new(n, gens.clone());
        prop_assume!(c.is_ok());
        let c = c.unwrap();
        for r in c.rays() {
            prop_assert_eq!(&primitive(r), r);
        }
        for g in &gens {
            prop_assert!(c.contains(g));
        }
        let back = Cone::from_inequalities(n, c.facets(), c.equations()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn images_compose((n, gens) in cone_gens(), f in int_mat(3, 4, 2), g in int_mat(2, 3, 2)) {
        let c = Cone::new(n, gens);
        prop_assume!(c.is_ok());
        let c = c.unwrap();
        let f: QMat = f.into_iter().map(|r| r[..n].to_vec()).collect();
        let fm = IntegralLinearMap::standard(f.clone(), n);
        let gm = IntegralLinearMap::standard(g.clone(), 3);
        let gf = IntegralLinearMap::standard(mat_mul(&g, &f, n), n);
        let once = image_cone(&gf, &c);
        let twice = image_cone(&fm, &c).and_then(|i| image_cone(&gm, &i));
        prop_assume!(once.is_ok() && twice.is_ok());
        prop_assert_eq!(once.unwrap(), twice.unwrap());
    }

    #[test]
    fn stellar_subdivision_keeps_support(w in prop::collection::vec(1i64..=4, 3), pts in prop::collection::vec(prop::collection::vec(0i64..=6, 3), 1..=6)) {
        let fan = ConeComplex::from_fan(3, vec![orthant(3)]).unwrap();
        let id = fan.find(&orthant(3)).unwrap();
        let ray = qv(&w);
        let s = stellar_subdivide(&fan, id, &ray).unwrap();
        let fine = s.fine();
        for r in fan.rays() {
            prop_assert!(fine.rays().contains(&r));
        }
        for p in pts {
            let x = qv(&p);
            let cones = fine.maximal_cones();
            prop_assert!(cones.iter().any(|c| c.contains(&x)));
            prop_assert!(cones.iter().filter(|c| c.in_relint(&x)).count() <= 1);
        }
    }

    #[test]
    fn lattice_index_multiplies(n in 1usize..=3, f in int_mat(3, 3, 3), g in int_mat(3, 3, 3)) {
        let f: QMat = f[..n].iter().map(|r| r[..n].to_vec()).collect();
        let g: QMat = g[..n].iter().map(|r| r[..n].to_vec()).collect();
        prop_assume!(!det(&f).is_zero() && !det(&g).is_zero());
        let c = orthant(n);
        let fm = IntegralLinearMap::standard(f.clone(), n);
        let gm = IntegralLinearMap::standard(g.clone(), n);
        let gf = IntegralLinearMap::standard(mat_mul(&g, &f, n), n);
        let fc = image_cone(&fm, &c).unwrap();
        let lhs = index_of(&gf, &c).unwrap();
        let rhs = index_of(&gm, &fc).unwrap() * index_of(&fm, &c).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn subdividing_an_edge_splits_its_length(lens in prop::collection::vec(1i64..=9, 1..=4), e in 0usize..4, num in 1i64..=4) {
        let k = lens.len();
        let e = e % k;
        // a chain of k edges with a loop closing it, so genus 1
        let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (i, i + 1)).collect();
        edges.push((k, 0));
        let mut all = lens.clone();
        all.push(1);
        let c = TropicalCurveFamily::over_ray(Graph::new(k + 1, edges, vec![0]).unwrap(), vec![0; k + 1], &all).unwrap();
        let t = qr(num, 5);
        let a = vec![&t * q(lens[e])];
        let b = vec![(q(1) - &t) * q(lens[e])];
        let s = c.subdivide_edge(e, &a, &b, true).unwrap();
        prop_assert_eq!(s.genus(), c.genus());
        let p = [q(1)];
        let before = c.realize(&p).unwrap();
        let after = s.realize(&p).unwrap();
        let total = |m: &MetricCurve| m.lengths.iter().fold(q(0), |x, y| x + y);
        prop_assert_eq!(total(&before), total(&after));
        prop_assert_eq!(&after.lengths[e] + after.lengths.last().unwrap(), before.lengths[e].clone());
    }

    #[test]
    fn vertex_operator_is_linear(a in int_vec(2, 5), b in int_vec(2, 5), other in int_vec(2, 5), slot in 0usize..2) {
        let star = VertexStar { fan: p2_fan(), ends: vec![(qv(&[1, 0]), 1), (qv(&[0, 1]), 1), (qv(&[-1, -1]), 1)], out: 2, incoming: vec![0, 1], points: 0 };
        let cls = |v: &QVec| DivisorClass { point: v[0].clone(), fundamental: v[1].clone() };
        let with = |c: DivisorClass| {
            let mut inc = vec![cls(&other), cls(&other)];
            inc[slot] = c;
            gw_vertex_operator_planar(&star, &inc).unwrap()
        };
        let sum = with(cls(&a).add(&cls(&b)));
        prop_assert_eq!(sum, with(cls(&a)).add(&with(cls(&b))));
        let three = with(cls(&a).scale(&q(3)));
        prop_assert_eq!(three, with(cls(&a)).scale(&q(3)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn counts_do_not_depend_on_the_points(seed in any::<u64>(), d in 1u32..=2) {
        let p = PlanarCountProblem::projective_plane(d, random_points(3 * d as usize - 1, seed)).unwrap();
        let (e, _) = enumerate_generic(&p, seed).unwrap();
        prop_assert_eq!(e.total, q(1));
    }

    #[test]
    fn refinements_of_two_fans_are_common(shift in 1i64..=3) {
        let b = ConeComplex::from_fan(2, vec![
            Cone::from_ints(2, &[&[1, shift], &[-1, 1]]),
            Cone::from_ints(2, &[&[-1, 1], &[-1, -1]]),
            Cone::from_ints(2, &[&[-1, -1], &[1, -shift]]),
            Cone::from_ints(2, &[&[1, -shift], &[1, shift]]),
        ]).unwrap();
        let a = square_fan();
        let r = common_refinement(&a, &b).unwrap();
        prop_assert!(Subdivision::of_fans(r.clone(), a).is_ok());
        prop_assert!(Subdivision::of_fans(r, b).is_ok());
    }
}

#[test]
fn subdivided_stable_curves_are_log_stable() {
    for seed in 0..100 {
        let c = random_stable_curve(seed);
        let s = random_edge_subdivision(&c, seed);
        let ctx = StabilityContext::combinatorial(&s);
        let r = check_log_stability(&s, &ctx, s.moduli_map_injective(), true);
        assert!(r.ok, "seed {seed}: {r:?}");
        assert!(s.graph.vertices > c.graph.vertices);
    }
}
