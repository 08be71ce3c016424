//! Seeded random families of tropical maps for property tests and the acceptance suite.

use rand::seq::SliceRandom;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::*;
use crate::cone::*;
use crate::curve::*;
use crate::degeneration::{RigidType, TropicalDegeneration};
use crate::fixtures::{p1_three_components, p2_four_planes, p2_fan, square_degeneration, square_fan};
use crate::linalg::*;
use crate::map::*;
use crate::transversalize::UniversalFamily;

fn fan(n: usize, cones: &[&[&[i64]]]) -> ConeComplex {
    ConeComplex::from_fan(n, cones.iter().map(|c| Cone::from_ints(n, c)).collect()).expect("sample fan")
}

/// Small embedded targets of dimension 1 to 3.
pub fn sample_targets() -> Vec<ConeComplex> {
    let e = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]];
    let p3: Vec<Vec<&[i64]>> = (0..4).map(|skip| (0..4).filter(|&i| i != skip).map(|i| &e[i][..]).collect()).collect();
    let p3: Vec<&[&[i64]]> = p3.iter().map(|c| &c[..]).collect();
    vec![
        ray_base(),
        fan(1, &[&[&[1]], &[&[-1]]]),
        fan(2, &[&[&[1, 0], &[0, 1]]]),
        p2_fan(),
        square_fan(),
        fan(3, &[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]]),
        fan(3, &p3),
    ]
}

/// Nonnegative integral combination of `gens`, not all coefficients zero unless `allow_zero`.
fn combination<R: Rng>(rng: &mut R, gens: &[QVec], n: usize, allow_zero: bool) -> QVec {
    loop {
        let mut v = zeros(n);
        for g in gens {
            v = add(&v, &scale(&q(rng.gen_range(0..=2)), g));
        }
        if allow_zero || !is_zero(&v) {
            return v;
        }
        if gens.is_empty() {
            return v;
        }
    }
}

/// The covector taking the values `vals` on the rays `rays` of a simplicial full-dimensional cone.
fn covector_from_values(rays: &[QVec], vals: &[Q]) -> QVec {
    let k = rays.len();
    solve(&rays.to_vec(), vals, k).expect("simplicial base cone")
}

/// Matrix `A` with `A r_i = cols[i]`.
fn matrix_from_values(rays: &[QVec], cols: &[QVec], n: usize) -> QMat {
    (0..n)
        .map(|j| {
            let vals: Vec<Q> = cols.iter().map(|c| c[j].clone()).collect();
            covector_from_values(rays, &vals)
        })
        .collect()
}

fn cones_over<R: Rng>(rng: &mut R, target: &ConeComplex, face: ConeId) -> ConeId {
    let f = target.cone(face).clone();
    let std = |c: &Cone| c.relattice(Lattice::standard(c.ambient()));
    let over: Vec<ConeId> = (0..target.len()).filter(|&i| target.cone(i).dim() > 0 && std(target.cone(i)).has_face(&std(&f))).collect();
    *over.choose(rng).expect("every cone lies in a nonzero cone")
}

/// A random family over the simplicial full-dimensional cone `base` with at most `max_cones`
/// vertices, edges and legs in total. Every edge and leg stays inside one target cone.
pub fn random_map_family<R: Rng>(rng: &mut R, target: &ConeComplex, base: &Cone, max_cones: usize) -> TropicalMapFamily {
    shaped_family(rng, target, base, max_cones, false)
}

/// With `star`, every edge starts at vertex 0 and there are as many vertices as fit.
fn shaped_family<R: Rng>(rng: &mut R, target: &ConeComplex, base: &Cone, max_cones: usize, star: bool) -> TropicalMapFamily {
    let n = target.ambient().expect("embedded target");
    let k = base.ambient();
    let rays = base.rays().to_vec();
    let c = base.interior_point();
    let most = 3.min(max_cones.div_ceil(2)).max(2);
    let nv = if star { most } else { rng.gen_range(2..=most) };
    let start = rng.gen_range(0..target.len());
    let gens = target.cone(start).rays().to_vec();
    let cols: Vec<QVec> = rays.iter().map(|_| combination(rng, &gens, n, true)).collect();
    let mut positions = vec![matrix_from_values(&rays, &cols, n)];
    let mut edges = Vec::new();
    let mut lengths = Vec::new();
    let mut data: Vec<(QVec, u32)> = Vec::new();
    for v in 1..nv {
        let parent = if star { 0 } else { rng.gen_range(0..v) };
        let here = target.locate(&mat_vec(&positions[parent], &c)).expect("vertex in target");
        let vals: Vec<Q> = loop {
            let vals: Vec<Q> = rays.iter().map(|_| q(rng.gen_range(0..=2))).collect();
            if vals.iter().any(|x| !x.is_zero()) {
                break vals;
            }
        };
        let len = covector_from_values(&rays, &vals);
        let m: u32 = *[0, 1, 1, 2].choose(rng).unwrap();
        let (dir, pos) = if m == 0 {
            (zeros(n), positions[parent].clone())
        } else {
            let over = cones_over(rng, target, here);
            let u = primitive(&combination(rng, target.cone(over).rays(), n, false));
            let pos = positions[parent]
                .iter()
                .zip(&u)
                .map(|(row, uj)| row.iter().zip(&len).map(|(x, l)| x + uj * q(m as i64) * l).collect())
                .collect();
            (u, pos)
        };
        positions.push(pos);
        edges.push((parent, v));
        lengths.push(len);
        data.push((dir, m));
    }
    let budget = max_cones.saturating_sub(nv + edges.len()).min(3);
    let nl = rng.gen_range(0..=budget);
    let mut legs = Vec::new();
    let mut leg_data = Vec::new();
    for _ in 0..nl {
        let v = rng.gen_range(0..nv);
        let here = target.locate(&mat_vec(&positions[v], &c)).expect("vertex in target");
        let m: u32 = *[0, 1, 1, 2].choose(rng).unwrap();
        let dir = if m == 0 {
            zeros(n)
        } else {
            let over = cones_over(rng, target, here);
            primitive(&combination(rng, target.cone(over).rays(), n, false))
        };
        legs.push(v);
        leg_data.push((dir, m));
    }
    let graph = Graph::new(nv, edges.clone(), legs.clone()).expect("tree");
    let curve = TropicalCurveFamily::new(graph, vec![0; nv], base.clone(), lengths.clone()).expect("curve family");
    let at = |v: usize| mat_vec(&positions[v], &c);
    let vertex_cone: Vec<ConeId> = (0..nv).map(|v| target.locate(&at(v)).unwrap()).collect();
    let edge_data = edges
        .iter()
        .zip(&data)
        .zip(&lengths)
        .map(|((&(a, b), (dir, m)), _)| {
            if *m == 0 {
                EdgeData::contracted(vertex_cone[a], n)
            } else {
                let mid = scale(&qr(1, 2), &add(&at(a), &at(b)));
                EdgeData::new(target.locate(&mid).unwrap(), dir.clone(), *m)
            }
        })
        .collect();
    let leg_data = legs
        .iter()
        .zip(&leg_data)
        .map(|(&v, (dir, m))| {
            if *m == 0 {
                EdgeData::contracted(vertex_cone[v], n)
            } else {
                EdgeData::new(target.locate(&add(&at(v), dir)).unwrap(), dir.clone(), *m)
            }
        })
        .collect();
    let _ = k;
    TropicalMapFamily::new(curve, target.clone(), vertex_cone, positions, edge_data, leg_data).expect("sampled family")
}

/// Base fans used by the sampler: the orthant of dimension `k`, or for `k = 2` optionally two
/// adjacent quadrants.
pub fn sample_base(k: usize, two_cones: bool) -> Vec<Cone> {
    let mut out = vec![Cone::new(k, (0..k).map(|i| unit(k, i)).collect()).expect("orthant")];
    if two_cones && k == 2 {
        out.push(Cone::from_ints(2, &[&[0, 1], &[-1, 0]]));
    }
    out
}

/// A random universal family: one random target, a base of dimension 1 to 3, and a family over
/// each maximal base cone with at most `max_cones` curve cones.
pub fn random_universal_family(seed: u64, max_cones: usize) -> UniversalFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let targets = sample_targets();
    let target = targets.choose(&mut rng).unwrap().clone();
    let k = *[1, 2, 2, 3, 3].choose(&mut rng).unwrap();
    let base = sample_base(k, rng.gen_bool(0.3));
    let fams = base.iter().map(|b| random_map_family(&mut rng, &target, b, max_cones)).collect();
    UniversalFamily::new(fams).expect("sampled universal family")
}

/// A random family to the ray `R>=0` over an orthant of dimension 2 or 3.
pub fn random_ray_family(seed: u64, max_cones: usize) -> UniversalFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(2..=3);
    let base = sample_base(k, false);
    let star = rng.gen_bool(0.5);
    let f = shaped_family(&mut rng, &ray_base(), &base[0], max_cones, star);
    UniversalFamily::new(vec![f]).expect("sampled ray family")
}

/// Small degenerations: the three-component line, the four-plane degenerations of the square
/// surface and of the plane, and base changes of two of them.
pub fn desk_degenerations() -> Vec<TropicalDegeneration> {
    let p1 = p1_three_components();
    let sq = square_degeneration();
    vec![p1.base_change(2).expect("base change"), p1, sq.clone(), p2_four_planes(), sq.base_change(3).expect("base change")]
}

/// A random rigid tree on one of [`desk_degenerations`]: vertices on the component rays, edges
/// over bounded edges of the generic fiber, legs either contracted or along unbounded rays.
pub fn random_rigid_type(seed: u64) -> (TropicalDegeneration, RigidType) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degs = desk_degenerations();
    let d = degs.choose(&mut rng).unwrap().clone();
    let sf = d.special_fiber().expect("special fiber");
    let c = d.total();
    let n = d.fiber_ambient();
    let nv = rng.gen_range(1..=4);
    let mut comp = vec![rng.gen_range(0..sf.components.len())];
    let mut edges = Vec::new();
    let mut edge_data = Vec::new();
    for v in 1..nv {
        let parent = rng.gen_range(0..v);
        let here = comp[parent];
        let next: Vec<usize> = sf.divisors.iter().filter_map(|dv| if dv.ends.0 == here { Some(dv.ends.1) } else if dv.ends.1 == here { Some(dv.ends.0) } else { None }).collect();
        let there = *next.choose(&mut rng).expect("connected special fiber");
        let dv = &sf.divisors[sf.divisor_between(here, there).unwrap()];
        let mut dir = primitive(&sub(&sf.components[there].vertex, &sf.components[here].vertex));
        dir.push(q(0));
        comp.push(there);
        edges.push((parent, v));
        edge_data.push(EdgeData::new(dv.cone, dir, rng.gen_range(1..=3)));
    }
    let nl = rng.gen_range(0..=2);
    let mut legs = Vec::new();
    let mut leg_data = Vec::new();
    for _ in 0..nl {
        let v = rng.gen_range(0..nv);
        let ray = sf.components[comp[v]].ray;
        // unbounded directions at this vertex: 2-cones through its ray with a vertical ray
        let unbounded: Vec<(ConeId, QVec)> = (0..c.len())
            .filter(|&i| c.cone(i).dim() == 2 && c.is_face(ray, i))
            .filter_map(|i| c.cone(i).rays().iter().find(|r| r[n].is_zero()).map(|r| (i, r.clone())))
            .collect();
        if unbounded.is_empty() || rng.gen_bool(0.4) {
            leg_data.push(EdgeData::contracted(ray, n + 1));
        } else {
            let (i, u) = unbounded.choose(&mut rng).unwrap().clone();
            leg_data.push(EdgeData::new(i, primitive(&u), rng.gen_range(1..=2)));
        }
        legs.push(v);
    }
    let ty = CombinatorialType {
        graph: Graph::new(nv, edges, legs).expect("tree"),
        genus: vec![0; nv],
        vertex_cone: comp.iter().map(|&k| sf.components[k].ray).collect(),
        edges: edge_data,
        leg_marked: leg_data.iter().map(|l| l.m == 0).collect(),
        legs: leg_data,
        degree: vec![String::new(); nv],
    };
    let r = RigidType::new(&d, &ty).expect("valid type").expect("rigid");
    (d, r)
}

/// A random stable curve over an orthant of dimension 1 to 3 with injective moduli map: every
/// vertex has `2g - 2 + valence > 0`.
pub fn random_stable_curve(seed: u64) -> TropicalCurveFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(2..=4);
    let genus: Vec<u32> = (0..nv).map(|_| u32::from(rng.gen_bool(0.25))).collect();
    let mut edges: Vec<(usize, usize)> = (1..nv).map(|v| (rng.gen_range(0..v), v)).collect();
    for _ in 0..rng.gen_range(0..=2) {
        edges.push((rng.gen_range(0..nv), rng.gen_range(0..nv)));
    }
    let mut legs: Vec<usize> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..nv)).collect();
    let mut g = Graph::new(nv, edges, vec![]).expect("graph");
    for (v, &gv) in genus.iter().enumerate() {
        let have = g.valence(v) + legs.iter().filter(|&&l| l == v).count();
        for _ in have + 2 * gv as usize..3 {
            legs.push(v);
        }
    }
    g.legs = legs;
    let k = rng.gen_range(1..=g.edges.len().min(3));
    let base = sample_base(k, false).remove(0);
    loop {
        let lengths: Vec<QVec> = (0..g.edges.len())
            .map(|_| loop {
                let l: QVec = (0..k).map(|_| q(rng.gen_range(0..=3))).collect();
                if !is_zero(&l) {
                    break l;
                }
            })
            .collect();
        let c = TropicalCurveFamily::new(g.clone(), genus.clone(), base.clone(), lengths).expect("stable curve");
        if c.moduli_map_injective() {
            return c;
        }
    }
}

/// One to three random edge subdivisions of `c`, at integral splits or at a fraction of the
/// edge. The base lattice is refined where a piece is not integral.
pub fn random_edge_subdivision(c: &TropicalCurveFamily, seed: u64) -> TropicalCurveFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = c.clone();
    for _ in 0..rng.gen_range(1..=3) {
        let e = rng.gen_range(0..out.graph.edges.len());
        let l = out.lengths[e].clone();
        let mut a: QVec = l.iter().map(|x| q(rng.gen_range(0..=x.to_integer().try_into().unwrap_or(0i64)))).collect();
        if rng.gen_bool(0.5) || is_zero(&a) || a == l {
            a = scale([qr(1, 2), qr(1, 3), qr(2, 3)].choose(&mut rng).unwrap(), &l);
        }
        out = out.subdivide_edge(e, &a, &sub(&l, &a), true).expect("valid split");
    }
    out
}
