//! Named example documents. Randomized ones are drawn from `--seed`.

use serde_json::json;

use tropex::complex::*;
use tropex::cone::*;
use tropex::counting::{random_points, PlanarCountProblem};
use tropex::curve::*;
use tropex::degeneration::*;
use tropex::fan::stellar_subdivide;
use tropex::fixtures::*;
use tropex::linalg::*;
use tropex::map::*;
use tropex::samples::*;

use crate::codec::*;

pub struct Fixture {
    pub name: &'static str,
    pub kind: Kind,
    pub about: &'static str,
    build: fn(u64) -> Document,
}

impl Fixture {
    pub fn build(&self, seed: u64) -> Document {
        (self.build)(seed)
    }
}

fn mutant_name(m: ExpansionMutant) -> &'static str {
    match m {
        ExpansionMutant::NonEquidimensional => "four-p2-non-equidimensional",
        ExpansionMutant::CoarsenedLattice => "four-p2-coarsened-lattice",
        ExpansionMutant::BrokenFiberEmbedding => "four-p2-broken-fiber-embedding",
        ExpansionMutant::DroppedSkeletonRay => "four-p2-dropped-skeleton-ray",
    }
}

fn mutant(name: &str) -> Document {
    let m = ExpansionMutant::ALL.into_iter().find(|&m| mutant_name(m) == name).expect("known mutant");
    Document::new(Kind::Morphism, enc_expansion(&four_p2_mutant(m)))
}

fn id_of(c: &ConeComplex, rays: &[&[i64]]) -> ConeId {
    let n = c.ambient().expect("embedded");
    c.find(&Cone::from_ints(n, rays)).expect("cone of the fixture")
}

fn p2_line(_: u64) -> Document {
    let fan = p2_fan();
    let curve = TropicalCurveFamily::new(Graph::new(1, vec![], vec![0, 0, 0]).expect("graph"), vec![0], Cone::zero(0), vec![]).expect("curve");
    let legs = [[1, 0], [0, 1], [-1, -1]].iter().map(|r| EdgeData::new(id_of(&fan, &[r]), qv(r), 1)).collect();
    let zero = id_of(&fan, &[]);
    let f = TropicalMapFamily::new(curve, fan, vec![zero], vec![vec![vec![], vec![]]], vec![], legs).expect("line");
    Document::new(Kind::MapFamily, enc_map(&f))
}

fn first_example(_: u64) -> Document {
    let c = TropicalCurveFamily::new(Graph::new(1, vec![], vec![0]).expect("graph"), vec![0], Cone::zero(0), vec![]).expect("curve");
    let mut v = enc_curve(&c);
    v["stability"] = json!({ "stable_vertices": [] });
    Document::new(Kind::CurveFamily, v)
}

fn stable_edge(_: u64) -> Document {
    let g = Graph::new(2, vec![(0, 1)], vec![0, 0, 1, 1]).expect("graph");
    let c = TropicalCurveFamily::new(g, vec![0, 0], Cone::from_ints(1, &[&[1]]), vec![qv(&[2])]).expect("curve");
    Document::new(Kind::CurveFamily, enc_curve(&c))
}

fn p1_chain(_: u64) -> Document {
    let d = p1_three_components();
    let c = d.total();
    let (xs, ms) = ([-1i64, 0, 1], [2u32, 3]);
    let edges = (0..2).map(|i| EdgeData::new(id_of(c, &[&[xs[i], 1], &[xs[i + 1], 1]]), qv(&[1, 0]), ms[i])).collect();
    let ty = CombinatorialType {
        graph: Graph::new(3, vec![(0, 1), (1, 2)], vec![]).expect("chain"),
        genus: vec![0; 3],
        vertex_cone: xs.iter().map(|&x| id_of(c, &[&[x, 1]])).collect(),
        edges,
        legs: vec![],
        leg_marked: vec![],
        degree: vec![String::new(); 3],
    };
    Document::new(Kind::RigidType, enc_rigid(&d, &ty, &[]))
}

fn random_rigid(seed: u64) -> Document {
    let (d, r) = random_rigid_type(seed);
    Document::new(Kind::RigidType, enc_rigid(&d, &r.ty, &[]))
}

/// Two one-vertex pieces on neighbouring planes of the square degeneration, sliding along
/// their divisor with the given offsets.
fn square_pair(offsets: (Q, Q)) -> Document {
    let d = square_degeneration();
    let sf = d.special_fiber().expect("special fiber");
    let comp = |x: i64, y: i64| sf.components.iter().position(|c| c.vertex == qv(&[x, y])).expect("component");
    let (a, b) = (comp(1, 1), comp(-1, 1));
    let divisor = sf.divisor_between(a, b).expect("divisor");
    let piece = |component: usize, v: usize, off: &Q, dir: i64| ComponentMap {
        component,
        vertices: vec![v],
        genus: vec![0],
        base: Cone::from_ints(1, &[&[1]]),
        positions: vec![vec![vec![q(0)], vec![off.clone()]]],
        legs: vec![ComponentLeg { vertex: v, dir: qv(&[dir, 0]), m: 1, origin: LegOrigin::Node(0) }],
    };
    let cm = CutMap {
        pieces: vec![piece(a, 0, &offsets.0, -1), piece(b, 1, &offsets.1, 1)],
        nodes: vec![NodePair { edge: 0, divisor, m: 1, ends: (0, 1), pieces: (0, 1) }],
        num_vertices: 2,
        leg_vertices: vec![],
    };
    Document::new(
        Kind::Result,
        json!({
            "command": "cut",
            "degeneration": enc_degeneration(&d),
            "cut": enc_cut(&cm),
            "base_points": [enc_vec(&qv(&[1])), enc_vec(&qv(&[1]))],
        }),
    )
}

fn planar(d: u32, seed: u64) -> Document {
    let p = PlanarCountProblem::projective_plane(d, random_points(3 * d as usize - 1, seed)).expect("plane problem");
    Document::new(Kind::CountProblem, enc_planar(&p))
}

fn four_planes(d: u32, seed: u64) -> Document {
    let pts = random_points(3 * d as usize - 1, seed);
    Document::new(Kind::CountProblem, enc_degeneration_count(&p2_four_planes(), d, Some(&pts), "planar"))
}

macro_rules! fixture {
    ($name:expr, $kind:ident, $about:expr, $build:expr) => {
        Fixture { name: $name, kind: Kind::$kind, about: $about, build: $build }
    };
}

pub fn all() -> Vec<Fixture> {
    vec![
        fixture!("p2-fan", Complex, "fan of the projective plane", |_| Document::new(Kind::Complex, enc_complex(&p2_fan()))),
        fixture!("square-fan", Complex, "fan over the square with corners (±1,±1)", |_| Document::new(Kind::Complex, enc_complex(&square_fan()))),
        fixture!("orthant-3d", Complex, "the positive orthant of R^3", |_| {
            let c = Cone::from_ints(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
            Document::new(Kind::Complex, enc_complex(&ConeComplex::from_fan(3, vec![c]).expect("orthant")))
        }),
        fixture!("p2-star-subdivision", Morphism, "stellar subdivision of the P2 fan at (1,1)", |_| {
            let fan = p2_fan();
            let s = stellar_subdivide(&fan, id_of(&fan, &[&[1, 0], &[0, 1]]), &qv(&[1, 1])).expect("stellar");
            Document::new(Kind::Morphism, enc_morphism(&s.morphism))
        }),
        fixture!("four-p2", Morphism, "the four-plane expansion of the square-fan surface", |_| Document::new(Kind::Morphism, enc_expansion(&four_p2_expansion()))),
        fixture!("four-p2-non-equidimensional", Morphism, "four-P2 with a corner ray reassigned (fails axiom 1)", |_| mutant("four-p2-non-equidimensional")),
        fixture!("four-p2-coarsened-lattice", Morphism, "four-P2 over a doubled base lattice (fails axiom 2)", |_| mutant("four-p2-coarsened-lattice")),
        fixture!("four-p2-broken-fiber-embedding", Morphism, "four-P2 with an overlapping fiber cell (fails axiom 3)", |_| mutant("four-p2-broken-fiber-embedding")),
        fixture!("four-p2-dropped-skeleton-ray", Morphism, "four-P2 missing a corner ray (fails axiom 4)", |_| mutant("four-p2-dropped-skeleton-ray")),
        fixture!("p2-line", MapFamily, "the tropical line in the P2 fan", p2_line),
        fixture!("universal-family", MapFamily, "random family over a two-cone base", |s| Document::new(Kind::MapFamily, enc_universal(&random_universal_family(s, 6)))),
        fixture!("ray-family", MapFamily, "random family with target R>=0", |s| Document::new(Kind::MapFamily, enc_universal(&random_ray_family(s, 6)))),
        fixture!("first-example", CurveFamily, "one rational vertex with one marking (unstable)", first_example),
        fixture!("stable-edge", CurveFamily, "two trivalent vertices joined by an edge over R>=0", stable_edge),
        fixture!("p1-three-components", Degeneration, "the line degenerating into three components", |_| Document::new(Kind::Degeneration, enc_degeneration(&p1_three_components()))),
        fixture!("square-degeneration", Degeneration, "the square-fan surface degenerating into four planes", |_| Document::new(Kind::Degeneration, enc_degeneration(&square_degeneration()))),
        fixture!("p2-four-planes", Degeneration, "the plane degenerating into four planes", |_| Document::new(Kind::Degeneration, enc_degeneration(&p2_four_planes()))),
        fixture!("p1-chain", RigidType, "chain through the three components of the line, weights 2 and 3", p1_chain),
        fixture!("rigid-type", RigidType, "random rigid tree on a small degeneration", random_rigid),
        fixture!("glue-pair", Result, "cut map of two pieces whose evaluations agree", |_| square_pair((q(0), q(0)))),
        fixture!("glue-mismatch", Result, "cut map whose node evaluations disagree", |_| square_pair((qr(-1, 2), qr(-1, 3)))),
        fixture!("glue-not-vertex", Result, "cut map whose node evaluation misses the divisor's vertex", |_| square_pair((qr(-1, 2), qr(-1, 2)))),
        fixture!("p2-degree-1", CountProblem, "lines through 2 points", |s| planar(1, s)),
        fixture!("p2-degree-2", CountProblem, "conics through 5 points", |s| planar(2, s)),
        fixture!("p2-degree-3", CountProblem, "rational cubics through 8 points", |s| planar(3, s)),
        fixture!("p2-four-planes-degree-1", CountProblem, "lines, counted through the four-plane degeneration", |s| four_planes(1, s)),
        fixture!("p2-four-planes-degree-2", CountProblem, "conics, counted through the four-plane degeneration", |s| four_planes(2, s)),
        fixture!("p2-four-planes-degree-3", CountProblem, "rational cubics, counted through the four-plane degeneration", |s| four_planes(3, s)),
    ]
}

pub fn get(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}
