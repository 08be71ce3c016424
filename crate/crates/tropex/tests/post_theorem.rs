use std::time::Instant;

use tropex::samples::random_universal_family;
use tropex::transversalize::*;

#[test]
fn random_families_reach_all_conclusions() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (mut base_split, mut curve_split, mut relattice) = (0, 0, 0);
    for seed in 0..200 {
        let u = random_universal_family(seed, 6);
        match transversalize_family(&u, &TransversalizeOptions::default()) {
            Ok(r) => {
                let rep = verify_conclusions(&r);
                if !rep.all_ok() {
                    failures.push(format!("seed {seed}: {:?}", rep.failure()));
                }
                base_split += usize::from(!r.base_subdivision.is_trivial());
                relattice += usize::from(!r.saturation.is_trivial());
                curve_split += usize::from(r.refined.iter().any(|f| f.map.curve.graph.vertices > u.families[f.input].curve.graph.vertices));
            }
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    eprintln!("{base_split} split bases, {curve_split} split curves, {relattice} refined lattices in {:?}", start.elapsed());
    assert!(failures.is_empty(), "{failures:#?}");
    assert!(base_split >= 10 && curve_split >= 20, "sampler too tame");
}
