use tropex::samples::random_ray_family;
use tropex::transversalize::*;

#[test]
fn li_and_general_construction_agree() {
    let mut split = 0;
    for seed in 0..60 {
        let u = random_ray_family(seed, 6);
        let li = li_subdivision(&u.families[0]).unwrap();
        let r = transversalize_family(&u, &TransversalizeOptions::default()).unwrap();
        if let Err(e) = compare_with_li(&r, &li) {
            panic!("seed {seed}: {e}");
        }
        split += usize::from(li.base.maximal().len() > 1);
    }
    assert!(split >= 8, "only {split} families with a split base");
}
