use tropex::degeneration::*;
use tropex::linalg::*;
use tropex::map::realize_map;
use tropex::samples::random_rigid_type;

#[test]
fn cut_glue_smooth_recovers_random_rigid_types() {
    let etas = [qr(1, 3), q(1), qr(5, 2), q(4), qr(17, 5)];
    for seed in 0..60 {
        let (d, r) = random_rigid_type(seed);
        let sf = d.special_fiber().unwrap();
        let f = r.family(&d).unwrap();
        let cm = cut(&d, &sf, &f).unwrap();
        let points: Vec<QVec> = cm.pieces.iter().map(|_| vec![]).collect();
        let g = glue(&sf, &cm, &points, None).unwrap();
        let back = smooth(&d, &sf, &g).unwrap();
        assert_eq!(back, f, "seed {seed}");
        for eta in &etas {
            let a = smooth_at(&back, eta).unwrap();
            let b = realize_map(&f, std::slice::from_ref(eta)).unwrap();
            assert_eq!(a, b, "seed {seed}");
            assert_eq!(a.image_cells(), b.image_cells());
        }
        assert!(mu_degree(&r) >= 1);
        assert!(r.m_rho >= 1);
    }
}
