use tropex::counting::*;
use tropex::fixtures::p2_four_planes;
use tropex::linalg::q;

#[test]
fn cubics_through_the_four_plane_degeneration() {
    let d = p2_four_planes();
    let r = degeneration_consistency(&d, 3, &random_points(8, 3), 3, &PlanarOracle).unwrap();
    assert_eq!(r.direct, q(12));
    assert_eq!(r.via_degeneration, q(12), "{r:?}");
    assert!(r.types.iter().all(|t| t.m_rho == 1));
}
