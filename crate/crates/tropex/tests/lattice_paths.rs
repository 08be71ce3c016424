#[path = "support/lattice_paths.rs"]
mod paths;

use paths::lattice_path_count;
use tropex::counting::*;
use tropex::linalg::q;

#[test]
fn lattice_paths_match_known_values() {
    assert_eq!(lattice_path_count(1), 1);
    assert_eq!(lattice_path_count(2), 1);
    assert_eq!(lattice_path_count(3), 12);
}

#[test]
fn enumerator_agrees_with_lattice_paths() {
    for d in 1..=3 {
        let expected = lattice_path_count(d);
        let p = PlanarCountProblem::projective_plane(d as u32, random_points(3 * d as usize - 1, 40 + d as u64)).unwrap();
        let (e, _) = enumerate_generic(&p, 0).unwrap();
        assert_eq!(e.total, q(expected), "degree {d}");
    }
}
