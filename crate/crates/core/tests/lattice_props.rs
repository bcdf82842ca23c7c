use nil_cover::covering::equidistant_projection;
use nil_cover::geodesic::distance;
use nil_cover::lattice::{
    domain_volume, fundamental_domain, lattice_from_params, lattice_points_in_shell, tiling_spot_check, LatticeBasis,
};
use nil_cover::nil::{compose, m_map, translate, NilPoint};
use nil_cover::NilError;
use proptest::prelude::*;

fn basis() -> impl Strategy<Value = LatticeBasis> {
    (0.6..1.6f64, -0.5..0.5f64, -1.0..1.0f64, -0.8..0.8f64, 0.6..1.6f64, -1.0..1.0f64)
        .prop_map(|(a, b, c, d, e, f)| LatticeBasis::new([a, b, c], [d, e, f], 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fibre_generator_is_central(b in basis()) {
        let l = lattice_from_params(&b).unwrap();
        for t in [l.tau1(), l.tau2()] {
            let (x, y) = (compose(&t, &l.tau3()), compose(&l.tau3(), &t));
            prop_assert!((x.t3 - y.t3).abs() < 1e-12 && x.t1 == y.t1 && x.t2 == y.t2);
        }
    }

    #[test]
    fn domain_vertex_identities(b in basis()) {
        let l = lattice_from_params(&b).unwrap();
        let d = fundamental_domain(&l);
        let (t11, t22) = (l.basis.t1[0], l.basis.t2[1]);
        prop_assert!(((d.t13.z - d.t1.z) - d.t3.z).abs() < 1e-12);
        prop_assert!(d.t13.x == d.t1.x && d.t13.y == d.t1.y);
        prop_assert!(((d.t21.z - d.t12.z) - t11 * t22).abs() < 1e-12);
        prop_assert!((d.t3.z - t11 * t22).abs() < 1e-12);
    }

    #[test]
    fn volume_ignores_generator_order(b in basis()) {
        let swapped = LatticeBasis::new(b.t2, b.t1, 1);
        let v1 = domain_volume(&lattice_from_params(&b).unwrap());
        let v2 = domain_volume(&lattice_from_params(&swapped).unwrap());
        prop_assert!((v1 - v2).abs() < 1e-12 * v1.max(1.0));
    }

    // The normalizing rotation is an isometry, so distances between the first
    // few orbit points do not change.
    #[test]
    fn normalization_preserves_lattice_distances(b in basis()) {
        let l = lattice_from_params(&b).unwrap();
        let raw = [b.tau1().to_point(), b.tau2().to_point(), compose(&b.tau1(), &b.tau2()).to_point()];
        let norm = [l.tau1().to_point(), l.tau2().to_point(), compose(&l.tau1(), &l.tau2()).to_point()];
        for i in 0..3 {
            let d0 = distance(&NilPoint::ORIGIN, &raw[i]).unwrap();
            let d1 = distance(&NilPoint::ORIGIN, &norm[i]).unwrap();
            prop_assert!((d0 - d1).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn equidistant_surface_is_flat_after_shear(b in basis(), x in -2.0..2.0f64, y in -2.0..2.0f64, z in -5.0..5.0f64) {
        let l = lattice_from_params(&b).unwrap();
        let q = m_map(&equidistant_projection(&NilPoint::new(x, y, z), &l));
        prop_assert!((q.z - 0.5 * l.basis.projected_area()).abs() < 1e-12);
        let p = equidistant_projection(&NilPoint::new(x, y, z), &l);
        let d0 = distance(&NilPoint::ORIGIN, &p).unwrap();
        let d3 = distance(&l.tau3().to_point(), &p).unwrap();
        prop_assert!((d0 - d3).abs() < 1e-8);
    }
}

#[test]
fn orbit_is_closed_under_generators() {
    let b = LatticeBasis::new([1.1, 0.2, 0.3], [0.4, 0.9, -0.2], 1);
    let l = lattice_from_params(&b).unwrap();
    let inner = lattice_points_in_shell(&l, 1);
    let outer = lattice_points_in_shell(&l, 3);
    for p in &inner {
        for g in [l.tau1(), l.tau2(), l.tau3(), l.tau1().inverse(), l.tau2().inverse()] {
            let q = translate(p, &g);
            assert!(outer.iter().any(|o| o.euclid_dist(&q) < 1e-10), "{q} missing");
        }
    }
}

#[test]
fn unit_shell_count_matches_brute_force() {
    let l = lattice_from_params(&LatticeBasis::new([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1)).unwrap();
    let mut brute: Vec<NilPoint> = Vec::new();
    for a in -1..=1 {
        for b in -1..=1 {
            for c in -1..=1 {
                let p = l.element(a, b, c).to_point();
                if !brute.iter().any(|q| q.euclid_dist(&p) < 1e-10) {
                    brute.push(p);
                }
            }
        }
    }
    assert_eq!(brute.len(), 27);
    assert_eq!(lattice_points_in_shell(&l, 1), brute);
}

#[test]
fn k_subdivides_the_fibre() {
    let l = lattice_from_params(&LatticeBasis::new([2.0, 0.0, 0.0], [0.0, 1.5, 0.0], 3)).unwrap();
    assert!((fundamental_domain(&l).t3.z - 1.0).abs() < 1e-15);
    assert!((domain_volume(&l) - 3.0).abs() < 1e-15);
}

#[test]
fn tiling_holds_for_three_lattices() {
    let bases = [
        LatticeBasis::new([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1),
        LatticeBasis::new([1.306_338_20, 0.0, 0.738_944_61], [0.653_169_10, 1.131_322_06, 1.108_416_92], 1),
        LatticeBasis::new([0.9, 0.4, 0.2], [-0.3, 1.2, 0.7], 1),
    ];
    for b in bases {
        let r = tiling_spot_check(&lattice_from_params(&b).unwrap(), 1000).unwrap();
        assert_eq!(r.violations, 0, "{b}");
        assert_eq!(r.samples, 1000);
    }
    let bad = LatticeBasis::new([1.0, 0.0, 0.0], [2.0, 0.0, 1.0], 1);
    assert!(matches!(lattice_from_params(&bad), Err(NilError::DegenerateLattice(_))));
}

#[test]
fn basis_json_round_trip() {
    let b: LatticeBasis = serde_json::from_str(r#"{"t1":[1.0,0.0,0.5],"t2":[0.2,1.0,0.0],"k":1}"#).unwrap();
    assert_eq!(b, LatticeBasis::new([1.0, 0.0, 0.5], [0.2, 1.0, 0.0], 1));
    let back: LatticeBasis = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
    assert_eq!(back, b);
    let no_k: LatticeBasis = serde_json::from_str(r#"{"t1":[1,0,0],"t2":[0,1,0]}"#).unwrap();
    assert_eq!(no_k.k, 1);
}
