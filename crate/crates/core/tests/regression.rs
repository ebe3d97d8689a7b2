use curv_core::curvature::{annulus_sum, census};
use curv_core::ball::enumerate_ball;
use curv_core::group::{Family, GroupSpec};
use curv_core::Rational;

#[test]
fn heisenberg_census_counts() {
    let spec = GroupSpec::standard(Family::Heisenberg3).unwrap();
    let c = census(&spec, 8, None, 10).unwrap();
    let got: Vec<(usize, usize, usize)> =
        c.spheres.iter().map(|s| (s.positive, s.zero, s.negative)).collect();
    assert_eq!(
        got,
        vec![
            (0, 0, 4),
            (0, 0, 12),
            (0, 8, 28),
            (0, 22, 60),
            (16, 24, 124),
            (24, 82, 188),
            (56, 128, 292),
            (80, 248, 396),
        ]
    );
    let t = enumerate_ball(&spec, 10).unwrap();
    for s in &c.spheres {
        assert_eq!(s.total(), t.sphere(s.sphere).len());
        for (x, k) in &s.positive_witnesses {
            assert!(k.is_positive());
            assert_eq!(t.norm(x).unwrap(), s.sphere);
        }
        assert!(s.negative_witnesses.iter().all(|(_, k)| k.is_negative()));
    }
}

#[test]
fn heisenberg_annulus_values() {
    let spec = GroupSpec::standard(Family::Heisenberg3).unwrap();
    let t = enumerate_ball(&spec, 10).unwrap();
    let a = annulus_sum(&t, 3, 8).unwrap();
    assert_eq!(a.lhs, Rational::from_integer(-720));
    assert_eq!((a.y1.len(), a.y2.len()), (88, 1528));
    assert_eq!(a.bound, Rational::from_integer(492));
}
