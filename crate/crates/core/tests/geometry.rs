use std::f64::consts::PI;

use heatcorner::geometry::{geodesic_distance, RotationalProfile, SurfacePointPolar};
use proptest::prelude::*;

fn profiles() -> Vec<RotationalProfile> {
    vec![RotationalProfile::sphere(1.0, 1.2).unwrap(), RotationalProfile::bump(1.5, 1.2).unwrap()]
}

fn point() -> impl Strategy<Value = (f64, f64)> {
    (0.0f64..0.4, 0.0f64..2.0 * PI)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn distance_from_vertex_is_radius(r in 0.0f64..0.45, th in 0.0f64..2.0 * PI) {
        for p in profiles() {
            let d = geodesic_distance(&p, SurfacePointPolar::new(0.0, 0.0), SurfacePointPolar::new(r, th)).unwrap();
            prop_assert!((d - r).abs() < 1e-10, "{} vs {}", d, r);
        }
    }

    #[test]
    fn distance_is_symmetric_and_rotation_invariant(a in point(), b in point(), shift in 0.0f64..2.0 * PI) {
        for p in profiles() {
            let (q, w) = (SurfacePointPolar::new(a.0, a.1), SurfacePointPolar::new(b.0, b.1));
            let d = geodesic_distance(&p, q, w).unwrap();
            let back = geodesic_distance(&p, w, q).unwrap();
            let turned = geodesic_distance(&p, SurfacePointPolar::new(a.0, a.1 + shift), SurfacePointPolar::new(b.0, b.1 + shift)).unwrap();
            prop_assert!((d - back).abs() < 1e-10);
            prop_assert!((d - turned).abs() < 1e-10);
        }
    }

    #[test]
    fn triangle_inequality(a in point(), b in point(), c in point()) {
        for p in profiles() {
            let [x, y, z] = [a, b, c].map(|(r, t)| SurfacePointPolar::new(r, t));
            let (xy, yz, xz) = (
                geodesic_distance(&p, x, y).unwrap(),
                geodesic_distance(&p, y, z).unwrap(),
                geodesic_distance(&p, x, z).unwrap(),
            );
            prop_assert!(xz <= xy + yz + 1e-10);
        }
    }
}
