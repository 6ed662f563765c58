use std::f64::consts::PI;

use abc_core::kstransform::{
    ab_oneform_cartesian, ab_oneform_pullback, ks_differential, ks_jacobian, ks_map, ks_matrix, spherical_to_ks,
    AuxAngle, DoublePolar, KsPoint, SphericalPoint,
};
use abc_core::Error;
use approx::assert_relative_eq;
use proptest::prelude::*;

fn cfg() -> ProptestConfig {
    ProptestConfig { cases: 2000, failure_persistence: None, ..ProptestConfig::default() }
}

fn ks_point() -> impl Strategy<Value = KsPoint> {
    prop::array::uniform4(-3.0f64..3.0).prop_filter("away from origin", |u| u.iter().map(|v| v * v).sum::<f64>() > 1e-3).prop_map(KsPoint::from_array)
}

fn det4(a: [[f64; 4]; 4]) -> f64 {
    let mut m = a;
    let mut det = 1.0;
    for c in 0..4 {
        let p = (c..4).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..4 {
            let f = m[r][c] / m[c][c];
            for k in c..4 {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

#[test]
fn fixed_points() {
    assert_eq!(ks_map(KsPoint::new(1.0, 0.0, 0.0, 0.0)), [0.0, 0.0, 1.0]);
    assert_eq!(ks_map(KsPoint::new(1.0, 1.0, 0.0, 0.0)), [0.0, 0.0, 2.0]);
    assert_eq!(ks_jacobian(KsPoint::new(1.0, 0.0, 0.0, 0.0)).unwrap(), 16.0);
    assert_eq!(ks_jacobian(KsPoint::new(0.0, 0.0, 0.0, 0.0)), Err(Error::DegeneratePoint));
}

#[test]
fn oneform_singular_on_flux_line() {
    let u = KsPoint::new(1.0, 0.0, 0.0, 0.0);
    assert!(matches!(ab_oneform_pullback(u, [0.1, 0.2, 0.3, 0.4], 1.0), Err(Error::SingularConfiguration(_))));
    assert!(matches!(ab_oneform_cartesian(u, [0.1, 0.2, 0.3, 0.4], 1.0), Err(Error::SingularConfiguration(_))));
}

#[test]
fn aux_angle_range() {
    assert!(AuxAngle::new(4.0 * PI).is_err());
    assert!(AuxAngle::new(-0.1).is_err());
    assert_relative_eq!(AuxAngle::wrapped(-0.5).value(), 4.0 * PI - 0.5);
}

#[test]
fn spherical_point_validation() {
    assert!(SphericalPoint::new(0.0, 1.0, 1.0).is_err());
    assert!(SphericalPoint::new(1.0, 3.2, 1.0).is_err());
    assert!(SphericalPoint::new(1.0, 1.0, 2.0 * PI).is_err());
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn radius_is_norm_squared(u in ks_point()) {
        let [x, y, z] = ks_map(u);
        let r = (x * x + y * y + z * z).sqrt();
        prop_assert!((r - u.norm_sq()).abs() <= 1e-14 * u.norm_sq().max(1.0));
    }

    #[test]
    fn matrix_rows_orthogonal(u in ks_point()) {
        let a = ks_matrix(u);
        let r = u.norm_sq();
        for i in 0..4 {
            for j in 0..4 {
                let dot: f64 = (0..4).map(|k| a[i][k] * a[j][k]).sum();
                let want = if i == j { r } else { 0.0 };
                prop_assert!((dot - want).abs() <= 1e-13 * r.max(1.0));
            }
        }
    }

    #[test]
    fn fourth_row_vanishes(u in ks_point()) {
        let a = ks_matrix(u);
        let v = u.to_array();
        let last: f64 = (0..4).map(|k| a[3][k] * v[k]).sum();
        prop_assert!(last.abs() <= 1e-14 * u.norm_sq().max(1.0));
        let x = ks_map(u);
        for i in 0..3 {
            let row: f64 = (0..4).map(|k| a[i][k] * v[k]).sum();
            prop_assert!((row - x[i]).abs() <= 1e-13 * u.norm_sq().max(1.0));
        }
    }

    #[test]
    fn metric_identity(u in ks_point(), du in prop::array::uniform4(-1.0f64..1.0)) {
        let d = ks_differential(u, du);
        let lhs: f64 = d.iter().map(|v| v * v).sum();
        let rhs = 4.0 * u.norm_sq() * du.iter().map(|v| v * v).sum::<f64>();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.max(1.0));
    }

    #[test]
    fn jacobian_is_determinant(u in ks_point()) {
        let a = ks_matrix(u);
        let mut two_a = a;
        for row in two_a.iter_mut() {
            for v in row.iter_mut() {
                *v *= 2.0;
            }
        }
        let j = ks_jacobian(u).unwrap();
        prop_assert!((det4(two_a).abs() - j).abs() <= 1e-12 * j);
    }

    #[test]
    fn differential_matches_finite_difference(u in ks_point(), du in prop::array::uniform4(-1.0f64..1.0)) {
        let h = 1e-6;
        let v = u.to_array();
        let shift = |s: f64| KsPoint::from_array([v[0] + s * du[0], v[1] + s * du[1], v[2] + s * du[2], v[3] + s * du[3]]);
        let (p, m) = (ks_map(shift(h)), ks_map(shift(-h)));
        let d = ks_differential(u, du);
        for i in 0..3 {
            let fd = (p[i] - m[i]) / (2.0 * h);
            prop_assert!((fd - d[i]).abs() <= 1e-6 * (1.0 + d[i].abs()));
        }
    }

    #[test]
    fn oneform_separates(u in ks_point(), du in prop::array::uniform4(-1.0f64..1.0), s in -2.0f64..2.0) {
        let pulled = ab_oneform_pullback(u, du, s).unwrap();
        let direct = ab_oneform_cartesian(u, du, s).unwrap();
        let [x, y, _] = ks_map(u);
        let scale = s.abs() * du.iter().map(|v| v.abs()).sum::<f64>() * u.norm_sq() / (x * x + y * y).sqrt().max(1e-300);
        prop_assert!((pulled - direct).abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn fibre_invariance(r in 0.01f64..50.0, theta in 0.0f64..PI, phi in 0.0f64..(2.0 * PI), g1 in 0.0f64..(4.0 * PI), g2 in 0.0f64..(4.0 * PI)) {
        let p = SphericalPoint::new(r, theta, phi).unwrap();
        let want = p.to_cartesian();
        for g in [g1, g2] {
            let x = ks_map(spherical_to_ks(p, AuxAngle::new(g).unwrap()));
            for i in 0..3 {
                prop_assert!((x[i] - want[i]).abs() <= 1e-13 * r);
            }
        }
    }

    #[test]
    fn double_polar_radius(r in 0.01f64..50.0, theta in 0.0f64..PI, phi in 0.0f64..(2.0 * PI), g in 0.0f64..(4.0 * PI)) {
        let p = SphericalPoint::new(r, theta, phi).unwrap();
        let d = DoublePolar::from_spherical(p, AuxAngle::new(g).unwrap());
        prop_assert!((d.rho1 * d.rho1 + d.rho2 * d.rho2 - r).abs() <= 1e-14 * r);
        prop_assert!((d.to_ks().norm_sq() - r).abs() <= 1e-14 * r);
    }
}
