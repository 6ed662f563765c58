//! Kustaanheimo-Stiefel geometry: the quadratic map R^4 -> R^3, its
//! differential matrix, the Jacobian, the pullback of the AB one-form and
//! the double-polar parametrization with the auxiliary angle `gamma`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A point in KS space, units of length^(1/2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsPoint {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub u4: f64,
}

impl KsPoint {
    pub fn new(u1: f64, u2: f64, u3: f64, u4: f64) -> Self {
        KsPoint { u1, u2, u3, u4 }
    }

    pub fn from_array(u: [f64; 4]) -> Self {
        KsPoint::new(u[0], u[1], u[2], u[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.u1, self.u2, self.u3, self.u4]
    }

    /// `sum u_i^2`, which equals the radius of the image point.
    pub fn norm_sq(self) -> f64 {
        self.u1 * self.u1 + self.u2 * self.u2 + self.u3 * self.u3 + self.u4 * self.u4
    }
}

/// Spherical coordinates with the flux line along the z axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(invalid("r", format!("must be finite and > 0, got {r}")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(invalid("theta", format!("must lie in [0, pi], got {theta}")));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(invalid("phi", format!("must lie in [0, 2 pi), got {phi}")));
        }
        Ok(SphericalPoint { r, theta, phi })
    }

    pub fn to_cartesian(self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [self.r * st * cp, self.r * st * sp, self.r * ct]
    }
}

/// Double polar coordinates `(rho1, theta1, rho2, theta2)` of a KS point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoublePolar {
    pub rho1: f64,
    pub theta1: f64,
    pub rho2: f64,
    pub theta2: f64,
}

impl DoublePolar {
    pub fn to_ks(self) -> KsPoint {
        let (s1, c1) = self.theta1.sin_cos();
        let (s2, c2) = self.theta2.sin_cos();
        KsPoint::new(self.rho1 * s1, self.rho1 * c1, self.rho2 * c2, self.rho2 * s2)
    }

    /// Spherical coordinates and auxiliary angle; `rho1 = sqrt(r) cos(theta/2)`,
    /// `theta1 = (phi + gamma + pi)/2`, `rho2 = sqrt(r) sin(theta/2)`,
    /// `theta2 = (phi - gamma)/2`.
    pub fn from_spherical(p: SphericalPoint, gamma: AuxAngle) -> Self {
        let sr = p.r.sqrt();
        let (sh, ch) = (0.5 * p.theta).sin_cos();
        DoublePolar {
            rho1: sr * ch,
            theta1: 0.5 * (p.phi + gamma.0 + PI),
            rho2: sr * sh,
            theta2: 0.5 * (p.phi - gamma.0),
        }
    }
}

/// Auxiliary fibre angle; the KS fibre closes after `4 pi`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct AuxAngle(f64);

impl AuxAngle {
    pub const PERIOD: f64 = 4.0 * PI;

    pub fn new(gamma: f64) -> Result<Self> {
        if !(0.0..Self::PERIOD).contains(&gamma) {
            return Err(invalid("gamma", format!("must lie in [0, 4 pi), got {gamma}")));
        }
        Ok(AuxAngle(gamma))
    }

    /// Reduce any finite angle into `[0, 4 pi)`.
    pub fn wrapped(gamma: f64) -> Self {
        let g = gamma.rem_euclid(Self::PERIOD);
        AuxAngle(if g >= Self::PERIOD { 0.0 } else { g })
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// The KS map `u -> (x, y, z)`.
pub fn ks_map(u: KsPoint) -> [f64; 3] {
    let KsPoint { u1, u2, u3, u4 } = u;
    [2.0 * (u1 * u3 + u2 * u4), 2.0 * (u1 * u4 - u2 * u3), u1 * u1 + u2 * u2 - u3 * u3 - u4 * u4]
}

/// The matrix `A(u)` with `A(u) u = (x, y, z, 0)` and `d(x, y, z, eta) = 2 A(u) du`.
pub fn ks_matrix(u: KsPoint) -> [[f64; 4]; 4] {
    let KsPoint { u1, u2, u3, u4 } = u;
    [[u3, u4, u1, u2], [u4, -u3, -u2, u1], [u1, u2, -u3, -u4], [u2, -u1, u4, -u3]]
}

/// `2 A(u) du`: the differentials `(dx, dy, dz, deta)`.
pub fn ks_differential(u: KsPoint, du: [f64; 4]) -> [f64; 4] {
    let a = ks_matrix(u);
    let mut out = [0.0; 4];
    for (o, row) in out.iter_mut().zip(a.iter()) {
        *o = 2.0 * row.iter().zip(du.iter()).map(|(r, d)| r * d).sum::<f64>();
    }
    out
}

/// `d(x, y, z, eta)/d(u1, u2, u3, u4) = 16 r^2`.
pub fn ks_jacobian(u: KsPoint) -> Result<f64> {
    let r = u.norm_sq();
    if r == 0.0 {
        return Err(Error::DegeneratePoint);
    }
    Ok(16.0 * r * r)
}

/// The AB one-form `(y dx - x dy)/(x^2 + y^2)` pulled back to KS space,
/// times `strength` (alpha/e). Separates into one term per oscillator plane.
pub fn ab_oneform_pullback(u: KsPoint, du: [f64; 4], strength: f64) -> Result<f64> {
    let KsPoint { u1, u2, u3, u4 } = u;
    let p1 = u1 * u1 + u2 * u2;
    let p2 = u3 * u3 + u4 * u4;
    if p1 == 0.0 || p2 == 0.0 {
        return Err(Error::SingularConfiguration(format!(
            "one-form undefined on the flux line (rho1^2 = {p1}, rho2^2 = {p2})"
        )));
    }
    Ok(strength * ((u1 * du[1] - u2 * du[0]) / p1 + (u4 * du[2] - u3 * du[3]) / p2))
}

/// The same one-form evaluated in Cartesian form through the KS map and
/// its differential.
pub fn ab_oneform_cartesian(u: KsPoint, du: [f64; 4], strength: f64) -> Result<f64> {
    let [x, y, _] = ks_map(u);
    let rho_sq = x * x + y * y;
    if rho_sq == 0.0 {
        return Err(Error::SingularConfiguration("image point on the flux line".into()));
    }
    let d = ks_differential(u, du);
    Ok(strength * (y * d[0] - x * d[1]) / rho_sq)
}

/// KS point over `p` on the fibre labelled by `gamma`.
pub fn spherical_to_ks(p: SphericalPoint, gamma: AuxAngle) -> KsPoint {
    DoublePolar::from_spherical(p, gamma).to_ks()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn poles_and_norm() {
        assert_eq!(ks_map(KsPoint::new(1.0, 0.0, 0.0, 0.0)), [0.0, 0.0, 1.0]);
        let u = KsPoint::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(ks_map(u), [0.0, 0.0, 2.0]);
        assert_eq!(u.norm_sq(), 2.0);
    }

    #[test]
    fn jacobian_values() {
        assert_eq!(ks_jacobian(KsPoint::new(1.0, 0.0, 0.0, 0.0)).unwrap(), 16.0);
        assert_eq!(ks_jacobian(KsPoint::new(1.0, 1.0, 0.0, 0.0)).unwrap(), 64.0);
        assert_eq!(ks_jacobian(KsPoint::new(0.0, 0.0, 0.0, 0.0)), Err(Error::DegeneratePoint));
    }

    #[test]
    fn oneform_examples() {
        let u = KsPoint::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(ab_oneform_pullback(u, [0.0, 1.0, 0.0, 0.0], 0.7).unwrap(), 0.7);
        let u = KsPoint::new(0.3, -1.1, 0.8, 0.4);
        assert_eq!(ab_oneform_pullback(u, u.to_array(), 1.0).unwrap(), 0.0);
        assert!(ab_oneform_pullback(KsPoint::new(0.0, 0.0, 1.0, 0.0), [1.0; 4], 1.0).is_err());
    }

    #[test]
    fn equator_point() {
        let p = SphericalPoint::new(4.0, PI / 2.0, 0.0).unwrap();
        let dp = DoublePolar::from_spherical(p, AuxAngle::new(0.0).unwrap());
        assert_relative_eq!(dp.rho1, 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(dp.rho2, 2f64.sqrt(), max_relative = 1e-15);
        let x = ks_map(dp.to_ks());
        assert!(x[2].abs() < 1e-14);
        assert_relative_eq!((x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt(), 4.0, max_relative = 1e-15);
    }

    #[test]
    fn gamma_range() {
        assert!(AuxAngle::new(4.0 * PI).is_err());
        assert!(AuxAngle::new(-0.1).is_err());
        assert_relative_eq!(AuxAngle::wrapped(-0.5).value(), 4.0 * PI - 0.5);
    }
}
