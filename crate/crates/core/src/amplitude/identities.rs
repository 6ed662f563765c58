//! Numerical checks of the identities used to pass from the q-integral to
//! the partial-wave sum.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{FixedEnergy, TruncationSpec};
use crate::error::{invalid, Result};
use crate::kstransform::{AuxAngle, DoublePolar, SphericalPoint};
use crate::quadrature::{gauss_kronrod, tanh_sinh_unit_l1};
use crate::specfun::{assoc_legendre_z, bessel_i_scaled, gamma, gamma_ln, recip_gamma, RealOrder};
use crate::spectrum::PhysParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductIdentityCheck {
    pub lhs: f64,
    pub rhs: Complex64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionCheck {
    /// Largest relative deviation over the sampled q values.
    pub rel_err: f64,
    pub samples: usize,
}

fn require_polar(name: &'static str, theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < PI) {
        return Err(invalid(name, format!("must lie in (0, pi), got {theta}")));
    }
    Ok(())
}

/// `I_nu(X ca cb) I_nu(X sa sb)` (half-angle sines and cosines) against
///
/// `e^(-i pi (nu+1/2)) (2/X) sum_n (-1)^n (2l+1) Gamma(l+nu+1)/Gamma(l-nu+1)
///  J_{2l+1}(iX) P_l^-nu(cos theta_a) P_l^-nu(cos theta_b)`, `l = n + nu`,
///
/// with `J_k(iX) = e^(i pi k/2) I_k(X)`.
pub fn bessel_product_identity_check(
    arg: f64,
    alpha_m: RealOrder,
    theta_a: f64,
    theta_b: f64,
    n_max: u32,
) -> Result<ProductIdentityCheck> {
    if !(arg > 0.0 && arg.is_finite()) {
        return Err(invalid("arg", format!("must be finite and > 0, got {arg}")));
    }
    require_polar("theta_a", theta_a)?;
    require_polar("theta_b", theta_b)?;
    let nu = alpha_m.value();
    let (sa, ca) = (0.5 * theta_a).sin_cos();
    let (sb, cb) = (0.5 * theta_b).sin_cos();
    let lhs = bessel_i_scaled(alpha_m, arg * ca * cb)?.magnitude_f64() * bessel_i_scaled(alpha_m, arg * sa * sb)?.magnitude_f64();

    let mut rhs = Complex64::new(0.0, 0.0);
    for n in 0..=n_max {
        let nf = n as f64;
        let l = nf + nu;
        let pa = assoc_legendre_z(l, -nu, sa * sa, ca * ca)?;
        let pb = assoc_legendre_z(l, -nu, sb * sb, cb * cb)?;
        if pa == 0.0 || pb == 0.0 {
            continue;
        }
        let ik = bessel_i_scaled(RealOrder::new(2.0 * l + 1.0)?, arg)?;
        if ik.value == 0.0 {
            continue;
        }
        let ln_mag = (2.0 / arg).ln() + (2.0 * l + 1.0).ln() + gamma_ln(nf + 2.0 * nu + 1.0)? - gamma_ln(nf + 1.0)?
            + ik.ln_abs()
            + pa.abs().ln()
            + pb.abs().ln();
        let sign = pa.signum() * pb.signum();
        let phase = -PI * (nu + 0.5) + PI * nf + 0.5 * PI * (2.0 * l + 1.0);
        rhs += Complex64::from_polar(sign * ln_mag.exp(), phase);
    }
    let rel_err = (rhs - lhs).norm() / lhs.abs();
    Ok(ProductIdentityCheck { lhs, rhs, rel_err })
}

/// `int_-1^1 (1-x^2)^(lambda-1) P_nu^mu(x) dx` by tanh-sinh quadrature
/// against
/// `pi 2^mu Gamma(lambda+mu/2) Gamma(lambda-mu/2) /
///  (Gamma(lambda+nu/2+1/2) Gamma(lambda-nu/2) Gamma(nu/2-mu/2+1) Gamma(1/2-mu/2-nu/2))`.
///
/// When the exact value is small compared with `int |integrand|`, the
/// deviation is reported relative to the latter.
pub fn legendre_integral_identity_check(lambda: f64, mu: f64, nu: f64) -> Result<IdentityCheck> {
    if ![lambda, mu, nu].iter().all(|v| v.is_finite()) {
        return Err(invalid("lambda/mu/nu", "must be finite"));
    }
    if !(lambda - 0.5 * mu > 0.0 && lambda + 0.5 * mu > 0.0) {
        return Err(invalid("lambda", format!("integral diverges unless lambda > |mu|/2 (lambda = {lambda}, mu = {mu})")));
    }
    // x = 1 - 2z, dx = 2 dz, 1 - x^2 = 4 z (1-z)
    let mut failure = None;
    let integrand = |z: f64, zc: f64| -> f64 {
        match assoc_legendre_z(nu, mu, z, zc) {
            Ok(p) => 2.0 * (4.0 * z * zc).powf(lambda - 1.0) * p,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let (lhs, l1) = tanh_sinh_unit_l1(integrand, 1e-13)?;
    if let Some(e) = failure {
        return Err(e);
    }
    let rhs = PI
        * 2f64.powf(mu)
        * gamma(lambda + 0.5 * mu)
        * gamma(lambda - 0.5 * mu)
        * recip_gamma(lambda + 0.5 * nu + 0.5)
        * recip_gamma(lambda - 0.5 * nu)
        * recip_gamma(0.5 * nu - 0.5 * mu + 1.0)
        * recip_gamma(0.5 - 0.5 * mu - 0.5 * nu);
    let denom = if rhs.abs() >= 1e-3 * l1 { rhs.abs() } else { l1 };
    Ok(IdentityCheck { lhs: lhs.value, rhs, rel_err: (lhs.value - rhs).abs() / denom })
}

const REDUCTION_Q: [f64; 3] = [0.4, 1.0, 2.0];

/// The double oscillator sum
/// `sum_{m1,m2} e^(i m1 (th1_b - th1_a)) e^(i m2 (th2_b - th2_a)) I_|m1+alpha|(X1) I_|m2+alpha|(X2)`,
/// `X_j = 4 M omega rho_j,a rho_j,b / sinh q`, integrated over the fibre
/// angle of `a` on `[gamma_a, gamma_a + 4 pi)`, against the diagonal form
/// `4 pi sum_m e^(i m (phi_b - phi_a)) I_|m+alpha|(X1) I_|m+alpha|(X2)`.
/// Checked at a few fixed q.
pub fn oscillator_sum_reduction_check(
    params: &PhysParams,
    pts_with_gamma: ((SphericalPoint, AuxAngle), (SphericalPoint, AuxAngle)),
    fe: &FixedEnergy,
    trunc: &TruncationSpec,
) -> Result<ReductionCheck> {
    if trunc.m_max > 8 {
        return Err(invalid("m_max", format!("at most 8 for the reduction check, got {}", trunc.m_max)));
    }
    let ((pa, ga), (pb, gb)) = pts_with_gamma;
    let db = DoublePolar::from_spherical(pb, gb);
    let da0 = DoublePolar::from_spherical(pa, ga);
    let ms: Vec<i64> = trunc.m_range(params.flux).collect();
    let mut worst: f64 = 0.0;

    for &q in &REDUCTION_Q {
        let c = 4.0 * params.mass * fe.omega / q.sinh();
        let x1 = c * da0.rho1 * db.rho1;
        let x2 = c * da0.rho2 * db.rho2;
        let mut i1 = Vec::with_capacity(ms.len());
        let mut i2 = Vec::with_capacity(ms.len());
        for &m in &ms {
            let nu = RealOrder::flux_shifted(m, params.flux);
            i1.push(bessel_i_scaled(nu, x1)?.magnitude_f64());
            i2.push(bessel_i_scaled(nu, x2)?.magnitude_f64());
        }
        let scale: f64 = i1.iter().sum::<f64>() * i2.iter().sum::<f64>();

        let double_sum = |gamma: f64| -> Complex64 {
            let da = DoublePolar::from_spherical(pa, AuxAngle::wrapped(gamma));
            // theta_a enters only as a phase; keep gamma unwrapped so the
            // integrand is continuous across 4 pi
            let th1a = da.theta1 - 0.5 * (AuxAngle::wrapped(gamma).value() - gamma);
            let th2a = da.theta2 + 0.5 * (AuxAngle::wrapped(gamma).value() - gamma);
            let mut s = Complex64::new(0.0, 0.0);
            for (j1, &m1) in ms.iter().enumerate() {
                let e1 = Complex64::from_polar(i1[j1], m1 as f64 * (db.theta1 - th1a));
                for (j2, &m2) in ms.iter().enumerate() {
                    s += e1 * Complex64::from_polar(i2[j2], m2 as f64 * (db.theta2 - th2a));
                }
            }
            s
        };
        let g0 = ga.value();
        let g1 = g0 + AuxAngle::PERIOD;
        let tol = 1e-13;
        let re = gauss_kronrod(|g| double_sum(g).re, g0, g1, tol, 1e-15 * scale, 400)?;
        let im = gauss_kronrod(|g| double_sum(g).im, g0, g1, tol, 1e-15 * scale, 400)?;
        let lhs = Complex64::new(re.value, im.value);

        let dphi = pb.phi - pa.phi;
        let rhs: Complex64 = ms
            .iter()
            .enumerate()
            .map(|(j, &m)| Complex64::from_polar(i1[j] * i2[j], m as f64 * dphi))
            .sum::<Complex64>()
            * (4.0 * PI);
        worst = worst.max((lhs - rhs).norm() / rhs.norm());
    }
    Ok(ReductionCheck { rel_err: worst, samples: REDUCTION_Q.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_trivial_cases() {
        let c = legendre_integral_identity_check(1.0, 0.0, 0.0).unwrap();
        assert!((c.lhs - 2.0).abs() < 1e-12 && (c.rhs - 2.0).abs() < 1e-12);
        let c = legendre_integral_identity_check(1.0, 0.0, 1.0).unwrap();
        assert!(c.lhs.abs() < 1e-12 && c.rhs.abs() < 1e-12);
        assert!(legendre_integral_identity_check(0.2, 0.6, 1.0).is_err());
    }

    #[test]
    fn bessel_product_small_argument() {
        let c = bessel_product_identity_check(0.1, RealOrder::new(0.0).unwrap(), PI / 2.0, PI / 2.0, 10).unwrap();
        // I_0(arg/2)^2 = 1 + arg^2/8 + ...
        assert!((c.lhs - (1.0 + 0.01 / 8.0)).abs() < 1e-6);
        assert!(c.rel_err < 1e-12);
    }
}
