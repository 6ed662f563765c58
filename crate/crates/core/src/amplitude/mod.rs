//! Fixed-energy amplitude `(x_b | x_a)_E` for `E < 0`.
//!
//! Two independent evaluators:
//! * [`green_q_integral`]: the m-sum of q-integrals over products of two
//!   modified Bessel functions, analytically continued past the levels of
//!   each partial wave;
//! * [`green_partial_wave`]: the (m, n) double sum of Legendre and
//!   Whittaker functions obtained after integrating over q in closed form.
//!
//! Both sum over the window `m = m0 - m_max ..= m0 + m_max` with
//! `m0 = -round(alpha)`, so that shifting `alpha` by an integer relabels the
//! window instead of changing it.

mod identities;
mod partial_wave;
mod poles;
mod qintegral;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kstransform::SphericalPoint;
use crate::spectrum::{energy_at_principal, PhysParams};

pub use identities::{
    bessel_product_identity_check, legendre_integral_identity_check, oscillator_sum_reduction_check,
    IdentityCheck, ProductIdentityCheck, ReductionCheck,
};
pub use partial_wave::green_partial_wave;
pub use poles::{pole_scan, PoleHit};
pub use qintegral::{green_q_integral, q_integrand};

/// Relative distance in energy below which an evaluation counts as on a pole.
pub const POLE_GUARD: f64 = 1e-6;

/// A negative energy together with `omega = sqrt(-E/2M)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedEnergy {
    pub energy: f64,
    pub omega: f64,
}

impl FixedEnergy {
    pub fn new(params: &PhysParams, energy: f64) -> Result<Self> {
        if !(energy < 0.0 && energy.is_finite()) {
            return Err(invalid("energy", format!("must be finite and < 0, got {energy}")));
        }
        Ok(FixedEnergy { energy, omega: (-energy / (2.0 * params.mass)).sqrt() })
    }

    /// `-xi/(2 omega)`; the levels sit at `kappa = 1 + |m+alpha| + n + n'`.
    pub fn kappa(&self, params: &PhysParams) -> f64 {
        -params.coulomb / (2.0 * self.omega)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointPair {
    pub a: SphericalPoint,
    pub b: SphericalPoint,
}

impl EndpointPair {
    pub fn new(a: SphericalPoint, b: SphericalPoint) -> Self {
        EndpointPair { a, b }
    }

    pub fn swapped(&self) -> Self {
        EndpointPair { a: self.b, b: self.a }
    }

    pub(crate) fn require_off_axis(&self) -> Result<()> {
        let on_axis = |t: f64| t <= 0.0 || t >= std::f64::consts::PI;
        if on_axis(self.a.theta) {
            return Err(Error::EndpointOnAxis("a"));
        }
        if on_axis(self.b.theta) {
            return Err(Error::EndpointOnAxis("b"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub m_max: u32,
    pub n_max: u32,
    pub quad_rel_tol: f64,
    pub quad_abs_tol: f64,
}

impl Default for TruncationSpec {
    fn default() -> Self {
        TruncationSpec { m_max: 12, n_max: 40, quad_rel_tol: 1e-10, quad_abs_tol: 1e-300 }
    }
}

impl TruncationSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.quad_rel_tol > 0.0 && self.quad_rel_tol < 1.0) {
            return Err(invalid("quad_rel_tol", format!("must lie in (0, 1), got {}", self.quad_rel_tol)));
        }
        if !(self.quad_abs_tol > 0.0) {
            return Err(invalid("quad_abs_tol", format!("must be > 0, got {}", self.quad_abs_tol)));
        }
        Ok(())
    }

    /// The m window centred on `-round(alpha)`.
    pub fn m_range(&self, alpha: f64) -> std::ops::RangeInclusive<i64> {
        let m0 = -(alpha.round() as i64);
        let w = self.m_max as i64;
        (m0 - w)..=(m0 + w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeValue {
    pub value: Complex64,
    pub err_estimate: f64,
}

/// Quantities shared by both evaluators.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kinematics {
    pub kappa: f64,
    pub omega: f64,
    /// `2 M omega (r_a + r_b)`
    pub beta: f64,
    /// `4 M omega sqrt(r_a r_b) cos(theta_a/2) cos(theta_b/2)`
    pub a1: f64,
    /// `4 M omega sqrt(r_a r_b) sin(theta_a/2) sin(theta_b/2)`
    pub a2: f64,
    /// `4 M omega max(r_a, r_b)` and `4 M omega min(r_a, r_b)`
    pub x_gt: f64,
    pub y_lt: f64,
    pub dphi: f64,
}

impl Kinematics {
    pub fn new(params: &PhysParams, pts: &EndpointPair, fe: &FixedEnergy) -> Self {
        let mw = params.mass * fe.omega;
        let (a, b) = (pts.a, pts.b);
        let y = 4.0 * mw * (a.r * b.r).sqrt();
        let (sa, ca) = (0.5 * a.theta).sin_cos();
        let (sb, cb) = (0.5 * b.theta).sin_cos();
        Kinematics {
            kappa: fe.kappa(params),
            omega: fe.omega,
            beta: 2.0 * mw * (a.r + b.r),
            a1: y * ca * cb,
            a2: y * sa * sb,
            x_gt: 4.0 * mw * a.r.max(b.r),
            y_lt: 4.0 * mw * a.r.min(b.r),
            dphi: b.phi - a.phi,
        }
    }
}

pub(crate) fn check_inputs(params: &PhysParams, pts: &EndpointPair, fe: &FixedEnergy, trunc: &TruncationSpec) -> Result<()> {
    params.require_bound()?;
    trunc.validate()?;
    pts.require_off_axis()?;
    let expect = (-fe.energy / (2.0 * params.mass)).sqrt();
    if (fe.omega - expect).abs() > 1e-14 * expect {
        return Err(invalid("omega", "inconsistent with energy and mass"));
    }
    Ok(())
}

/// Reject energies within [`POLE_GUARD`] (relative) of a level reachable
/// from the summation window.
pub(crate) fn pole_guard(params: &PhysParams, fe: &FixedEnergy, trunc: &TruncationSpec) -> Result<()> {
    let kappa = fe.kappa(params);
    for m in trunc.m_range(params.flux) {
        let nu = params.nu(m);
        let k = (kappa - 1.0 - nu).round();
        if k < 0.0 {
            continue;
        }
        let level = energy_at_principal(params, 1.0 + nu + k);
        if ((fe.energy - level) / level).abs() < POLE_GUARD {
            return Err(Error::IllConditionedEnergy { energy: fe.energy, level, m, n: 0, nprime: k as u32 });
        }
    }
    Ok(())
}
