//! The partial-wave evaluator
//! `(-i/(8 pi omega r_a r_b)) sum_m sum_n e^(i m dphi) c_n Gamma(l+1-kappa)/Gamma(2l+2)
//!  P_l^-nu(cos theta_a) P_l^-nu(cos theta_b) W_{kappa,l+1/2}(x) M_{kappa,l+1/2}(y)`
//! with `nu = |m+alpha|`, `l = n + nu`, `c_n = (2l+1) Gamma(l+nu+1)/Gamma(l-nu+1)`,
//! `x = 4 M omega max(r_a, r_b)` and `y = 4 M omega min(r_a, r_b)`.
//!
//! The M factor is evaluated at the negative argument `-y` with index
//! `-kappa`, which carries the branch phase `e^(i pi (l+1))`; that phase is
//! accumulated per term together with `e^(i m dphi)` and removed explicitly.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_inputs, pole_guard, AmplitudeValue, EndpointPair, FixedEnergy, Kinematics, TruncationSpec};
use crate::error::{Error, Result};
use crate::specfun::{assoc_legendre_z, gamma_ln, ln_gamma_sign, whittaker_m, whittaker_w};
use crate::spectrum::PhysParams;

/// One (m, n) term as `(ln|t|, sign, phase)`, `t = sign e^(ln|t|) e^(i phase)`.
struct Term {
    ln_abs: f64,
    sign: f64,
    phase: f64,
}

fn term(kin: &Kinematics, nu: f64, n: u32, za: (f64, f64), zb: (f64, f64)) -> Result<Option<Term>> {
    let nf = n as f64;
    let l = nf + nu;
    let mu = l + 0.5;
    let pa = assoc_legendre_z(l, -nu, za.0, za.1)?;
    let pb = assoc_legendre_z(l, -nu, zb.0, zb.1)?;
    if pa == 0.0 || pb == 0.0 {
        return Ok(None);
    }
    let (lg_pole, sg_pole) = ln_gamma_sign(l + 1.0 - kin.kappa)?;
    let w = whittaker_w(kin.kappa, mu, kin.x_gt)?;
    let m_neg = whittaker_m(-kin.kappa, mu, -kin.y_lt)?;
    if w.value == 0.0 || m_neg.value == 0.0 {
        return Ok(None);
    }
    let ln_abs = (2.0 * l + 1.0).ln() + gamma_ln(nf + 2.0 * nu + 1.0)? - gamma_ln(nf + 1.0)? + lg_pole
        - gamma_ln(2.0 * l + 2.0)?
        + pa.abs().ln()
        + pb.abs().ln()
        + w.ln_abs()
        + m_neg.ln_abs();
    let sign = sg_pole * pa.signum() * pb.signum() * w.value.signum() * m_neg.value.signum();
    // M_{-k,mu}(-y) = e^(i pi (mu+1/2)) M_{k,mu}(y)
    let phase = m_neg.phase - PI * (mu + 0.5);
    Ok(Some(Term { ln_abs, sign, phase }))
}

pub(crate) struct PartialWaveSum {
    pub value: Complex64,
    pub m_edge: f64,
    pub n_edge: f64,
}

/// The double sum without input validation or pole guard; used by the
/// pole scanner, which must evaluate close to the levels.
pub(crate) fn partial_wave_sum(
    params: &PhysParams,
    pts: &EndpointPair,
    fe: &FixedEnergy,
    trunc: &TruncationSpec,
) -> Result<PartialWaveSum> {
    let kin = Kinematics::new(params, pts, fe);
    let half = |t: f64| {
        let (s, c) = (0.5 * t).sin_cos();
        (s * s, c * c)
    };
    let za = half(pts.a.theta);
    let zb = half(pts.b.theta);
    let range = trunc.m_range(params.flux);
    let (lo, hi) = (*range.start(), *range.end());

    let mut total = Complex64::new(0.0, 0.0);
    let mut m_edge = 0.0;
    let mut n_edge = 0.0;
    for m in range {
        let nu = params.nu(m);
        let mut shell = Complex64::new(0.0, 0.0);
        for n in 0..=trunc.n_max {
            let Some(t) = term(&kin, nu, n, za, zb)? else { continue };
            let mag = t.sign * t.ln_abs.exp();
            let c = Complex64::from_polar(1.0, t.phase + m as f64 * kin.dphi) * mag;
            shell += c;
            if n == trunc.n_max {
                n_edge += mag.abs();
            }
        }
        if m == lo || m == hi {
            m_edge += shell.norm();
        }
        total += shell;
    }
    let pref = Complex64::new(0.0, -1.0 / (8.0 * PI * kin.omega * pts.a.r * pts.b.r));
    Ok(PartialWaveSum { value: pref * total, m_edge: pref.norm() * m_edge, n_edge: pref.norm() * n_edge })
}

/// Partial-wave form of the amplitude. `err_estimate` is the sum of the
/// magnitudes of the outermost m shells and of the last n terms.
pub fn green_partial_wave(
    params: &PhysParams,
    pts: &EndpointPair,
    fe: &FixedEnergy,
    trunc: &TruncationSpec,
) -> Result<AmplitudeValue> {
    check_inputs(params, pts, fe, trunc)?;
    pole_guard(params, fe, trunc)?;
    let s = partial_wave_sum(params, pts, fe, trunc).map_err(|e| match e {
        Error::Domain { func: "gamma_ln", .. } => Error::Accuracy { context: "partial wave on a pole", estimate: f64::NAN, error: f64::NAN },
        other => other,
    })?;
    Ok(AmplitudeValue { value: s.value, err_estimate: s.m_edge + s.n_edge })
}
