//! The q-integral evaluator.
//!
//! For each m the integrand is
//! `f(q) = sinh(q)^-2 exp(2 kappa q - beta coth q) I_nu(a1/sinh q) I_nu(a2/sinh q)`.
//! With `w = exp(-2q)` it factorizes as `f = w^(1 + nu - kappa) G(w)` where
//! `G` is analytic in `|w| < 1`. The integral is split at `w_q`: the part
//! `q < Q` is done by Gauss-Kronrod, and the tail is integrated term by term
//! from the Taylor series of `G`,
//! `int_Q^inf f dq = sum_k g_k w_q^(a0+k) / (2 (a0+k))`.
//! The tail formula continues the integral analytically to energies above
//! the lowest level of the partial wave, where the plain integral diverges;
//! its poles at `a0 + k = 0` are the bound states.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_inputs, pole_guard, AmplitudeValue, EndpointPair, FixedEnergy, Kinematics, TruncationSpec};
use crate::error::{Error, Result};
use crate::quadrature::gauss_kronrod;
use crate::specfun::{bessel_i_scaled, gamma_ln, RealOrder};
use crate::spectrum::PhysParams;

const SERIES_TERMS: usize = 120;
const SPLIT_POINTS: [f64; 6] = [0.25, 0.1, 0.04, 0.015, 5e-3, 1e-3];

/// The m-th integrand of the q-integral at `q > 0`.
pub fn q_integrand(params: &PhysParams, pts: &EndpointPair, fe: &FixedEnergy, m: i64, q: f64) -> Result<f64> {
    let kin = Kinematics::new(params, pts, fe);
    let nu = RealOrder::flux_shifted(m, params.flux);
    Ok(ln_integrand(&kin, nu, q)?.exp())
}

/// `ln f(q)`; `-inf` where `f` underflows to zero.
fn ln_integrand(kin: &Kinematics, nu: RealOrder, q: f64) -> Result<f64> {
    if q <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let s = q.sinh();
    let z1 = kin.a1 / s;
    let z2 = kin.a2 / s;
    // -beta coth q + z1 + z2 collected so that the large terms cancel exactly
    let expo = (kin.a1 + kin.a2 - kin.beta * q.cosh()) / s;
    let i1 = bessel_i_scaled(nu, z1)?;
    let i2 = bessel_i_scaled(nu, z2)?;
    if i1.value == 0.0 || i2.value == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(-2.0 * s.ln() + 2.0 * kin.kappa * q + expo + i1.value.ln() + i2.value.ln())
}

/// `ln` of the constant `4 (a1 a2)^nu e^-beta / Gamma(nu+1)^2` pulled out of `G`.
fn ln_tail_constant(kin: &Kinematics, nu: f64) -> Result<f64> {
    Ok(4f64.ln() + nu * (kin.a1 * kin.a2).ln() - kin.beta - 2.0 * gamma_ln(nu + 1.0)?)
}

fn series_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut out = vec![0.0; n];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().take(n - i).enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Taylor coefficients of `G(w) / constant`:
/// `(1-w)^(-2-2nu) exp(-2 beta w/(1-w)) S(a1^2 u) S(a2^2 u)` with
/// `u = w/(1-w)^2` and `S(t) = sum_j t^j / (j! (nu+1)_j)`.
fn tail_coefficients(kin: &Kinematics, nu: f64, len: usize) -> Vec<f64> {
    let mut binom = vec![0.0; len];
    binom[0] = 1.0;
    let p = 2.0 + 2.0 * nu;
    for k in 1..len {
        binom[k] = binom[k - 1] * (p + (k - 1) as f64) / k as f64;
    }

    // exp(h) with h = -2 beta sum_{k>=1} w^k: e_k = (1/k) sum_j j h_j e_{k-j}
    let mut expo = vec![0.0; len];
    expo[0] = 1.0;
    for k in 1..len {
        let acc: f64 = (1..=k).map(|j| j as f64 * expo[k - j]).sum();
        expo[k] = -2.0 * kin.beta * acc / k as f64;
    }

    let u: Vec<f64> = (0..len).map(|k| k as f64).collect();
    let s_of = |c: f64| -> Vec<f64> {
        // Horner in u; u^j starts at w^j so j < len suffices
        let mut r = vec![0.0; len];
        r[0] = 1.0;
        for j in (1..len).rev() {
            let f = c / (j as f64 * (nu + j as f64));
            let mut t = series_mul(&u, &r);
            for v in t.iter_mut() {
                *v *= f;
            }
            t[0] += 1.0;
            r = t;
        }
        r
    };
    let s1 = s_of(kin.a1 * kin.a1);
    let s2 = s_of(kin.a2 * kin.a2);
    series_mul(&series_mul(&binom, &expo), &series_mul(&s1, &s2))
}

struct MIntegral {
    value: f64,
    error: f64,
}

/// `int_0^inf f(q) dq` for one partial wave, continued in energy.
fn m_integral(kin: &Kinematics, nu: RealOrder, trunc: &TruncationSpec) -> Result<MIntegral> {
    let nuf = nu.value();
    let a0 = 1.0 + nuf - kin.kappa;
    let ln_c = ln_tail_constant(kin, nuf)?;
    let g = tail_coefficients(kin, nuf, SERIES_TERMS);

    let mut last_err = None;
    for &wq in &SPLIT_POINTS {
        // tail, scaled by exp(-ln_c)
        let lw = wq.ln();
        let mut tail = 0.0;
        let mut tail_abs = 0.0;
        let mut converged = false;
        let mut small_run = 0;
        for (k, &gk) in g.iter().enumerate() {
            let e = a0 + k as f64;
            let t = gk * (e * lw).exp() / (2.0 * e);
            tail += t;
            tail_abs += t.abs();
            if t.abs() <= 1e-17 * tail.abs() || t == 0.0 {
                small_run += 1;
                if small_run >= 3 && k > 4 {
                    converged = true;
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        if !converged {
            last_err = Some(Error::Accuracy { context: "q-integral tail series", estimate: tail, error: tail_abs });
            continue;
        }
        let tail_value = tail * ln_c.exp();
        let tail_round = 4.0 * f64::EPSILON * tail_abs * ln_c.exp();

        let big_q = -0.5 * lw;
        let mut eval_err = None;
        let head = gauss_kronrod(
            |q| match ln_integrand(kin, nu, q) {
                Ok(v) => v.exp(),
                Err(e) => {
                    eval_err.get_or_insert(e);
                    0.0
                }
            },
            0.0,
            big_q,
            trunc.quad_rel_tol,
            trunc.quad_abs_tol,
            2000,
        );
        if let Some(e) = eval_err {
            return Err(e);
        }
        let head = head?;
        let value = head.value + tail_value;
        let error = head.abs_error + tail_round;
        // cancellation between head and tail must not eat the tolerance
        if tail_round > trunc.quad_rel_tol * value.abs() && wq > SPLIT_POINTS[SPLIT_POINTS.len() - 1] {
            last_err = Some(Error::Accuracy { context: "q-integral tail cancellation", estimate: value, error });
            continue;
        }
        return Ok(MIntegral { value, error });
    }
    Err(last_err.unwrap_or(Error::Accuracy { context: "q-integral", estimate: f64::NAN, error: f64::NAN }))
}

/// `(-i M^2 omega / pi) sum_m e^(i m dphi) int_0^inf f_m(q) dq`.
pub fn green_q_integral(
    params: &PhysParams,
    pts: &EndpointPair,
    fe: &FixedEnergy,
    trunc: &TruncationSpec,
) -> Result<AmplitudeValue> {
    check_inputs(params, pts, fe, trunc)?;
    pole_guard(params, fe, trunc)?;
    let kin = Kinematics::new(params, pts, fe);
    let range = trunc.m_range(params.flux);
    let (lo, hi) = (*range.start(), *range.end());

    let mut sum = Complex64::new(0.0, 0.0);
    let mut quad_err = 0.0;
    let mut edge = 0.0;
    for m in range {
        let r = m_integral(&kin, RealOrder::flux_shifted(m, params.flux), trunc)?;
        sum += Complex64::from_polar(1.0, m as f64 * kin.dphi) * r.value;
        quad_err += r.error;
        if m == lo || m == hi {
            edge += r.value.abs();
        }
    }
    let pref = Complex64::new(0.0, -params.mass * params.mass * fe.omega / PI);
    let scale = pref.norm();
    Ok(AmplitudeValue { value: pref * sum, err_estimate: scale * (quad_err + edge) })
}
