//! Gauss `2F1` (regularized, real arguments `z < 1`), Kummer `M` and
//! Tricomi `U`.
//!
//! `2F1` uses the direct series for `-1/2 <= z <= 3/4`, the Pfaff
//! transformation below that and the `1 - z` connection formula above it,
//! including the logarithmic case where `c - a - b` is an integer.

use std::f64::consts::PI;

use super::gamma::{digamma, gamma_ln, pochhammer, recip_gamma, sin_pi};
use super::SpecialValue;
use crate::error::{domain, Result};
use crate::quadrature::exp_sinh;

const EPS: f64 = 1e-17;
const MAX_TERMS: usize = 50_000;
const RESCALE: f64 = 1e200;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// `sum_k (a)_k (b)_k / ((c)_k k!) z^k / Gamma(c)` by direct summation.
fn series_regularized(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        // F(a,b;-N;z)/Gamma(-N) = (a)_{N+1} (b)_{N+1} z^{N+1} F~(a+N+1, b+N+1; N+2; z)
        let n = (-c) as u32;
        let pref = pochhammer(a, n + 1) * pochhammer(b, n + 1) * z.powi(n as i32 + 1);
        if pref == 0.0 {
            return Ok(0.0);
        }
        let np1 = (n + 1) as f64;
        return Ok(pref * series_regularized(a + np1, b + np1, np1 + 1.0, z)?);
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term == 0.0 || (term.abs() <= EPS * sum.abs() && kf + 1.0 > (-a).max(-b)) {
            return Ok(sum * recip_gamma(c));
        }
    }
    Err(domain("gauss_2f1", format!("series did not converge at z = {z}")))
}

/// Connection formula around `z = 1` for integer `m = c - a - b >= 0`.
fn log_case(a: f64, b: f64, m: u32, w: f64) -> Result<f64> {
    let mf = m as f64;
    // finite part
    let mut finite = 0.0;
    if m > 0 {
        let mut poch_term = 1.0; // (a)_k (b)_k / k! (-w)^k
        let mut fact = (1..m).fold(1.0, |acc, j| acc * j as f64); // (m-1)!
        for k in 0..m {
            finite += poch_term * fact;
            let kf = k as f64;
            poch_term *= (a + kf) * (b + kf) / (kf + 1.0) * (-w);
            if k + 1 < m {
                fact /= (m - k - 1) as f64;
            }
        }
        finite *= recip_gamma(a + mf) * recip_gamma(b + mf);
    }
    // logarithmic series
    let pref = recip_gamma(a) * recip_gamma(b);
    if pref == 0.0 {
        return Ok(finite);
    }
    let lnw = w.ln();
    let mut psi1 = digamma(1.0)?;
    let mut psi2 = digamma(mf + 1.0)?;
    let mut psi3 = digamma(a + mf)?;
    let mut psi4 = digamma(b + mf)?;
    let mfact = (1..=m).fold(1.0, |acc, j| acc * j as f64);
    let mut coef = 1.0 / mfact; // (a+m)_k (b+m)_k / (k! (k+m)!) w^k
    let mut sum = 0.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let t = coef * (lnw - psi1 - psi2 + psi3 + psi4);
        sum += t;
        if k > 2 && t.abs() <= EPS * sum.abs() {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            return Ok(finite - sign * w.powi(m as i32) * pref * sum);
        }
        coef *= (a + mf + kf) * (b + mf + kf) / ((kf + 1.0) * (kf + mf + 1.0)) * w;
        psi1 += 1.0 / (kf + 1.0);
        psi2 += 1.0 / (kf + mf + 1.0);
        psi3 += 1.0 / (a + mf + kf);
        psi4 += 1.0 / (b + mf + kf);
    }
    Err(domain("gauss_2f1", "logarithmic connection series did not converge"))
}

/// Regularized `2F1(a, b; c; z) / Gamma(c)`, with `zc = 1 - z` supplied so
/// callers near `z = 1` keep full precision.
pub(crate) fn f21_regularized(a: f64, b: f64, c: f64, z: f64, zc: f64) -> Result<f64> {
    if ![a, b, c, z, zc].iter().all(|v| v.is_finite()) {
        return Err(domain("gauss_2f1", "non-finite argument"));
    }
    if z == 0.0 {
        return Ok(recip_gamma(c));
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        // terminating polynomial, valid for every z
        return series_regularized(a, b, c, z);
    }
    if zc <= 0.0 {
        if zc == 0.0 && c - a - b > 0.0 {
            let m = c - a - b;
            return Ok((gamma_ln(m)?).exp() * recip_gamma(c - a) * recip_gamma(c - b));
        }
        return Err(domain("gauss_2f1", format!("z = {z} outside the supported range z < 1")));
    }
    if z < -0.5 {
        // Pfaff: F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1))
        let w = z / (z - 1.0);
        return Ok(zc.powf(-a) * f21_regularized(a, c - b, c, w, 1.0 / zc)?);
    }
    if z <= 0.75 {
        return series_regularized(a, b, c, z);
    }
    let mut m = c - a - b;
    let w = zc;
    // absorb rounding noise from forming c - a - b
    if (m - m.round()).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(c.abs()).max(1.0) {
        m = m.round();
    }
    if m.fract() == 0.0 {
        if m >= 0.0 {
            return log_case(a, b, m as u32, w);
        }
        // Euler: F(a,b;c;z) = (1-z)^(c-a-b) F(c-a, c-b; c; z)
        return Ok(w.powf(m) * f21_regularized(c - a, c - b, c, z, zc)?);
    }
    if (m - m.round()).abs() < 1e-5 && z < 0.98 {
        // connection formula loses digits this close to the log case
        return series_regularized(a, b, c, z);
    }
    let s1 = series_regularized(a, b, 1.0 - m, w)?;
    let s2 = series_regularized(c - a, c - b, 1.0 + m, w)?;
    let t1 = recip_gamma(c - a) * recip_gamma(c - b) * s1;
    let t2 = w.powf(m) * recip_gamma(a) * recip_gamma(b) * s2;
    Ok(PI / sin_pi(m) * (t1 - t2))
}

/// Regularized Gauss hypergeometric function `2F1(a,b;c;z)/Gamma(c)`,
/// finite for every `c`.
pub fn gauss_2f1_regularized(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    f21_regularized(a, b, c, z, 1.0 - z)
}

/// Gauss hypergeometric function `2F1(a, b; c; z)` for real `z < 1`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(domain("gauss_2f1", format!("parameter pole c = {c}")));
    }
    let reg = f21_regularized(a, b, c, z, 1.0 - z)?;
    let (lg, sign) = super::gamma::ln_gamma_sign(c)?;
    Ok(reg * sign * lg.exp())
}

/// Kummer's confluent hypergeometric function `M(a, b, z)`.
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<SpecialValue> {
    if is_nonpositive_integer(b) {
        return Err(domain("kummer_m", format!("parameter pole b = {b}")));
    }
    if ![a, b, z].iter().all(|v| v.is_finite()) {
        return Err(domain("kummer_m", "non-finite argument"));
    }
    if z == 0.0 {
        return Ok(SpecialValue::unscaled(1.0));
    }
    if z < 0.0 {
        // Kummer transformation keeps the series positive when b > a
        let mut v = kummer_series(b - a, b, -z)?;
        v.scale_exponent += z;
        return Ok(v);
    }
    kummer_series(a, b, z)
}

fn kummer_series(a: f64, b: f64, z: f64) -> Result<SpecialValue> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut scale = 0.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) / ((b + kf) * (kf + 1.0)) * z;
        sum += term;
        if sum.abs() > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            scale += RESCALE.ln();
        }
        if term == 0.0 || (term.abs() <= EPS * sum.abs() && kf + 1.0 > -a && kf + 1.0 > z) {
            return Ok(SpecialValue::new(sum, scale));
        }
    }
    Err(domain("kummer_m", format!("series did not converge at z = {z}")))
}

/// `Gamma(alpha) U(alpha, b, x) = int_0^inf e^(-xt) t^(alpha-1) (1+t)^(b-alpha-1) dt`
/// for `alpha > 0`, returned in log-scaled form.
fn tricomi_integral(alpha: f64, b: f64, x: f64) -> Result<SpecialValue> {
    let p = alpha - 1.0;
    let q = b - alpha - 1.0;
    let log_f = |t: f64| -x * t + p * t.ln() + q * t.ln_1p();
    let slope = |t: f64| -x + p / t + q / (1.0 + t);
    // locate the maximum of the log-integrand on a log grid, then bisect
    let mut t_star = 1.0 / x;
    let mut prev_t = 1e-12f64;
    let mut prev_s = slope(prev_t);
    let mut t = prev_t;
    while t < 1e12 {
        t *= 1.5;
        let s = slope(t);
        if prev_s > 0.0 && s <= 0.0 {
            let (mut lo, mut hi) = (prev_t, t);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if slope(mid) > 0.0 { lo = mid } else { hi = mid }
            }
            t_star = 0.5 * (lo + hi);
            break;
        }
        prev_t = t;
        prev_s = s;
    }
    let l_star = log_f(t_star);
    let r = exp_sinh(|s| (log_f(t_star * s) - l_star).exp(), 1e-15)?;
    Ok(SpecialValue::new(r.value * t_star, l_star).normalized())
}

/// Tricomi's confluent hypergeometric function `U(a, b, x)` for `x > 0`.
///
/// `U` at `a' = a + K >= 1` and `a' + 1` comes from the Laplace integral;
/// the backward recurrence in `a` (stable for `U`) brings it down to `a`.
pub fn tricomi_u(a: f64, b: f64, x: f64) -> Result<SpecialValue> {
    if !(x > 0.0) || ![a, b, x].iter().all(|v| v.is_finite()) {
        return Err(domain("tricomi_u", format!("requires finite x > 0, got {x}")));
    }
    let shift = if a < 1.0 { (1.0 - a).ceil() as u32 } else { 0 };
    let a1 = a + shift as f64;
    let g0 = tricomi_integral(a1, b, x)?;
    let u0 = SpecialValue::new(g0.value, g0.scale_exponent - gamma_ln(a1)?);
    if shift == 0 {
        return Ok(u0);
    }
    let g1 = tricomi_integral(a1 + 1.0, b, x)?;
    let u1 = SpecialValue::new(g1.value, g1.scale_exponent - gamma_ln(a1 + 1.0)?);
    let scale = u0.scale_exponent;
    let mut upper = u1.value * (u1.scale_exponent - scale).exp(); // U(a_cur + 1)
    let mut cur = u0.value; // U(a_cur)
    let mut scale = scale;
    let mut a_cur = a1;
    for _ in 0..shift {
        // U(a-1) = (2a - b + x) U(a) - a (a - b + 1) U(a+1)
        let lower = (2.0 * a_cur - b + x) * cur - a_cur * (a_cur - b + 1.0) * upper;
        upper = cur;
        cur = lower;
        a_cur -= 1.0;
        let m = cur.abs().max(upper.abs());
        if m > RESCALE || (m < 1.0 / RESCALE && m > 0.0) {
            cur /= m;
            upper /= m;
            scale += m.ln();
        }
    }
    Ok(SpecialValue::new(cur, scale))
}
