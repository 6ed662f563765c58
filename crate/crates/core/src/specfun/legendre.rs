//! Ferrers functions of the first kind `P_nu^mu(x)`, `-1 < x < 1`, with
//! real degree and order.
//!
//! `P_nu^mu(x) = ((1+x)/(1-x))^(mu/2) 2F1(-nu, nu+1; 1-mu; (1-x)/2) / Gamma(1-mu)`,
//! evaluated through the regularized `2F1` so that integer `mu` needs no
//! special handling. Large degrees are reached by the three-term degree
//! recurrence from a starting degree below 2, where the series has no
//! cancellation. Two exact special cases use dedicated paths: integer
//! degree and order (classical recurrence) and `nu + mu = n` with
//! `mu <= 0` (Gegenbauer polynomial form).

use std::f64::consts::PI;

use super::gamma::{gamma_ln, recip_gamma};
use super::hypergeometric::f21_regularized;
use crate::error::{domain, Result};

const DIRECT_MAX_DEGREE: f64 = 2.0;

/// Ferrers function `P_nu^mu(x)` for `|x| < 1`.
pub fn assoc_legendre(nu: f64, mu: f64, x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) || !nu.is_finite() || !mu.is_finite() {
        return Err(domain("assoc_legendre", format!("requires |x| < 1 and finite parameters, got x = {x}")));
    }
    let z = 0.5 * (1.0 - x);
    let zc = 0.5 * (1.0 + x);
    assoc_legendre_z(nu, mu, z, zc)
}

/// `P_nu^mu` at `x = 1 - 2z`, taking `z = (1-x)/2` and `zc = (1+x)/2`
/// separately so that points near either endpoint keep full precision.
pub fn assoc_legendre_z(nu: f64, mu: f64, z: f64, zc: f64) -> Result<f64> {
    if !(z > 0.0 && zc > 0.0) {
        return Err(domain("assoc_legendre", "argument outside (-1, 1)"));
    }
    // P_{-nu-1} = P_nu
    let nu = if nu < -0.5 { -nu - 1.0 } else { nu };
    let x = zc - z;

    let n_plus = nu + mu;
    if mu <= 0.0 && n_plus > -0.5 && (n_plus - n_plus.round()).abs() <= 1e-12 * nu.max(1.0) {
        return Ok(gegenbauer_form(n_plus.round() as u32, -mu, x, z, zc));
    }
    if nu.fract() == 0.0 && mu.fract() == 0.0 {
        if let Some(v) = integer_degree_order(nu as u32, mu as i64, x, z, zc) {
            return Ok(v);
        }
    }
    if nu <= DIRECT_MAX_DEGREE {
        return hypergeometric_form(nu, mu, z, zc);
    }
    // degree recurrence from nu0 in (0, 1]
    let steps = nu.ceil() as u32 - 1;
    let nu0 = nu - steps as f64;
    let mut prev = hypergeometric_form(nu0 - 1.0, mu, z, zc)?;
    let mut cur = hypergeometric_form(nu0, mu, z, zc)?;
    let mut deg = nu0;
    for _ in 0..steps {
        // (nu - mu + 1) P_{nu+1} = (2nu + 1) x P_nu - (nu + mu) P_{nu-1}
        let denom = deg - mu + 1.0;
        if denom.abs() < 1e-10 {
            return hypergeometric_form(nu, mu, z, zc);
        }
        let next = ((2.0 * deg + 1.0) * x * cur - (deg + mu) * prev) / denom;
        prev = cur;
        cur = next;
        deg += 1.0;
    }
    Ok(cur)
}

fn hypergeometric_form(nu: f64, mu: f64, z: f64, zc: f64) -> Result<f64> {
    let f = f21_regularized(-nu, nu + 1.0, 1.0 - mu, z, zc)?;
    if f == 0.0 {
        return Ok(0.0);
    }
    Ok((zc / z).powf(0.5 * mu) * f)
}

/// `P_{n+lambda}^{-lambda}(x) = n! 2^lambda Gamma(lambda+1/2) / (sqrt(pi) Gamma(2 lambda + n + 1))
///  (1 - x^2)^(lambda/2) C_n^(lambda+1/2)(x)`.
fn gegenbauer_form(n: u32, lambda: f64, x: f64, z: f64, zc: f64) -> f64 {
    let c = gegenbauer(n, lambda + 0.5, x);
    if c == 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    let ln_pref = gamma_ln(nf + 1.0).unwrap_or(0.0) + lambda * 2f64.ln() + gamma_ln(lambda + 0.5).unwrap_or(0.0)
        - 0.5 * PI.ln()
        - gamma_ln(2.0 * lambda + nf + 1.0).unwrap_or(0.0)
        // (1 - x^2) = 4 z zc
        + 0.5 * lambda * (4.0 * z * zc).ln();
    c * ln_pref.exp()
}

/// Gegenbauer polynomial `C_n^lambda(x)` by the standard recurrence.
pub fn gegenbauer(n: u32, lambda: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * lambda * x;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 * (kf + lambda) * x * cur - (kf + 2.0 * lambda - 1.0) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Classical `P_n^m` with the Condon-Shortley phase; `None` when `m < -n`
/// (not covered by the reflection formula).
fn integer_degree_order(n: u32, m: i64, x: f64, z: f64, zc: f64) -> Option<f64> {
    let am = m.unsigned_abs() as u32;
    if am > n {
        return if m > 0 { Some(0.0) } else { None };
    }
    let s = (4.0 * z * zc).sqrt();
    // P_m^m = (-1)^m (2m-1)!! s^m
    let mut pmm = 1.0;
    for i in 0..am {
        pmm *= -((2 * i + 1) as f64) * s;
    }
    let mut value = pmm;
    if n > am {
        let mut prev = pmm;
        let mut cur = x * (2 * am + 1) as f64 * pmm;
        for l in (am + 2)..=n {
            let next = ((2 * l - 1) as f64 * x * cur - (l + am - 1) as f64 * prev) / (l - am) as f64;
            prev = cur;
            cur = next;
        }
        value = cur;
    }
    if m < 0 {
        // P_n^{-m} = (-1)^m (n-m)!/(n+m)! P_n^m
        let ratio = (gamma_ln((n - am + 1) as f64).ok()? - gamma_ln((n + am + 1) as f64).ok()?).exp();
        let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
        value *= sign * ratio;
    }
    let _ = recip_gamma;
    Some(value)
}
