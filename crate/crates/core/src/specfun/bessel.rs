use std::f64::consts::PI;

use super::gamma::gamma_ln;
use super::{RealOrder, SpecialValue};
use crate::error::{domain, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 2_000_000;

/// `I_nu(x)` in scaled form: `value = exp(-x) I_nu(x)`, `scale_exponent = x`.
///
/// Power series where it converges quickly, the Hankel asymptotic series
/// for very large arguments, otherwise the continued fraction for
/// `I'/I` combined with Steed's algorithm for `K` and the Wronskian.
pub fn bessel_i_scaled(nu: RealOrder, x: f64) -> Result<SpecialValue> {
    let nu = nu.value();
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain("bessel_i_scaled", format!("argument must be finite and >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(SpecialValue::new(if nu == 0.0 { 1.0 } else { 0.0 }, 0.0));
    }
    let scaled = if x <= 20.0 || x * x <= 25.0 * (nu + 1.0) {
        series_scaled(nu, x)?
    } else if let Some(v) = asymptotic_scaled(nu, x) {
        v
    } else {
        continued_fraction_scaled(nu, x)?
    };
    Ok(SpecialValue::new(scaled, x))
}

/// `exp(-x) I_nu(x)` from the ascending series (all terms positive).
fn series_scaled(nu: f64, x: f64) -> Result<f64> {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (nu + k));
        sum += term;
        if term < EPS * sum {
            break;
        }
    }
    let ln_pref = nu * (0.5 * x).ln() - x - gamma_ln(nu + 1.0)?;
    Ok(sum * ln_pref.exp())
}

/// Hankel expansion; `None` if it does not reach full precision.
fn asymptotic_scaled(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= -(mu - odd * odd) / (8.0 * kf * x);
        let a = term.abs();
        if a > prev {
            return None;
        }
        sum += term;
        if a < EPS * sum.abs() {
            return Some(sum / (2.0 * PI * x).sqrt());
        }
        prev = a;
    }
    None
}

/// Scaled `I_nu` for `x > 2` via CF1 for `I'/I`, Steed's CF2 for
/// `exp(x) K_mu` with `|mu| <= 1/2`, forward recurrence of `K` and the
/// Wronskian `I K' - I' K = -1/x`.
fn continued_fraction_scaled(nu: f64, x: f64) -> Result<f64> {
    let nl = (nu + 0.5).floor() as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    const FPMIN: f64 = 1e-300;

    // CF1: f = I'_nu / I_nu (modified Lentz)
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(domain("bessel_i_scaled", "CF1 did not converge"));
    }

    // downward recurrence of the ratio from nu to xmu
    let mut ril = FPMIN;
    let mut ripl = h * ril;
    let ril1 = ril;
    let rip1 = ripl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
        if ril.abs() > 1e250 {
            // only the ratio ripl/ril matters below
            ripl /= ril.abs();
            ril /= ril.abs();
        }
    }
    let f = ripl / ril;

    // CF2 (Steed), K scaled by exp(x)
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - xmu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    converged = false;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(domain("bessel_i_scaled", "CF2 did not converge"));
    }
    let h = a1 * h;
    let rkmu = (PI / (2.0 * x)).sqrt() / s;
    let rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    let rkmup = xmu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);
    // I_nu / I_mu = ril1 / ril after the downward sweep
    let _ = rip1;
    Ok(rimu * ril1 / ril)
}
