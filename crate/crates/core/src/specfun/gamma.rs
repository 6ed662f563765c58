//! Gamma, reciprocal gamma and digamma for real arguments.
//!
//! Positive arguments are shifted above `SHIFT` and evaluated with the
//! Stirling series; negative arguments go through the reflection formula
//! with an exact `sin(pi x)` so that poles land on exact zeros of `1/Gamma`.

use std::f64::consts::PI;

use crate::error::{domain, Result};

const SHIFT: f64 = 12.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if x.fract() == 0.0 {
        return 0.0;
    }
    // reduce to r in [0, 2)
    let r = x - 2.0 * (x / 2.0).floor();
    if r < 0.25 {
        (PI * r).sin()
    } else if r < 0.75 {
        (PI * (0.5 - r)).cos()
    } else if r < 1.25 {
        (PI * (1.0 - r)).sin()
    } else if r < 1.75 {
        -(PI * (r - 1.5)).cos()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

/// `cos(pi x)` with exact zeros at half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

fn stirling_series(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    inv * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2
                        * (1.0 / 1260.0
                            + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360360.0))))))
}

fn stirling_ln_gamma(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_series(x)
}

/// Gamma(x) for x >= SHIFT without going through the logarithm. The power is
/// split in two so that it does not overflow before the exponential damps it.
fn stirling_gamma(x: f64) -> f64 {
    let half = x.powf(0.5 * x - 0.25);
    SQRT_2PI * half * ((-x + stirling_series(x)).exp() * half)
}

/// Shift `x > 0` upward; returns (shifted x, product of skipped factors).
fn shift_up(mut x: f64) -> (f64, f64) {
    let mut prod = 1.0;
    while x < SHIFT {
        prod *= x;
        x += 1.0;
    }
    (x, prod)
}

/// `ln|Gamma(x)|` together with the sign of `Gamma(x)`.
pub fn ln_gamma_sign(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(domain("gamma_ln", format!("non-finite argument {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(domain("gamma_ln", format!("pole at {x}")));
    }
    if x > 0.0 {
        if x < 30.0 {
            return Ok((gamma(x).ln(), 1.0));
        }
        return Ok((stirling_ln_gamma(x), 1.0));
    }
    // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    let s = sin_pi(x);
    let (lg, _) = ln_gamma_sign(1.0 - x)?;
    Ok(((PI / s.abs()).ln() - lg, s.signum()))
}

/// `ln|Gamma(x)|`. Errors at the poles `x = 0, -1, -2, ...`.
pub fn gamma_ln(x: f64) -> Result<f64> {
    ln_gamma_sign(x).map(|(v, _)| v)
}

/// `Gamma(x)`; infinite at poles, overflows to infinity beyond ~171.6.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x > 0.0 {
        if x > 171.7 {
            return f64::INFINITY;
        }
        let (xs, prod) = shift_up(x);
        return stirling_gamma(xs) / prod;
    }
    PI / (sin_pi(x) * gamma(1.0 - x))
}

/// `1/Gamma(x)`, exactly zero at the poles of Gamma. Never fails.
pub fn recip_gamma(x: f64) -> f64 {
    if !x.is_finite() {
        return if x == f64::INFINITY { 0.0 } else { f64::NAN };
    }
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > 0.0 {
        if x > 171.0 {
            return (-gamma_ln(x).unwrap_or(f64::INFINITY)).exp();
        }
        let (xs, prod) = shift_up(x);
        return prod / stirling_gamma(xs);
    }
    // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
    let g = gamma(1.0 - x);
    if g.is_infinite() {
        let (lg, _) = ln_gamma_sign(1.0 - x).unwrap_or((f64::INFINITY, 1.0));
        return sin_pi(x) * (lg - PI.ln()).exp();
    }
    sin_pi(x) * g / PI
}

/// Digamma `psi(x) = Gamma'(x)/Gamma(x)`.
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) || !x.is_finite() {
        return Err(domain("digamma", format!("pole or non-finite argument {x}")));
    }
    if x < 0.0 {
        // psi(1 - x) - psi(x) = pi cot(pi x)
        return Ok(digamma(1.0 - x)? - PI * cos_pi(x) / sin_pi(x));
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < SHIFT {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let tail = inv2
        * (1.0 / 12.0
            - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    Ok(acc + x.ln() - 0.5 / x - tail)
}

/// Rising factorial `(a)_k`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}
