use std::f64::consts::PI;

use super::hypergeometric::{kummer_m, tricomi_u};
use super::SpecialValue;
use crate::error::{domain, Result};

/// Whittaker `M_{kappa,mu}(z) = e^(-z/2) z^(mu+1/2) M(mu-kappa+1/2, 1+2mu, z)`.
///
/// For `z < 0` the principal branch `z^(mu+1/2) = |z|^(mu+1/2) e^(i pi (mu+1/2))`
/// is used; the phase is returned in [`SpecialValue::phase`] and the
/// remaining factor is real.
pub fn whittaker_m(kappa: f64, mu: f64, z: f64) -> Result<SpecialValue> {
    let b = 1.0 + 2.0 * mu;
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(domain("whittaker_m", format!("1 + 2 mu = {b} is a parameter pole")));
    }
    let power = mu + 0.5;
    if z == 0.0 {
        if power > 0.0 {
            return Ok(SpecialValue::zero());
        }
        return Err(domain("whittaker_m", "z = 0 with mu + 1/2 <= 0"));
    }
    let a = mu - kappa + 0.5;
    let m = kummer_m(a, b, z)?;
    let az = z.abs();
    let v = SpecialValue::new(m.value, m.scale_exponent - 0.5 * z + power * az.ln());
    if z < 0.0 {
        Ok(v.with_phase(PI * power))
    } else {
        Ok(v)
    }
}

/// Whittaker `W_{kappa,mu}(z) = e^(-z/2) z^(mu+1/2) U(mu-kappa+1/2, 1+2mu, z)`, `z > 0`.
pub fn whittaker_w(kappa: f64, mu: f64, z: f64) -> Result<SpecialValue> {
    if !(z > 0.0) {
        return Err(domain("whittaker_w", format!("requires z > 0, got {z}")));
    }
    let u = tricomi_u(mu - kappa + 0.5, 1.0 + 2.0 * mu, z)?;
    Ok(SpecialValue::new(u.value, u.scale_exponent - 0.5 * z + (mu + 0.5) * z.ln()))
}
