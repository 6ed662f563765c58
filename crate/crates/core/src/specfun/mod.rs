//! Special-function kernel: gamma family, exponentially scaled modified
//! Bessel functions, Gauss and Kummer hypergeometric functions, Whittaker
//! functions and Ferrers (associated Legendre) functions of real, generally
//! non-integer, degree and order.
//!
//! Functions that can overflow return a [`SpecialValue`], which keeps an
//! exponent separate from the mantissa.

mod bessel;
mod gamma;
mod hypergeometric;
mod legendre;
mod whittaker;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use bessel::bessel_i_scaled;
pub use gamma::{cos_pi, digamma, gamma, gamma_ln, ln_gamma_sign, pochhammer, recip_gamma, sin_pi};
pub use hypergeometric::{gauss_2f1, gauss_2f1_regularized, kummer_m, tricomi_u};
pub use legendre::{assoc_legendre, assoc_legendre_z, gegenbauer};
pub use whittaker::{whittaker_m, whittaker_w};

/// A non-negative real order, degree or index such as `|m + alpha|`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RealOrder(f64);

impl RealOrder {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(invalid("order", format!("must be finite and >= 0, got {value}")));
        }
        Ok(RealOrder(value))
    }

    /// `|m + alpha|`, the index carried by every partial wave.
    pub fn flux_shifted(m: i64, alpha: f64) -> Self {
        RealOrder((m as f64 + alpha).abs())
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `value * exp(scale_exponent) * exp(i * phase)`.
///
/// `phase` is nonzero only for the Whittaker M function on the negative
/// real axis, where the principal branch of `z^(mu + 1/2)` contributes it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialValue {
    pub value: f64,
    pub scale_exponent: f64,
    pub phase: f64,
}

impl SpecialValue {
    pub fn new(value: f64, scale_exponent: f64) -> Self {
        SpecialValue { value, scale_exponent, phase: 0.0 }
    }

    pub fn unscaled(value: f64) -> Self {
        SpecialValue::new(value, 0.0)
    }

    pub fn zero() -> Self {
        SpecialValue::new(0.0, 0.0)
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    /// Real value of `value * exp(scale_exponent)`, ignoring the phase.
    pub fn magnitude_f64(&self) -> f64 {
        if self.value == 0.0 {
            return 0.0;
        }
        self.value * self.scale_exponent.exp()
    }

    /// Recomposed real value; the phase must be a multiple of `2 pi`.
    pub fn to_f64(&self) -> f64 {
        debug_assert!(self.phase == 0.0, "to_f64 on a value carrying a phase");
        self.magnitude_f64()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.phase) * self.magnitude_f64()
    }

    /// `ln|value| + scale_exponent`.
    pub fn ln_abs(&self) -> f64 {
        self.value.abs().ln() + self.scale_exponent
    }

    /// Shift the exponent so that `|value|` is near 1 (or leave zero alone).
    pub fn normalized(self) -> Self {
        if self.value == 0.0 || !self.value.is_finite() {
            return self;
        }
        let e = self.value.abs().ln();
        SpecialValue {
            value: self.value.signum(),
            scale_exponent: self.scale_exponent + e,
            phase: self.phase,
        }
    }

    pub fn mul(self, other: SpecialValue) -> Self {
        SpecialValue {
            value: self.value * other.value,
            scale_exponent: self.scale_exponent + other.scale_exponent,
            phase: self.phase + other.phase,
        }
    }
}
