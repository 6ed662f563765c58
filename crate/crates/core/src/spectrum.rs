//! Bound-state spectrum `E = -M xi^2 / (2 (1 + |m+alpha| + n + n')^2)`
//! with level enumeration and degeneracy grouping.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Physical parameters: mass `M`, Coulomb strength `xi` (negative for
/// attraction) and flux `alpha` in units of the flux quantum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub mass: f64,
    pub coulomb: f64,
    pub flux: f64,
}

impl PhysParams {
    pub fn new(mass: f64, coulomb: f64, flux: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(invalid("mass", format!("must be finite and > 0, got {mass}")));
        }
        if !coulomb.is_finite() {
            return Err(invalid("coulomb", "must be finite"));
        }
        if !flux.is_finite() {
            return Err(invalid("flux", "must be finite"));
        }
        Ok(PhysParams { mass, coulomb, flux })
    }

    pub(crate) fn require_bound(&self) -> Result<()> {
        if self.coulomb < 0.0 {
            Ok(())
        } else {
            Err(Error::NoBoundStates { coulomb: self.coulomb })
        }
    }

    /// `|m + alpha|`.
    pub fn nu(&self, m: i64) -> f64 {
        (m as f64 + self.flux).abs()
    }
}

/// Azimuthal number `m` and the two oscillator quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub m: i64,
    pub n: u32,
    pub nprime: u32,
}

impl QuantumNumbers {
    pub fn new(m: i64, n: u32, nprime: u32) -> Self {
        QuantumNumbers { m, n, nprime }
    }
}

/// A set of states sharing one energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub energy: f64,
    pub quantum_numbers: Vec<QuantumNumbers>,
    pub principal: f64,
}

impl Level {
    pub fn degeneracy(&self) -> usize {
        self.quantum_numbers.len()
    }
}

/// `1 + |m+alpha| + n + n'`.
pub fn principal(params: &PhysParams, qn: QuantumNumbers) -> f64 {
    1.0 + params.nu(qn.m) + qn.n as f64 + qn.nprime as f64
}

pub fn energy(params: &PhysParams, qn: QuantumNumbers) -> Result<f64> {
    params.require_bound()?;
    let p = principal(params, qn);
    Ok(energy_at_principal(params, p))
}

pub(crate) fn energy_at_principal(params: &PhysParams, p: f64) -> f64 {
    -params.mass * params.coulomb * params.coulomb / (2.0 * p * p)
}

/// `n + |m+alpha|`, the non-integer angular momentum seen by the radial equation.
pub fn effective_ell(m: i64, alpha: f64, n: u32) -> f64 {
    n as f64 + (m as f64 + alpha).abs()
}

/// All states with principal number at most `max_principal`, grouped by
/// energy (relative tolerance 1e-12), lowest level first.
pub fn enumerate_levels(params: &PhysParams, max_principal: f64) -> Result<Vec<Level>> {
    params.require_bound()?;
    if !(max_principal >= 1.0) || !max_principal.is_finite() {
        return Err(invalid("max_principal", format!("must be finite and >= 1, got {max_principal}")));
    }
    let budget = max_principal - 1.0;
    let slack = 1e-12 * max_principal;
    let m_lo = (-params.flux - budget - slack).ceil() as i64;
    let m_hi = (-params.flux + budget + slack).floor() as i64;

    let mut states: Vec<(f64, QuantumNumbers)> = Vec::new();
    for m in m_lo..=m_hi {
        let rest = budget - params.nu(m);
        if rest < -slack {
            continue;
        }
        let top = (rest + slack).floor().max(0.0) as u32;
        for n in 0..=top {
            for nprime in 0..=(top - n) {
                let qn = QuantumNumbers::new(m, n, nprime);
                let p = principal(params, qn);
                if p <= max_principal + slack {
                    states.push((p, qn));
                }
            }
        }
    }
    states.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut levels: Vec<Level> = Vec::new();
    for (p, qn) in states {
        match levels.last_mut() {
            Some(level) if (p - level.principal).abs() <= 1e-12 * p => level.quantum_numbers.push(qn),
            _ => levels.push(Level { energy: energy_at_principal(params, p), quantum_numbers: vec![qn], principal: p }),
        }
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn hydrogen() -> PhysParams {
        PhysParams::new(1.0, -1.0, 0.0).unwrap()
    }

    #[test]
    fn ground_state_values() {
        assert_eq!(energy(&hydrogen(), QuantumNumbers::new(0, 0, 0)).unwrap(), -0.5);
        let p = PhysParams::new(1.0, -1.0, 0.5).unwrap();
        assert_relative_eq!(energy(&p, QuantumNumbers::new(0, 0, 0)).unwrap(), -2.0 / 9.0, max_relative = 1e-15);
    }

    #[test]
    fn repulsive_rejected() {
        let p = PhysParams::new(1.0, 1.0, 0.0).unwrap();
        assert!(matches!(energy(&p, QuantumNumbers::new(0, 0, 0)), Err(Error::NoBoundStates { .. })));
        assert!(enumerate_levels(&p, 3.0).is_err());
    }

    #[test]
    fn hydrogen_two_levels() {
        let levels = enumerate_levels(&hydrogen(), 2.0).unwrap();
        assert_eq!(levels.len(), 2);
        assert_eq!(levels[0].degeneracy(), 1);
        assert_eq!(levels[1].degeneracy(), 4);
        assert_eq!(levels[1].energy, -0.125);
    }

    #[test]
    fn effective_ell_values() {
        assert_eq!(effective_ell(0, 0.0, 1), 1.0);
        assert_relative_eq!(effective_ell(1, 0.3, 0), 1.3);
    }
}
