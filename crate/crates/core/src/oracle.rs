//! Finite-difference radial eigenvalue solver for the Coulomb problem with
//! a non-integer centrifugal term, used as an independent check of the
//! closed-form spectrum.
//!
//! The radial equation
//! `-(1/2M) u'' + [l(l+1)/(2M r^2) + xi/r] u = E u`, `u(r_min) = u(r_max) = 0`,
//! is discretized either on a uniform grid in `r` or on a uniform grid in
//! `s = ln r` with `u = r^(1/2) v`, which turns it into the symmetric problem
//! `-(1/2M) v'' + [(l+1/2)^2/(2M) + xi r] v = E r^2 v`. Both reduce to a
//! symmetric tridiagonal matrix whose eigenvalues are found by Sturm-sequence
//! bisection. Two resolutions with step ratio 2 are combined by Richardson
//! extrapolation.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectrum::{effective_ell, energy, PhysParams, QuantumNumbers};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Uniform,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n_points: usize, spacing: Spacing) -> Result<Self> {
        if !(r_min > 0.0 && r_min.is_finite()) {
            return Err(invalid("r_min", format!("must be finite and > 0, got {r_min}")));
        }
        if !(r_max > r_min && r_max.is_finite()) {
            return Err(invalid("r_max", format!("must be finite and > r_min, got {r_max}")));
        }
        if n_points < 100 {
            return Err(invalid("n_points", format!("must be at least 100, got {n_points}")));
        }
        Ok(RadialGrid { r_min, r_max, n_points, spacing })
    }

    /// Log grid sized for states up to principal number `max_principal`:
    /// `r_min = 1e-8 a`, `r_max = max(60, 2 N^2 + 24 N) a` with `a = 1/(M |xi|)`,
    /// which keeps 18 decay lengths beyond the outer turning point.
    pub fn for_params(params: &PhysParams, max_principal: f64, n_points: usize) -> Result<Self> {
        params.require_bound()?;
        let a = 1.0 / (params.mass * params.coulomb.abs());
        let rmax = (2.0 * max_principal * max_principal + 24.0 * max_principal).max(60.0) * a;
        RadialGrid::new(1e-8 * a, rmax, n_points, Spacing::Log)
    }

    fn refined(&self) -> RadialGrid {
        // interior points n -> 2n + 1 halves the step exactly
        RadialGrid { n_points: 2 * self.n_points + 1, ..*self }
    }

    fn step(&self) -> f64 {
        let span = match self.spacing {
            Spacing::Uniform => self.r_max - self.r_min,
            Spacing::Log => (self.r_max / self.r_min).ln(),
        };
        span / (self.n_points + 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Richardson-extrapolated eigenvalues, lowest first.
    pub eigenvalues: Vec<f64>,
    /// `|extrapolated - fine-grid|` per eigenvalue.
    pub error_estimates: Vec<f64>,
    pub grid: RadialGrid,
    pub ell_eff: f64,
}

/// Symmetric tridiagonal matrix: diagonal `d`, off-diagonal `e` (`e.len() = d.len() - 1`).
struct Tridiagonal {
    d: Vec<f64>,
    e: Vec<f64>,
}

impl Tridiagonal {
    fn build(params: &PhysParams, ell: f64, grid: &RadialGrid) -> Self {
        let n = grid.n_points;
        let h = grid.step();
        let inv_m = 1.0 / params.mass;
        let xi = params.coulomb;
        let mut d = Vec::with_capacity(n);
        let mut e = Vec::with_capacity(n.saturating_sub(1));
        match grid.spacing {
            Spacing::Uniform => {
                let kin = inv_m / (h * h);
                let cent = ell * (ell + 1.0) * 0.5 * inv_m;
                for i in 0..n {
                    let r = grid.r_min + (i + 1) as f64 * h;
                    d.push(kin + cent / (r * r) + xi / r);
                }
                e.resize(n - 1, -0.5 * kin);
            }
            Spacing::Log => {
                // r^-1 A r^-1 with A the s-space operator
                let kin = inv_m / (h * h);
                let cent = (ell + 0.5) * (ell + 0.5) * 0.5 * inv_m;
                let s0 = grid.r_min.ln();
                let r: Vec<f64> = (0..n).map(|i| (s0 + (i + 1) as f64 * h).exp()).collect();
                for &ri in &r {
                    d.push((kin + cent) / (ri * ri) + xi / ri);
                }
                for w in r.windows(2) {
                    e.push(-0.5 * kin / (w[0] * w[1]));
                }
            }
        }
        Tridiagonal { d, e }
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.d.len() {
            let off = if i == 0 { 0.0 } else { self.e[i - 1] * self.e[i - 1] / q };
            q = self.d[i] - x - off;
            if q == 0.0 {
                q = -f64::EPSILON * (self.d[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn lower_bound(&self) -> f64 {
        let n = self.d.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.e[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.e[i].abs() } else { 0.0 };
                self.d[i] - left - right
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// The `k`-th eigenvalue (0-based) by bisection, searched in `[lower, upper]`.
    fn eigenvalue(&self, k: usize, upper: f64) -> Option<f64> {
        let mut lo = self.lower_bound();
        let mut hi = upper;
        if self.count_below(hi) <= k {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(lo.abs()) {
                break;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

fn solve_grid(params: &PhysParams, ell: f64, count: usize, grid: &RadialGrid) -> Result<Vec<f64>> {
    let t = Tridiagonal::build(params, ell, grid);
    (0..count)
        .map(|k| {
            t.eigenvalue(k, 0.0).ok_or_else(|| {
                Error::Resolution(format!(
                    "only {} bound states below 0 on [{}, {}] with {} points for l = {ell}; requested {count}",
                    t.count_below(0.0),
                    grid.r_min,
                    grid.r_max,
                    grid.n_points
                ))
            })
        })
        .collect()
}

/// Lowest `count` eigenvalues for centrifugal parameter `ell_eff`.
pub fn radial_eigenvalues(params: &PhysParams, ell_eff: f64, count: usize, grid: &RadialGrid) -> Result<OracleResult> {
    params.require_bound()?;
    if !(ell_eff >= 0.0 && ell_eff.is_finite()) {
        return Err(invalid("ell_eff", format!("must be finite and >= 0, got {ell_eff}")));
    }
    if count == 0 {
        return Err(invalid("count", "must be at least 1"));
    }
    let coarse = solve_grid(params, ell_eff, count, grid)?;
    let fine_grid = grid.refined();
    let fine = solve_grid(params, ell_eff, count, &fine_grid)?;
    let h1 = grid.step();
    let h2 = fine_grid.step();
    let (w1, w2) = (h1 * h1, h2 * h2);

    let mut eigenvalues = Vec::with_capacity(count);
    let mut error_estimates = Vec::with_capacity(count);
    for (e1, e2) in coarse.iter().zip(fine.iter()) {
        let er = (w1 * e2 - w2 * e1) / (w1 - w2);
        // the state must decay well before the outer wall
        let kappa = (-2.0 * params.mass * er).sqrt();
        let turning = params.coulomb.abs() / er.abs();
        if kappa * (grid.r_max - turning) < 18.0 {
            return Err(Error::Resolution(format!(
                "r_max = {} clips the tail of the state at E = {er:.6e} (outer turning point {turning:.3e}); increase r_max",
                grid.r_max
            )));
        }
        eigenvalues.push(er);
        error_estimates.push((er - e2).abs());
    }
    Ok(OracleResult { eigenvalues, error_estimates, grid: *grid, ell_eff })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumComparison {
    pub qn: QuantumNumbers,
    pub formula: f64,
    pub oracle: f64,
    pub rel_diff: f64,
}

/// Formula energy against the `(n'+1)`-th radial eigenvalue with `l = n + |m+alpha|`.
pub fn compare_spectrum(params: &PhysParams, qn_set: &[QuantumNumbers], grid: &RadialGrid) -> Result<Vec<SpectrumComparison>> {
    let mut out = Vec::with_capacity(qn_set.len());
    // one solve per distinct l, deep enough for the largest n' requested
    let mut cache: Vec<(f64, OracleResult)> = Vec::new();
    for qn in qn_set {
        let ell = effective_ell(qn.m, params.flux, qn.n);
        let need = qn.nprime as usize + 1;
        let hit = cache.iter().position(|(l, r)| *l == ell && r.eigenvalues.len() >= need);
        let idx = match hit {
            Some(i) => i,
            None => {
                let deepest = qn_set
                    .iter()
                    .filter(|q| effective_ell(q.m, params.flux, q.n) == ell)
                    .map(|q| q.nprime as usize + 1)
                    .max()
                    .unwrap_or(need);
                cache.push((ell, radial_eigenvalues(params, ell, deepest, grid)?));
                cache.len() - 1
            }
        };
        let oracle = cache[idx].1.eigenvalues[qn.nprime as usize];
        let formula = energy(params, *qn)?;
        out.push(SpectrumComparison { qn: *qn, formula, oracle, rel_diff: ((formula - oracle) / formula).abs() });
    }
    Ok(out)
}
