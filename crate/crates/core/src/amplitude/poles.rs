//! Locating bound-state poles of the partial-wave amplitude on an energy grid.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::partial_wave::partial_wave_sum;
use super::{check_inputs, EndpointPair, FixedEnergy, TruncationSpec};
use crate::error::{invalid, Result};
use crate::spectrum::PhysParams;

/// Minimum ratio of `|G|` at a refined pole bracket to the background level.
const MIN_GROWTH: f64 = 1e3;
const BRACKET_REL: f64 = 1e-8;
const WINDOW: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleHit {
    pub energy: f64,
    /// `|G|` at the refined bracket relative to the smallest `|G|` nearby on the grid.
    pub growth: f64,
}

fn eval(params: &PhysParams, pts: &EndpointPair, e: f64, trunc: &TruncationSpec) -> Result<Complex64> {
    let fe = FixedEnergy::new(params, e)?;
    Ok(partial_wave_sum(params, pts, &fe, trunc)?.value)
}

/// Scan `e_grid` (strictly increasing, all negative) for poles of the
/// amplitude. Every local maximum of `|G|` is bracketed by its grid
/// neighbours and refined by bisection on the sign of `1/G` projected on its
/// direction at the lower end; only brackets where `1/G` changes sign and
/// `|G|` grows by at least a factor `1e3` over the surrounding grid values
/// are reported.
pub fn pole_scan(params: &PhysParams, pts: &EndpointPair, e_grid: &[f64], trunc: &TruncationSpec) -> Result<Vec<PoleHit>> {
    if e_grid.len() < 3 {
        return Err(invalid("e_grid", "needs at least 3 energies"));
    }
    if !e_grid.windows(2).all(|w| w[0] < w[1]) || !(e_grid[e_grid.len() - 1] < 0.0) {
        return Err(invalid("e_grid", "must be strictly increasing and negative"));
    }
    let fe0 = FixedEnergy::new(params, e_grid[0])?;
    check_inputs(params, pts, &fe0, trunc)?;

    let mags: Vec<f64> = e_grid
        .iter()
        .map(|&e| eval(params, pts, e, trunc).map(|g| g.norm()))
        .collect::<Result<_>>()?;

    let mut hits = Vec::new();
    for i in 1..e_grid.len() - 1 {
        if !(mags[i] >= mags[i - 1] && mags[i] > mags[i + 1]) {
            continue;
        }
        let lo_w = i.saturating_sub(WINDOW);
        let hi_w = (i + WINDOW).min(e_grid.len() - 1);
        let background = mags[lo_w..=hi_w].iter().cloned().fold(f64::INFINITY, f64::min);

        // the pole may lie on either side of the grid maximum
        for (a, b) in [(i - 1, i), (i, i + 1)] {
            if let Some(hit) = refine(params, pts, trunc, e_grid[a], e_grid[b], background)? {
                hits.push(hit);
                break;
            }
        }
    }
    Ok(hits)
}

fn refine(
    params: &PhysParams,
    pts: &EndpointPair,
    trunc: &TruncationSpec,
    mut lo: f64,
    mut hi: f64,
    background: f64,
) -> Result<Option<PoleHit>> {
    let g_lo = eval(params, pts, lo, trunc)?;
    let g_hi = eval(params, pts, hi, trunc)?;
    let d = g_lo.inv();
    let d = d / d.norm();
    let side = |g: Complex64| (g.inv() * d.conj()).re;
    if side(g_lo) * side(g_hi) > 0.0 {
        return Ok(None);
    }
    let (mut m_lo, mut m_hi) = (g_lo.norm(), g_hi.norm());
    while hi - lo > BRACKET_REL * lo.abs() {
        let mid = 0.5 * (lo + hi);
        let g = eval(params, pts, mid, trunc)?;
        if side(g) > 0.0 {
            lo = mid;
            m_lo = g.norm();
        } else {
            hi = mid;
            m_hi = g.norm();
        }
    }
    let growth = m_lo.max(m_hi) / background;
    if growth < MIN_GROWTH {
        return Ok(None);
    }
    Ok(Some(PoleHit { energy: 0.5 * (lo + hi), growth }))
}
