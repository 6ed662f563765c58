use std::f64::consts::PI;

use abc_core::amplitude::{
    bessel_product_identity_check, green_partial_wave, green_q_integral, legendre_integral_identity_check,
    oscillator_sum_reduction_check, AmplitudeValue,
};
use abc_core::kstransform::{
    ab_oneform_cartesian, ab_oneform_pullback, ks_differential, ks_jacobian, ks_map, ks_matrix, spherical_to_ks,
};
use abc_core::oracle::compare_spectrum;
use abc_core::spectrum::enumerate_levels;
use abc_core::{
    AuxAngle, EndpointPair, FixedEnergy, KsPoint, PhysParams, RadialGrid, RealOrder, SphericalPoint, TruncationSpec,
};
use anyhow::{Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{CheckKind, RunConfig, ScanVar, UsageError};

pub struct Outcome {
    pub results: Vec<Value>,
    pub diagnostics: Value,
    /// False when a check exceeded its tolerance.
    pub passed: bool,
}

fn units() -> Value {
    json!("natural units, hbar = 1")
}

pub fn physical(cfg: &RunConfig) -> Result<PhysParams> {
    Ok(PhysParams::new(cfg.mass, cfg.coulomb, cfg.flux)?)
}

fn truncation(cfg: &RunConfig) -> Result<TruncationSpec> {
    let t = TruncationSpec { m_max: cfg.m_max, n_max: cfg.n_max, quad_rel_tol: cfg.quad_rel_tol, ..TruncationSpec::default() };
    t.validate()?;
    Ok(t)
}

pub fn spectrum(cfg: &RunConfig) -> Result<Outcome> {
    let p = physical(cfg)?;
    let levels = enumerate_levels(&p, cfg.max_principal)?;
    let results = levels
        .iter()
        .map(|l| {
            let states: Vec<Value> = l.quantum_numbers.iter().map(|q| json!([q.m, q.n, q.nprime])).collect();
            json!({
                "energy": l.energy,
                "principal": l.principal,
                "degeneracy": l.degeneracy(),
                "states": states,
            })
        })
        .collect();
    Ok(Outcome {
        results,
        diagnostics: json!({"units": units(), "levels": levels.len(), "states": "[m, n, n']"}),
        passed: true,
    })
}

#[derive(Clone, Copy)]
struct Point {
    energy: f64,
    a: (f64, f64, f64),
    b: (f64, f64, f64),
}

fn amp_json(v: &AmplitudeValue) -> Value {
    json!({"re": v.value.re, "im": v.value.im, "err_estimate": v.err_estimate})
}

fn evaluate(p: &PhysParams, t: &TruncationSpec, pt: Point) -> Result<Value> {
    let a = SphericalPoint::new(pt.a.0, pt.a.1, pt.a.2)?;
    let b = SphericalPoint::new(pt.b.0, pt.b.1, pt.b.2)?;
    let pts = EndpointPair::new(a, b);
    let fe = FixedEnergy::new(p, pt.energy)?;
    let q = green_q_integral(p, &pts, &fe, t)?;
    let w = green_partial_wave(p, &pts, &fe, t)?;
    let rel = (q.value - w.value).norm() / w.value.norm();
    Ok(json!({
        "q_integral": amp_json(&q),
        "partial_wave": amp_json(&w),
        "rel_diff": rel,
        "magnitude": w.value.norm(),
    }))
}

fn point_json(pt: &Point) -> Value {
    json!({
        "energy": pt.energy,
        "ra": pt.a.0, "theta_a": pt.a.1, "phi_a": pt.a.2,
        "rb": pt.b.0, "theta_b": pt.b.1, "phi_b": pt.b.2,
    })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

pub fn green(cfg: &RunConfig) -> Result<Outcome> {
    let p = physical(cfg)?;
    if p.coulomb >= 0.0 {
        return Err(abc_core::Error::NoBoundStates { coulomb: p.coulomb }.into());
    }
    let t = truncation(cfg)?;
    let base = Point { energy: cfg.energy.unwrap_or(f64::NAN), a: (cfg.ra, cfg.theta_a, cfg.phi_a), b: (cfg.rb, cfg.theta_b, cfg.phi_b) };

    let Some((var, values)) = cfg.scan_values()? else {
        let e = cfg.energy.ok_or_else(|| UsageError("green needs --energy or a --scan".into()))?;
        let pt = Point { energy: e, ..base };
        let rec = merge(point_json(&pt), evaluate(&p, &t, pt)?);
        let rel = rec["rel_diff"].clone();
        return Ok(Outcome { results: vec![rec], diagnostics: json!({"units": units(), "max_rel_diff": rel}), passed: true });
    };
    if var != ScanVar::Energy && cfg.energy.is_none() {
        return Err(UsageError("a coordinate scan needs --energy".into()).into());
    }
    let points: Vec<Point> = values
        .iter()
        .map(|&v| {
            let mut pt = base;
            match var {
                ScanVar::Energy => pt.energy = v,
                ScanVar::Ra => pt.a.0 = v,
                ScanVar::ThetaA => pt.a.1 = v,
                ScanVar::PhiA => pt.a.2 = v,
                ScanVar::Rb => pt.b.0 = v,
                ScanVar::ThetaB => pt.b.1 = v,
                ScanVar::PhiB => pt.b.2 = v,
            }
            pt
        })
        .collect();
    // a failing point (e.g. on a pole) is recorded, not fatal
    let results: Vec<Value> = points
        .par_iter()
        .map(|pt| {
            let body = match evaluate(&p, &t, *pt) {
                Ok(v) => merge(v, json!({"error": null})),
                Err(e) => json!({
                    "q_integral": {"re": null, "im": null, "err_estimate": null},
                    "partial_wave": {"re": null, "im": null, "err_estimate": null},
                    "rel_diff": null, "magnitude": null, "error": e.to_string(),
                }),
            };
            merge(point_json(pt), body)
        })
        .collect();
    let max_rel = results.iter().filter_map(|r| r["rel_diff"].as_f64()).fold(0.0f64, f64::max);
    let failed = results.iter().filter(|r| !r["error"].is_null()).count();
    Ok(Outcome {
        results,
        diagnostics: json!({"units": units(), "points": points.len(), "failed_points": failed, "max_rel_diff": max_rel}),
        passed: true,
    })
}

struct CheckRecord {
    name: &'static str,
    residual: f64,
    tolerance: f64,
    detail: Value,
}

impl CheckRecord {
    fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }

    fn to_json(&self) -> Value {
        json!({
            "check": self.name,
            "pass": self.passed(),
            "residual": self.residual,
            "tolerance": self.tolerance,
            "detail": self.detail,
        })
    }
}

fn det4(a: [[f64; 4]; 4]) -> f64 {
    let mut m = a;
    let mut det = 1.0;
    for c in 0..4 {
        let piv = (c..4).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap_or(c);
        if m[piv][c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..4 {
            let f = m[r][c] / m[c][c];
            for k in c..4 {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

#[derive(Default)]
struct KsResiduals {
    norm: f64,
    metric: f64,
    jacobian_fd: f64,
    fourth_row: f64,
    oneform: f64,
    fibre: f64,
}

impl KsResiduals {
    fn max(self, o: KsResiduals) -> KsResiduals {
        KsResiduals {
            norm: self.norm.max(o.norm),
            metric: self.metric.max(o.metric),
            jacobian_fd: self.jacobian_fd.max(o.jacobian_fd),
            fourth_row: self.fourth_row.max(o.fourth_row),
            oneform: self.oneform.max(o.oneform),
            fibre: self.fibre.max(o.fibre),
        }
    }
}

fn ks_sample(seed: u64, index: u64) -> Result<KsResiduals> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let u = loop {
        let u = KsPoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if u.norm_sq() > 1e-2 {
            break u;
        }
    };
    let r = u.norm_sq();
    let du: [f64; 4] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let mut out = KsResiduals::default();

    let [x, y, z] = ks_map(u);
    out.norm = ((x * x + y * y + z * z).sqrt() - r).abs() / r;

    let d = ks_differential(u, du);
    let lhs: f64 = d.iter().map(|v| v * v).sum();
    let rhs = 4.0 * r * du.iter().map(|v| v * v).sum::<f64>();
    out.metric = (lhs - rhs).abs() / rhs;

    let a = ks_matrix(u);
    let v = u.to_array();
    let h = 1e-5;
    let mut m = [[0.0; 4]; 4];
    for j in 0..4 {
        let (mut up, mut dn) = (v, v);
        up[j] += h;
        dn[j] -= h;
        let (fu, fd) = (ks_map(KsPoint::from_array(up)), ks_map(KsPoint::from_array(dn)));
        for i in 0..3 {
            m[i][j] = (fu[i] - fd[i]) / (2.0 * h);
        }
        m[3][j] = 2.0 * a[3][j];
    }
    let j = ks_jacobian(u)?;
    out.jacobian_fd = (det4(m).abs() - j).abs() / j;

    out.fourth_row = (0..4).map(|k| a[3][k] * v[k]).sum::<f64>().abs() / r;

    let rho = (x * x + y * y).sqrt();
    if rho > 1e-3 * r {
        let strength = 0.7;
        let pulled = ab_oneform_pullback(u, du, strength)?;
        let direct = ab_oneform_cartesian(u, du, strength)?;
        let scale = strength * du.iter().map(|v| v.abs()).sum::<f64>() * r / rho;
        out.oneform = (pulled - direct).abs() / scale;
    }

    let p = SphericalPoint::new(rng.gen_range(0.01..20.0), rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI))?;
    let want = p.to_cartesian();
    let got = ks_map(spherical_to_ks(p, AuxAngle::new(rng.gen_range(0.0..AuxAngle::PERIOD))?));
    out.fibre = (0..3).map(|i| (got[i] - want[i]).abs() / p.r).fold(0.0, f64::max);
    Ok(out)
}

fn check_ks(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let res = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| ks_sample(cfg.seed, i))
        .try_reduce(KsResiduals::default, |a, b| Ok(a.max(b)))?;
    let samples = json!({"samples": cfg.samples});
    Ok(vec![
        CheckRecord { name: "ks.norm", residual: res.norm, tolerance: 1e-12, detail: samples.clone() },
        CheckRecord { name: "ks.metric", residual: res.metric, tolerance: 1e-12, detail: samples.clone() },
        CheckRecord { name: "ks.jacobian", residual: res.jacobian_fd, tolerance: 1e-6, detail: samples.clone() },
        CheckRecord { name: "ks.fourth-row", residual: res.fourth_row, tolerance: 1e-12, detail: samples.clone() },
        CheckRecord { name: "ks.one-form", residual: res.oneform, tolerance: 1e-12, detail: samples.clone() },
        CheckRecord { name: "ks.fibre", residual: res.fibre, tolerance: 1e-12, detail: samples },
    ])
}

fn check_legendre(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = vec![(1.0, 0.0, 0.0), (1.0, 0.0, 1.0)];
    while cases.len() < 20 {
        let mu: f64 = rng.gen_range(-1.5..1.5);
        cases.push((rng.gen_range(0.5 * mu.abs() + 0.2..3.0), mu, rng.gen_range(0.0..4.0)));
    }
    let mut worst: f64 = 0.0;
    for &(l, m, n) in &cases {
        let c = legendre_integral_identity_check(l, m, n).with_context(|| format!("lambda = {l}, mu = {m}, nu = {n}"))?;
        worst = worst.max(c.rel_err);
    }
    Ok(vec![CheckRecord { name: "legendre", residual: worst, tolerance: 1e-9, detail: json!({"cases": cases.len()}) }])
}

fn check_bessel(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let arg = rng.gen_range(0.5..10.0);
        let nu = RealOrder::new(rng.gen_range(0.0..3.0))?;
        let (ta, tb) = (rng.gen_range(0.1..PI - 0.1), rng.gen_range(0.1..PI - 0.1));
        worst = worst.max(bessel_product_identity_check(arg, nu, ta, tb, 30)?.rel_err);
    }
    Ok(vec![CheckRecord { name: "bessel", residual: worst, tolerance: 1e-8, detail: json!({"cases": 20, "n_max": 30}) }])
}

fn check_gamma_reduction(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let p = physical(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let t = TruncationSpec { m_max: 4, ..TruncationSpec::default() };
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let fe = FixedEnergy::new(&p, -rng.gen_range(0.05..1.0))?;
        let mut point = || -> Result<(SphericalPoint, AuxAngle)> {
            let s = SphericalPoint::new(rng.gen_range(0.2..4.0), rng.gen_range(0.1..PI - 0.1), rng.gen_range(0.0..2.0 * PI))?;
            Ok((s, AuxAngle::new(rng.gen_range(0.0..AuxAngle::PERIOD))?))
        };
        let pair = (point()?, point()?);
        worst = worst.max(oscillator_sum_reduction_check(&p, pair, &fe, &t)?.rel_err);
    }
    Ok(vec![CheckRecord { name: "gamma-reduction", residual: worst, tolerance: 1e-8, detail: json!({"configurations": 3, "m_max": 4}) }])
}

fn check_spectrum(cfg: &RunConfig) -> Result<(Vec<CheckRecord>, Vec<Value>)> {
    let p = physical(cfg)?;
    let qns: Vec<_> = enumerate_levels(&p, cfg.max_principal)?.into_iter().flat_map(|l| l.quantum_numbers).collect();
    let grid = RadialGrid::for_params(&p, cfg.max_principal, cfg.grid_points)?;
    let table = compare_spectrum(&p, &qns, &grid)?;
    let worst = table.iter().map(|c| c.rel_diff).fold(0.0, f64::max);
    let rows = table
        .iter()
        .map(|c| json!({"m": c.qn.m, "n": c.qn.n, "nprime": c.qn.nprime, "formula": c.formula, "oracle": c.oracle, "rel_diff": c.rel_diff}))
        .collect();
    let rec = CheckRecord { name: "spectrum", residual: worst, tolerance: 1e-4, detail: json!({"states": table.len(), "grid_points": cfg.grid_points}) };
    Ok((vec![rec], rows))
}

pub fn check(cfg: &RunConfig) -> Result<Outcome> {
    let kinds = match cfg.check {
        CheckKind::All => vec![CheckKind::Ks, CheckKind::Legendre, CheckKind::Bessel, CheckKind::GammaReduction, CheckKind::Spectrum],
        k => vec![k],
    };
    let mut records = Vec::new();
    let mut table = Vec::new();
    for k in kinds {
        match k {
            CheckKind::Ks => records.extend(check_ks(cfg)?),
            CheckKind::Legendre => records.extend(check_legendre(cfg)?),
            CheckKind::Bessel => records.extend(check_bessel(cfg)?),
            CheckKind::GammaReduction => records.extend(check_gamma_reduction(cfg)?),
            CheckKind::Spectrum => {
                let (r, rows) = check_spectrum(cfg)?;
                records.extend(r);
                table = rows;
            }
            CheckKind::All => unreachable!(),
        }
    }
    let passed = records.iter().all(|r| r.passed());
    let failed: Vec<&str> = records.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    let mut diagnostics = json!({"units": units(), "all_passed": passed, "failed": failed});
    if !table.is_empty() {
        diagnostics["spectrum_table"] = Value::Array(table);
    }
    Ok(Outcome { results: records.iter().map(CheckRecord::to_json).collect(), diagnostics, passed })
}
