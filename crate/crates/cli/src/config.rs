//! Run configuration: command-line flags layered over an optional config
//! file (flat `key = value` lines, or the JSON header of an earlier run),
//! then defaults.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Ks,
    Legendre,
    Bessel,
    GammaReduction,
    Spectrum,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanVar {
    Energy,
    Ra,
    ThetaA,
    PhiA,
    Rb,
    ThetaB,
    PhiB,
}

/// Every option, all optional; shared by the flags and the config file.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    /// Read options from a file; flags given on the command line win
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Particle mass M
    #[arg(long, allow_negative_numbers = true)]
    pub mass: Option<f64>,
    /// Coulomb strength xi (negative = attractive)
    #[arg(long, allow_negative_numbers = true)]
    pub coulomb: Option<f64>,
    /// Flux alpha in units of the flux quantum
    #[arg(long, allow_negative_numbers = true)]
    pub flux: Option<f64>,

    /// Half-width of the m window around -round(alpha)
    #[arg(long)]
    pub m_max: Option<u32>,
    /// Highest n in the partial-wave sum
    #[arg(long)]
    pub n_max: Option<u32>,
    #[arg(long)]
    pub quad_rel_tol: Option<f64>,

    /// Energy (must be negative)
    #[arg(long, allow_negative_numbers = true)]
    pub energy: Option<f64>,
    #[arg(long)]
    pub ra: Option<f64>,
    #[arg(long)]
    pub theta_a: Option<f64>,
    #[arg(long)]
    pub phi_a: Option<f64>,
    #[arg(long)]
    pub rb: Option<f64>,
    #[arg(long)]
    pub theta_b: Option<f64>,
    #[arg(long)]
    pub phi_b: Option<f64>,

    /// Scan one variable instead of evaluating a single point
    #[arg(long, value_enum)]
    pub scan: Option<ScanVar>,
    #[arg(long, allow_negative_numbers = true)]
    pub scan_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub scan_max: Option<f64>,
    #[arg(long)]
    pub scan_steps: Option<usize>,

    /// Largest principal number listed or compared
    #[arg(long)]
    pub max_principal: Option<f64>,
    /// Radial grid points for the finite-difference oracle
    #[arg(long)]
    pub grid_points: Option<usize>,

    /// Which identity check to run
    #[arg(long, value_enum)]
    pub check: Option<CheckKind>,
    /// Random samples for the KS battery
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

macro_rules! layer {
    ($hi:expr, $lo:expr; $($f:ident),*) => {
        $( if $hi.$f.is_none() { $hi.$f = $lo.$f.clone(); } )*
    };
}

impl Settings {
    /// Fill every unset field from `lower`.
    fn layered_over(mut self, lower: Settings) -> Settings {
        layer!(self, lower; mass, coulomb, flux, m_max, n_max, quad_rel_tol, energy, ra, theta_a, phi_a, rb,
            theta_b, phi_b, scan, scan_min, scan_max, scan_steps, max_principal, grid_points, check, samples,
            seed, format, out);
        self
    }

    /// Flags over the config file (if any) over defaults.
    pub fn resolve(self) -> Result<RunConfig> {
        let merged = match &self.config {
            Some(path) => {
                let file = load_file(path)?;
                self.layered_over(file)
            }
            None => self,
        };
        Ok(RunConfig::from_settings(merged))
    }
}

/// A configuration error, reported with exit status 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn scalar(text: &str) -> Value {
    if let Ok(i) = text.parse::<i64>() {
        return Value::from(i);
    }
    if let Ok(x) = text.parse::<f64>() {
        if let Some(n) = serde_json::Number::from_f64(x) {
            return Value::Number(n);
        }
    }
    Value::String(text.to_string())
}

/// Parse `key = value` lines (blank lines and `#` comments ignored); keys
/// may use `-` or `_`.
pub fn parse_key_values(text: &str) -> Result<Settings> {
    let mut map = Map::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(usage(format!("config line {}: expected key = value, got {raw:?}", lineno + 1)));
        };
        let key = k.trim().replace('_', "-");
        if map.insert(key.clone(), scalar(v.trim())).is_some() {
            return Err(usage(format!("config line {}: duplicate key {key}", lineno + 1)));
        }
    }
    serde_json::from_value(Value::Object(map)).map_err(|e| usage(format!("config: {e}")))
}

fn load_file(path: &Path) -> Result<Settings> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
        // accept either a bare settings object or a full output document
        let obj = match v.get("config") {
            Some(c) => c.clone(),
            None => v,
        };
        return serde_json::from_value(obj).map_err(|e| usage(format!("config {}: {e}", path.display())));
    }
    parse_key_values(&text).map_err(|e| usage(format!("{} ({})", e, path.display())))
}

/// Fully resolved configuration, embedded in every output document.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunConfig {
    pub mass: f64,
    pub coulomb: f64,
    pub flux: f64,
    pub m_max: u32,
    pub n_max: u32,
    pub quad_rel_tol: f64,
    pub energy: Option<f64>,
    pub ra: f64,
    pub theta_a: f64,
    pub phi_a: f64,
    pub rb: f64,
    pub theta_b: f64,
    pub phi_b: f64,
    pub scan: Option<ScanVar>,
    pub scan_min: Option<f64>,
    pub scan_max: Option<f64>,
    pub scan_steps: usize,
    pub max_principal: f64,
    pub grid_points: usize,
    pub check: CheckKind,
    pub samples: usize,
    pub seed: u64,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn from_settings(s: Settings) -> RunConfig {
        RunConfig {
            mass: s.mass.unwrap_or(1.0),
            coulomb: s.coulomb.unwrap_or(-1.0),
            flux: s.flux.unwrap_or(0.0),
            m_max: s.m_max.unwrap_or(12),
            n_max: s.n_max.unwrap_or(40),
            quad_rel_tol: s.quad_rel_tol.unwrap_or(1e-10),
            energy: s.energy,
            ra: s.ra.unwrap_or(1.0),
            theta_a: s.theta_a.unwrap_or(0.9),
            phi_a: s.phi_a.unwrap_or(0.2),
            rb: s.rb.unwrap_or(2.0),
            theta_b: s.theta_b.unwrap_or(2.0),
            phi_b: s.phi_b.unwrap_or(1.1),
            scan: s.scan,
            scan_min: s.scan_min,
            scan_max: s.scan_max,
            scan_steps: s.scan_steps.unwrap_or(41),
            max_principal: s.max_principal.unwrap_or(3.5),
            grid_points: s.grid_points.unwrap_or(1500),
            check: s.check.unwrap_or(CheckKind::All),
            samples: s.samples.unwrap_or(10_000),
            seed: s.seed.unwrap_or(1),
            format: s.format.unwrap_or(Format::Json),
            out: s.out,
        }
    }

    /// The `scan_*` range as grid values, or `None` for a single point.
    pub fn scan_values(&self) -> Result<Option<(ScanVar, Vec<f64>)>> {
        let Some(var) = self.scan else { return Ok(None) };
        let (Some(lo), Some(hi)) = (self.scan_min, self.scan_max) else {
            bail!(usage("--scan needs --scan-min and --scan-max"));
        };
        if !(lo < hi) {
            bail!(usage(format!("scan range must satisfy scan-min < scan-max, got [{lo}, {hi}]")));
        }
        if self.scan_steps < 2 {
            bail!(usage("scan-steps must be at least 2"));
        }
        let n = self.scan_steps;
        Ok(Some((var, (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())))
    }
}
