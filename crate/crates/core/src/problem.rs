//! Problem instances and their flat key-value config format.
//!
//! A config file is plain text, one `key = value` per line, `#` comments.
//! Every physical and numerical parameter is explicit; result files embed
//! a canonical echo of the full config so any run can be reproduced from
//! its outputs alone.

use crate::error::{Error, Result};
use crate::exponents;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Radial bump `amplitude·(1 − r²/R²)₊^k`. Smoothness k ≥ 3 keeps the
/// data C² at the support edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpProfile {
    pub amplitude: f64,
    pub smoothness: u32,
}

impl BumpProfile {
    pub fn eval(&self, r: f64, support_radius: f64) -> f64 {
        let x = 1.0 - (r / support_radius) * (r / support_radius);
        if x <= 0.0 {
            0.0
        } else {
            self.amplitude * x.powi(self.smoothness as i32)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }
}

/// Discretization parameters for the radial solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    /// Radial step.
    pub dr: f64,
    /// Courant number; dt = cfl·dr.
    pub cfl: f64,
    /// End of the simulated time window.
    pub t_max: f64,
}

/// A full problem instance: equation parameters, initial data profiles,
/// grid, and blow-up detection threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub n: u32,
    pub mu: f64,
    pub p: f64,
    /// Initial-data support radius R ≥ 1.
    pub support_radius: f64,
    pub f: BumpProfile,
    pub g: BumpProfile,
    pub grid: GridParams,
    pub blowup_threshold: f64,
}

pub const DEFAULT_BLOWUP_THRESHOLD: f64 = 1e6;

impl ProblemSpec {
    /// Checks every structural hypothesis: n ≥ 2, μ > 0,
    /// 1 < p < p_S(n+μ), R ≥ 1, nonnegative data not both zero,
    /// smoothness ≥ 3, and sane grid parameters.
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!("need n >= 2, got {}", self.n)));
        }
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::InvalidArgument(format!("need mu > 0, got {}", self.mu)));
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(Error::InvalidArgument(format!("need p > 1, got {}", self.p)));
        }
        let ps = exponents::strauss_exponent(self.n as f64 + self.mu)?;
        if self.p >= ps {
            return Err(Error::InvalidArgument(format!(
                "need p < p_S(n+mu) = {ps:.6}, got p = {}",
                self.p
            )));
        }
        if !(self.support_radius >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "need support radius R >= 1, got {}",
                self.support_radius
            )));
        }
        if self.f.amplitude < 0.0 || self.g.amplitude < 0.0 {
            return Err(Error::InvalidArgument("data amplitudes must be nonnegative".into()));
        }
        if self.f.is_zero() && self.g.is_zero() {
            return Err(Error::InvalidArgument(
                "initial data must not vanish identically (f = g = 0)".into(),
            ));
        }
        if self.f.smoothness < 3 || self.g.smoothness < 3 {
            return Err(Error::InvalidArgument("bump smoothness must be >= 3".into()));
        }
        if !(self.grid.dr > 0.0) {
            return Err(Error::InvalidArgument(format!("need dr > 0, got {}", self.grid.dr)));
        }
        if !(self.grid.cfl > 0.0 && self.grid.cfl < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "need cfl in (0, 1), got {}",
                self.grid.cfl
            )));
        }
        if !(self.grid.t_max > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need t_max > 0, got {}",
                self.grid.t_max
            )));
        }
        if !(self.blowup_threshold >= 1e3) {
            return Err(Error::InvalidArgument(format!(
                "need blowup_threshold >= 1e3, got {}",
                self.blowup_threshold
            )));
        }
        Ok(())
    }

    /// Parses the flat key-value config format. All keys are required
    /// except `blowup_threshold` (defaults to 1e6); unknown keys are
    /// rejected rather than silently ignored.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected `key = value`, got `{raw}`",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if map.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(Error::Config(format!("duplicate key `{key}`")));
            }
        }
        let mut take = |key: &str| {
            map.remove(key).ok_or_else(|| Error::Config(format!("missing key `{key}`")))
        };
        let f64_of = |key: &str, v: String| {
            v.parse::<f64>().map_err(|_| Error::Config(format!("key `{key}`: bad number `{v}`")))
        };
        let u32_of = |key: &str, v: String| {
            v.parse::<u32>().map_err(|_| Error::Config(format!("key `{key}`: bad integer `{v}`")))
        };
        let spec = ProblemSpec {
            n: u32_of("n", take("n")?)?,
            mu: f64_of("mu", take("mu")?)?,
            p: f64_of("p", take("p")?)?,
            support_radius: f64_of("r_support", take("r_support")?)?,
            f: BumpProfile {
                amplitude: f64_of("f_amplitude", take("f_amplitude")?)?,
                smoothness: u32_of("f_smoothness", take("f_smoothness")?)?,
            },
            g: BumpProfile {
                amplitude: f64_of("g_amplitude", take("g_amplitude")?)?,
                smoothness: u32_of("g_smoothness", take("g_smoothness")?)?,
            },
            grid: GridParams {
                dr: f64_of("dr", take("dr")?)?,
                cfl: f64_of("cfl", take("cfl")?)?,
                t_max: f64_of("t_max", take("t_max")?)?,
            },
            blowup_threshold: match map.remove("blowup_threshold") {
                Some(v) => f64_of("blowup_threshold", v)?,
                None => DEFAULT_BLOWUP_THRESHOLD,
            },
        };
        if let Some(key) = map.keys().next() {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_config_file(path: &std::path::Path) -> Result<Self> {
        Self::from_config_str(&std::fs::read_to_string(path)?)
    }

    /// Canonical config echo: parseable by [`Self::from_config_str`],
    /// keys in fixed order, full float precision.
    pub fn config_echo(&self) -> String {
        format!(
            "n = {}\nmu = {}\np = {}\nr_support = {}\nf_amplitude = {}\nf_smoothness = {}\n\
             g_amplitude = {}\ng_smoothness = {}\ndr = {}\ncfl = {}\nt_max = {}\n\
             blowup_threshold = {}\n",
            self.n,
            fmt_f64(self.mu),
            fmt_f64(self.p),
            fmt_f64(self.support_radius),
            fmt_f64(self.f.amplitude),
            self.f.smoothness,
            fmt_f64(self.g.amplitude),
            self.g.smoothness,
            fmt_f64(self.grid.dr),
            fmt_f64(self.grid.cfl),
            fmt_f64(self.grid.t_max),
            fmt_f64(self.blowup_threshold),
        )
    }
}

/// Shortest round-trip float formatting (Rust's default `{}` for f64).
fn fmt_f64(x: f64) -> String {
    format!("{x}")
}
