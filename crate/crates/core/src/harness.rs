//! Experiment orchestration: ε-sweeps against the certificate, scaling
//! fits, bound-compliance flags, flat-file persistence, and plot
//! emission.
//!
//! Every result file embeds a canonical echo of the generating config as
//! `# key = value` comment lines, so a run can be reproduced from its
//! outputs alone. All writes are deterministic: rerunning a sweep from
//! its persisted config yields byte-identical files, at any job count.

use crate::certificate::{self, Certificate};
use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::solver::{self, EquationForm, SolveTrace, Termination};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// One ε of a sweep: the measured lifespan with its diagnostics and the
/// certified-bound compliance flags. `None` flags mean "inconclusive"
/// (no blow-up observed and the window too short to contradict the bound).
#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub eps: f64,
    pub t_num: Option<f64>,
    pub threshold_sensitivity: Option<f64>,
    pub dt_delta: Option<f64>,
    /// threshold_fn(ε): the exact two-branch certified bound.
    pub bound_threshold: f64,
    pub bound_ok: Option<bool>,
    /// C₄·ε^(−lifespan_exponent): the asymptotic form of the bound.
    pub c4_bound: f64,
    pub c4_ok: Option<bool>,
    /// Per-entry failure, recorded rather than fatal.
    pub error: Option<String>,
}

/// Ordinary least squares fit of log T against log ε.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

/// Aggregated sweep outcome.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub spec: ProblemSpec,
    pub certificate: Certificate,
    /// Sorted by descending ε.
    pub entries: Vec<SweepEntry>,
    pub fit: Option<FitResult>,
    /// −2p(p−1)/γ(p, n+μ), the certified exponent of the bound.
    pub predicted_slope: f64,
    pub status: String,
}

/// The CSV-persisted projection of a sweep (what `plot` consumes).
#[derive(Debug, Clone)]
pub struct SweepData {
    pub entries: Vec<SweepEntry>,
    pub t0: f64,
    pub c4: f64,
    pub lifespan_exponent: f64,
    pub config_echo: String,
}

impl SweepResult {
    pub fn data(&self) -> SweepData {
        SweepData {
            entries: self.entries.clone(),
            t0: self.certificate.t0,
            c4: self.certificate.c4,
            lifespan_exponent: self.certificate.lifespan_exponent,
            config_echo: self.spec.config_echo(),
        }
    }

    /// Strict monotonicity of the measured lifespans (smaller data lives
    /// longer), with a 5% allowance for discretization noise.
    pub fn lifespans_monotone(&self) -> bool {
        let measured: Vec<f64> = self.entries.iter().filter_map(|e| e.t_num).collect();
        measured.windows(2).all(|w| w[1] > w[0] * (1.0 - 0.05))
    }
}

/// OLS on (log₁₀ ε, log₁₀ T). At least three points required.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "scaling fit needs >= 3 points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(e, _)| e.log10()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, t)| t.log10()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all abscissae equal; cannot fit".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(FitResult { slope, intercept, r_squared, n_points: points.len() })
}

fn sweep_entry(spec: &ProblemSpec, cert: &Certificate, eps: f64) -> SweepEntry {
    let bound_threshold = cert.threshold(eps);
    let c4_bound = (cert.c4.ln() - cert.lifespan_exponent * eps.ln()).exp();
    match solver::solve(spec, eps, EquationForm::Original) {
        Ok(trace) => match trace.blowup {
            Some(rec) if !rec.instability => SweepEntry {
                eps,
                t_num: Some(rec.t_num),
                threshold_sensitivity: Some(rec.threshold_sensitivity),
                dt_delta: rec.dt_refinement_delta,
                bound_threshold,
                bound_ok: Some(rec.t_num <= bound_threshold),
                c4_bound,
                c4_ok: Some(rec.t_num <= c4_bound),
                error: None,
            },
            Some(rec) => SweepEntry {
                eps,
                t_num: Some(rec.t_num),
                threshold_sensitivity: None,
                dt_delta: None,
                bound_threshold,
                bound_ok: Some(rec.t_num <= bound_threshold),
                c4_bound,
                c4_ok: Some(rec.t_num <= c4_bound),
                error: Some("instability before threshold crossing".into()),
            },
            None => SweepEntry {
                eps,
                t_num: None,
                threshold_sensitivity: None,
                dt_delta: None,
                bound_threshold,
                // No blow-up observed: contradicts the bound only if the
                // simulated window already exceeds it.
                bound_ok: if spec.grid.t_max > bound_threshold { Some(false) } else { None },
                c4_bound,
                c4_ok: if spec.grid.t_max > c4_bound { Some(false) } else { None },
                error: None,
            },
        },
        Err(err) => SweepEntry {
            eps,
            t_num: None,
            threshold_sensitivity: None,
            dt_delta: None,
            bound_threshold,
            bound_ok: None,
            c4_bound,
            c4_ok: None,
            error: Some(err.to_string()),
        },
    }
}

/// Runs solve + blow-up detection for every ε (concurrently up to
/// `jobs`), aggregates deterministically (sorted by descending ε), and
/// fits the scaling law on entries with a detected blow-up and a
/// threshold sensitivity under 5%.
pub fn sweep(spec: &ProblemSpec, eps_list: &[f64], jobs: usize) -> Result<SweepResult> {
    spec.validate()?;
    if eps_list.is_empty() {
        return Err(Error::InvalidArgument("sweep: eps list must be non-empty".into()));
    }
    for (i, &e) in eps_list.iter().enumerate() {
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::InvalidArgument(format!("sweep: bad eps {e}")));
        }
        if eps_list[..i].contains(&e) {
            return Err(Error::InvalidArgument(format!("sweep: duplicate eps {e}")));
        }
    }
    if jobs < 1 {
        return Err(Error::InvalidArgument("sweep: jobs must be >= 1".into()));
    }
    let cert = certificate::compute_constants(spec)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let mut entries: Vec<SweepEntry> = pool.install(|| {
        use rayon::prelude::*;
        eps_list.par_iter().map(|&eps| sweep_entry(spec, &cert, eps)).collect()
    });
    entries.sort_by(|a, b| b.eps.partial_cmp(&a.eps).expect("eps validated finite"));

    let fit_points: Vec<(f64, f64)> = entries
        .iter()
        .filter_map(|e| {
            let t = e.t_num?;
            let sens = e.threshold_sensitivity?;
            (sens < 0.05 * t).then_some((e.eps, t))
        })
        .collect();
    let (fit, status) = match fit_scaling(&fit_points) {
        Ok(f) => (Some(f), "ok".to_string()),
        Err(e) => (None, format!("insufficient data for scaling fit: {e}")),
    };
    Ok(SweepResult {
        spec: spec.clone(),
        certificate: cert.clone(),
        entries,
        fit,
        predicted_slope: -cert.lifespan_exponent,
        status,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "na".into(), |x| format!("{x}"))
}

fn fmt_flag(v: Option<bool>) -> String {
    v.map_or_else(|| "na".into(), |b| b.to_string())
}

/// Writes the sweep CSV: config and certificate echo as `#` comments,
/// then the pinned columns
/// `eps,t_num,threshold_sensitivity,dt_delta,bound_threshold,bound_ok,c4_bound,c4_ok`.
pub fn write_sweep_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("# sidwave sweep\n# config:\n");
    for line in result.spec.config_echo().lines() {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "# cert_t0 = {}", result.certificate.t0);
    let _ = writeln!(out, "# cert_c4 = {}", result.certificate.c4);
    let _ = writeln!(out, "# cert_lifespan_exponent = {}", result.certificate.lifespan_exponent);
    out.push_str(
        "eps,t_num,threshold_sensitivity,dt_delta,bound_threshold,bound_ok,c4_bound,c4_ok\n",
    );
    for e in &result.entries {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            e.eps,
            fmt_opt(e.t_num),
            fmt_opt(e.threshold_sensitivity),
            fmt_opt(e.dt_delta),
            e.bound_threshold,
            fmt_flag(e.bound_ok),
            e.c4_bound,
            fmt_flag(e.c4_ok),
        );
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn parse_opt(v: &str, what: &str) -> Result<Option<f64>> {
    if v == "na" {
        return Ok(None);
    }
    v.parse::<f64>()
        .map(Some)
        .map_err(|_| Error::Config(format!("bad {what} value `{v}` in sweep csv")))
}

fn parse_flag(v: &str) -> Result<Option<bool>> {
    match v {
        "na" => Ok(None),
        "true" => Ok(Some(true)),
        "false" => Ok(Some(false)),
        other => Err(Error::Config(format!("bad flag `{other}` in sweep csv"))),
    }
}

/// Reads a sweep CSV back (comment echo plus rows).
pub fn read_sweep_csv(path: &Path) -> Result<SweepData> {
    let text = std::fs::read_to_string(path)?;
    let mut config_echo = String::new();
    let mut t0 = None;
    let mut c4 = None;
    let mut k = None;
    let mut entries = Vec::new();
    let mut header_seen = false;
    for line in text.lines() {
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some((key, value)) = comment.split_once('=') {
                let (key, value) = (key.trim(), value.trim());
                match key {
                    "cert_t0" => t0 = value.parse().ok(),
                    "cert_c4" => c4 = value.parse().ok(),
                    "cert_lifespan_exponent" => k = value.parse().ok(),
                    _ => {
                        let _ = writeln!(config_echo, "{key} = {value}");
                    }
                }
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            header_seen = true; // column header
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 8 {
            return Err(Error::Config(format!("sweep csv row has {} columns", cols.len())));
        }
        entries.push(SweepEntry {
            eps: cols[0]
                .parse()
                .map_err(|_| Error::Config(format!("bad eps `{}` in sweep csv", cols[0])))?,
            t_num: parse_opt(cols[1], "t_num")?,
            threshold_sensitivity: parse_opt(cols[2], "threshold_sensitivity")?,
            dt_delta: parse_opt(cols[3], "dt_delta")?,
            bound_threshold: cols[4]
                .parse()
                .map_err(|_| Error::Config("bad bound_threshold in sweep csv".into()))?,
            bound_ok: parse_flag(cols[5])?,
            c4_bound: cols[6]
                .parse()
                .map_err(|_| Error::Config("bad c4_bound in sweep csv".into()))?,
            c4_ok: parse_flag(cols[7])?,
            error: None,
        });
    }
    let (t0, c4, lifespan_exponent) = match (t0, c4, k) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return Err(Error::Config("sweep csv missing certificate echo comments".into())),
    };
    Ok(SweepData { entries, t0, c4, lifespan_exponent, config_echo })
}

/// Writes the trace CSV with the pinned column order
/// `t,G,G1,Lp,max_abs_u,key_residual,support_radius`, prefixed by the
/// config echo plus the run parameters (eps, form) as comments.
pub fn write_trace_csv(trace: &SolveTrace, spec: &ProblemSpec, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("# sidwave trace\n# config:\n");
    for line in spec.config_echo().lines() {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "# eps = {}", trace.eps);
    let _ = writeln!(out, "# form = {}", trace.form);
    let _ = writeln!(out, "# gprime0 = {}", trace.gprime0);
    out.push_str("t,G,G1,Lp,max_abs_u,key_residual,support_radius\n");
    for i in 0..trace.times.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            trace.times[i],
            trace.g[i],
            trace.g1[i],
            trace.lp[i],
            trace.max_abs_u[i],
            trace.key_residual[i],
            trace.support_radius[i],
        );
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// A trace read back from disk, with the generating spec from its echo.
pub struct PersistedTrace {
    pub trace: SolveTrace,
    pub spec: ProblemSpec,
}

/// Parses a trace CSV written by [`write_trace_csv`].
pub fn read_trace_csv(path: &Path) -> Result<PersistedTrace> {
    let text = std::fs::read_to_string(path)?;
    let mut config_lines = String::new();
    let mut eps = None;
    let mut form = None;
    let mut gprime0 = None;
    let mut header_seen = false;
    let mut rows: Vec<[f64; 7]> = Vec::new();
    for line in text.lines() {
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.trim().split_once('=') {
                let (key, value) = (key.trim(), value.trim());
                match key {
                    "eps" => eps = value.parse::<f64>().ok(),
                    "form" => form = value.parse::<EquationForm>().ok(),
                    "gprime0" => gprime0 = value.parse::<f64>().ok(),
                    _ => {
                        let _ = writeln!(config_lines, "{key} = {value}");
                    }
                }
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            header_seen = true;
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 7 {
            return Err(Error::Config(format!("trace csv row has {} columns", cols.len())));
        }
        let mut row = [0.0; 7];
        for (slot, col) in row.iter_mut().zip(&cols) {
            *slot = col
                .parse()
                .map_err(|_| Error::Config(format!("bad number `{col}` in trace csv")))?;
        }
        rows.push(row);
    }
    let spec = ProblemSpec::from_config_str(&config_lines)?;
    let eps = eps.ok_or_else(|| Error::Config("trace csv missing `# eps`".into()))?;
    let form = form.ok_or_else(|| Error::Config("trace csv missing `# form`".into()))?;
    let gprime0 = gprime0.ok_or_else(|| Error::Config("trace csv missing `# gprime0`".into()))?;
    let grid = solver::RadialGrid::from_spec(&spec);
    let trace = SolveTrace {
        eps,
        form,
        dr: grid.dr,
        dt: grid.dt,
        times: rows.iter().map(|r| r[0]).collect(),
        g: rows.iter().map(|r| r[1]).collect(),
        g1: rows.iter().map(|r| r[2]).collect(),
        lp: rows.iter().map(|r| r[3]).collect(),
        max_abs_u: rows.iter().map(|r| r[4]).collect(),
        key_residual: rows.iter().map(|r| r[5]).collect(),
        support_radius: rows.iter().map(|r| r[6]).collect(),
        gprime0,
        blowup: None,
        terminated: Termination::ReachedTMax,
        snapshots: Vec::new(),
    };
    Ok(PersistedTrace { trace, spec })
}

/// Blow-up verdict sidecar written next to a trace CSV.
#[derive(Debug, Serialize)]
pub struct TraceMeta {
    pub t_num: Option<f64>,
    pub threshold: f64,
    pub threshold_sensitivity: Option<f64>,
    pub dt_refinement_delta: Option<f64>,
    pub terminated_reason: Termination,
}

impl TraceMeta {
    pub fn from_trace(trace: &SolveTrace, spec: &ProblemSpec) -> TraceMeta {
        TraceMeta {
            t_num: trace.blowup.map(|b| b.t_num),
            threshold: spec.blowup_threshold,
            threshold_sensitivity: trace.blowup.map(|b| b.threshold_sensitivity),
            dt_refinement_delta: trace.blowup.and_then(|b| b.dt_refinement_delta),
            terminated_reason: trace.terminated,
        }
    }
}

/// Emits (a) the log-log data file, (b) a self-contained plot script
/// drawing measured points, the fitted line, and the certified bound
/// curve, and (c) a text summary comparing fitted and predicted slopes.
/// With no usable entries only the summary is written.
pub fn emit_plots(data: &SweepData, outdir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(outdir)?;
    let valid: Vec<(f64, f64)> =
        data.entries.iter().filter_map(|e| e.t_num.map(|t| (e.eps, t))).collect();
    let fit = fit_scaling(&valid).ok();
    let predicted = -data.lifespan_exponent;

    let mut summary = String::new();
    summary.push_str("sweep scaling summary\n");
    let _ = writeln!(
        summary,
        "entries: {} ({} with measured blow-up)",
        data.entries.len(),
        valid.len()
    );
    let _ = writeln!(summary, "predicted slope (certified bound): {predicted:.6}");
    match &fit {
        Some(f) => {
            let _ = writeln!(
                summary,
                "fitted slope: {:.6} (intercept {:.6}, r^2 {:.6}, {} points)",
                f.slope, f.intercept, f.r_squared, f.n_points
            );
            let _ = writeln!(
                summary,
                "note: the certified exponent is an upper-bound exponent; slope agreement is informational"
            );
        }
        None => {
            let _ = writeln!(summary, "fitted slope: insufficient data (< 3 measured blow-ups)");
        }
    }
    summary.push('\n');
    summary.push_str("eps,t_num,bound_threshold,bound_ok\n");
    for e in &data.entries {
        let _ = writeln!(
            summary,
            "{},{},{},{}",
            e.eps,
            fmt_opt(e.t_num),
            e.bound_threshold,
            fmt_flag(e.bound_ok)
        );
    }
    let summary_path = outdir.join("summary.txt");
    std::fs::write(&summary_path, summary)?;
    let mut written = vec![summary_path];

    if valid.is_empty() {
        return Ok(written);
    }

    let mut datafile = String::from("log10_eps,log10_t_num\n");
    for (eps, t) in &valid {
        let _ = writeln!(datafile, "{},{}", eps.log10(), t.log10());
    }
    let data_path = outdir.join("scaling_data.csv");
    std::fs::write(&data_path, datafile)?;
    written.push(data_path);

    let eps_lit: Vec<String> = valid.iter().map(|(e, _)| format!("{e}")).collect();
    let t_lit: Vec<String> = valid.iter().map(|(_, t)| format!("{t}")).collect();
    let (slope, intercept) = fit.map_or((f64::NAN, f64::NAN), |f| (f.slope, f.intercept));
    let script = format!(
        r#"#!/usr/bin/env python3
"""Render a lifespan sweep: measured points, fitted power law, certified bound."""
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

eps = np.array([{eps}])
t_num = np.array([{t}])
slope = {slope}
intercept = {intercept}
t0 = {t0}
c4 = {c4}
k = {k}

fig, ax = plt.subplots(figsize=(6.4, 4.8))
ax.loglog(eps, t_num, "o", label="measured T_num")
if np.isfinite(slope):
    grid = np.geomspace(eps.min(), eps.max(), 64)
    ax.loglog(grid, 10.0 ** (intercept + slope * np.log10(grid)), "-",
              label=f"fit: slope {{slope:.3f}}")
grid = np.geomspace(eps.min(), eps.max(), 64)
bound = np.maximum(t0 + c4 * grid ** (-k), 2.0 * t0 + 1.0)
ax.loglog(grid, bound, "--", label=f"certified bound (exponent -{{k:.3f}})")
ax.set_xlabel("eps")
ax.set_ylabel("lifespan")
ax.legend()
ax.grid(True, which="both", alpha=0.3)
fig.tight_layout()
fig.savefig("sweep.png", dpi=150)
print("wrote sweep.png")
"#,
        eps = eps_lit.join(", "),
        t = t_lit.join(", "),
        slope = slope,
        intercept = intercept,
        t0 = data.t0,
        c4 = data.c4,
        k = data.lifespan_exponent,
    );
    let script_path = outdir.join("plot_sweep.py");
    std::fs::write(&script_path, script)?;
    written.push(script_path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{BumpProfile, GridParams};

    fn tiny_spec() -> ProblemSpec {
        ProblemSpec {
            n: 3,
            mu: 2.0,
            p: 1.5,
            support_radius: 1.0,
            f: BumpProfile { amplitude: 1.0, smoothness: 3 },
            g: BumpProfile { amplitude: 1.0, smoothness: 3 },
            grid: GridParams { dr: 1.0 / 32.0, cfl: 0.5, t_max: 2.0 },
            blowup_threshold: 1e6,
        }
    }

    #[test]
    fn fit_recovers_exact_power_law() {
        let pts: Vec<(f64, f64)> =
            (0..6).map(|i| 0.8 * 0.7f64.powi(i)).map(|e| (e, e.powf(-0.75))).collect();
        let fit = fit_scaling(&pts).unwrap();
        assert!((fit.slope + 0.75).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_tolerates_multiplicative_noise() {
        // 1% noise from a fixed LCG; the slope stays within ±0.05.
        let mut state: u64 = 99;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let pts: Vec<(f64, f64)> = (0..8)
            .map(|i| 0.9 * 0.7f64.powi(i))
            .map(|e| (e, e.powf(-0.75) * (1.0 + 0.01 * (2.0 * next() - 1.0))))
            .collect();
        let fit = fit_scaling(&pts).unwrap();
        assert!((fit.slope + 0.75).abs() < 0.05, "slope {}", fit.slope);
    }

    #[test]
    fn fit_on_constant_series_is_flat() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (0.5f64.powi(i), 7.0)).collect();
        let fit = fit_scaling(&pts).unwrap();
        assert!(fit.slope.abs() < 1e-12, "slope {}", fit.slope);
    }

    #[test]
    fn fit_requires_three_points() {
        assert!(fit_scaling(&[(1.0, 2.0), (0.5, 3.0)]).is_err());
    }

    #[test]
    fn degenerate_sweep_reports_insufficient_data() {
        // t_max far too small for any blow-up at this ε.
        let result = sweep(&tiny_spec(), &[1.0], 1).unwrap();
        assert!(result.fit.is_none());
        assert!(result.status.contains("insufficient"));
        let e = &result.entries[0];
        assert!(e.t_num.is_none());
        // Window shorter than the certified bound: inconclusive, not false.
        assert_eq!(e.bound_ok, None);
    }

    #[test]
    fn sweep_rejects_bad_input() {
        assert!(sweep(&tiny_spec(), &[], 1).is_err());
        assert!(sweep(&tiny_spec(), &[1.0, 1.0], 1).is_err());
        assert!(sweep(&tiny_spec(), &[1.0, -2.0], 1).is_err());
        assert!(sweep(&tiny_spec(), &[1.0], 0).is_err());
    }

    #[test]
    fn sweep_csv_roundtrip_and_determinism() {
        let dir = tempfile::tempdir().unwrap();
        let result = sweep(&tiny_spec(), &[2.0, 1.0, 4.0], 2).unwrap();
        // Sorted by descending eps.
        let eps: Vec<f64> = result.entries.iter().map(|e| e.eps).collect();
        assert_eq!(eps, vec![4.0, 2.0, 1.0]);
        let path = dir.path().join("sweep.csv");
        write_sweep_csv(&result, &path).unwrap();
        let parsed = read_sweep_csv(&path).unwrap();
        assert_eq!(parsed.entries.len(), 3);
        assert_eq!(parsed.t0, result.certificate.t0);
        let spec2 = ProblemSpec::from_config_str(&parsed.config_echo).unwrap();
        assert_eq!(spec2, result.spec);
        // Determinism across job counts: byte-identical files.
        let result8 = sweep(&tiny_spec(), &[2.0, 1.0, 4.0], 8).unwrap();
        let path8 = dir.path().join("sweep8.csv");
        write_sweep_csv(&result8, &path8).unwrap();
        assert_eq!(
            std::fs::read(&path).unwrap(),
            std::fs::read(&path8).unwrap(),
            "sweep output differs between jobs=2 and jobs=8"
        );
    }

    #[test]
    fn trace_csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let spec = tiny_spec();
        let trace =
            solver::solve_with_options(&spec, 0.5, EquationForm::Original, &Default::default())
                .unwrap();
        let path = dir.path().join("trace.csv");
        write_trace_csv(&trace, &spec, &path).unwrap();
        let back = read_trace_csv(&path).unwrap();
        assert_eq!(back.spec, spec);
        assert_eq!(back.trace.eps, 0.5);
        assert_eq!(back.trace.form, EquationForm::Original);
        assert_eq!(back.trace.times, trace.times);
        assert_eq!(back.trace.g, trace.g);
        assert_eq!(back.trace.g1, trace.g1);
        assert_eq!(back.trace.gprime0, trace.gprime0);
    }

    #[test]
    fn plots_empty_sweep_summary_only() {
        let dir = tempfile::tempdir().unwrap();
        let result = sweep(&tiny_spec(), &[1.0], 1).unwrap();
        let files = emit_plots(&result.data(), dir.path()).unwrap();
        assert_eq!(files.len(), 1);
        assert!(files[0].ends_with("summary.txt"));
    }

    #[test]
    fn plots_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        // Synthetic sweep data with measured lifespans.
        let mk_entry = |eps: f64, t: f64| SweepEntry {
            eps,
            t_num: Some(t),
            threshold_sensitivity: Some(0.01 * t),
            dt_delta: Some(0.005 * t),
            bound_threshold: 1e8,
            bound_ok: Some(true),
            c4_bound: 1e8,
            c4_ok: Some(true),
            error: None,
        };
        let data = SweepData {
            entries: vec![mk_entry(0.8, 10.0), mk_entry(0.56, 13.0), mk_entry(0.392, 17.3)],
            t0: 9.5,
            c4: 1.6e8,
            lifespan_exponent: 0.75,
            config_echo: tiny_spec().config_echo(),
        };
        let out1 = dir.path().join("a");
        let out2 = dir.path().join("b");
        let files1 = emit_plots(&data, &out1).unwrap();
        let files2 = emit_plots(&data, &out2).unwrap();
        assert_eq!(files1.len(), 3);
        for (f1, f2) in files1.iter().zip(&files2) {
            assert_eq!(std::fs::read(f1).unwrap(), std::fs::read(f2).unwrap());
        }
        // The bound curve dominates every measured point.
        for e in &data.entries {
            assert!(e.t_num.unwrap() <= e.bound_threshold);
        }
    }
}
