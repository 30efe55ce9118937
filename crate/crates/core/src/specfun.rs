//! Special functions for the test-function machinery.
//!
//! Everything here is evaluated from integral representations by adaptive
//! quadrature, in log-domain where the exponential scales would otherwise
//! underflow or overflow:
//!
//! - `K_ν(t) = ∫₀^∞ exp(−t·cosh z)·cosh(νz) dz`, the modified Bessel
//!   function of the second kind,
//! - `λ(t) = (1+t)^((μ+1)/2)·K_((μ−1)/2)(1+t)`, the temporal weight,
//! - `φ(x) = ∫_{S^{n−1}} e^{x·ω} dω`, the radial eigenfunction of Δφ = φ,
//! - `ψ(t,x) = λ(t)·φ(x)`, the composite test function.
//!
//! `λ'` is computed through the Bessel derivative identity rather than by
//! differencing: the cancellation `μλ(0) − λ'(0) = K_((μ+1)/2)(1)` must
//! come out exact.

use crate::error::{Error, Result};
use crate::quad::{self, QuadResult};
use std::f64::consts::PI;

/// Relative quadrature target for special-function evaluation. Tighter
/// than the crate-level 1e-10 contract so that finite differences of
/// these values stay usable in identity checks.
const SF_REL_TOL: f64 = 1e-12;
const SF_ABS_TOL: f64 = 1e-300;

/// Tail cutoff: the Bessel integrand is truncated once the exponent has
/// dropped 45 below its peak scale (tail mass < e^-45 of the scale).
const TAIL_EXPONENT: f64 = 45.0;

/// One K_ν(t) evaluation with its accuracy estimate.
#[derive(Debug, Clone, Copy)]
pub struct BesselEval {
    pub nu: f64,
    pub t: f64,
    pub value: f64,
    pub rel_err_estimate: f64,
}

/// Γ(k/2) for positive half-integer arguments, by exact recursion from
/// Γ(1/2) = √π and Γ(1) = 1.
fn gamma_half_integer(num_halves: u32) -> f64 {
    assert!(num_halves >= 1);
    let mut value = if num_halves % 2 == 1 { PI.sqrt() } else { 1.0 };
    let mut k = if num_halves % 2 == 1 { 1 } else { 2 };
    while k < num_halves {
        value *= k as f64 / 2.0;
        k += 2;
    }
    value
}

/// Surface measure of the unit sphere S^(d-1) in R^d: 2·π^(d/2)/Γ(d/2).
pub fn sphere_surface(d: u32) -> f64 {
    assert!(d >= 1);
    2.0 * PI.powf(d as f64 / 2.0) / gamma_half_integer(d)
}

/// Volume of the unit ball in R^n: π^(n/2)/Γ(n/2 + 1).
pub fn unit_ball_volume(n: u32) -> f64 {
    assert!(n >= 1);
    PI.powf(n as f64 / 2.0) / gamma_half_integer(n + 2)
}

/// log cosh x, stable for large |x|.
#[inline]
fn log_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// cosh z − 1 without cancellation near z = 0.
#[inline]
fn cosh_m1(z: f64) -> f64 {
    let s = (0.5 * z).sinh();
    2.0 * s * s
}

/// Truncation point Z with t·(cosh Z − 1) − |ν|·Z ≥ tail exponent.
fn bessel_cutoff(nu: f64, t: f64) -> f64 {
    let nu = nu.abs();
    let mut z = (1.0 + TAIL_EXPONENT / t).acosh().max(1.0);
    for _ in 0..64 {
        let z_next = (1.0 + (TAIL_EXPONENT + nu * z) / t).acosh();
        if (z_next - z).abs() < 1e-9 {
            z = z_next;
            break;
        }
        z = z_next;
    }
    z + 0.25
}

fn check_bessel_args(nu: f64, t: f64) -> Result<()> {
    if !nu.is_finite() || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("bessel_k(nu={nu}, t={t}): non-finite")));
    }
    if t <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "bessel_k: argument t must be positive (the defining integral diverges), got {t}"
        )));
    }
    Ok(())
}

fn bessel_quad(nu: f64, t: f64) -> Result<QuadResult> {
    check_bessel_args(nu, t)?;
    let z_max = bessel_cutoff(nu, t);
    // Scaled integrand e^t · e^{-t cosh z} cosh(νz); the e^{-t} factor is
    // carried separately in log-domain.
    let g = |z: f64| (-t * cosh_m1(z) + log_cosh(nu * z)).exp();
    let r = quad::adaptive_simpson(g, 0.0, z_max, SF_ABS_TOL, SF_REL_TOL);
    if !r.value.is_finite() || r.value <= 0.0 {
        return Err(Error::Accuracy(format!(
            "bessel_k(nu={nu}, t={t}): scaled integral not representable"
        )));
    }
    Ok(r)
}

/// ln K_ν(t); valid even where K itself underflows (large t).
pub fn log_bessel_k(nu: f64, t: f64) -> Result<f64> {
    Ok(-t + bessel_quad(nu, t)?.value.ln())
}

/// K_ν(t). Underflows to 0 for t beyond roughly 700; use
/// [`log_bessel_k`] inside ratios at large arguments.
pub fn bessel_k(nu: f64, t: f64) -> Result<f64> {
    Ok((log_bessel_k(nu, t)?).exp())
}

/// K_ν(t) with an accuracy estimate (quadrature plus truncated tail).
pub fn bessel_k_eval(nu: f64, t: f64) -> Result<BesselEval> {
    let q = bessel_quad(nu, t)?;
    let value = (q.value.ln() - t).exp();
    let rel = q.rel_err() + (-TAIL_EXPONENT).exp();
    if !q.converged {
        return Err(Error::Accuracy(format!(
            "bessel_k(nu={nu}, t={t}): quadrature hit depth cap, rel err ~ {rel:.2e}"
        )));
    }
    Ok(BesselEval { nu, t, value, rel_err_estimate: rel })
}

/// Residuals of the centered difference dK_ν/dt against the two
/// derivative identities
/// `K'_ν = −K_(ν+1) + (ν/t)·K_ν` and `K'_ν = −(K_(ν+1) + K_(ν−1))/2`.
/// Both are O(h²).
pub fn bessel_k_derivative_residuals(nu: f64, t: f64, h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0 && t > h) {
        return Err(Error::InvalidArgument(format!(
            "bessel_k_derivative_residuals: need t > h > 0, got t={t}, h={h}"
        )));
    }
    let centered = (bessel_k(nu, t + h)? - bessel_k(nu, t - h)?) / (2.0 * h);
    let k_nu = bessel_k(nu, t)?;
    let k_up = bessel_k(nu + 1.0, t)?;
    let k_down = bessel_k(nu - 1.0, t)?;
    let id_recurrence = -k_up + nu / t * k_nu;
    let id_mean = -0.5 * (k_up + k_down);
    Ok(((centered - id_recurrence).abs(), (centered - id_mean).abs()))
}

fn check_mu_t(mu: f64, t: f64) -> Result<()> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidArgument(format!("mu must be positive, got {mu}")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t must be nonnegative, got {t}")));
    }
    Ok(())
}

/// ln λ(t) = (μ+1)/2·ln(1+t) + ln K_((μ−1)/2)(1+t).
pub fn log_lambda(mu: f64, t: f64) -> Result<f64> {
    check_mu_t(mu, t)?;
    Ok(0.5 * (mu + 1.0) * (1.0 + t).ln() + log_bessel_k(0.5 * (mu - 1.0), 1.0 + t)?)
}

/// The temporal weight λ(t) = (1+t)^((μ+1)/2)·K_((μ−1)/2)(1+t).
/// Decays like (1+t)^(μ/2)·e^−(1+t); λ(0) = K_((μ−1)/2)(1).
pub fn lambda(mu: f64, t: f64) -> Result<f64> {
    Ok(log_lambda(mu, t)?.exp())
}

/// λ'(t) through the derivative identity
/// `λ' = μ(1+t)^((μ−1)/2)·K_((μ−1)/2)(1+t) − (1+t)^((μ+1)/2)·K_((μ+1)/2)(1+t)`,
/// never by numerical differentiation.
pub fn lambda_prime(mu: f64, t: f64) -> Result<f64> {
    check_mu_t(mu, t)?;
    let x = 1.0 + t;
    let term1 = mu * x.powf(0.5 * (mu - 1.0)) * bessel_k(0.5 * (mu - 1.0), x)?;
    let term2 = x.powf(0.5 * (mu + 1.0)) * bessel_k(0.5 * (mu + 1.0), x)?;
    Ok(term1 - term2)
}

fn check_phi_args(n: u32, r: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("phi_radial: need n >= 2, got {n}")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("phi_radial: need r >= 0, got {r}")));
    }
    Ok(())
}

/// Tail cutoff for the φ integrand (relative tail below e^-52 of scale).
const PHI_TAIL_EXPONENT: f64 = 52.0;

/// ln φ(r), stable for large r (φ grows like r^(−(n−1)/2)·e^r).
///
/// φ(r) = |S^(n−2)|·∫₀^π e^(r·cosθ)·sin^(n−2)θ dθ; the e^r peak factor is
/// split off so the quadrature only ever sees values in [0, 1]. For large
/// r the integrand is a peak of width ~1/√r at θ = 0, so the integration
/// variable is rescaled to θ·√r and the negligible tail dropped;
/// otherwise the quadrature cost would grow with r.
pub fn log_phi_radial(n: u32, r: f64) -> Result<f64> {
    log_phi_radial_impl(n, r, SF_REL_TOL)
}

fn log_phi_radial_impl(n: u32, r: f64, rel_tol: f64) -> Result<f64> {
    check_phi_args(n, r)?;
    let m = (n - 2) as i32;
    let surf = sphere_surface(n - 1);
    // Scaled integrand e^{-r(1-cosθ)}·sin^m θ with 1 − cosθ = 2 sin²(θ/2).
    let g = |theta: f64| {
        let s = theta.sin();
        let pow = if m == 0 { 1.0 } else { s.powi(m) };
        let half = (0.5 * theta).sin();
        (-r * 2.0 * half * half).exp() * pow
    };
    let log_integral = if r <= PHI_TAIL_EXPONENT / 1.8 {
        let q = quad::adaptive_simpson(g, 0.0, PI, SF_ABS_TOL, rel_tol);
        if !(q.value > 0.0) || !q.value.is_finite() {
            return Err(Error::Accuracy(format!("phi_radial(n={n}, r={r}): integral degenerate")));
        }
        q.value.ln()
    } else {
        let sqrt_r = r.sqrt();
        let theta_hi = (1.0 - PHI_TAIL_EXPONENT / r).acos();
        let q = quad::adaptive_simpson(
            |s| g(s / sqrt_r),
            0.0,
            theta_hi * sqrt_r,
            SF_ABS_TOL,
            rel_tol,
        );
        if !(q.value > 0.0) || !q.value.is_finite() {
            return Err(Error::Accuracy(format!("phi_radial(n={n}, r={r}): integral degenerate")));
        }
        q.value.ln() - 0.5 * r.ln()
    };
    Ok(r + log_integral + surf.ln())
}

/// Radial profile of φ(x) = ∫_{S^(n−1)} e^(x·ω) dω at |x| = r.
/// Positive and strictly increasing in r; φ(0) = |S^(n−1)|.
/// Overflows for r beyond roughly 700; use [`log_phi_radial`] there.
pub fn phi_radial(n: u32, r: f64) -> Result<f64> {
    Ok(log_phi_radial(n, r)?.exp())
}

/// Dense-grid cubic interpolant of `ln φ(r)` on `[0, r_max]`.
///
/// φ enters integrals whose quadratures would otherwise re-evaluate the
/// sphere integral at every node; `ln φ` is smooth with O(1) derivatives,
/// so a uniform table with four-point Lagrange interpolation reproduces
/// it to ~1e-10 at step 0.01 for a tiny fraction of the cost.
#[derive(Debug, Clone)]
pub struct PhiInterpolator {
    n: u32,
    h: f64,
    values: Vec<f64>,
}

impl PhiInterpolator {
    pub fn build(n: u32, r_max: f64) -> Result<Self> {
        check_phi_args(n, r_max)?;
        let h = 0.02;
        let len = (r_max / h).ceil() as usize + 4;
        let mut values = Vec::with_capacity(len);
        for i in 0..len {
            // Per-node accuracy just below the interpolation error floor.
            values.push(log_phi_radial_impl(n, i as f64 * h, 1e-10)?);
        }
        Ok(PhiInterpolator { n, h, values })
    }

    /// Process-wide cache, one interpolator per dimension, grown on
    /// demand. φ does not depend on anything but (n, r), so sharing is
    /// free; access is synchronized.
    pub fn shared(n: u32, r_max: f64) -> Result<std::sync::Arc<Self>> {
        use std::collections::HashMap;
        use std::sync::{Arc, Mutex, OnceLock};
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<PhiInterpolator>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("phi cache poisoned");
        if let Some(existing) = guard.get(&n) {
            if existing.r_max() >= r_max {
                return Ok(existing.clone());
            }
        }
        let built = Arc::new(Self::build(n, r_max)?);
        guard.insert(n, built.clone());
        Ok(built)
    }

    pub fn r_max(&self) -> f64 {
        (self.values.len() - 2) as f64 * self.h
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Interpolated ln φ(r); falls back to direct evaluation outside the
    /// tabulated range.
    pub fn log_phi(&self, r: f64) -> f64 {
        let x = r / self.h;
        let i1 = (x.floor() as usize).clamp(1, self.values.len() - 3);
        let s = x - i1 as f64;
        if !(0.0..=1.0 + 1e-12).contains(&s) {
            return log_phi_radial(self.n, r).expect("phi outside table range");
        }
        let p = &self.values[i1 - 1..i1 + 3];
        let w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        let w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        let w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        let w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
        w0 * p[0] + w1 * p[1] + w2 * p[2] + w3 * p[3]
    }
}

/// ln ψ(t, r) = ln λ(t) + ln φ(r).
pub fn log_psi(mu: f64, n: u32, t: f64, r: f64) -> Result<f64> {
    Ok(log_lambda(mu, t)? + log_phi_radial(n, r)?)
}

/// The composite test function ψ(t, x) = λ(t)·φ(x) at |x| = r.
pub fn psi(mu: f64, n: u32, t: f64, r: f64) -> Result<f64> {
    Ok(log_psi(mu, n, t, r)?.exp())
}
