//! Machine-checkable blow-up certificates.
//!
//! From a [`ProblemSpec`] this module computes every explicit constant of
//! the iteration argument behind the lifespan upper bound — the data
//! functional `C_{f,g}`, the eigenfunction envelope `C_{φ,R}`, the chain
//! `C₀…C₄`, the sequence exponents `α`, `β`, the log-slack `S_p(∞)`, and
//! the time `T₀` past which the Bessel asymptotics are certified — and
//! packages them as a [`Certificate`] whose `threshold` method is the
//! concrete two-branch lifespan bound
//! `max{T₀ + (e^(S_p(∞)+α·ln2+1)/(C₂ εᵖ))^(2(p−1)/γ), 2T₀+1}`.

use crate::error::{Error, Result};
use crate::exponents;
use crate::problem::{BumpProfile, ProblemSpec};
use crate::quad;
use crate::specfun;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

/// Acceptance tolerance on the Bessel asymptotic ratio when scanning for
/// T₀. The factor ½ built into C₁ is exactly the room for this error.
pub const T0_ASYMPTOTIC_TOL: f64 = 0.1;
/// T₀ scan upper limit; damping far outside the tested ranges fails hard.
const T0_SCAN_MAX: f64 = 100.0;
/// Envelope maximization grid: log-spaced times in [0, ENVELOPE_T_MAX].
const ENVELOPE_T_MAX: f64 = 200.0;
const ENVELOPE_GRID: usize = 48;

/// Every explicit constant of the blow-up argument for one problem
/// instance, plus the parameter copies the evaluators need.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub c0: f64,
    pub c_fg: f64,
    pub c_phi_r: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub alpha: f64,
    pub beta: f64,
    pub s_p_inf: f64,
    pub t0: f64,
    pub gamma: f64,
    /// 2p(p−1)/γ(p, n+μ): the power of 1/ε in the lifespan bound.
    pub lifespan_exponent: f64,
    pub n: u32,
    pub mu: f64,
    pub p: f64,
    pub support_radius: f64,
    /// Accuracy warnings collected during construction (depth-capped
    /// quadratures); empty on a clean build.
    pub warnings: Vec<String>,
}

/// One step of the iteration sequences: `G(t) > D_j (1+t)^(−a_j) (t−T₀)^(b_j)`.
/// `D_j` is carried in log-domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationState {
    pub j: u32,
    pub log_d: f64,
    pub a: f64,
    pub b: f64,
}

/// Closed-form lower bound for `log D_j` together with its validity index.
#[derive(Debug, Clone, Copy)]
pub struct DjBound {
    pub log_d_bound: f64,
    /// The bound is certified for all `j > validity_index`.
    pub validity_index: i64,
    /// False when `j <= validity_index` (bound returned anyway, flagged).
    pub valid: bool,
}

/// The evaluated lifespan bound at one ε.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LifespanBound {
    /// Exact two-branch threshold `threshold(ε)`.
    pub t_bound: f64,
    /// Asymptotic form `C₄·ε^(−lifespan_exponent)`.
    pub t_asymptotic: f64,
    /// Largest ε at which the power branch dominates the constant branch
    /// by 10×; a diagnostic for "ε small enough", not a certified value.
    pub eps0: f64,
}

fn asymptotic_ratio(nu: f64, x: f64) -> Result<f64> {
    Ok((specfun::log_bessel_k(nu, x)? + x + 0.5 * (2.0 * x / PI).ln()).exp())
}

/// Scans t ∈ {2, 2.5, 3, …} for the first time at which (i) the large-
/// argument Bessel asymptotic holds within 10% for both orders (μ±1)/2
/// and (ii) the weighted inverse-K² integral dominates its asymptotic
/// form with the 2^(−1/p) slack for every admissible p (n ≥ 2 admits
/// p < p_S(2+μ)). Strictly greater than 2 by construction.
pub fn compute_t0(mu: f64) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidArgument(format!("compute_t0: need mu > 0, got {mu}")));
    }
    let nu = 0.5 * (mu - 1.0);
    let p_sup = exponents::strauss_exponent(2.0 + mu)?;
    let log_slack = -LN_2 / p_sup;

    let mut t = 2.0;
    while t <= T0_SCAN_MAX + 1e-9 {
        let x = 1.0 + t;
        let ratio_lo = asymptotic_ratio(nu, x)?;
        let ratio_hi = asymptotic_ratio(nu + 1.0, x)?;
        if (ratio_lo - 1.0).abs() <= T0_ASYMPTOTIC_TOL
            && (ratio_hi - 1.0).abs() <= T0_ASYMPTOTIC_TOL
        {
            let integrand = |s: f64| {
                let lk = specfun::log_bessel_k(nu, 1.0 + s)
                    .expect("K_nu on [1, 101] is representable");
                (-(1.0 + s).ln() - 2.0 * lk).exp()
            };
            let q = quad::adaptive_simpson(integrand, 0.0, t, 1e-12, 1e-9);
            let lhs = q.value.ln();
            let rhs = log_slack + 2.0 * (1.0 + t) - PI.ln();
            if lhs >= rhs {
                // T₀ must be strictly larger than 2.
                return Ok(if t == 2.0 { 2.5 } else { t });
            }
        }
        t += 0.5;
    }
    Err(Error::Certificate(format!(
        "no T0 <= {T0_SCAN_MAX} satisfies the asymptotic conditions for mu = {mu}"
    )))
}

/// `∫ bump(r)·φ(r)·r^(n−1) dr` over the support, times the sphere factor.
fn data_integral_against_phi(
    n: u32,
    bump: &BumpProfile,
    support_radius: f64,
    warnings: &mut Vec<String>,
) -> Result<f64> {
    if bump.is_zero() {
        return Ok(0.0);
    }
    let q = quad::adaptive_simpson(
        |r| {
            if r == 0.0 {
                return 0.0;
            }
            bump.eval(r, support_radius)
                * specfun::phi_radial(n, r).expect("phi on the data support")
                * r.powi(n as i32 - 1)
        },
        0.0,
        support_radius,
        1e-14,
        1e-11,
    );
    if !q.converged {
        warnings.push(format!("data integral quadrature depth-capped (rel ~ {:.1e})", q.rel_err()));
    }
    Ok(specfun::sphere_surface(n) * q.value)
}

/// `ln ∫₀^(r_hi) φ(r)^q · r^(n−1) dr`, computed with the peak scale split
/// off (the integrand grows like e^(q·r)).
fn log_phi_power_integral(
    phi: &specfun::PhiInterpolator,
    q_exp: f64,
    r_hi: f64,
    warnings: &mut Vec<String>,
) -> Result<f64> {
    let nf = phi.n() as f64;
    let shift = q_exp * phi.log_phi(r_hi) + (nf - 1.0) * r_hi.ln();
    let integrand = |r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        (q_exp * phi.log_phi(r) + (nf - 1.0) * r.ln() - shift).exp()
    };
    let q = quad::adaptive_simpson(integrand, 0.0, r_hi, 1e-14, 1e-10);
    if !q.converged {
        warnings.push(format!(
            "phi envelope quadrature depth-capped at r_hi = {r_hi} (rel ~ {:.1e})",
            q.rel_err()
        ));
    }
    Ok(q.value.ln() + shift)
}

/// Numerically maximized envelope constant: the largest observed ratio of
/// `∫_(|x| ≤ t+R) φ^(p') dx` against `(R+t)^(n−1−(n−1)p'/2)·e^(p'(t+R))`
/// over a log-spaced grid of times in [0, 200].
fn phi_envelope_constant(
    n: u32,
    p: f64,
    support_radius: f64,
    warnings: &mut Vec<String>,
) -> Result<f64> {
    let nf = n as f64;
    let pp = p / (p - 1.0);
    let phi = specfun::PhiInterpolator::shared(n, ENVELOPE_T_MAX + support_radius + 1.0)?;
    let mut c_phi: f64 = 0.0;
    let mut grid = vec![0.0];
    let (lo, hi) = (1e-2_f64, ENVELOPE_T_MAX);
    for i in 0..ENVELOPE_GRID {
        let frac = i as f64 / (ENVELOPE_GRID - 1) as f64;
        grid.push(lo * (hi / lo).powf(frac));
    }
    for &t in &grid {
        let r_hi = t + support_radius;
        let log_num =
            log_phi_power_integral(&phi, pp, r_hi, warnings)? + specfun::sphere_surface(n).ln();
        let log_den = (nf - 1.0 - (nf - 1.0) * pp / 2.0) * r_hi.ln() + pp * r_hi;
        c_phi = c_phi.max((log_num - log_den).exp());
    }
    Ok(c_phi)
}

impl Certificate {
    /// Assembles the analytic part of the certificate from the two
    /// quadrature-derived constants. Everything else is closed-form in
    /// (n, μ, p, R).
    #[allow(clippy::too_many_arguments)]
    pub fn from_analytic_parts(
        n: u32,
        mu: f64,
        p: f64,
        support_radius: f64,
        c_fg: f64,
        c_phi_r: f64,
        t0: f64,
        warnings: Vec<String>,
    ) -> Result<Certificate> {
        let nf = n as f64;
        let gamma = exponents::gamma(p, nf + mu)?;
        if gamma <= 0.0 {
            return Err(Error::Certificate(format!(
                "gamma(p, n+mu) = {gamma} <= 0: p is not sub-Strauss"
            )));
        }
        if !(c_fg > 0.0) {
            return Err(Error::Certificate(format!(
                "C_fg = {c_fg} <= 0: data violates the nonnegativity hypothesis"
            )));
        }
        let c0 = specfun::unit_ball_volume(n).powf(1.0 - p)
            * support_radius.powf(-nf * (p - 1.0));
        let c1 = 0.5
            * c_fg.powf(p)
            * c_phi_r.powf(1.0 - p)
            * (p * (1.0 - support_radius)).exp()
            * PI.powf(-p);
        let c2 = c1 / ((nf + mu) * (nf + mu + 1.0));
        let alpha = mu + (nf + mu - 1.0) * p / 2.0 + nf + mu / (p - 1.0);
        let beta = nf + mu + 1.0 + (mu + 2.0) / (p - 1.0);
        let c3 = c0 / (beta * beta);
        let s_p_inf = 2.0 * p * p.ln() / ((p - 1.0) * (p - 1.0)) - p * c3.ln() / (p - 1.0);
        let lifespan_exponent = 2.0 * p * (p - 1.0) / gamma;
        let c4 = ((2.0 * (p - 1.0) / gamma) * (s_p_inf + alpha * LN_2 + 1.0 - c2.ln())).exp();
        Ok(Certificate {
            c0,
            c_fg,
            c_phi_r,
            c1,
            c2,
            c3,
            c4,
            alpha,
            beta,
            s_p_inf,
            t0,
            gamma,
            lifespan_exponent,
            n,
            mu,
            p,
            support_radius,
            warnings,
        })
    }

    /// The certified lifespan threshold
    /// `max{T₀ + (e^(S_p(∞)+α·ln2+1)/(C₂ εᵖ))^(2(p−1)/γ), 2T₀+1}`.
    /// Non-increasing in ε.
    pub fn threshold(&self, eps: f64) -> f64 {
        let q = 2.0 * (self.p - 1.0) / self.gamma;
        let log_e = self.s_p_inf + self.alpha * LN_2 + 1.0;
        let power_branch = self.t0 + (q * (log_e - self.c2.ln() - self.p * eps.ln())).exp();
        power_branch.max(2.0 * self.t0 + 1.0)
    }

    /// `J(t) = log D₁ − S_p(∞) − α·log(1+t) + β·log(t−T₀)`; blow-up is
    /// forced once J exceeds 1.
    pub fn j_function(&self, eps: f64, t: f64) -> Result<f64> {
        if !(t > self.t0) {
            return Err(Error::InvalidArgument(format!(
                "j_function: need t > T0 = {}, got {t}",
                self.t0
            )));
        }
        let log_d1 = self.c2.ln() + self.p * eps.ln();
        Ok(log_d1 - self.s_p_inf - self.alpha * (1.0 + t).ln()
            + self.beta * (t - self.t0).ln())
    }

    /// Evaluates the bound at one ε, with the ε₀ dominance diagnostic.
    pub fn lifespan_bound(&self, eps: f64) -> Result<LifespanBound> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "lifespan_bound: need eps > 0, got {eps}"
            )));
        }
        let q = 2.0 * (self.p - 1.0) / self.gamma;
        let log_e = self.s_p_inf + self.alpha * LN_2 + 1.0;
        let t_asymptotic =
            (q * (log_e - self.c2.ln()) - self.lifespan_exponent * eps.ln()).exp();
        // Power branch exceeds the constant branch by 10x at eps0.
        let w = 19.0 * self.t0 + 10.0;
        let log_eps0 = (log_e - self.c2.ln() - w.ln() / q) / self.p;
        Ok(LifespanBound { t_bound: self.threshold(eps), t_asymptotic, eps0: log_eps0.exp() })
    }

    /// First-iterate exponents: a₁ = μ + (n+μ−1)p/2, b₁ = n+μ+1,
    /// D₁ = C₂·εᵖ.
    fn first_iterate(&self, eps: f64) -> IterationState {
        let nf = self.n as f64;
        IterationState {
            j: 1,
            log_d: self.c2.ln() + self.p * eps.ln(),
            a: self.mu + (nf + self.mu - 1.0) * self.p / 2.0,
            b: nf + self.mu + 1.0,
        }
    }

    /// Runs the iteration recursions
    /// `a_(j+1) = μ + n(p−1) + p·a_j`, `b_(j+1) = μ + 2 + p·b_j`,
    /// `log D_(j+1) = p·log D_j + log C₀ − 2·log(μ + p·b_j + 2)`,
    /// starting from the first iterate. Equality is used in the D
    /// recursion (the minimal admissible choice), all in log-domain.
    pub fn iterate_sequences(&self, eps: f64, j_max: u32) -> Result<Vec<IterationState>> {
        if j_max < 1 {
            return Err(Error::InvalidArgument("iterate_sequences: need j_max >= 1".into()));
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidArgument(format!("need eps > 0, got {eps}")));
        }
        let nf = self.n as f64;
        let mut states = Vec::with_capacity(j_max as usize);
        let mut s = self.first_iterate(eps);
        states.push(s);
        for j in 2..=j_max {
            s = IterationState {
                j,
                log_d: self.p * s.log_d + self.c0.ln()
                    - 2.0 * (self.mu + self.p * s.b + 2.0).ln(),
                a: self.mu + nf * (self.p - 1.0) + self.p * s.a,
                b: self.mu + 2.0 + self.p * s.b,
            };
            states.push(s);
        }
        Ok(states)
    }

    /// Closed form `a_j = α·p^(j−1) − (n + μ/(p−1))`.
    pub fn a_closed_form(&self, j: u32) -> f64 {
        self.alpha * self.p.powi(j as i32 - 1) - (self.n as f64 + self.mu / (self.p - 1.0))
    }

    /// Closed form `b_j = β·p^(j−1) − (μ+2)/(p−1)`.
    pub fn b_closed_form(&self, j: u32) -> f64 {
        self.beta * self.p.powi(j as i32 - 1) - (self.mu + 2.0) / (self.p - 1.0)
    }

    /// Closed-form lower bound `log D_j ≥ p^(j−1)·(log D₁ − S_p(∞))`,
    /// certified for j above the validity index
    /// `⌊p·log C₃/(2·log p) − 1/(p−1)⌋ + 1`.
    pub fn log_dj_lower_bound(&self, eps: f64, j: u32) -> DjBound {
        let log_d1 = self.c2.ln() + self.p * eps.ln();
        let validity_index = (self.p * self.c3.ln() / (2.0 * self.p.ln())
            - 1.0 / (self.p - 1.0))
            .floor() as i64
            + 1;
        DjBound {
            log_d_bound: self.p.powi(j as i32 - 1) * (log_d1 - self.s_p_inf),
            validity_index,
            valid: (j as i64) > validity_index,
        }
    }

    pub fn document(&self, spec: &ProblemSpec) -> CertificateDocument {
        CertificateDocument {
            c0: self.c0,
            c_fg: self.c_fg,
            c_phi_r: self.c_phi_r,
            c1: self.c1,
            c2: self.c2,
            c3: self.c3,
            c4: self.c4,
            alpha: self.alpha,
            beta: self.beta,
            s_p_inf: self.s_p_inf,
            t0: self.t0,
            gamma: self.gamma,
            lifespan_exponent: self.lifespan_exponent,
            provenance: Provenance {
                spec: spec.clone(),
                tolerances: Tolerances {
                    quad_abs: quad::ABS_TOL,
                    quad_rel: quad::REL_TOL,
                    t0_asymptotic_ratio: T0_ASYMPTOTIC_TOL,
                },
                quadrature: QuadratureInfo {
                    envelope_grid_points: ENVELOPE_GRID + 1,
                    envelope_t_max: ENVELOPE_T_MAX,
                },
                warnings: self.warnings.clone(),
            },
        }
    }
}

/// Serialized form of a certificate: the pinned constant fields plus
/// provenance (spec echo, tolerances, quadrature resolutions).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub c0: f64,
    pub c_fg: f64,
    pub c_phi_r: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub alpha: f64,
    pub beta: f64,
    pub s_p_inf: f64,
    pub t0: f64,
    pub gamma: f64,
    pub lifespan_exponent: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub spec: ProblemSpec,
    pub tolerances: Tolerances,
    pub quadrature: QuadratureInfo,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    pub quad_abs: f64,
    pub quad_rel: f64,
    pub t0_asymptotic_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadratureInfo {
    pub envelope_grid_points: usize,
    pub envelope_t_max: f64,
}

impl CertificateDocument {
    /// Rebuilds the evaluator-ready certificate from the document.
    pub fn certificate(&self) -> Certificate {
        let spec = &self.provenance.spec;
        Certificate {
            c0: self.c0,
            c_fg: self.c_fg,
            c_phi_r: self.c_phi_r,
            c1: self.c1,
            c2: self.c2,
            c3: self.c3,
            c4: self.c4,
            alpha: self.alpha,
            beta: self.beta,
            s_p_inf: self.s_p_inf,
            t0: self.t0,
            gamma: self.gamma,
            lifespan_exponent: self.lifespan_exponent,
            n: spec.n,
            mu: spec.mu,
            p: spec.p,
            support_radius: spec.support_radius,
            warnings: self.provenance.warnings.clone(),
        }
    }
}

/// Computes the full certificate for a problem instance: the data
/// functional `C_{f,g} = ∫(g·λ(0) + K_((μ+1)/2)(1)·f)·φ dx` by radial
/// quadrature, the envelope constant `C_{φ,R}` by numerical maximization,
/// T₀ by scanning, and the closed-form chain from those.
pub fn compute_constants(spec: &ProblemSpec) -> Result<Certificate> {
    spec.validate()?;
    let nf = spec.n as f64;
    let mut warnings = Vec::new();

    let lambda0 = specfun::lambda(spec.mu, 0.0)?;
    let k_plus = specfun::bessel_k(0.5 * (spec.mu + 1.0), 1.0)?;
    let int_f = data_integral_against_phi(spec.n, &spec.f, spec.support_radius, &mut warnings)?;
    let int_g = data_integral_against_phi(spec.n, &spec.g, spec.support_radius, &mut warnings)?;
    let c_fg = lambda0 * int_g + k_plus * int_f;

    let c_phi = phi_envelope_constant(spec.n, spec.p, spec.support_radius, &mut warnings)?;
    let r_pow = spec
        .support_radius
        .powf(nf - 1.0 - (nf - 1.0) * spec.p / (2.0 * (spec.p - 1.0)));
    let c_phi_r = (c_phi * r_pow).max(c_phi);

    let t0 = compute_t0(spec.mu)?;
    Certificate::from_analytic_parts(
        spec.n,
        spec.mu,
        spec.p,
        spec.support_radius,
        c_fg,
        c_phi_r,
        t0,
        warnings,
    )
}
