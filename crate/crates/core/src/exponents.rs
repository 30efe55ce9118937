//! Closed-form calculus of critical exponents and lifespan exponents.
//!
//! The central object is the quadratic
//! `γ(p, d) = 2 + (d+1)p − (d−1)p²`; its positive root is the Strauss
//! exponent `p_S(d)`, and the damped-wave lifespan exponent of this
//! laboratory is `2p(p−1)/γ(p, n+μ)` for powers below `p_S(n+μ)`. The
//! module also evaluates the competing published lifespan exponents
//! (Wakasugi; Lai–Takamura–Wakasa; Ikeda–Sobajima) together with the
//! hypothesis ranges under which each applies.

use crate::error::{Error, Result};
use serde::Serialize;

/// Tolerance for root/criticality identification.
pub const ROOT_TOL: f64 = 1e-10;

fn check_dim(d: f64) -> Result<()> {
    if !(d > 1.0) || !d.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "effective dimension must satisfy d > 1, got {d}"
        )));
    }
    Ok(())
}

/// γ(p, d) = 2 + (d+1)·p − (d−1)·p².
pub fn gamma(p: f64, d: f64) -> Result<f64> {
    check_dim(d)?;
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("gamma: need p > 0, got {p}")));
    }
    Ok(2.0 + (d + 1.0) * p - (d - 1.0) * p * p)
}

/// Strauss exponent `p_S(d) = (d+1+sqrt(d²+10d−7))/(2(d−1))`, the positive
/// root of γ(·, d). The radical formula is polished by one Newton step on
/// γ to suppress cancellation.
pub fn strauss_exponent(d: f64) -> Result<f64> {
    check_dim(d)?;
    let disc = d * d + 10.0 * d - 7.0;
    let root = (d + 1.0 + disc.sqrt()) / (2.0 * (d - 1.0));
    let slope = (d + 1.0) - 2.0 * (d - 1.0) * root;
    let g = 2.0 + (d + 1.0) * root - (d - 1.0) * root * root;
    Ok(root - g / slope)
}

/// Fujita exponent `p_F(n) = 1 + 2/n`.
pub fn fujita_exponent(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument("fujita_exponent: need n >= 1".into()));
    }
    Ok(1.0 + 2.0 / n as f64)
}

/// Damping threshold `μ*(n) = (n² + n + 2)/(n + 2)`, below which the
/// shifted Strauss exponent exceeds the Fujita exponent.
pub fn mu_star(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument("mu_star: need n >= 1".into()));
    }
    let nf = n as f64;
    Ok((nf * nf + nf + 2.0) / (nf + 2.0))
}

/// Which of the published lifespan regimes a parameter point falls in,
/// for bounds whose exponent carries an arbitrary δ > 0. δ is kept
/// symbolic: `base_exponent` is the δ-free part.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct IkedaSobajimaEntry {
    pub regime: String,
    pub base_exponent: Option<f64>,
    pub bound: String,
}

impl IkedaSobajimaEntry {
    fn not_applicable(reason: &str) -> Self {
        IkedaSobajimaEntry {
            regime: "not-applicable".into(),
            base_exponent: None,
            bound: reason.into(),
        }
    }
}

/// Three-valued outcome for exponent comparisons whose hypotheses carry
/// applicability ranges (a vanishing denominator is a statement about
/// range, not an arithmetic error).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TriState {
    Holds,
    Fails,
    NotApplicable,
}

/// Outcome of the sub-Fujita improvement comparison: does the
/// `2p(p−1)/γ(p,n+μ)` exponent beat the corresponding heat-flavored
/// lifespan exponent on its own range?
#[derive(Debug, Clone, Serialize)]
pub struct RemarkCheck {
    pub status: TriState,
    /// LHS of the comparison (the wave-flavored exponent), when evaluated.
    pub lhs: Option<f64>,
    /// RHS of the comparison (the heat-flavored exponent), when evaluated.
    pub rhs: Option<f64>,
    pub reason: String,
}

/// All critical exponents and competing lifespan exponents for one
/// parameter point (n, μ, p). `p`-dependent entries are `None` when the
/// report is built without a p.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentReport {
    pub n: u32,
    pub mu: f64,
    pub p: Option<f64>,
    pub gamma_shifted: Option<f64>,
    pub p_strauss_shifted: f64,
    pub p_fujita: f64,
    pub mu_star: f64,
    pub lifespan_exp_this_paper: Option<f64>,
    pub lifespan_exp_ltw: Option<f64>,
    pub lifespan_exp_is: IkedaSobajimaEntry,
    pub lifespan_exp_wakasugi: Option<f64>,
    pub remark_improvement: bool,
}

fn check_point(n: u32, mu: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidArgument("need dimension n >= 1".into()));
    }
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidArgument(format!("need mu > 0, got {mu}")));
    }
    Ok(())
}

fn ikeda_sobajima_entry(n: u32, mu: f64, p: f64) -> Result<IkedaSobajimaEntry> {
    let nf = n as f64;
    if n >= 2 {
        if mu >= mu_star(n)? {
            return Ok(IkedaSobajimaEntry::not_applicable(
                "requires 0 <= mu < mu_star(n)",
            ));
        }
        let ps_shift = strauss_exponent(nf + mu)?;
        let ps_shift2 = strauss_exponent(nf + 2.0 + mu)?;
        let pf = fujita_exponent(n)?;
        if (p - ps_shift).abs() <= 1e-9 {
            return Ok(IkedaSobajimaEntry {
                regime: "critical-exponential".into(),
                base_exponent: None,
                bound: "exp(C·eps^(-p(p-1)))".into(),
            });
        }
        if p >= ps_shift2 && p < ps_shift {
            let base = 2.0 * p * (p - 1.0) / gamma(p, nf + mu)?;
            return Ok(IkedaSobajimaEntry {
                regime: "sub-strauss-polynomial".into(),
                base_exponent: Some(base),
                bound: format!("C_d·eps^(-({base:.12}+d)), d > 0 arbitrary"),
            });
        }
        if p >= pf && p < ps_shift2 {
            return Ok(IkedaSobajimaEntry {
                regime: "fujita-polynomial".into(),
                base_exponent: Some(1.0),
                bound: "C_d·eps^(-(1+d)), d > 0 arbitrary".into(),
            });
        }
        return Ok(IkedaSobajimaEntry::not_applicable("p outside covered ranges"));
    }
    // n = 1 branches.
    if mu >= 4.0 / 3.0 {
        return Ok(IkedaSobajimaEntry::not_applicable("n = 1 requires 0 < mu < 4/3"));
    }
    let ps1 = strauss_exponent(1.0 + mu)?;
    if (p - ps1).abs() <= 1e-9 {
        return Ok(IkedaSobajimaEntry {
            regime: "critical-exponential-1d".into(),
            base_exponent: None,
            bound: "exp(C·eps^(-p(p-1)))".into(),
        });
    }
    let lo = (2.0 / mu).max(3.0);
    if p >= lo && p < ps1 {
        let base = 2.0 * p * (p - 1.0) / gamma(p, 1.0 + mu)?;
        return Ok(IkedaSobajimaEntry {
            regime: "sub-strauss-polynomial-1d".into(),
            base_exponent: Some(base),
            bound: format!("C_d·eps^(-({base:.12}+d)), d > 0 arbitrary"),
        });
    }
    if mu < 2.0 / 3.0 && (3.0..2.0 / mu).contains(&p) {
        let base = 2.0 * (p - 1.0) / mu;
        return Ok(IkedaSobajimaEntry {
            regime: "small-damping-1d".into(),
            base_exponent: Some(base),
            bound: format!("C_d·eps^(-({base:.12}+d)), d > 0 arbitrary"),
        });
    }
    Ok(IkedaSobajimaEntry::not_applicable("p outside covered 1-d ranges"))
}

fn wakasugi_exponent(n: u32, mu: f64, p: f64) -> Result<Option<f64>> {
    let nf = n as f64;
    if mu > 1.0 {
        if p < fujita_exponent(n)? {
            // In range, 2 − n(p−1) > 0 is automatic.
            return Ok(Some((p - 1.0) / (2.0 - nf * (p - 1.0))));
        }
    } else if p < 1.0 + 2.0 / (nf + mu - 1.0) {
        return Ok(Some((p - 1.0) / (2.0 - (nf + mu - 1.0) * (p - 1.0))));
    }
    Ok(None)
}

fn ltw_exponent(n: u32, mu: f64, p: f64) -> Result<Option<f64>> {
    let nf = n as f64;
    let mu_max = (nf * nf + nf + 2.0) / (2.0 * (nf + 2.0));
    if mu >= mu_max {
        return Ok(None);
    }
    if p >= fujita_exponent(n)? && p < strauss_exponent(nf + 2.0 * mu)? {
        return Ok(Some(2.0 * p * (p - 1.0) / gamma(p, nf + 2.0 * mu)?));
    }
    Ok(None)
}

/// Checks whether the wave-flavored exponent `2p(p−1)/γ(p,n+μ)` improves
/// on the heat-flavored one inside the sub-Fujita ranges where both make
/// sense. Returns `Holds`/`Fails` with both sides when the point is in
/// range, `NotApplicable` with a reason otherwise.
pub fn remark_improvement_check(n: u32, mu: f64, p: f64) -> Result<RemarkCheck> {
    check_point(n, mu)?;
    if n < 2 {
        return Err(Error::InvalidArgument("remark_improvement_check: need n >= 2".into()));
    }
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("need p > 1, got {p}")));
    }
    let nf = n as f64;
    let mus = mu_star(n)?;

    if mu > 1.0 && mu < mus {
        let lo = (2.0 / (nf + 1.0 - mu)).max(1.0);
        let hi = fujita_exponent(n)?;
        if p > lo && p < hi {
            let denom = 2.0 - nf * (p - 1.0);
            if denom <= 0.0 {
                return Ok(RemarkCheck {
                    status: TriState::NotApplicable,
                    lhs: None,
                    rhs: None,
                    reason: "heat-flavored bound degenerate: 2 - n(p-1) <= 0".into(),
                });
            }
            let lhs = 2.0 * p * (p - 1.0) / gamma(p, nf + mu)?;
            let rhs = (p - 1.0) / denom;
            let status = if lhs < rhs { TriState::Holds } else { TriState::Fails };
            return Ok(RemarkCheck {
                status,
                lhs: Some(lhs),
                rhs: Some(rhs),
                reason: format!("super-unit damping branch, p in ({lo:.6}, {hi:.6})"),
            });
        }
        return Ok(RemarkCheck {
            status: TriState::NotApplicable,
            lhs: None,
            rhs: None,
            reason: format!("p = {p} outside ({lo:.6}, {hi:.6})"),
        });
    }
    if mu > 0.0 && mu <= 1.0 {
        let lo = (2.0 / (nf + mu - 1.0)).max(1.0);
        let hi = 1.0 + 2.0 / (nf + mu - 1.0);
        if p > lo && p < hi {
            let denom = 2.0 - (nf + mu - 1.0) * (p - 1.0);
            if denom <= 0.0 {
                return Ok(RemarkCheck {
                    status: TriState::NotApplicable,
                    lhs: None,
                    rhs: None,
                    reason: "heat-flavored bound degenerate: 2 - (n+mu-1)(p-1) <= 0".into(),
                });
            }
            let lhs = 2.0 * p * (p - 1.0) / gamma(p, nf + mu)?;
            let rhs = (p - 1.0) / denom;
            let status = if lhs < rhs { TriState::Holds } else { TriState::Fails };
            return Ok(RemarkCheck {
                status,
                lhs: Some(lhs),
                rhs: Some(rhs),
                reason: format!("sub-unit damping branch, p in ({lo:.6}, {hi:.6})"),
            });
        }
        return Ok(RemarkCheck {
            status: TriState::NotApplicable,
            lhs: None,
            rhs: None,
            reason: format!("p = {p} outside ({lo:.6}, {hi:.6})"),
        });
    }
    Ok(RemarkCheck {
        status: TriState::NotApplicable,
        lhs: None,
        rhs: None,
        reason: format!("mu = {mu} outside (0, mu_star) = (0, {mus:.6})"),
    })
}

/// Builds the full exponent report; `p` may be omitted, in which case the
/// p-dependent entries are left empty.
pub fn exponent_report(n: u32, mu: f64, p: Option<f64>) -> Result<ExponentReport> {
    check_point(n, mu)?;
    let nf = n as f64;
    let p_strauss_shifted = strauss_exponent(nf + mu)?;
    let p_fujita = fujita_exponent(n)?;
    let mus = mu_star(n)?;

    let Some(p) = p else {
        return Ok(ExponentReport {
            n,
            mu,
            p: None,
            gamma_shifted: None,
            p_strauss_shifted,
            p_fujita,
            mu_star: mus,
            lifespan_exp_this_paper: None,
            lifespan_exp_ltw: None,
            lifespan_exp_is: IkedaSobajimaEntry::not_applicable("no p supplied"),
            lifespan_exp_wakasugi: None,
            remark_improvement: false,
        });
    };
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("need p > 1, got {p}")));
    }

    let gamma_shifted = gamma(p, nf + mu)?;
    let lifespan_exp_this_paper = if n >= 2 && p < p_strauss_shifted {
        Some(2.0 * p * (p - 1.0) / gamma_shifted)
    } else {
        None
    };
    let remark = if n >= 2 {
        remark_improvement_check(n, mu, p)?.status == TriState::Holds
    } else {
        false
    };
    Ok(ExponentReport {
        n,
        mu,
        p: Some(p),
        gamma_shifted: Some(gamma_shifted),
        p_strauss_shifted,
        p_fujita,
        mu_star: mus,
        lifespan_exp_this_paper,
        lifespan_exp_ltw: ltw_exponent(n, mu, p)?,
        lifespan_exp_is: ikeda_sobajima_entry(n, mu, p)?,
        lifespan_exp_wakasugi: wakasugi_exponent(n, mu, p)?,
        remark_improvement: remark,
    })
}

/// Full report for a concrete (n, μ, p).
pub fn lifespan_exponent_table(n: u32, mu: f64, p: f64) -> Result<ExponentReport> {
    exponent_report(n, mu, Some(p))
}

impl std::fmt::Display for ExponentReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn opt(v: Option<f64>) -> String {
            v.map_or_else(|| "not-applicable".into(), |x| format!("{x:.12}"))
        }
        writeln!(f, "exponent report  n={}  mu={}  p={}", self.n, self.mu,
            self.p.map_or_else(|| "-".into(), |p| p.to_string()))?;
        writeln!(f, "  gamma(p, n+mu)          {}", opt(self.gamma_shifted))?;
        writeln!(f, "  p_S(n+mu)               {:.12}", self.p_strauss_shifted)?;
        writeln!(f, "  p_F(n)                  {:.12}", self.p_fujita)?;
        writeln!(f, "  mu_star(n)              {:.12}", self.mu_star)?;
        writeln!(f, "  lifespan exp (here)     {}", opt(self.lifespan_exp_this_paper))?;
        writeln!(f, "  lifespan exp (LTW)      {}", opt(self.lifespan_exp_ltw))?;
        writeln!(f, "  lifespan exp (IS)       {} [{}]", self.lifespan_exp_is.bound,
            self.lifespan_exp_is.regime)?;
        writeln!(f, "  lifespan exp (Wakasugi) {}", opt(self.lifespan_exp_wakasugi))?;
        write!(f, "  sub-Fujita improvement  {}", self.remark_improvement)
    }
}
