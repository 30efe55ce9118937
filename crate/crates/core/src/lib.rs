//! Numerical laboratory for the scale-invariant damped semilinear wave
//! equation `u_tt - Δu + μ/(1+t)·u_t = |u|^p` with small radial data.
//!
//! The crate evaluates everything that enters the explicit lifespan upper
//! bound `T(ε) ≤ C₄·ε^(−2p(p−1)/γ(p,n+μ))` for sub-Strauss powers, and
//! cross-checks the resulting certificate against a direct radially
//! symmetric finite-difference simulation:
//!
//! - [`exponents`] — closed-form calculus of the critical exponents
//!   (Strauss, Fujita, γ) and the competing lifespan exponents.
//! - [`specfun`] — modified Bessel function of the second kind `K_ν`, the
//!   temporal weight `λ(t)`, the spatial eigenfunction `φ(x)` of `Δφ = φ`,
//!   and the composite test function `ψ = λ·φ`.
//! - [`certificate`] — every explicit constant of the blow-up argument
//!   (C₀…C₄, α, β, S_p(∞), T₀) plus the iteration sequences and the
//!   machine-checkable lifespan threshold.
//! - [`solver`] — explicit second-order finite differences for the radial
//!   Cauchy problem, in original or Klein–Gordon (Liouville-transformed)
//!   form, with functional traces and blow-up detection.
//! - [`harness`] — ε-sweeps, log-log scaling fits, bound-compliance
//!   checks, and plot emission.

pub mod certificate;
pub mod error;
pub mod exponents;
pub mod harness;
pub mod problem;
pub mod quad;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};
