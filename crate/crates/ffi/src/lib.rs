//! C ABI for the sidwave laboratory.
//!
//! Scalar evaluators take out-pointers and return a [`SidwaveStatus`];
//! problems, certificates, and solve traces are opaque handles with
//! explicit `_free` functions. Strings returned through `char**` are
//! NUL-terminated, allocated by this library, and must be released with
//! [`sidwave_string_free`]. The matching header `include/sidwave.h` is
//! generated at build time.

use sidwave::certificate::{self, Certificate};
use sidwave::problem::ProblemSpec;
use sidwave::solver::{self, EquationForm, SolveTrace};
use sidwave::{exponents, specfun};
use std::ffi::{c_char, CStr, CString};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SidwaveStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    ComputeFailed = 4,
    NoBlowup = 5,
    BufferTooSmall = 6,
}

/// Equation formulation selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SidwaveForm {
    Original = 0,
    Liouville = 1,
}

/// Trace column selector for [`sidwave_trace_column`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SidwaveTraceColumn {
    Time = 0,
    G = 1,
    G1 = 2,
    Lp = 3,
    MaxAbsU = 4,
    KeyResidual = 5,
    SupportRadius = 6,
}

/// Opaque problem handle.
pub struct SidwaveProblem {
    spec: ProblemSpec,
}

/// Opaque certificate handle.
pub struct SidwaveCertificate {
    cert: Certificate,
    spec: ProblemSpec,
}

/// Opaque solve-trace handle.
pub struct SidwaveTrace {
    trace: SolveTrace,
}

fn status_of<T>(r: sidwave::Result<T>, out: *mut T) -> SidwaveStatus {
    match r {
        Ok(v) => {
            // Caller guarantees `out` is valid for writes.
            unsafe { *out = v };
            SidwaveStatus::Ok
        }
        Err(sidwave::Error::InvalidArgument(_)) => SidwaveStatus::InvalidArgument,
        Err(_) => SidwaveStatus::ComputeFailed,
    }
}

macro_rules! check_out {
    ($ptr:expr) => {
        if $ptr.is_null() {
            return SidwaveStatus::NullPointer;
        }
    };
}

/// γ(p, d) = 2 + (d+1)p − (d−1)p².
///
/// # Safety
/// `out` must be valid for writing one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_gamma(p: f64, d: f64, out: *mut f64) -> SidwaveStatus {
    check_out!(out);
    status_of(exponents::gamma(p, d), out)
}

/// Strauss exponent p_S(d), the positive root of γ(·, d).
///
/// # Safety
/// `out` must be valid for writing one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_strauss_exponent(d: f64, out: *mut f64) -> SidwaveStatus {
    check_out!(out);
    status_of(exponents::strauss_exponent(d), out)
}

/// Fujita exponent p_F(n) = 1 + 2/n.
///
/// # Safety
/// `out` must be valid for writing one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_fujita_exponent(n: u32, out: *mut f64) -> SidwaveStatus {
    check_out!(out);
    status_of(exponents::fujita_exponent(n), out)
}

/// Damping threshold μ*(n) = (n²+n+2)/(n+2).
///
/// # Safety
/// `out` must be valid for writing one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_mu_star(n: u32, out: *mut f64) -> SidwaveStatus {
    check_out!(out);
    status_of(exponents::mu_star(n), out)
}

/// Modified Bessel function of the second kind K_ν(t), t > 0.
///
/// # Safety
/// `out` must be valid for writing one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_bessel_k(nu: f64, t: f64, out: *mut f64) -> SidwaveStatus {
    check_out!(out);
    status_of(specfun::bessel_k(nu, t), out)
}

/// ln K_ν(t); stays finite where K itself underflows.
///
/// # Safety
/// `out` must be valid for writing one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_log_bessel_k(nu: f64, t: f64, out: *mut f64) -> SidwaveStatus {
    check_out!(out);
    status_of(specfun::log_bessel_k(nu, t), out)
}

/// Temporal weight λ(t) = (1+t)^((μ+1)/2)·K_((μ−1)/2)(1+t).
///
/// # Safety
/// `out` must be valid for writing one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_lambda(mu: f64, t: f64, out: *mut f64) -> SidwaveStatus {
    check_out!(out);
    status_of(specfun::lambda(mu, t), out)
}

/// λ'(t) through the Bessel derivative identity.
///
/// # Safety
/// `out` must be valid for writing one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_lambda_prime(mu: f64, t: f64, out: *mut f64) -> SidwaveStatus {
    check_out!(out);
    status_of(specfun::lambda_prime(mu, t), out)
}

/// Radial eigenfunction φ(r) of Δφ = φ in dimension n ≥ 2.
///
/// # Safety
/// `out` must be valid for writing one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_phi_radial(n: u32, r: f64, out: *mut f64) -> SidwaveStatus {
    check_out!(out);
    status_of(specfun::phi_radial(n, r), out)
}

/// ln φ(r); stays finite at large r.
///
/// # Safety
/// `out` must be valid for writing one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_log_phi_radial(n: u32, r: f64, out: *mut f64) -> SidwaveStatus {
    check_out!(out);
    status_of(specfun::log_phi_radial(n, r), out)
}

/// Test function ψ(t, r) = λ(t)·φ(r).
///
/// # Safety
/// `out` must be valid for writing one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_psi(
    mu: f64,
    n: u32,
    t: f64,
    r: f64,
    out: *mut f64,
) -> SidwaveStatus {
    check_out!(out);
    status_of(specfun::psi(mu, n, t, r), out)
}

/// Exponent report as a JSON string (field names match the CLI output).
/// Pass NaN for `p` to omit the p-dependent entries.
///
/// # Safety
/// `out` must be valid for writing one pointer; release the string with
/// [`sidwave_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sidwave_exponent_report_json(
    n: u32,
    mu: f64,
    p: f64,
    out: *mut *mut c_char,
) -> SidwaveStatus {
    check_out!(out);
    let p_opt = if p.is_nan() { None } else { Some(p) };
    let report = match exponents::exponent_report(n, mu, p_opt) {
        Ok(r) => r,
        Err(sidwave::Error::InvalidArgument(_)) => return SidwaveStatus::InvalidArgument,
        Err(_) => return SidwaveStatus::ComputeFailed,
    };
    let json = match serde_json::to_string(&report) {
        Ok(j) => j,
        Err(_) => return SidwaveStatus::ComputeFailed,
    };
    match CString::new(json) {
        Ok(s) => {
            *out = s.into_raw();
            SidwaveStatus::Ok
        }
        Err(_) => SidwaveStatus::ComputeFailed,
    }
}

/// Releases a string allocated by this library.
///
/// # Safety
/// `s` must have been returned by a sidwave function and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sidwave_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the flat key-value problem config (same format as the CLI).
///
/// # Safety
/// `config` must be a NUL-terminated string; `out` valid for one pointer.
/// Release the handle with [`sidwave_problem_free`].
#[no_mangle]
pub unsafe extern "C" fn sidwave_problem_parse(
    config: *const c_char,
    out: *mut *mut SidwaveProblem,
) -> SidwaveStatus {
    check_out!(out);
    if config.is_null() {
        return SidwaveStatus::NullPointer;
    }
    let text = match CStr::from_ptr(config).to_str() {
        Ok(t) => t,
        Err(_) => return SidwaveStatus::InvalidUtf8,
    };
    match ProblemSpec::from_config_str(text) {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(SidwaveProblem { spec }));
            SidwaveStatus::Ok
        }
        Err(_) => SidwaveStatus::InvalidArgument,
    }
}

/// # Safety
/// `problem` must come from [`sidwave_problem_parse`] and not be used
/// after this call.
#[no_mangle]
pub unsafe extern "C" fn sidwave_problem_free(problem: *mut SidwaveProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Computes the full blow-up certificate for a problem.
///
/// # Safety
/// `problem` must be a live handle; `out` valid for one pointer. Release
/// with [`sidwave_certificate_free`].
#[no_mangle]
pub unsafe extern "C" fn sidwave_certificate_compute(
    problem: *const SidwaveProblem,
    out: *mut *mut SidwaveCertificate,
) -> SidwaveStatus {
    check_out!(out);
    if problem.is_null() {
        return SidwaveStatus::NullPointer;
    }
    let spec = &(*problem).spec;
    match certificate::compute_constants(spec) {
        Ok(cert) => {
            *out = Box::into_raw(Box::new(SidwaveCertificate { cert, spec: spec.clone() }));
            SidwaveStatus::Ok
        }
        Err(_) => SidwaveStatus::ComputeFailed,
    }
}

/// # Safety
/// `cert` must come from [`sidwave_certificate_compute`] and not be used
/// after this call.
#[no_mangle]
pub unsafe extern "C" fn sidwave_certificate_free(cert: *mut SidwaveCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// The certified lifespan threshold at one ε.
///
/// # Safety
/// `cert` must be a live handle; `out` valid for one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_certificate_threshold(
    cert: *const SidwaveCertificate,
    eps: f64,
    out: *mut f64,
) -> SidwaveStatus {
    check_out!(out);
    if cert.is_null() {
        return SidwaveStatus::NullPointer;
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return SidwaveStatus::InvalidArgument;
    }
    *out = (*cert).cert.threshold(eps);
    SidwaveStatus::Ok
}

/// 2p(p−1)/γ(p, n+μ), the power of 1/ε in the certified bound.
///
/// # Safety
/// `cert` must be a live handle; `out` valid for one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_certificate_lifespan_exponent(
    cert: *const SidwaveCertificate,
    out: *mut f64,
) -> SidwaveStatus {
    check_out!(out);
    if cert.is_null() {
        return SidwaveStatus::NullPointer;
    }
    *out = (*cert).cert.lifespan_exponent;
    SidwaveStatus::Ok
}

/// Full certificate document (constants + provenance) as JSON.
///
/// # Safety
/// `cert` must be a live handle; `out` valid for one pointer. Release the
/// string with [`sidwave_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sidwave_certificate_json(
    cert: *const SidwaveCertificate,
    out: *mut *mut c_char,
) -> SidwaveStatus {
    check_out!(out);
    if cert.is_null() {
        return SidwaveStatus::NullPointer;
    }
    let doc = (*cert).cert.document(&(*cert).spec);
    let json = match serde_json::to_string_pretty(&doc) {
        Ok(j) => j,
        Err(_) => return SidwaveStatus::ComputeFailed,
    };
    match CString::new(json) {
        Ok(s) => {
            *out = s.into_raw();
            SidwaveStatus::Ok
        }
        Err(_) => SidwaveStatus::ComputeFailed,
    }
}

/// Integrates the problem at one ε (with blow-up diagnostics) and returns
/// the functional trace.
///
/// # Safety
/// `problem` must be a live handle; `out` valid for one pointer. Release
/// with [`sidwave_trace_free`].
#[no_mangle]
pub unsafe extern "C" fn sidwave_solve(
    problem: *const SidwaveProblem,
    eps: f64,
    form: SidwaveForm,
    out: *mut *mut SidwaveTrace,
) -> SidwaveStatus {
    check_out!(out);
    if problem.is_null() {
        return SidwaveStatus::NullPointer;
    }
    let equation_form = match form {
        SidwaveForm::Original => EquationForm::Original,
        SidwaveForm::Liouville => EquationForm::Liouville,
    };
    match solver::solve(&(*problem).spec, eps, equation_form) {
        Ok(trace) => {
            *out = Box::into_raw(Box::new(SidwaveTrace { trace }));
            SidwaveStatus::Ok
        }
        Err(sidwave::Error::InvalidArgument(_)) => SidwaveStatus::InvalidArgument,
        Err(_) => SidwaveStatus::ComputeFailed,
    }
}

/// # Safety
/// `trace` must come from [`sidwave_solve`] and not be used after this
/// call.
#[no_mangle]
pub unsafe extern "C" fn sidwave_trace_free(trace: *mut SidwaveTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Number of recorded instants in the trace.
///
/// # Safety
/// `trace` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sidwave_trace_len(trace: *const SidwaveTrace) -> usize {
    if trace.is_null() {
        return 0;
    }
    (*trace).trace.times.len()
}

/// Copies one trace column into `buf` (`len` must be at least
/// [`sidwave_trace_len`]).
///
/// # Safety
/// `trace` must be a live handle and `buf` valid for writing `len` f64s.
#[no_mangle]
pub unsafe extern "C" fn sidwave_trace_column(
    trace: *const SidwaveTrace,
    column: SidwaveTraceColumn,
    buf: *mut f64,
    len: usize,
) -> SidwaveStatus {
    if trace.is_null() || buf.is_null() {
        return SidwaveStatus::NullPointer;
    }
    let tr = &(*trace).trace;
    let src: &[f64] = match column {
        SidwaveTraceColumn::Time => &tr.times,
        SidwaveTraceColumn::G => &tr.g,
        SidwaveTraceColumn::G1 => &tr.g1,
        SidwaveTraceColumn::Lp => &tr.lp,
        SidwaveTraceColumn::MaxAbsU => &tr.max_abs_u,
        SidwaveTraceColumn::KeyResidual => &tr.key_residual,
        SidwaveTraceColumn::SupportRadius => &tr.support_radius,
    };
    if len < src.len() {
        return SidwaveStatus::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    SidwaveStatus::Ok
}

/// Measured blow-up time of the trace; `NoBlowup` when the run reached
/// t_max without crossing the threshold.
///
/// # Safety
/// `trace` must be a live handle; `out` valid for one f64.
#[no_mangle]
pub unsafe extern "C" fn sidwave_trace_blowup_time(
    trace: *const SidwaveTrace,
    out: *mut f64,
) -> SidwaveStatus {
    check_out!(out);
    if trace.is_null() {
        return SidwaveStatus::NullPointer;
    }
    match (*trace).trace.blowup {
        Some(rec) => {
            *out = rec.t_num;
            SidwaveStatus::Ok
        }
        None => SidwaveStatus::NoBlowup,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: &str = "n = 3\nmu = 2.0\np = 1.5\nr_support = 1.0\nf_amplitude = 1\n\
         f_smoothness = 3\ng_amplitude = 1\ng_smoothness = 3\ndr = 0.03125\ncfl = 0.5\n\
         t_max = 16\nblowup_threshold = 1e6\n";

    #[test]
    fn scalar_surface_and_error_codes() {
        let mut out = f64::NAN;
        unsafe {
            assert_eq!(sidwave_gamma(1.5, 5.0, &mut out), SidwaveStatus::Ok);
            assert!((out - 2.0).abs() < 1e-12);
            assert_eq!(sidwave_gamma(1.5, 0.5, &mut out), SidwaveStatus::InvalidArgument);
            assert_eq!(sidwave_gamma(1.5, 5.0, std::ptr::null_mut()), SidwaveStatus::NullPointer);
            assert_eq!(sidwave_bessel_k(0.5, -1.0, &mut out), SidwaveStatus::InvalidArgument);
            assert_eq!(sidwave_bessel_k(0.5, 1.0, &mut out), SidwaveStatus::Ok);
            assert!((out - 0.461_068_504_447_894_4).abs() < 1e-9);
            assert_eq!(sidwave_strauss_exponent(3.0, &mut out), SidwaveStatus::Ok);
            assert!((out - (1.0 + 2f64.sqrt())).abs() < 1e-10);
            assert_eq!(sidwave_phi_radial(1, 1.0, &mut out), SidwaveStatus::InvalidArgument);
        }
    }

    #[test]
    fn problem_certificate_trace_lifecycle() {
        unsafe {
            let cfg = CString::new(CONFIG).unwrap();
            let mut problem: *mut SidwaveProblem = std::ptr::null_mut();
            assert_eq!(sidwave_problem_parse(cfg.as_ptr(), &mut problem), SidwaveStatus::Ok);

            let mut cert: *mut SidwaveCertificate = std::ptr::null_mut();
            assert_eq!(sidwave_certificate_compute(problem, &mut cert), SidwaveStatus::Ok);
            let mut threshold = 0.0;
            assert_eq!(
                sidwave_certificate_threshold(cert, 0.1, &mut threshold),
                SidwaveStatus::Ok
            );
            assert!(threshold > 0.0);
            let mut exponent = 0.0;
            assert_eq!(
                sidwave_certificate_lifespan_exponent(cert, &mut exponent),
                SidwaveStatus::Ok
            );
            assert!((exponent - 0.75).abs() < 1e-12);
            let mut json: *mut c_char = std::ptr::null_mut();
            assert_eq!(sidwave_certificate_json(cert, &mut json), SidwaveStatus::Ok);
            let text = CStr::from_ptr(json).to_str().unwrap();
            assert!(text.contains("\"c4\""));
            sidwave_string_free(json);

            let mut trace: *mut SidwaveTrace = std::ptr::null_mut();
            assert_eq!(
                sidwave_solve(problem, 8.0, SidwaveForm::Original, &mut trace),
                SidwaveStatus::Ok
            );
            let len = sidwave_trace_len(trace);
            assert!(len > 10);
            let mut times = vec![0.0; len];
            assert_eq!(
                sidwave_trace_column(trace, SidwaveTraceColumn::Time, times.as_mut_ptr(), len),
                SidwaveStatus::Ok
            );
            assert_eq!(times[0], 0.0);
            assert!(times.windows(2).all(|w| w[1] > w[0]));
            let mut too_small = vec![0.0; 1];
            assert_eq!(
                sidwave_trace_column(trace, SidwaveTraceColumn::G, too_small.as_mut_ptr(), 1),
                SidwaveStatus::BufferTooSmall
            );
            let mut t_num = 0.0;
            assert_eq!(sidwave_trace_blowup_time(trace, &mut t_num), SidwaveStatus::Ok);
            assert!(t_num > 0.0 && t_num < 16.0);

            sidwave_trace_free(trace);
            sidwave_certificate_free(cert);
            sidwave_problem_free(problem);
        }
    }

    #[test]
    fn report_json_with_and_without_p() {
        unsafe {
            let mut json: *mut c_char = std::ptr::null_mut();
            assert_eq!(
                sidwave_exponent_report_json(3, 2.0, 1.5, &mut json),
                SidwaveStatus::Ok
            );
            let text = CStr::from_ptr(json).to_str().unwrap().to_string();
            sidwave_string_free(json);
            assert!(text.contains("\"lifespan_exp_this_paper\":0.75"));

            let mut json2: *mut c_char = std::ptr::null_mut();
            assert_eq!(
                sidwave_exponent_report_json(3, 2.0, f64::NAN, &mut json2),
                SidwaveStatus::Ok
            );
            let text2 = CStr::from_ptr(json2).to_str().unwrap().to_string();
            sidwave_string_free(json2);
            assert!(text2.contains("\"p\":null"));

            assert_eq!(
                sidwave_exponent_report_json(0, 2.0, 1.5, &mut json),
                SidwaveStatus::InvalidArgument
            );
        }
    }

    #[test]
    fn bad_config_and_null_handles() {
        unsafe {
            let cfg = CString::new("nonsense").unwrap();
            let mut problem: *mut SidwaveProblem = std::ptr::null_mut();
            assert_eq!(
                sidwave_problem_parse(cfg.as_ptr(), &mut problem),
                SidwaveStatus::InvalidArgument
            );
            assert_eq!(
                sidwave_problem_parse(std::ptr::null(), &mut problem),
                SidwaveStatus::NullPointer
            );
            let mut cert: *mut SidwaveCertificate = std::ptr::null_mut();
            assert_eq!(
                sidwave_certificate_compute(std::ptr::null(), &mut cert),
                SidwaveStatus::NullPointer
            );
            assert_eq!(sidwave_trace_len(std::ptr::null()), 0);
            // Frees tolerate null.
            sidwave_problem_free(std::ptr::null_mut());
            sidwave_certificate_free(std::ptr::null_mut());
            sidwave_trace_free(std::ptr::null_mut());
            sidwave_string_free(std::ptr::null_mut());
        }
    }
}
