/* C interface for the sidwave laboratory.
 * Generated by cbindgen; do not edit by hand. */

#ifndef SIDWAVE_H
#define SIDWAVE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Equation formulation selector.
 */
typedef enum SidwaveForm {
  SidwaveForm_Original = 0,
  SidwaveForm_Liouville = 1,
} SidwaveForm;

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum SidwaveStatus {
  SidwaveStatus_Ok = 0,
  SidwaveStatus_NullPointer = 1,
  SidwaveStatus_InvalidArgument = 2,
  SidwaveStatus_InvalidUtf8 = 3,
  SidwaveStatus_ComputeFailed = 4,
  SidwaveStatus_NoBlowup = 5,
  SidwaveStatus_BufferTooSmall = 6,
} SidwaveStatus;

/**
 * Trace column selector for [`sidwave_trace_column`].
 */
typedef enum SidwaveTraceColumn {
  SidwaveTraceColumn_Time = 0,
  SidwaveTraceColumn_G = 1,
  SidwaveTraceColumn_G1 = 2,
  SidwaveTraceColumn_Lp = 3,
  SidwaveTraceColumn_MaxAbsU = 4,
  SidwaveTraceColumn_KeyResidual = 5,
  SidwaveTraceColumn_SupportRadius = 6,
} SidwaveTraceColumn;

/**
 * Opaque certificate handle.
 */
typedef struct SidwaveCertificate SidwaveCertificate;

/**
 * Opaque problem handle.
 */
typedef struct SidwaveProblem SidwaveProblem;

/**
 * Opaque solve-trace handle.
 */
typedef struct SidwaveTrace SidwaveTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * γ(p, d) = 2 + (d+1)p − (d−1)p².
 *
 * # Safety
 * `out` must be valid for writing one f64.
 */
enum SidwaveStatus sidwave_gamma(double p, double d, double *out);

/**
 * Strauss exponent p_S(d), the positive root of γ(·, d).
 *
 * # Safety
 * `out` must be valid for writing one f64.
 */
enum SidwaveStatus sidwave_strauss_exponent(double d, double *out);

/**
 * Fujita exponent p_F(n) = 1 + 2/n.
 *
 * # Safety
 * `out` must be valid for writing one f64.
 */
enum SidwaveStatus sidwave_fujita_exponent(uint32_t n, double *out);

/**
 * Damping threshold μ*(n) = (n²+n+2)/(n+2).
 *
 * # Safety
 * `out` must be valid for writing one f64.
 */
enum SidwaveStatus sidwave_mu_star(uint32_t n, double *out);

/**
 * Modified Bessel function of the second kind K_ν(t), t > 0.
 *
 * # Safety
 * `out` must be valid for writing one f64.
 */
enum SidwaveStatus sidwave_bessel_k(double nu, double t, double *out);

/**
 * ln K_ν(t); stays finite where K itself underflows.
 *
 * # Safety
 * `out` must be valid for writing one f64.
 */
enum SidwaveStatus sidwave_log_bessel_k(double nu, double t, double *out);

/**
 * Temporal weight λ(t) = (1+t)^((μ+1)/2)·K_((μ−1)/2)(1+t).
 *
 * # Safety
 * `out` must be valid for writing one f64.
 */
enum SidwaveStatus sidwave_lambda(double mu, double t, double *out);

/**
 * λ'(t) through the Bessel derivative identity.
 *
 * # Safety
 * `out` must be valid for writing one f64.
 */
enum SidwaveStatus sidwave_lambda_prime(double mu, double t, double *out);

/**
 * Radial eigenfunction φ(r) of Δφ = φ in dimension n ≥ 2.
 *
 * # Safety
 * `out` must be valid for writing one f64.
 */
enum SidwaveStatus sidwave_phi_radial(uint32_t n, double r, double *out);

/**
 * ln φ(r); stays finite at large r.
 *
 * # Safety
 * `out` must be valid for writing one f64.
 */
enum SidwaveStatus sidwave_log_phi_radial(uint32_t n, double r, double *out);

/**
 * Test function ψ(t, r) = λ(t)·φ(r).
 *
 * # Safety
 * `out` must be valid for writing one f64.
 */
enum SidwaveStatus sidwave_psi(double mu, uint32_t n, double t, double r, double *out);

/**
 * Exponent report as a JSON string (field names match the CLI output).
 * Pass NaN for `p` to omit the p-dependent entries.
 *
 * # Safety
 * `out` must be valid for writing one pointer; release the string with
 * [`sidwave_string_free`].
 */
enum SidwaveStatus sidwave_exponent_report_json(uint32_t n, double mu, double p, char **out);

/**
 * Releases a string allocated by this library.
 *
 * # Safety
 * `s` must have been returned by a sidwave function and not yet freed.
 */
void sidwave_string_free(char *s);

/**
 * Parses the flat key-value problem config (same format as the CLI).
 *
 * # Safety
 * `config` must be a NUL-terminated string; `out` valid for one pointer.
 * Release the handle with [`sidwave_problem_free`].
 */
enum SidwaveStatus sidwave_problem_parse(const char *config, struct SidwaveProblem **out);

/**
 * # Safety
 * `problem` must come from [`sidwave_problem_parse`] and not be used
 * after this call.
 */
void sidwave_problem_free(struct SidwaveProblem *problem);

/**
 * Computes the full blow-up certificate for a problem.
 *
 * # Safety
 * `problem` must be a live handle; `out` valid for one pointer. Release
 * with [`sidwave_certificate_free`].
 */
enum SidwaveStatus sidwave_certificate_compute(const struct SidwaveProblem *problem,
                                               struct SidwaveCertificate **out);

/**
 * # Safety
 * `cert` must come from [`sidwave_certificate_compute`] and not be used
 * after this call.
 */
void sidwave_certificate_free(struct SidwaveCertificate *cert);

/**
 * The certified lifespan threshold at one ε.
 *
 * # Safety
 * `cert` must be a live handle; `out` valid for one f64.
 */
enum SidwaveStatus sidwave_certificate_threshold(const struct SidwaveCertificate *cert,
                                                 double eps,
                                                 double *out);

/**
 * 2p(p−1)/γ(p, n+μ), the power of 1/ε in the certified bound.
 *
 * # Safety
 * `cert` must be a live handle; `out` valid for one f64.
 */
enum SidwaveStatus sidwave_certificate_lifespan_exponent(const struct SidwaveCertificate *cert,
                                                         double *out);

/**
 * Full certificate document (constants + provenance) as JSON.
 *
 * # Safety
 * `cert` must be a live handle; `out` valid for one pointer. Release the
 * string with [`sidwave_string_free`].
 */
enum SidwaveStatus sidwave_certificate_json(const struct SidwaveCertificate *cert, char **out);

/**
 * Integrates the problem at one ε (with blow-up diagnostics) and returns
 * the functional trace.
 *
 * # Safety
 * `problem` must be a live handle; `out` valid for one pointer. Release
 * with [`sidwave_trace_free`].
 */
enum SidwaveStatus sidwave_solve(const struct SidwaveProblem *problem,
                                 double eps,
                                 enum SidwaveForm form,
                                 struct SidwaveTrace **out);

/**
 * # Safety
 * `trace` must come from [`sidwave_solve`] and not be used after this
 * call.
 */
void sidwave_trace_free(struct SidwaveTrace *trace);

/**
 * Number of recorded instants in the trace.
 *
 * # Safety
 * `trace` must be a live handle.
 */
uintptr_t sidwave_trace_len(const struct SidwaveTrace *trace);

/**
 * Copies one trace column into `buf` (`len` must be at least
 * [`sidwave_trace_len`]).
 *
 * # Safety
 * `trace` must be a live handle and `buf` valid for writing `len` f64s.
 */
enum SidwaveStatus sidwave_trace_column(const struct SidwaveTrace *trace,
                                        enum SidwaveTraceColumn column,
                                        double *buf,
                                        uintptr_t len);

/**
 * Measured blow-up time of the trace; `NoBlowup` when the run reached
 * t_max without crossing the threshold.
 *
 * # Safety
 * `trace` must be a live handle; `out` valid for one f64.
 */
enum SidwaveStatus sidwave_trace_blowup_time(const struct SidwaveTrace *trace, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIDWAVE_H */
