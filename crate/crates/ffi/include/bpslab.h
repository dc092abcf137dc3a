/* C interface to the bpslab library. Regenerated by the crate build script. */

#ifndef BPSLAB_H
#define BPSLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes, aligned with the CLI exit-code contract.
 */
enum BpsStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  BPS_STATUS_OK = 0,
  BPS_STATUS_INTERNAL = 1,
  BPS_STATUS_INVALID_INPUT = 2,
  BPS_STATUS_RESOURCE_LIMIT = 3,
  BPS_STATUS_NUMERIC_FAILURE = 4,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum BpsStatus BpsStatus;
#else
typedef int32_t BpsStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Opaque handle to a divisor-summatory evaluator with an optional cache.
 */
typedef struct BpsDeltaEvaluator BpsDeltaEvaluator;

/**
 * Opaque handle to a validated multiplicative-function description.
 */
typedef struct BpsSpec BpsSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *bps_last_error_message(void);

/**
 * Create a spec from a preset name: "parity", "example1", "example2",
 * "one", or "qperiodic:`<q>`".
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be a valid pointer.
 */
BpsStatus bps_spec_preset(const char *name, struct BpsSpec **out);

/**
 * Create a spec from its JSON description, e.g.
 * `{"exceptional":[{"p":3,"values":[[2,0],[-15,0],[0,0]]}]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be a valid pointer.
 */
BpsStatus bps_spec_from_json(const char *json, struct BpsSpec **out);

/**
 * Destroy a spec handle. Passing NULL is a no-op.
 *
 * # Safety
 * `spec` must be NULL or a pointer earlier returned by a constructor, not
 * yet freed.
 */
void bps_spec_free(struct BpsSpec *spec);

/**
 * The period m = prod p^a.
 *
 * # Safety
 * `spec` must be a live handle; `out` must be valid.
 */
BpsStatus bps_spec_period(const struct BpsSpec *spec, uint64_t *out);

/**
 * f(n), split into real and imaginary parts. Requires n >= 1.
 *
 * # Safety
 * `spec` must be a live handle; out-pointers must be valid.
 */
BpsStatus bps_spec_evaluate(const struct BpsSpec *spec, uint64_t n, double *out_re, double *out_im);

/**
 * The Euler factor sum_k f(q^k)/q^k at s = 1 for a prime q.
 *
 * # Safety
 * `spec` must be a live handle; out-pointers must be valid.
 */
BpsStatus bps_spec_euler_factor(const struct BpsSpec *spec,
                                uint64_t q,
                                double *out_re,
                                double *out_im);

/**
 * Whether some Euler factor at a prime dividing the period vanishes within
 * `tolerance` (the bounded-partial-sums criterion).
 *
 * # Safety
 * `spec` must be a live handle; `out_holds` must be valid.
 */
BpsStatus bps_spec_condition_i(const struct BpsSpec *spec, double tolerance, bool *out_holds);

/**
 * Sum of f over one period via phi(m) times the Euler-factor product.
 *
 * # Safety
 * `spec` must be a live handle; out-pointers must be valid.
 */
BpsStatus bps_spec_period_sum(const struct BpsSpec *spec, double *out_re, double *out_im);

/**
 * Exact D(x) = sum_{n<=x} tau(n) by the hyperbola formula.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
BpsStatus bps_tau_summatory(double x, uint64_t *out);

/**
 * Delta(x) = D(x) - x log x - (2 gamma - 1) x, for x >= 1.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
BpsStatus bps_delta(double x, double *out);

/**
 * The factor q^(3/2) - 2 q^(3/4) - 1; total, so no status code.
 */
double bps_lambda(double q);

/**
 * Mean-square constant of Delta: series estimate up to n_max, the
 * zeta-identity reference value, and the truncation bracket.
 *
 * # Safety
 * Out-pointers must be valid.
 */
BpsStatus bps_tong(uint64_t n_max,
                   double budget_gib,
                   double *out_series,
                   double *out_zeta,
                   double *out_bracket);

/**
 * Create an evaluator caching D(k) for k <= cache_limit (pass 0 for no
 * cache) under the given memory budget in GiB.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
BpsStatus bps_evaluator_new(uint64_t cache_limit,
                            double budget_gib,
                            struct BpsDeltaEvaluator **out);

/**
 * Destroy an evaluator handle. Passing NULL is a no-op.
 *
 * # Safety
 * `evaluator` must be NULL or a live handle, not yet freed.
 */
void bps_evaluator_free(struct BpsDeltaEvaluator *evaluator);

/**
 * Exact L2[1, X] norm of Delta(x/n); requires X > n >= 1.
 *
 * # Safety
 * `evaluator` must be a live handle; `out` must be valid.
 */
BpsStatus bps_l2_norm_delta(const struct BpsDeltaEvaluator *evaluator,
                            uint64_t n,
                            double x_end,
                            double *out);

/**
 * n <= x coprime to m with maximal divisor count; writes the witness, its
 * tau, and the ratio against exp(log 2 * log x / log log x) (NaN for x < 30).
 *
 * # Safety
 * Out-pointers must be valid.
 */
BpsStatus bps_omega_witness(uint64_t m,
                            uint64_t x,
                            uint64_t *out_n,
                            uint64_t *out_tau,
                            double *out_ratio);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BPSLAB_H */
