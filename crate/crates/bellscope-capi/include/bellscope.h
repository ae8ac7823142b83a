/* C interface to the bellscope Bell/CHSH laboratory. Generated by cbindgen; do not edit. */

#ifndef BELLSCOPE_H
#define BELLSCOPE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum BellscopeStatus {
  BellscopeStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  BellscopeStatus_NullPointer = 1,
  /**
   * An argument failed validation (dimension, budget, probability range,
   * unknown model/state name, non-finite angle).
   */
  BellscopeStatus_InvalidArgument = 2,
  /**
   * A string argument was not valid UTF-8.
   */
  BellscopeStatus_InvalidUtf8 = 3,
  /**
   * The provided buffer is too small.
   */
  BellscopeStatus_BufferTooSmall = 4,
  /**
   * An internal invariant failed.
   */
  BellscopeStatus_InternalError = 5,
} BellscopeStatus;

/**
 * Commutation regime selector.
 */
typedef enum BellscopeRegime {
  BellscopeRegime_Classical = 0,
  BellscopeRegime_Tensor = 1,
  BellscopeRegime_Global = 2,
} BellscopeRegime;

/**
 * Observable spectrum class selector.
 */
typedef enum BellscopeSpectrumClass {
  BellscopeSpectrumClass_Dichotomic = 0,
  BellscopeSpectrumClass_Contraction = 1,
} BellscopeSpectrumClass;

/**
 * Two-particle state selector.
 */
typedef enum BellscopeState {
  BellscopeState_Singlet = 0,
  BellscopeState_Photon = 1,
} BellscopeState;

/**
 * Opaque handle to a bound-search result; release with
 * [`bellscope_bound_result_free`].
 */
typedef struct BellscopeBoundResult BellscopeBoundResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *bellscope_version(void);

/**
 * Human-readable name of a status code (static storage).
 */
const char *bellscope_status_name(enum BellscopeStatus status);

/**
 * Run the multi-start bound search (brute force in the classical regime).
 *
 * `dim` is the per-factor dimension in the tensor regime and the total
 * dimension otherwise; pass 0 for `restarts`, `max_iters` to use defaults.
 * On success `*out` owns a fresh handle.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BellscopeStatus bellscope_bounds_run(enum BellscopeRegime regime,
                                          size_t dim,
                                          size_t restarts,
                                          size_t max_iters,
                                          uint64_t seed,
                                          enum BellscopeSpectrumClass spectrum_class,
                                          struct BellscopeBoundResult **out);

/**
 * Classical brute-force maximum (always exactly 2).
 */
double bellscope_classical_max(void);

/**
 * # Safety
 * `result` must be a live handle from [`bellscope_bounds_run`].
 */
double bellscope_bound_result_best_value(const struct BellscopeBoundResult *result);

/**
 * Regime ceiling (2, 2*sqrt(2) or 2*sqrt(3)) for the result's regime.
 *
 * # Safety
 * `result` must be a live handle from [`bellscope_bounds_run`].
 */
double bellscope_bound_result_ceiling(const struct BellscopeBoundResult *result);

/**
 * Whether the best value respects the regime ceiling; false is a
 * falsification event.
 *
 * # Safety
 * `result` must be a live handle from [`bellscope_bounds_run`].
 */
bool bellscope_bound_result_ceiling_respected(const struct BellscopeBoundResult *result);

/**
 * Largest lambda_max(B'B) observed on any evaluated iterate.
 *
 * # Safety
 * `result` must be a live handle from [`bellscope_bounds_run`].
 */
double bellscope_bound_result_max_bstarb(const struct BellscopeBoundResult *result);

/**
 * Total ascent iterations across restarts.
 *
 * # Safety
 * `result` must be a live handle from [`bellscope_bounds_run`].
 */
size_t bellscope_bound_result_iterations(const struct BellscopeBoundResult *result);

/**
 * Number of per-restart values available.
 *
 * # Safety
 * `result` must be a live handle from [`bellscope_bounds_run`].
 */
size_t bellscope_bound_result_restart_count(const struct BellscopeBoundResult *result);

/**
 * Copy the per-restart values (restart order) into `buffer`.
 *
 * # Safety
 * `result` must be a live handle and `buffer` must point to at least `len`
 * doubles.
 */
enum BellscopeStatus bellscope_bound_result_restart_values(const struct BellscopeBoundResult *result,
                                                           double *buffer,
                                                           size_t len);

/**
 * Release a bound-result handle. Null is a no-op.
 *
 * # Safety
 * `result` must be null or a handle from [`bellscope_bounds_run`] that has
 * not been freed yet.
 */
void bellscope_bound_result_free(struct BellscopeBoundResult *result);

/**
 * Quantum correlator `E(alpha, beta)` for a built-in state.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BellscopeStatus bellscope_quantum_correlation(enum BellscopeState state,
                                                   double alpha,
                                                   double beta,
                                                   double *out);

/**
 * Quantum CHSH value at the four orientations.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BellscopeStatus bellscope_quantum_chsh(enum BellscopeState state,
                                            double alpha1,
                                            double alpha2,
                                            double beta1,
                                            double beta2,
                                            double *out);

/**
 * Hidden-variable CHSH by quadrature for a built-in model
 * (sign-cos, constant, smooth-cos).
 *
 * # Safety
 * `model` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BellscopeStatus bellscope_lhv_chsh_quadrature(const char *model,
                                                   double alpha1,
                                                   double alpha2,
                                                   double beta1,
                                                   double beta2,
                                                   size_t nodes,
                                                   double *out);

/**
 * Hidden-variable CHSH by seeded Monte Carlo; also reports the aggregated
 * standard error when `out_stderr` is non-null.
 *
 * # Safety
 * `model` must be a NUL-terminated string and `out_value` a valid pointer.
 */
enum BellscopeStatus bellscope_lhv_chsh_monte_carlo(const char *model,
                                                    double alpha1,
                                                    double alpha2,
                                                    double beta1,
                                                    double beta2,
                                                    size_t samples,
                                                    uint64_t seed,
                                                    double *out_value,
                                                    double *out_stderr);

/**
 * Quadrature residue of the identically-zero reordering expression.
 *
 * # Safety
 * `model` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BellscopeStatus bellscope_lhv_zero_expression_residue(const char *model,
                                                           double alpha1,
                                                           double alpha2,
                                                           double beta1,
                                                           double beta2,
                                                           size_t nodes,
                                                           double *out);

/**
 * Boole union bounds `[max p_i, min(1, sum p_i)]`.
 *
 * # Safety
 * `probs` must point to `n` doubles; `out_lo`/`out_hi` must be valid.
 */
enum BellscopeStatus bellscope_boole_union_bounds(const double *probs,
                                                  size_t n,
                                                  double *out_lo,
                                                  double *out_hi);

/**
 * Boole intersection bounds `[max(0, sum p_i - n + 1), min p_i]`.
 *
 * # Safety
 * `probs` must point to `n` doubles; `out_lo`/`out_hi` must be valid.
 */
enum BellscopeStatus bellscope_boole_intersection_bounds(const double *probs,
                                                         size_t n,
                                                         double *out_lo,
                                                         double *out_hi);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BELLSCOPE_H */
