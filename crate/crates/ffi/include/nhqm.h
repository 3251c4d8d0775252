#ifndef NHQM_H
#define NHQM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NhqmStatus {
  NHQM_STATUS_OK = 0,
  NHQM_STATUS_NULL_POINTER = 1,
  NHQM_STATUS_INVALID_ARGUMENT = 2,
  NHQM_STATUS_NUMERICAL_FAILURE = 3,
  NHQM_STATUS_PANIC = 4,
} NhqmStatus;

typedef enum NhqmDeformation {
  NHQM_DEFORMATION_NONE = 0,
  NHQM_DEFORMATION_SHIFT = 1,
  NHQM_DEFORMATION_SCALE = 2,
} NhqmDeformation;

/**
 * Opaque biorthogonal eigensystem.
 */
typedef struct NhqmDecomposition NhqmDecomposition;

/**
 * Opaque Hamiltonian family with its truncation.
 */
typedef struct NhqmModel NhqmModel;

/**
 * Metric residuals; NaN where a residual is undefined for the model.
 */
typedef struct NhqmResiduals {
  double jh;
  double qh;
  double bender;
  double jqj;
} NhqmResiduals;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *nhqm_version(void);

/**
 * Message of the last failed call on this thread, or NULL after a success.
 *
 * The pointer stays valid until the next call into the library on the
 * same thread.
 */
const char *nhqm_last_error(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum NhqmStatus nhqm_model_harmonic(size_t dim, struct NhqmModel **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum NhqmStatus nhqm_model_extended_oscillator(double beta, size_t dim, struct NhqmModel **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum NhqmStatus nhqm_model_swanson(double theta, size_t dim, struct NhqmModel **out);

/**
 * Grid model on `(−half_width, half_width)` with `points` interior nodes;
 * `parameter` is α for a shift and θ for a scale and ignored otherwise.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NhqmStatus nhqm_model_poeschl_teller(double gamma,
                                          enum NhqmDeformation deformation,
                                          double parameter,
                                          double half_width,
                                          size_t points,
                                          struct NhqmModel **out);

/**
 * # Safety
 * `model` must come from a constructor above and not be used afterwards.
 */
void nhqm_model_free(struct NhqmModel *model);

/**
 * # Safety
 * `model` must be a live handle and `dim` valid for writes.
 */
enum NhqmStatus nhqm_model_dim(const struct NhqmModel *model, size_t *dim);

/**
 * Lowest `capacity` eigenvalues, ascending by real part; for Pöschl-Teller
 * grids only the bound states. `im` may be NULL.
 *
 * # Safety
 * `re` (and `im` if not NULL) must hold `capacity` doubles; `written` must
 * be valid for writes.
 */
enum NhqmStatus nhqm_spectrum(const struct NhqmModel *model,
                              size_t capacity,
                              double *re,
                              double *im,
                              size_t *written);

/**
 * Exact spectrum of the untruncated model, lowest `capacity` values.
 *
 * # Safety
 * `values` must hold `capacity` doubles; `written` must be valid for writes.
 */
enum NhqmStatus nhqm_analytic_spectrum(const struct NhqmModel *model,
                                       size_t capacity,
                                       double *values,
                                       size_t *written);

/**
 * Residuals of the closed-form metric against the model Hamiltonian.
 *
 * # Safety
 * `model` must be a live handle and `residuals` valid for writes.
 */
enum NhqmStatus nhqm_metric_residuals(const struct NhqmModel *model,
                                      struct NhqmResiduals *residuals);

/**
 * Full biorthogonal eigensystem of the model Hamiltonian.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum NhqmStatus nhqm_decompose(const struct NhqmModel *model, struct NhqmDecomposition **out);

/**
 * # Safety
 * `d` must come from [`nhqm_decompose`] and not be used afterwards.
 */
void nhqm_decomposition_free(struct NhqmDecomposition *d);

/**
 * # Safety
 * `d` must be a live handle and `len` valid for writes.
 */
enum NhqmStatus nhqm_decomposition_len(const struct NhqmDecomposition *d, size_t *len);

/**
 * # Safety
 * `d` must be a live handle; `re` and `im` valid for writes.
 */
enum NhqmStatus nhqm_decomposition_eigenvalue(const struct NhqmDecomposition *d,
                                              size_t index,
                                              double *re,
                                              double *im);

/**
 * `max |⟨L_i|R_j⟩ − δ_ij|` over the lowest `k` pairs.
 *
 * # Safety
 * `d` must be a live handle and `defect` valid for writes.
 */
enum NhqmStatus nhqm_decomposition_biorthogonality(const struct NhqmDecomposition *d,
                                                   size_t k,
                                                   double *defect);

/**
 * Runs a CLI subcommand (`spectrum`, `metric`, `converge`, `probability`)
 * on a JSON config with the same fields as the command line and returns
 * the rendered report. Free the result with [`nhqm_string_free`].
 *
 * # Safety
 * `command` and `config_json` must be NUL-terminated; `report` must be
 * valid for writes.
 */
enum NhqmStatus nhqm_run(const char *command, const char *config_json, char **report);

/**
 * # Safety
 * `s` must come from [`nhqm_run`] and not be used afterwards.
 */
void nhqm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NHQM_H */
