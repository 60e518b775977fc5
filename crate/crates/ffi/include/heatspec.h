#ifndef HEATSPEC_H
#define HEATSPEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HsBoundaryCondition {
  HS_BOUNDARY_CONDITION_DIRICHLET = 0,
  HS_BOUNDARY_CONDITION_NEUMANN = 1,
  HS_BOUNDARY_CONDITION_ABSOLUTE = 2,
  HS_BOUNDARY_CONDITION_RELATIVE = 3,
} HsBoundaryCondition;

typedef enum HsPair {
  HS_PAIR_DIRICHLET_NEUMANN = 0,
  HS_PAIR_ABSOLUTE01 = 1,
  HS_PAIR_RELATIVE01 = 2,
} HsPair;

typedef enum HsStatus {
  HS_STATUS_OK = 0,
  HS_STATUS_NULL_POINTER = 1,
  HS_STATUS_INVALID_ARGUMENT = 2,
  HS_STATUS_UNSUPPORTED = 3,
  HS_STATUS_NUMERIC_PRECONDITION = 4,
  HS_STATUS_HYPOTHESIS_VIOLATION = 5,
  HS_STATUS_INCONSISTENT = 6,
  HS_STATUS_BUFFER_TOO_SMALL = 7,
  HS_STATUS_PANIC = 8,
} HsStatus;

/**
 * A model manifold.
 */
typedef struct HsModel HsModel;

/**
 * A truncated spectrum.
 */
typedef struct HsSpectrum HsSpectrum;

/**
 * Boundary invariants and classification flags, as floats.
 */
typedef struct HsClassification {
  double i0;
  double i1;
  double i2;
  double vol_dm;
  bool totally_geodesic;
  bool minimal;
  bool totally_umbilic;
  bool strongly_totally_umbilic;
  /**
   * Meaningful only when `has_mu`.
   */
  double mu;
  bool has_mu;
} HsClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the
 * next call into this library from the same thread.
 */
const char *hs_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 */
void hs_string_free(char *s);

/**
 * Parses `disk:radius=1`, `cylinder:height=pi,radius=1`, `hemisphere`,
 * `interval:length=pi`.
 */
enum HsStatus hs_model_new(const char *spec, struct HsModel **out);

void hs_model_free(struct HsModel *model);

enum HsStatus hs_model_dimension(const struct HsModel *model, size_t *out);

/**
 * `a₀..a₃` of `Δ_p` with condition `bc`, as floats.
 */
enum HsStatus hs_heat_coefficients(const struct HsModel *model,
                                   size_t p,
                                   enum HsBoundaryCondition condition,
                                   double *out);

/**
 * The same coefficients as exact JSON; free with [`hs_string_free`].
 */
enum HsStatus hs_heat_coefficients_json(const struct HsModel *model,
                                        size_t p,
                                        enum HsBoundaryCondition condition,
                                        char **out);

/**
 * Determinant of the exact coefficient matrix of `pair` in dimension `m`.
 */
enum HsStatus hs_pair_determinant(enum HsPair which, size_t m, int64_t *num, int64_t *den);

/**
 * Eigenvalues of `Δ_p` below `lambda_max` on a model.
 */
enum HsStatus hs_spectrum_new(const struct HsModel *model,
                              size_t p,
                              enum HsBoundaryCondition condition,
                              double lambda_max,
                              struct HsSpectrum **out);

/**
 * Reads `lambda,multiplicity` text of a dimension-`m` operator.
 * `lambda_max <= 0` takes the largest eigenvalue read.
 */
enum HsStatus hs_spectrum_from_csv(const char *text,
                                   size_t m,
                                   double lambda_max,
                                   struct HsSpectrum **out);

void hs_spectrum_free(struct HsSpectrum *spectrum);

/**
 * Number of distinct eigenvalues.
 */
enum HsStatus hs_spectrum_len(const struct HsSpectrum *spectrum, size_t *out);

enum HsStatus hs_spectrum_entry(const struct HsSpectrum *spectrum,
                                size_t index,
                                double *lambda,
                                uint64_t *multiplicity);

/**
 * Least-squares fit of the first `n_terms` heat coefficients on a
 * geometric grid of `samples` times in `[t_min, t_max]`. `out` receives
 * `n_terms` values; `condition` may be NULL.
 */
enum HsStatus hs_fit(const struct HsSpectrum *spectrum,
                     double t_min,
                     double t_max,
                     size_t samples,
                     size_t n_terms,
                     double *out,
                     size_t out_len,
                     double *condition);

/**
 * Boundary invariants recovered exactly from a model's closed-form
 * coefficients for `which`.
 */
enum HsStatus hs_classify_model(const struct HsModel *model,
                                enum HsPair which,
                                struct HsClassification *out);

/**
 * Fits both spectra of `which` (first and second member, in order) and
 * recovers the invariants. `tau` is `tau_num / tau_den`; `tol_rel <= 0`
 * uses the default fitted tolerance.
 */
enum HsStatus hs_classify_spectra(const struct HsSpectrum *first,
                                  const struct HsSpectrum *second,
                                  enum HsPair which,
                                  size_t m,
                                  int64_t tau_num,
                                  int64_t tau_den,
                                  double tol_rel,
                                  struct HsClassification *out);

/**
 * Exact transfer report between two models as JSON; free with
 * [`hs_string_free`].
 */
enum HsStatus hs_compare_models_json(const struct HsModel *a,
                                     const struct HsModel *b,
                                     enum HsPair which,
                                     char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEATSPEC_H */
