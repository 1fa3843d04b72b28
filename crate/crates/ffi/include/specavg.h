#ifndef SPECAVG_H
#define SPECAVG_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum SaStatus {
  SA_STATUS_OK = 0,
  SA_STATUS_NULL_POINTER = 1,
  SA_STATUS_INVALID_ARGUMENT = 2,
  SA_STATUS_DIMENSION_MISMATCH = 3,
  SA_STATUS_NOT_HERMITIAN = 4,
  SA_STATUS_NOT_POSITIVE_SEMIDEFINITE = 5,
  SA_STATUS_NO_CONVERGENCE = 6,
  SA_STATUS_BUFFER_TOO_SMALL = 7,
  SA_STATUS_IO = 8,
  SA_STATUS_PANIC = 9,
} SaStatus;

typedef struct SaIds SaIds;

typedef struct SaMeasure SaMeasure;

typedef struct SaModel SaModel;

typedef struct SaOperator SaOperator;

typedef struct SaPair SaPair;

typedef struct SaProfile SaProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or an empty string. The
 * pointer stays valid until the next failing call on this thread.
 */
const char *sa_last_error_message(void);

/**
 * Hermitian operator from an `n × n` row-major matrix. `im` may be null.
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `n * n` doubles.
 */
enum SaStatus sa_operator_new(size_t n,
                              const double *re,
                              const double *im,
                              struct SaOperator **out);

/**
 * # Safety
 * `op` must be null or a handle from `sa_operator_new` not yet freed.
 */
void sa_operator_free(struct SaOperator *op);

/**
 * # Safety
 * `op` must be a live handle and `out` writable.
 */
enum SaStatus sa_operator_dim(const struct SaOperator *op, size_t *out);

/**
 * Ascending eigenvalues into `buf`, which must hold `dim` values.
 *
 * # Safety
 * `op` must be a live handle; `buf` must point to `cap` writable doubles.
 */
enum SaStatus sa_operator_eigenvalues(const struct SaOperator *op, double *buf, size_t cap);

/**
 * Spectral measure of `op` at the vector `phi` of length `n`.
 *
 * # Safety
 * `op` must be a live handle; `phi_re` (and `phi_im` when non-null) must
 * point to `n` doubles.
 */
enum SaStatus sa_spectral_measure(const struct SaOperator *op,
                                  const double *phi_re,
                                  const double *phi_im,
                                  size_t n,
                                  struct SaMeasure **out);

/**
 * Pair `(A, B)` with `B ≥ 0`. The operators are copied.
 *
 * # Safety
 * `a` and `b` must be live operator handles.
 */
enum SaStatus sa_pair_new(const struct SaOperator *a,
                          const struct SaOperator *b,
                          struct SaPair **out);

/**
 * # Safety
 * `pair` must be null or a live handle.
 */
void sa_pair_free(struct SaPair *pair);

/**
 * Dimension of the cyclic subspace generated by `Range(B)` under `A`.
 *
 * # Safety
 * `pair` must be a live handle and `out` writable.
 */
enum SaStatus sa_pair_cyclicity_rank(const struct SaPair *pair, size_t *out);

/**
 * `‖Φ − P_{Range B} Φ‖`.
 *
 * # Safety
 * `pair` must be a live handle; `phi_re` (and `phi_im` when non-null) must
 * point to `n` doubles.
 */
enum SaStatus sa_pair_range_defect(const struct SaPair *pair,
                                   const double *phi_re,
                                   const double *phi_im,
                                   size_t n,
                                   double *out);

/**
 * Uniform density on `[a, b]`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SaStatus sa_profile_uniform(double a, double b, struct SaProfile **out);

/**
 * Symmetric triangular density on `[a, b]`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SaStatus sa_profile_triangular(double a, double b, struct SaProfile **out);

/**
 * Gaussian density truncated to `[a, b]`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SaStatus sa_profile_truncated_gaussian(double mean,
                                            double sigma,
                                            double a,
                                            double b,
                                            struct SaProfile **out);

/**
 * Piecewise-linear profile through `(knots[i], values[i])`.
 *
 * # Safety
 * `knots` and `values` must point to `len` doubles each.
 */
enum SaStatus sa_profile_table(const double *knots,
                               const double *values,
                               size_t len,
                               struct SaProfile **out);

/**
 * # Safety
 * `profile` must be null or a live handle.
 */
void sa_profile_free(struct SaProfile *profile);

/**
 * Averaged measure `∫ h(t) ρ_{A+tB}^Φ dt` by a composite Gauss rule with
 * `nodes` points on the support of `h`. `range_defect` may be null.
 *
 * # Safety
 * Handles must be live; `phi_re` (and `phi_im` when non-null) must point to
 * `n` doubles.
 */
enum SaStatus sa_average(const struct SaPair *pair,
                         const double *phi_re,
                         const double *phi_im,
                         size_t n,
                         const struct SaProfile *profile,
                         size_t nodes,
                         struct SaMeasure **out,
                         double *range_defect);

/**
 * # Safety
 * `m` must be null or a live handle.
 */
void sa_measure_free(struct SaMeasure *m);

/**
 * Number of atoms.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum SaStatus sa_measure_len(const struct SaMeasure *m, size_t *out);

/**
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum SaStatus sa_measure_total_mass(const struct SaMeasure *m, double *out);

/**
 * Atom locations (increasing) and weights; both buffers hold `cap` values.
 *
 * # Safety
 * `m` must be a live handle; `locations` and `weights` must point to `cap`
 * writable doubles.
 */
enum SaStatus sa_measure_atoms(const struct SaMeasure *m,
                               double *locations,
                               double *weights,
                               size_t cap);

/**
 * Largest mass on an interval of length `eps`.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum SaStatus sa_measure_modulus(const struct SaMeasure *m, double eps, double *out);

/**
 * Random model with couplings drawn from the density `law`. `u` holds
 * `mesh` single-site values or is null for the indicator of a cell.
 *
 * # Safety
 * `law` must be a live handle; `u` must be null or point to `mesh` doubles.
 */
enum SaStatus sa_model_new_density(size_t cells,
                                   size_t mesh,
                                   const double *u,
                                   const struct SaProfile *law,
                                   struct SaModel **out);

/**
 * Random model with couplings taking `values[i]` with probability `probs[i]`.
 *
 * # Safety
 * `u` must be null or point to `mesh` doubles; `values` and `probs` must
 * point to `k` doubles each.
 */
enum SaStatus sa_model_new_discrete(size_t cells,
                                    size_t mesh,
                                    const double *u,
                                    const double *values,
                                    const double *probs,
                                    size_t k,
                                    struct SaModel **out);

/**
 * # Safety
 * `model` must be null or a live handle.
 */
void sa_model_free(struct SaModel *model);

/**
 * Monte Carlo IDS estimate over `samples` draws, binned into `bins` bins.
 * Masses are traces over one cell, so they sum to `mesh`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SaStatus sa_ids_monte_carlo(const struct SaModel *model,
                                 size_t samples,
                                 uint64_t seed,
                                 size_t bins,
                                 struct SaIds **out);

/**
 * Exact IDS over every outcome of a discrete law.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SaStatus sa_ids_enumerate(const struct SaModel *model, size_t bins, struct SaIds **out);

/**
 * # Safety
 * `ids` must be null or a live handle.
 */
void sa_ids_free(struct SaIds *ids);

/**
 * Bin grid: left edge of bin 0, bin width and bin count. Any output may be null.
 *
 * # Safety
 * `ids` must be a live handle.
 */
enum SaStatus sa_ids_grid(const struct SaIds *ids, double *origin, double *width, size_t *count);

/**
 * Per-bin masses and their standard errors; `std_err` may be null.
 *
 * # Safety
 * `ids` must be a live handle; buffers must hold `cap` doubles.
 */
enum SaStatus sa_ids_masses(const struct SaIds *ids, double *masses, double *std_err, size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECAVG_H */
