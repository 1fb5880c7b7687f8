#ifndef LSBEC_H
#define LSBEC_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum LsStatus {
  LS_STATUS_OK = 0,
  LS_STATUS_NULL_POINTER = 1,
  LS_STATUS_INVALID_ARGUMENT = 2,
  LS_STATUS_EMPTY_SPECTRUM = 3,
  LS_STATUS_DOMAIN = 4,
  LS_STATUS_VOID_TRIAL_STATE = 5,
  LS_STATUS_ABOVE_CRITICAL_DENSITY = 6,
  LS_STATUS_INFEASIBLE_THERMO = 7,
  LS_STATUS_INTERNAL = 8,
  LS_STATUS_PANIC = 9,
} LsStatus;

/**
 * Opaque disorder realization.
 */
typedef struct LsRealization LsRealization;

/**
 * Opaque spectrum.
 */
typedef struct LsSpectrum LsSpectrum;

/**
 * Condensate summary of a canonical ideal gas.
 */
typedef struct LsCondensate {
  double log_partition;
  double ground_energy;
  double ground_occupation;
  double condensate_density;
  double condensate_fraction;
  double grand_canonical_mu;
  /**
   * 1 when the spectrum tail weight is below tolerance.
   */
  int32_t converged;
} LsCondensate;

/**
 * Trial-state energy pieces.
 */
typedef struct LsTrialEnergy {
  uint64_t count_q;
  double kinetic_per_particle;
  double interaction_per_particle;
} LsTrialEnergy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread. Valid until the next
 * failing call on the same thread; never null.
 */
const char *ls_last_error_message(void);

/**
 * Samples a realization on `(-box_length/2, box_length/2)`.
 *
 * # Safety
 * `out_handle` must be a valid pointer to writable storage.
 */
enum LsStatus ls_realization_sample(double intensity,
                                    double box_length,
                                    uint64_t base_seed,
                                    uint64_t realization_index,
                                    struct LsRealization **out_handle);

/**
 * Releases a realization. Null is ignored.
 *
 * # Safety
 * `handle` must come from `ls_realization_sample` and not be freed twice.
 */
void ls_realization_free(struct LsRealization *handle);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LsStatus ls_realization_point_count(const struct LsRealization *handle, size_t *out_count);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LsStatus ls_realization_interval_count(const struct LsRealization *handle, size_t *out_count);

/**
 * Copies up to `capacity` sorted points into `buffer`; `out_written` gets
 * the number copied.
 *
 * # Safety
 * `buffer` must hold `capacity` doubles; other pointers must be valid.
 */
enum LsStatus ls_realization_points(const struct LsRealization *handle,
                                    double *buffer,
                                    size_t capacity,
                                    size_t *out_written);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LsStatus ls_realization_longest_interval(const struct LsRealization *handle,
                                              double *out_length,
                                              size_t *out_index);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LsStatus ls_realization_count_at_least(const struct LsRealization *handle,
                                            double threshold,
                                            size_t *out_count);

/**
 * Builds the spectrum below `energy_cutoff`, or the converged spectrum for
 * `beta` when `energy_cutoff` is not positive.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LsStatus ls_spectrum_build(const struct LsRealization *realization,
                                double energy_cutoff,
                                double beta,
                                struct LsSpectrum **out_handle);

/**
 * Releases a spectrum. Null is ignored.
 *
 * # Safety
 * `handle` must come from `ls_spectrum_build` and not be freed twice.
 */
void ls_spectrum_free(struct LsSpectrum *handle);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LsStatus ls_spectrum_len(const struct LsSpectrum *handle, size_t *out_len);

/**
 * Copies up to `capacity` ascending energies into `buffer`.
 *
 * # Safety
 * `buffer` must hold `capacity` doubles; other pointers must be valid.
 */
enum LsStatus ls_spectrum_energies(const struct LsSpectrum *handle,
                                   double *buffer,
                                   size_t capacity,
                                   size_t *out_written);

/**
 * Canonical condensate summary for `particle_number` bosons (at most 20000).
 *
 * # Safety
 * Pointers must be valid.
 */
enum LsStatus ls_condensate(const struct LsSpectrum *spectrum,
                            double beta,
                            uint64_t particle_number,
                            struct LsCondensate *out_result);

/**
 * Bracket `[ν⁻¹(ln L − (1+ε) ln ln L), α ν⁻¹ ln L]` for the longest interval.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LsStatus ls_longest_interval_bracket(double intensity,
                                          double box_length,
                                          double epsilon,
                                          double alpha,
                                          double *out_lower,
                                          double *out_upper);

/**
 * `α² ν⁻² ln²L / (a² L)`.
 *
 * # Safety
 * `out_value` must be valid.
 */
enum LsStatus ls_hard_core_eigenstate_bound(double alpha,
                                            double intensity,
                                            double box_length,
                                            double radius,
                                            double *out_value);

/**
 * `1 / (2 a)`.
 *
 * # Safety
 * `out_value` must be valid.
 */
enum LsStatus ls_critical_density(double radius_sup, double *out_value);

/**
 * `S² / N`.
 *
 * # Safety
 * `out_value` must be valid.
 */
enum LsStatus ls_box_count_criterion(uint64_t support_box_count,
                                     uint64_t particle_number,
                                     double *out_value);

/**
 * Writes 1 when `gamma ≥ 1/3 − alpha_exp`, else 0.
 *
 * # Safety
 * `out_flag` must be valid.
 */
enum LsStatus ls_localization_criterion(double gamma, double alpha_exp, int32_t *out_flag);

/**
 * `ν N / (4 e^{3ν} ρ)`.
 *
 * # Safety
 * `out_value` must be valid.
 */
enum LsStatus ls_long_interval_threshold(double intensity,
                                         double density,
                                         double particle_number,
                                         double *out_value);

/**
 * Trial-state energy on a realization.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LsStatus ls_trial_state_energy(const struct LsRealization *realization,
                                    uint64_t particle_number,
                                    double interaction_l1_norm,
                                    struct LsTrialEnergy *out_result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LSBEC_H */
