#ifndef MZI_PARITY_H
#define MZI_PARITY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every call.
typedef enum MzpStatus {
  MZP_STATUS_OK = 0,
  MZP_STATUS_INVALID_ARGUMENT = 1,
  MZP_STATUS_FRAME_ERROR = 2,
  MZP_STATUS_NUMERICAL_LIMIT = 3,
  MZP_STATUS_INTERNAL = 4,
  MZP_STATUS_NULL_POINTER = 5,
  MZP_STATUS_PANIC = 6,
} MzpStatus;

typedef enum MzpFrame {
  MZP_FRAME_AT_INPUT = 0,
  MZP_FRAME_INSIDE_INTERFEROMETER = 1,
} MzpFrame;

// Opaque two-mode state.
typedef struct MzpState MzpState;

typedef struct MzpDetectionResult {
  double phi;
  double expectation;
  double derivative;
  double variance;
  // Positive infinity where the slope vanishes.
  double delta_phi;
} MzpDetectionResult;

typedef struct MzpBenchmarkLimits {
  uint32_t n;
  double shot_noise;
  double heisenberg;
  double bw_povm;
} MzpBenchmarkLimits;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next failing call on the same thread.
const char *mzp_last_error_message(void);

// Build a named state family with `n` photons (`"noon"`, `"pezze-smerzi"`,
// ...). For `"coherent"`, `n` is the mean photon number; `"combined"` needs
// `mzp_state_combined`.
//
// # Safety
// `label` must be a NUL-terminated string and `out` a writable pointer.
enum MzpStatus mzp_state_new(const char *label, uint32_t n, struct MzpState **out);

// Normalized `alpha |NOON>_in + beta |dual Fock>` with magnitudes
// `alpha_mag`, `beta_mag` and relative phase `theta`.
//
// # Safety
// `out` must be a writable pointer.
enum MzpStatus mzp_state_combined(uint32_t n,
                                  double alpha_mag,
                                  double beta_mag,
                                  double theta,
                                  struct MzpState **out);

// Coherent state with mean photon number `nbar` in mode a, truncated once
// the discarded Poisson tail drops below `tail_bound`.
//
// # Safety
// `out` must be a writable pointer.
enum MzpStatus mzp_state_coherent(double nbar,
                                  double phase,
                                  double tail_bound,
                                  struct MzpState **out);

// # Safety
// `state` must be null or a handle from this library not yet freed.
void mzp_state_free(struct MzpState *state);

// # Safety
// `state` must be a live handle and `out` a writable pointer.
enum MzpStatus mzp_state_frame(const struct MzpState *state, enum MzpFrame *out);

// Squared norm and mean photon number.
//
// # Safety
// `state` must be a live handle; the output pointers must be writable.
enum MzpStatus mzp_state_moments(const struct MzpState *state,
                                 double *norm_sqr,
                                 double *mean_photons);

// Full interferometer `exp(-i phi J_y)` on an input-frame state; writes a
// new handle.
//
// # Safety
// `state` must be a live handle and `out` a writable pointer.
enum MzpStatus mzp_apply_mzi(const struct MzpState *state, double phi, struct MzpState **out);

// 50:50 beam splitter (`inverse` selects the second one); toggles the frame.
//
// # Safety
// `state` must be a live handle and `out` a writable pointer.
enum MzpStatus mzp_apply_beam_splitter(const struct MzpState *state,
                                       bool inverse,
                                       struct MzpState **out);

// Phase shifter `exp(-i phi J_z)` on an inside-frame state.
//
// # Safety
// `state` must be a live handle and `out` a writable pointer.
enum MzpStatus mzp_apply_phase_shifter(const struct MzpState *state,
                                       double phi,
                                       struct MzpState **out);

// # Safety
// `state` must be a live handle and `out` a writable pointer.
enum MzpStatus mzp_parity_expectation(const struct MzpState *state, double phi, double *out);

// # Safety
// `state` must be a live handle and `out` a writable pointer.
enum MzpStatus mzp_parity_derivative(const struct MzpState *state, double phi, double *out);

// # Safety
// `state` must be a live handle and `out` a writable pointer.
enum MzpStatus mzp_phase_uncertainty(const struct MzpState *state,
                                     double phi,
                                     struct MzpDetectionResult *out);

// Phase uncertainty in the `phi -> 0` limit.
//
// # Safety
// `state` must be a live handle and `out` a writable pointer.
enum MzpStatus mzp_phase_uncertainty_limit(const struct MzpState *state, double *out);

// # Safety
// `out` must be a writable pointer.
enum MzpStatus mzp_benchmark_limits(uint32_t n, struct MzpBenchmarkLimits *out);

// Wigner element `d^j_{mu', mu}(theta)` with doubled labels.
//
// # Safety
// `out` must be a writable pointer.
enum MzpStatus mzp_d_element(int32_t two_j,
                             int32_t two_mu_p,
                             int32_t two_mu,
                             double theta,
                             double *out);

// `d/dtheta d^j_{mu', mu}(theta)` with doubled labels.
//
// # Safety
// `out` must be a writable pointer.
enum MzpStatus mzp_d_derivative(int32_t two_j,
                                int32_t two_mu_p,
                                int32_t two_mu,
                                double theta,
                                double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MZI_PARITY_H */
