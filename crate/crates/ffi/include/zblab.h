#ifndef ZBLAB_H
#define ZBLAB_H

/* Generated by cbindgen from crates/ffi/src; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define ZBLAB_VIOLATION_R1_OUTSIDE 1

#define ZBLAB_VIOLATION_R2_INSIDE 2

#define ZBLAB_VIOLATION_R_INSIDE 4

#define ZBLAB_VIOLATION_ESCAPE 8

#define ZBLAB_VIOLATION_VARIANT 16

#define ZBLAB_VARIANT_NONE -1

#define ZBLAB_VARIANT_R_INSIDE_R2 0

#define ZBLAB_VARIANT_R2_INSIDE_R 1

#define ZBLAB_FORMAT_SVG 0

#define ZBLAB_FORMAT_ASCII 1

typedef enum ZblabStatus {
  ZBLAB_STATUS_OK = 0,
  ZBLAB_STATUS_NULL_POINTER = 1,
  ZBLAB_STATUS_INVALID_ARGUMENT = 2,
  ZBLAB_STATUS_ZERO_ENERGY_MODE = 3,
  ZBLAB_STATUS_ZERO_MOMENTUM = 4,
  ZBLAB_STATUS_TOO_LARGE = 5,
  ZBLAB_STATUS_UNRESOLVED_PACKET = 6,
  ZBLAB_STATUS_INSUFFICIENT_SAMPLES = 7,
  ZBLAB_STATUS_NON_POSITIVE_RADIUS = 8,
  ZBLAB_STATUS_INVALID_SCENARIO = 9,
  ZBLAB_STATUS_UNSUPPORTED_FORMAT = 10,
  ZBLAB_STATUS_BUFFER_TOO_SMALL = 11,
  ZBLAB_STATUS_IO = 12,
  ZBLAB_STATUS_INTERNAL = 13,
} ZblabStatus;

// Reading of the transverse annihilation term that passed, or
// `ZBLAB_READING_NONE`.
typedef enum ZblabReading {
  ZBLAB_READING_NONE = -1,
  ZBLAB_READING_AS_PRINTED = 0,
  ZBLAB_READING_RELABELED = 1,
} ZblabReading;

// Opaque decomposition setup for one lattice.
typedef struct ZblabDecomposition ZblabDecomposition;

// Opaque sampled packet trajectory.
typedef struct ZblabTrajectory ZblabTrajectory;

typedef struct ZblabComplex {
  double re;
  double im;
} ZblabComplex;

// Spinors at one momentum: `u[s]` positive energy, `v[s]` negative energy.
typedef struct ZblabSpinorSet {
  double omega;
  struct ZblabComplex u[2][4];
  struct ZblabComplex v[2][4];
} ZblabSpinorSet;

typedef struct ZblabPolarization {
  struct ZblabComplex eta_plus[3];
  struct ZblabComplex eta_zero[3];
  struct ZblabComplex eta_minus[3];
} ZblabPolarization;

typedef struct ZblabPairSpectra {
  double frobenius_sq;
  double transverse_gram[2];
  double longitudinal_gram[2];
} ZblabPairSpectra;

typedef struct ZblabDecompositionResult {
  enum ZblabReading reading;
  // Worst residual with the term as printed.
  double worst_as_printed;
  // Worst residual with the mirrored labels; NaN when not evaluated.
  double worst_relabeled;
  double calibration_residual;
} ZblabDecompositionResult;

typedef struct ZblabPacketParams {
  double k0[3];
  double center[3];
  double sigma;
  struct ZblabComplex w_plus;
  struct ZblabComplex w_minus;
  // 0 = up, 1 = down.
  uint32_t spin;
  double mass;
} ZblabPacketParams;

typedef struct ZblabGridParams {
  size_t points;
  double length;
  // 1 or 3.
  uint8_t dim;
} ZblabGridParams;

typedef struct ZblabSample {
  double t;
  double x[3];
  double j[3];
  double norm;
} ZblabSample;

typedef struct ZblabSpectrum {
  double dominant_frequency;
  double amplitude;
  uint32_t component;
  double fit_residual;
} ZblabSpectrum;

typedef struct ZblabScenario {
  double r_g;
  double r;
  double r1;
  double r2;
  double r_prime;
} ZblabScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *zblab_version(void);

// Message for the last failure on this thread (empty after a success).
// The pointer stays valid until the next call into the library on this
// thread.
const char *zblab_last_error(void);

// Spinors at momentum `k[3]` and mass `mass`. With `helicity` nonzero the
// calibrated helicity basis is returned, otherwise the z-spin basis.
//
// # Safety
// `k` must point to 3 doubles and `out` to writable storage.
enum ZblabStatus zblab_spinors(const double *k,
                               double mass,
                               bool helicity,
                               struct ZblabSpinorSet *out);

// Polarization triad of a nonzero momentum.
//
// # Safety
// `k` must point to 3 doubles and `out` to writable storage.
enum ZblabStatus zblab_polarization(const double *k, struct ZblabPolarization *out);

// Frobenius norm and Gram spectra of the pair amplitudes at `(k, mass)`.
//
// # Safety
// `k` must point to 3 doubles and `out` to writable storage.
enum ZblabStatus zblab_pair_spectra(const double *k, double mass, struct ZblabPairSpectra *out);

// Build the Fock-space setup for a 1D lattice of integer momenta
// `-n_max..n_max` times `spacing`.
//
// # Safety
// `out` must be writable; the handle is released with
// [`zblab_decomposition_free`].
enum ZblabStatus zblab_decomposition_new(double mass,
                                         double spacing,
                                         uint32_t n_max,
                                         bool skip_origin,
                                         struct ZblabDecomposition **out);

// Fock-space dimension of the setup.
//
// # Safety
// `handle` must come from [`zblab_decomposition_new`].
enum ZblabStatus zblab_decomposition_dimension(const struct ZblabDecomposition *handle,
                                               size_t *out);

// Compare the direct current with its three pieces at `n_times` times.
//
// # Safety
// `handle` must come from [`zblab_decomposition_new`]; `times` must point
// to `n_times` doubles.
enum ZblabStatus zblab_decomposition_verify(const struct ZblabDecomposition *handle,
                                            const double *times,
                                            size_t n_times,
                                            double tolerance,
                                            struct ZblabDecompositionResult *out);

// # Safety
// `handle` must come from [`zblab_decomposition_new`] and not be used
// afterwards.
void zblab_decomposition_free(struct ZblabDecomposition *handle);

// Propagate a packet and sample it at `n_times` non-decreasing times.
//
// # Safety
// Pointers must be valid; `times` must hold `n_times` doubles. The handle
// is released with [`zblab_trajectory_free`].
enum ZblabStatus zblab_packet_simulate(const struct ZblabPacketParams *packet,
                                       const struct ZblabGridParams *grid,
                                       const double *times,
                                       size_t n_times,
                                       struct ZblabTrajectory **out);

// Number of samples in a trajectory.
//
// # Safety
// `handle` must come from [`zblab_packet_simulate`].
enum ZblabStatus zblab_trajectory_len(const struct ZblabTrajectory *handle, size_t *out);

// Sample `index` of a trajectory.
//
// # Safety
// `handle` must come from [`zblab_packet_simulate`].
enum ZblabStatus zblab_trajectory_sample(const struct ZblabTrajectory *handle,
                                         size_t index,
                                         struct ZblabSample *out);

// Dominant oscillation of the trajectory's current.
//
// # Safety
// `handle` must come from [`zblab_packet_simulate`].
enum ZblabStatus zblab_trajectory_spectrum(const struct ZblabTrajectory *handle,
                                           struct ZblabSpectrum *out);

// Write the trajectory as CSV to `path`.
//
// # Safety
// `handle` must come from [`zblab_packet_simulate`]; `path` must be a
// NUL-terminated UTF-8 string.
enum ZblabStatus zblab_trajectory_write_csv(const struct ZblabTrajectory *handle, const char *path);

// # Safety
// `handle` must come from [`zblab_packet_simulate`] and not be used
// afterwards.
void zblab_trajectory_free(struct ZblabTrajectory *handle);

// Check the orderings of a horizon scenario. `violations` receives a
// bitmask of `ZBLAB_VIOLATION_*` (0 when valid) and `variant` one of
// `ZBLAB_VARIANT_*`.
//
// # Safety
// Pointers must be valid.
enum ZblabStatus zblab_horizon_validate(const struct ZblabScenario *s,
                                        uint32_t *violations,
                                        int32_t *variant);

// Render the exchange diagram of a valid scenario into `buf`
// (NUL-terminated). `needed` receives the required size including the NUL;
// call with `capacity = 0` to query it.
//
// # Safety
// `buf` must have room for `capacity` bytes; other pointers must be valid.
enum ZblabStatus zblab_horizon_render(const struct ZblabScenario *s,
                                      uint32_t format,
                                      char *buf,
                                      size_t capacity,
                                      size_t *needed);

// Render the horizon-free exchange at positions `x, x1, x2, x_prime`.
//
// # Safety
// As [`zblab_horizon_render`].
enum ZblabStatus zblab_flat_render(double x,
                                   double x1,
                                   double x2,
                                   double x_prime,
                                   uint32_t format,
                                   char *buf,
                                   size_t capacity,
                                   size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZBLAB_H */
