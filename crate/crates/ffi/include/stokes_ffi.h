#ifndef STOKES_FFI_H
#define STOKES_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by every exported function.
 */
typedef enum StokesStatus {
  STOKES_STATUS_OK = 0,
  STOKES_STATUS_NULL_POINTER = 1,
  STOKES_STATUS_INVALID_INPUT = 2,
  STOKES_STATUS_NEAR_RESONANCE = 3,
  STOKES_STATUS_NO_ROOT = 4,
  STOKES_STATUS_NO_BRACKET = 5,
  STOKES_STATUS_NUMERICAL = 6,
  STOKES_STATUS_PANIC = 7,
} StokesStatus;

/**
 * Opaque uniform stream.
 */
typedef struct StokesStream StokesStream;

typedef struct StokesStreamSummary {
  double s;
  double depth;
  double bernoulli;
  double kappa;
  double froude;
} StokesStreamSummary;

typedef struct StokesSecondOrder {
  double tau_star;
  double lambda0;
  double lambda2;
  /**
   * Second-order coefficient of the wavelength itself, `-lambda2 * lambda0`.
   */
  double big_lambda2;
  double mu2;
  double i1;
  double i2;
  double relation_residual;
  double y_form_residual;
} StokesSecondOrder;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null after a success. The
 * pointer stays valid until the next call into this library on the thread.
 */
const char *stokes_last_error_message(void);

/**
 * Builds the uniform stream for `ω(p) = Σ coeffs[i] pⁱ` and shear `s` on
 * `grid_points` nodes (0 selects the default). Free with
 * [`stokes_stream_free`].
 *
 * # Safety
 * `coeffs` must point to `len` readable doubles; `out` must be writable.
 */
enum StokesStatus stokes_stream_new(const double *coeffs,
                                    size_t len,
                                    double s,
                                    size_t grid_points,
                                    struct StokesStream **out);

/**
 * # Safety
 * `stream` must come from [`stokes_stream_new`] and not be freed already.
 */
void stokes_stream_free(struct StokesStream *stream);

/**
 * # Safety
 * `stream` must be a live handle; `out` must be writable.
 */
enum StokesStatus stokes_stream_summary(const struct StokesStream *stream,
                                        struct StokesStreamSummary *out);

/**
 * Positive root of the dispersion function.
 *
 * # Safety
 * `stream` must be a live handle; `out` must be writable.
 */
enum StokesStatus stokes_tau_star(const struct StokesStream *stream, double *out);

/**
 * λ₂, μ₂ and the related integrals at the bifurcation point.
 *
 * # Safety
 * `stream` must be a live handle; `out` must be writable.
 */
enum StokesStatus stokes_second_order(const struct StokesStream *stream,
                                      struct StokesSecondOrder *out);

/**
 * Critical frequency where the irrotational coefficient `f` changes sign.
 *
 * # Safety
 * `out` must be writable.
 */
enum StokesStatus stokes_tau0(double *out);

/**
 * Froude threshold at which μ₂ changes sign on irrotational flow.
 *
 * # Safety
 * `out` must be writable.
 */
enum StokesStatus stokes_froude_threshold(double *out);

/**
 * Closed-form λ₂ for irrotational flow at unit-depth frequency `tau`.
 *
 * # Safety
 * `out` must be writable.
 */
enum StokesStatus stokes_lambda2_irrotational(double tau, double *out);

/**
 * Closed-form μ₂ for irrotational flow at unit-depth frequency `tau`.
 *
 * # Safety
 * `out` must be writable.
 */
enum StokesStatus stokes_mu2_irrotational(double tau, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STOKES_FFI_H */
