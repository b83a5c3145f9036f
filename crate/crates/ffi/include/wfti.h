#ifndef WFTI_H
#define WFTI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Result of every call. Codes 0 to 5 match the command-line exit codes.
 */
typedef enum WftiStatus {
  WFTI_STATUS_OK = 0,
  WFTI_STATUS_IO = 1,
  WFTI_STATUS_INVALID_ARGUMENT = 2,
  WFTI_STATUS_NUMERIC = 3,
  WFTI_STATUS_DEGENERATE_ANCHOR = 4,
  WFTI_STATUS_UNSUPPORTED_MEDIA = 5,
  WFTI_STATUS_NULL_POINTER = 6,
  WFTI_STATUS_BUFFER_TOO_SMALL = 7,
  WFTI_STATUS_PANIC = 8,
} WftiStatus;

typedef enum WftiWindowKind {
  WFTI_WINDOW_KIND_GAUSSIAN = 0,
  WFTI_WINDOW_KIND_HANN = 1,
  WFTI_WINDOW_KIND_TRIANGULAR = 2,
} WftiWindowKind;

typedef enum WftiFixture {
  WFTI_FIXTURE_GAUSSIAN = 0,
  WFTI_FIXTURE_BUMP = 1,
  WFTI_FIXTURE_CHIRP = 2,
  WFTI_FIXTURE_ZERO = 3,
  WFTI_FIXTURE_NOISE = 4,
} WftiFixture;

typedef enum WftiPathway {
  WFTI_PATHWAY_KERNEL = 0,
  WFTI_PATHWAY_MULTIPLIER = 1,
  WFTI_PATHWAY_MODULATION = 2,
  WFTI_PATHWAY_DOUBLE_INTEGRAL = 3,
} WftiPathway;

/*
 Complex samples on a uniform grid.
 */
typedef struct WftiSignal WftiSignal;

/*
 Samples of the windowed Fourier transform, time-major.
 */
typedef struct WftiStft WftiStft;

/*
 A window function with its anchor point.
 */
typedef struct WftiWindow WftiWindow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message describing the last failed call on this thread, or null. The
 pointer stays valid until the next call into the library on this thread.
 */
const char *wfti_last_error(void);

/*
 Library version as a static nul-terminated string.
 */
const char *wfti_version(void);

/*
 Creates a catalogue window. `sigma` is the Gaussian standard deviation
 or the support half-width of Hann and triangular windows; `x0` is the
 anchor point.

 # Safety
 `out` must be a valid pointer to writable storage for one handle.
 */
enum WftiStatus wfti_window_new(enum WftiWindowKind kind,
                                double sigma,
                                double x0,
                                struct WftiWindow **out);

/*
 # Safety
 `window` must be null or a handle from [`wfti_window_new`] not yet freed.
 */
void wfti_window_free(struct WftiWindow *window);

/*
 `g(x0)`, the value the reconstruction is normalised by.

 # Safety
 `window` must be a live handle; `re` and `im` must be writable.
 */
enum WftiStatus wfti_window_anchor_value(const struct WftiWindow *window, double *re, double *im);

/*
 Creates a signal from `len` samples on the uniform grid `[start, end]`.
 `im` may be null for a real signal.

 # Safety
 `re` (and `im` when non-null) must point to `len` readable doubles; `out`
 must be writable.
 */
enum WftiStatus wfti_signal_new(double start,
                                double end,
                                uintptr_t len,
                                const double *re,
                                const double *im,
                                struct WftiSignal **out);

/*
 Samples a built-in test signal on `[start, end]`.

 # Safety
 `out` must be writable.
 */
enum WftiStatus wfti_fixture_sample(enum WftiFixture fixture,
                                    double start,
                                    double end,
                                    uintptr_t len,
                                    uint64_t seed,
                                    struct WftiSignal **out);

/*
 # Safety
 `signal` must be null or a live handle.
 */
void wfti_signal_free(struct WftiSignal *signal);

/*
 Grid of a signal.

 # Safety
 `signal` must be a live handle; the out-pointers must be writable.
 */
enum WftiStatus wfti_signal_grid(const struct WftiSignal *signal,
                                 double *start,
                                 double *end,
                                 uintptr_t *len);

/*
 Copies the samples into `re` and `im`, each of `capacity` doubles.

 # Safety
 `signal` must be a live handle; `re` and `im` must hold `capacity` doubles.
 */
enum WftiStatus wfti_signal_values(const struct WftiSignal *signal,
                                   double *re,
                                   double *im,
                                   uintptr_t capacity);

/*
 Relative L2 distance `||a - b|| / ||b||` (absolute when `b = 0`).

 # Safety
 `a`, `b` must be live handles; `out` must be writable.
 */
enum WftiStatus wfti_relative_l2(const struct WftiSignal *a,
                                 const struct WftiSignal *b,
                                 double *out);

/*
 Truncated inversion `T_{A1,A2} f` through the chosen pathway. With
 `normalize` the factor `2pi conj(g(x0))` is divided out so the result
 approximates `f`. `tail_estimate` (nullable) receives the a-priori sup
 error bound, or NaN when none is available.

 # Safety
 `signal` and `window` must be live handles; `out` must be writable.
 */
enum WftiStatus wfti_invert(const struct WftiSignal *signal,
                            const struct WftiWindow *window,
                            double a1,
                            double a2,
                            enum WftiPathway pathway,
                            bool normalize,
                            struct WftiSignal **out,
                            double *tail_estimate);

/*
 Normalised reconstruction at the full grid band.

 # Safety
 `signal` and `window` must be live handles; `out` must be writable.
 */
enum WftiStatus wfti_filter_bank_reconstruct(const struct WftiSignal *signal,
                                             const struct WftiWindow *window,
                                             struct WftiSignal **out);

/*
 Samples `F_g f` on `t_len` times in `[t_start, t_end]` and `w_len`
 frequencies in `[w_start, w_end]`.

 # Safety
 `signal` and `window` must be live handles; `out` must be writable.
 */
enum WftiStatus wfti_stft_new(const struct WftiSignal *signal,
                              const struct WftiWindow *window,
                              double t_start,
                              double t_end,
                              uintptr_t t_len,
                              double w_start,
                              double w_end,
                              uintptr_t w_len,
                              struct WftiStft **out);

/*
 # Safety
 `stft` must be null or a live handle.
 */
void wfti_stft_free(struct WftiStft *stft);

/*
 Number of time and frequency samples.

 # Safety
 `stft` must be a live handle; the out-pointers must be writable.
 */
enum WftiStatus wfti_stft_shape(const struct WftiStft *stft, uintptr_t *t_len, uintptr_t *w_len);

/*
 Copies the matrix, time-major, into `re` and `im`.

 # Safety
 `stft` must be a live handle; `re` and `im` must hold `capacity` doubles.
 */
enum WftiStatus wfti_stft_values(const struct WftiStft *stft,
                                 double *re,
                                 double *im,
                                 uintptr_t capacity);

/*
 Classical double-integral inversion of an STFT matrix; the result lives
 on the matrix time grid and is normalised.

 # Safety
 `stft` and `window` must be live handles; `out` must be writable.
 */
enum WftiStatus wfti_stft_invert(const struct WftiStft *stft,
                                 const struct WftiWindow *window,
                                 struct WftiSignal **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WFTI_H */
