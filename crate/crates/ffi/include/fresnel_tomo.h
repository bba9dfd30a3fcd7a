#ifndef FRESNEL_TOMO_H
#define FRESNEL_TOMO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum FtStatus {
  FT_STATUS_OK = 0,
  FT_STATUS_NULL_POINTER = 1,
  FT_STATUS_INVALID_ARGUMENT = 2,
  FT_STATUS_PARSE = 3,
  FT_STATUS_NOT_UNIMODULAR = 4,
  FT_STATUS_NUMERICAL = 5,
  FT_STATUS_BUFFER_TOO_SMALL = 6,
  FT_STATUS_IO = 7,
  FT_STATUS_PANIC = 8,
} FtStatus;

/**
 * Which quadrature a tomogram measures.
 */
typedef enum FtMode {
  /**
   * Distribution of `DX - BP`.
   */
  FT_MODE_POSITION = 0,
  /**
   * Distribution of `AP - CX`.
   */
  FT_MODE_MOMENTUM = 1,
} FtMode;

/**
 * A unimodular ray matrix.
 */
typedef struct FtMatrix FtMatrix;

/**
 * A wavefunction sampled on a uniform grid.
 */
typedef struct FtState FtState;

/**
 * A Wigner function on a square phase-space grid.
 */
typedef struct FtWigner FtWigner;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ft_version(void);

/**
 * Copies the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len - 1` bytes). Returns the full message length in bytes,
 * not counting the terminator; 0 means the last call succeeded.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t ft_last_error_message(char *buf, size_t len);

/**
 * Builds a matrix from its entries; fails unless `AD - BC = 1` to `1e-12`.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum FtStatus ft_matrix_new(double a, double b, double c, double d, struct FtMatrix **out);

/**
 * Parses `identity`, `rotation:T`, `free:L`, `lens:K` or `scale:M`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` a valid handle slot.
 */
enum FtStatus ft_matrix_elementary(const char *spec, struct FtMatrix **out);

/**
 * Builds a matrix from `(s, r)` with `|s|^2 - |r|^2 = 1`.
 *
 * # Safety
 * `out` must be a valid handle slot.
 */
enum FtStatus ft_matrix_from_sr(double s_re,
                                double s_im,
                                double r_re,
                                double r_im,
                                struct FtMatrix **out);

/**
 * `lhs * rhs` as a new handle.
 *
 * # Safety
 * Handles must be valid or null; `out` a valid handle slot.
 */
enum FtStatus ft_matrix_compose(const struct FtMatrix *lhs,
                                const struct FtMatrix *rhs,
                                struct FtMatrix **out);

/**
 * Writes `A, B, C, D` into `entries[0..4]`.
 *
 * # Safety
 * `m` must be valid or null; `entries` must hold 4 doubles.
 */
enum FtStatus ft_matrix_entries(const struct FtMatrix *m, double *entries);

/**
 * Writes `Re s, Im s, Re r, Im r` into `sr[0..4]`.
 *
 * # Safety
 * `m` must be valid or null; `sr` must hold 4 doubles.
 */
enum FtStatus ft_matrix_sr(const struct FtMatrix *m, double *sr);

/**
 * Releases a matrix; null is ignored.
 *
 * # Safety
 * `m` must come from this library and not be used afterwards.
 */
void ft_matrix_free(struct FtMatrix *m);

/**
 * Samples a state spec (`vacuum`, `fock:N`, `coherent:RE[,IM]`,
 * `squeezed:LAMBDA`, `cat:RE[,IM]`) on `points` nodes over `[-half_width, half_width]`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` a valid handle slot.
 */
enum FtStatus ft_state_new(const char *spec,
                           double half_width,
                           size_t points,
                           struct FtState **out);

/**
 * Wraps caller samples (`2 * points` interleaved doubles) as a state.
 *
 * # Safety
 * `samples` must point to `2 * points` doubles; `out` a valid handle slot.
 */
enum FtStatus ft_state_from_samples(const double *samples,
                                    double half_width,
                                    size_t points,
                                    struct FtState **out);

/**
 * Number of grid nodes, or 0 for a null handle.
 *
 * # Safety
 * `s` must be valid or null.
 */
size_t ft_state_len(const struct FtState *s);

/**
 * Copies the samples as interleaved `re, im` into `buf` (`len >= 2 * points`).
 *
 * # Safety
 * `s` must be valid or null; `buf` must hold `len` doubles.
 */
enum FtStatus ft_state_samples(const struct FtState *s, double *buf, size_t len);

/**
 * `sum |psi_j|^2 dx` by the trapezoid rule.
 *
 * # Safety
 * `s` must be valid or null; `norm` must be writable.
 */
enum FtStatus ft_state_norm_sqr(const struct FtState *s, double *norm);

/**
 * Applies the Fresnel transform of `m` to `s`; the result shares the grid.
 *
 * # Safety
 * Handles must be valid or null; `out` a valid handle slot.
 */
enum FtStatus ft_state_fresnel(const struct FtState *s,
                               const struct FtMatrix *m,
                               struct FtState **out);

/**
 * Quadrature distribution of the state for `m`, one value per grid node,
 * obtained from the Fresnel-transformed wavefunction.
 *
 * # Safety
 * Handles must be valid or null; `buf` must hold `len` doubles.
 */
enum FtStatus ft_tomogram(const struct FtState *s,
                          const struct FtMatrix *m,
                          enum FtMode mode,
                          double *buf,
                          size_t len);

/**
 * Releases a state; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ft_state_free(struct FtState *s);

/**
 * Wigner function of `s` on the square grid built from the state's grid.
 *
 * # Safety
 * `s` must be valid or null; `out` a valid handle slot.
 */
enum FtStatus ft_wigner_new(const struct FtState *s, struct FtWigner **out);

/**
 * Nodes per axis, or 0 for a null handle. The grid holds its square.
 *
 * # Safety
 * `w` must be valid or null.
 */
size_t ft_wigner_side(const struct FtWigner *w);

/**
 * Copies `W(x_j, p_k)` row-major (`x` outer) into `buf`.
 *
 * # Safety
 * `w` must be valid or null; `buf` must hold `len` doubles.
 */
enum FtStatus ft_wigner_values(const struct FtWigner *w, double *buf, size_t len);

/**
 * Interpolated `W(x, p)`, zero outside the grid.
 *
 * # Safety
 * `w` must be valid or null; `value` must be writable.
 */
enum FtStatus ft_wigner_value_at(const struct FtWigner *w, double x, double p, double *value);

/**
 * `\int W dx dp`.
 *
 * # Safety
 * `w` must be valid or null; `value` must be writable.
 */
enum FtStatus ft_wigner_normalization(const struct FtWigner *w, double *value);

/**
 * Radon transform of `w` along the line family of `m`, sampled at the
 * `n` abscissas in `at`, written to `buf[0..n]`.
 *
 * # Safety
 * Handles must be valid or null; `at` and `buf` must hold `n` doubles.
 */
enum FtStatus ft_wigner_radon(const struct FtWigner *w,
                              const struct FtMatrix *m,
                              enum FtMode mode,
                              const double *at,
                              double *buf,
                              size_t n);

/**
 * Releases a Wigner grid; null is ignored.
 *
 * # Safety
 * `w` must come from this library and not be used afterwards.
 */
void ft_wigner_free(struct FtWigner *w);

/**
 * The `dim x dim` Fock-space matrix of the Fresnel operator of `m`,
 * row-major, interleaved `re, im` (`len >= 2 * dim * dim`).
 *
 * # Safety
 * `m` must be valid or null; `buf` must hold `len` doubles.
 */
enum FtStatus ft_fresnel_operator(const struct FtMatrix *m, size_t dim, double *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRESNEL_TOMO_H */
