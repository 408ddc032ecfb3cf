/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef UNIFFT_H
#define UNIFFT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Decomposition kind accepted by `unifft_are_parameters_bad`.
 */
#define UNIFFT_KIND_SLAB 0

#define UNIFFT_KIND_PENCIL 1

/**
 * Result code of every fallible call.
 */
typedef enum UnifftStatus {
  UNIFFT_STATUS_OK = 0,
  UNIFFT_STATUS_NULL_POINTER = 1,
  UNIFFT_STATUS_INVALID_ARGUMENT = 2,
  UNIFFT_STATUS_BACKEND_UNAVAILABLE = 3,
  UNIFFT_STATUS_INVALID_GRID = 4,
  UNIFFT_STATUS_SHAPE_MISMATCH = 5,
  UNIFFT_STATUS_BAD_PARAMETERS = 6,
  UNIFFT_STATUS_PANIC = 7,
  UNIFFT_STATUS_INTERNAL = 8,
} UnifftStatus;

/**
 * Pseudo-spectral operators (wavenumbers, gradient, divergence,
 * projection) bound to one grid.
 */
typedef struct UnifftOperators UnifftOperators;

/**
 * Sequential transform plan for one grid and backend.
 */
typedef struct UnifftPlan UnifftPlan;

/**
 * A complex number, laid out as `{ re, im }`.
 */
typedef struct UnifftComplex {
  double re;
  double im;
} UnifftComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *unifft_version(void);

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *unifft_last_error(void);

/**
 * Number of available backends.
 */
size_t unifft_backend_count(void);

/**
 * Name of backend `index` in preference order, or NULL if out of range.
 */
const char *unifft_backend_name(size_t index);

/**
 * Returns true when `size` processes cannot decompose the global `dims`
 * with the given kind (`UNIFFT_KIND_SLAB` or `UNIFFT_KIND_PENCIL`). NULL
 * `dims` or an unknown kind also return true.
 *
 * # Safety
 * `dims` must be NULL or point to `ndim` readable values.
 */
bool unifft_are_parameters_bad(int kind, size_t ndim, const size_t *dims, size_t size);

/**
 * Creates a plan. On success `*out` receives a handle to release with
 * `unifft_plan_destroy`.
 *
 * # Safety
 * `backend` must be NULL or a NUL-terminated string; `dims` must point to
 * `ndim` values and `lengths` to `ndim` values or be NULL; `out` must be
 * writable.
 */
enum UnifftStatus unifft_plan_create(const char *backend,
                                     size_t ndim,
                                     const size_t *dims,
                                     const double *lengths,
                                     struct UnifftPlan **out);

/**
 * Releases a plan. NULL is ignored.
 *
 * # Safety
 * `plan` must be NULL or a handle from `unifft_plan_create` not yet destroyed.
 */
void unifft_plan_destroy(struct UnifftPlan *plan);

/**
 * Resolved backend id of the plan (valid while the plan lives).
 *
 * # Safety
 * `plan` must be a live handle.
 */
const char *unifft_plan_backend(const struct UnifftPlan *plan);

/**
 * Number of dimensions of the plan's grid (0 for NULL).
 *
 * # Safety
 * `plan` must be NULL or a live handle.
 */
size_t unifft_plan_ndim(const struct UnifftPlan *plan);

/**
 * Writes the physical shape (`ndim` values) into `shape`.
 *
 * # Safety
 * `plan` must be a live handle and `shape` must hold `ndim` values.
 */
enum UnifftStatus unifft_plan_shape_x(const struct UnifftPlan *plan, size_t *shape);

/**
 * Writes the half-spectrum shape (`ndim` values) into `shape`.
 *
 * # Safety
 * `plan` must be a live handle and `shape` must hold `ndim` values.
 */
enum UnifftStatus unifft_plan_shape_k(const struct UnifftPlan *plan, size_t *shape);

/**
 * Forward transform: `output[k] = (1/N) sum_x input[x] e^{-i k.x}`.
 * `input_len` must equal the physical size and `output_len` the spectral size.
 *
 * # Safety
 * `plan` must be a live handle; the buffers must hold the stated lengths.
 */
enum UnifftStatus unifft_plan_fft(const struct UnifftPlan *plan,
                                  const double *input,
                                  size_t input_len,
                                  struct UnifftComplex *output,
                                  size_t output_len);

/**
 * Inverse transform (unnormalized synthesis over the Hermitian completion).
 *
 * # Safety
 * `plan` must be a live handle; the buffers must hold the stated lengths.
 */
enum UnifftStatus unifft_plan_ifft(const struct UnifftPlan *plan,
                                   const struct UnifftComplex *input,
                                   size_t input_len,
                                   double *output,
                                   size_t output_len);

/**
 * Creates operators on a sequential plan. On success `*out` receives a
 * handle to release with `unifft_operators_destroy`.
 *
 * # Safety
 * Same requirements as `unifft_plan_create`.
 */
enum UnifftStatus unifft_operators_create(const char *backend,
                                          size_t ndim,
                                          const size_t *dims,
                                          const double *lengths,
                                          struct UnifftOperators **out);

/**
 * Releases operators. NULL is ignored.
 *
 * # Safety
 * `ops` must be NULL or a handle from `unifft_operators_create` not yet destroyed.
 */
void unifft_operators_destroy(struct UnifftOperators *ops);

/**
 * Number of spectral values per component (0 for NULL).
 *
 * # Safety
 * `ops` must be NULL or a live handle.
 */
size_t unifft_operators_len_k(const struct UnifftOperators *ops);

/**
 * Copies the wavenumber of `component` (0 = x) at every spectral point.
 *
 * # Safety
 * `ops` must be a live handle and `out` must hold `len` values.
 */
enum UnifftStatus unifft_operators_wavenumbers(const struct UnifftOperators *ops,
                                               size_t component,
                                               double *out,
                                               size_t len);

/**
 * Spectral gradient: `out` receives `ndim` components of `len_k` values.
 *
 * # Safety
 * `ops` must be a live handle; the buffers must hold the stated lengths.
 */
enum UnifftStatus unifft_operators_grad(const struct UnifftOperators *ops,
                                        const struct UnifftComplex *u_fft,
                                        size_t len,
                                        struct UnifftComplex *out,
                                        size_t out_len);

/**
 * Spectral divergence of a component-major vector field.
 *
 * # Safety
 * `ops` must be a live handle; the buffers must hold the stated lengths.
 */
enum UnifftStatus unifft_operators_div(const struct UnifftOperators *ops,
                                       const struct UnifftComplex *v_fft,
                                       size_t len,
                                       struct UnifftComplex *out,
                                       size_t out_len);

/**
 * Projects a component-major vector field onto its divergence-free part,
 * overwriting the input. The zero mode is left untouched.
 *
 * # Safety
 * `ops` must be a live handle and `v_fft` must hold `len` values.
 */
enum UnifftStatus unifft_operators_proj_inplace(const struct UnifftOperators *ops,
                                                struct UnifftComplex *v_fft,
                                                size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNIFFT_H */
