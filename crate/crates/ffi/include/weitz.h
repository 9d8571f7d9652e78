#ifndef WEITZ_H
#define WEITZ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by all fallible functions.
typedef enum WeitzStatus {
  WEITZ_STATUS_OK = 0,
  WEITZ_STATUS_NULL_POINTER = 1,
  WEITZ_STATUS_INVALID_UTF8 = 2,
  WEITZ_STATUS_INVALID_ARGUMENT = 3,
  WEITZ_STATUS_DIMENSION_MISMATCH = 4,
  WEITZ_STATUS_NOT_SQUARE = 5,
  WEITZ_STATUS_NOT_HERMITIAN = 6,
  WEITZ_STATUS_PRECONDITION = 7,
  WEITZ_STATUS_UNSUPPORTED = 8,
  WEITZ_STATUS_SCHEMA = 9,
  WEITZ_STATUS_IO = 10,
  WEITZ_STATUS_BUFFER_TOO_SMALL = 11,
  WEITZ_STATUS_PANIC = 12,
} WeitzStatus;

// Opaque curvature operator.
typedef struct WeitzCurvature WeitzCurvature;

// Opaque representation of so(n).
typedef struct WeitzRep WeitzRep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *weitz_version(void);

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next call into the library on this thread.
const char *weitz_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a pointer obtained from this library and not yet freed.
void weitz_string_free(char *s);

// Builds a curvature operator from a source string (`sphere`, `random:<seed>`,
// `random-symmetric:<seed>`, `group:<type><rank>`, `file:<path>`). `n = 0`
// takes the dimension from the source.
//
// # Safety
// `source` must be a NUL-terminated string; `out` must be writable.
enum WeitzStatus weitz_curvature_load(const char *source, size_t n, struct WeitzCurvature **out);

// Parses the curvature JSON schema.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum WeitzStatus weitz_curvature_from_json(const char *json, struct WeitzCurvature **out);

// Serializes to the curvature JSON schema. Free the result with
// [`weitz_string_free`].
//
// # Safety
// `c` must be a live handle; `out` must be writable.
enum WeitzStatus weitz_curvature_to_json(const struct WeitzCurvature *c, char **out);

// Dimension `n` of the underlying space, or 0 for a null handle.
//
// # Safety
// `c` must be null or a live handle.
size_t weitz_curvature_n(const struct WeitzCurvature *c);

// Scalar curvature and maximal Bianchi defect.
//
// # Safety
// `c` must be a live handle; either output may be null to skip it.
enum WeitzStatus weitz_curvature_invariants(const struct WeitzCurvature *c,
                                            double *scalar,
                                            double *bianchi_residual);

// # Safety
// `c` must be null or a handle from this library not yet freed.
void weitz_curvature_free(struct WeitzCurvature *c);

// Builds a representation of so(n) from a selector (`vector`, `adjoint`,
// `exterior:p`, `sym:p`, `sym0`, `spin`, `spin+`, `tensor:a,b`, ...).
//
// # Safety
// `selector` must be a NUL-terminated string; `out` must be writable.
enum WeitzStatus weitz_rep_new(size_t n, const char *selector, struct WeitzRep **out);

// Dimension of the representation space, or 0 for a null handle.
//
// # Safety
// `r` must be null or a live handle.
size_t weitz_rep_dim(const struct WeitzRep *r);

// # Safety
// `r` must be null or a handle from this library not yet freed.
void weitz_rep_free(struct WeitzRep *r);

// Ascending eigenvalues of `K(R)` on the representation. `out_len`
// receives the count even when the buffer is too small, so a first call
// with `capacity = 0` queries the size.
//
// # Safety
// Handles must be live; `values` must hold `capacity` doubles (may be null
// when `capacity` is 0); `out_len` must be writable.
enum WeitzStatus weitz_k_spectrum(const struct WeitzCurvature *c,
                                  const struct WeitzRep *r,
                                  double *values,
                                  size_t capacity,
                                  size_t *out_len);

// Row-major real and imaginary parts of `K(R)`, each `dim * dim` doubles.
//
// # Safety
// Handles must be live; `re` and `im` must each hold `capacity` doubles.
enum WeitzStatus weitz_k_matrix(const struct WeitzCurvature *c,
                                const struct WeitzRep *r,
                                double *re,
                                double *im,
                                size_t capacity);

// Runs a command line of the `weitz` tool (without the program name) and
// returns its report text and exit code. A failing check or a tool-level
// error is not a library failure: the call returns `Ok` with a nonzero
// `out_exit` and the JSON error object as text.
//
// # Safety
// `argv` must point to `argc` NUL-terminated strings; outputs must be
// writable. Free `out_text` with [`weitz_string_free`].
enum WeitzStatus weitz_execute(size_t argc,
                               const char *const *argv,
                               char **out_text,
                               int32_t *out_exit);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEITZ_H */
