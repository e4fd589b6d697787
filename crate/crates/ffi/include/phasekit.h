#ifndef PHASEKIT_H
#define PHASEKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PkMajorizationKind {
  PK_MAJORIZATION_KIND_STRONG = 0,
  PK_MAJORIZATION_KIND_WEAK = 1,
  PK_MAJORIZATION_KIND_LOG = 2,
} PkMajorizationKind;

// Status codes. Values are stable.
typedef enum PkStatus {
  PK_STATUS_OK = 0,
  // A required pointer argument was null.
  PK_STATUS_NULL_POINTER = 1,
  // Malformed input text or inconsistent dimensions.
  PK_STATUS_PARSE = 2,
  // The matrix is not sectorial (or is zero).
  PK_STATUS_NOT_SECTORIAL = 3,
  // Any other domain error, e.g. non-square or singular input.
  PK_STATUS_DOMAIN = 4,
  // Infeasible completion window or cone.
  PK_STATUS_INFEASIBLE = 5,
  // The caller's output buffer is too small; the required length was
  // written to the length argument.
  PK_STATUS_BUFFER_TOO_SMALL = 6,
  // A panic was caught at the boundary.
  PK_STATUS_PANIC = 7,
} PkStatus;

// Opaque matrix handle.
typedef struct PkMatrix PkMatrix;

typedef struct PkSectorInfo {
  bool sectorial;
  double gamma_star;
  double phi_max;
  double phi_min;
  double field_angle;
  double accretivity;
} PkSectorInfo;

typedef struct PkMargin {
  uintptr_t k;
  double phase_margin_alpha;
  double magnitude_margin_gamma;
  // 1 when the upper phase sum binds, -1 when the lower one does.
  int32_t binding_side;
} PkMargin;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failing call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *pk_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *pk_version(void);

// New `rows x cols` matrix from `2 * rows * cols` doubles holding
// interleaved real and imaginary parts in row-major order.
//
// # Safety
// `data` must point to `2 * rows * cols` readable doubles (or may be null
// when that count is zero); `out` must be writable.
enum PkStatus pk_matrix_new(uintptr_t rows,
                            uintptr_t cols,
                            const double *data,
                            struct PkMatrix **out);

// Matrix from matrix-file JSON text.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum PkStatus pk_matrix_from_json(const char *json, struct PkMatrix **out);

// Matrix-file JSON text for `m`; free it with `pk_string_free`.
//
// # Safety
// `m` must be a live handle and `out` writable.
enum PkStatus pk_matrix_to_json(const struct PkMatrix *m, bool hexfloat, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void pk_string_free(char *s);

// Releases a matrix handle. Null is ignored.
//
// # Safety
// `m` must come from this library and not have been freed.
void pk_matrix_free(struct PkMatrix *m);

// Row count, or 0 for a null handle.
//
// # Safety
// `m` must be null or a live handle.
uintptr_t pk_matrix_rows(const struct PkMatrix *m);

// Column count, or 0 for a null handle.
//
// # Safety
// `m` must be null or a live handle.
uintptr_t pk_matrix_cols(const struct PkMatrix *m);

// Copies the entries as interleaved `re, im` pairs. `*len` is the
// capacity in doubles on entry and the required count on return.
//
// # Safety
// `m` must be a live handle; `out` must hold `*len` doubles.
enum PkStatus pk_matrix_data(const struct PkMatrix *m, double *out, uintptr_t *len);

// Sectoriality, supporting-ray angles and accretivity.
//
// # Safety
// `m` must be a live handle and `out` writable.
enum PkStatus pk_classify_sector(const struct PkMatrix *m, struct PkSectorInfo *out);

// Phases in descending order. `*len` is the capacity on entry and the
// matrix order on return. `theta` (may be null) receives the lower end of
// the branch interval. Pass `use_theta = true` to force that interval.
//
// # Safety
// `m` must be a live handle; `out` must hold `*len` doubles.
enum PkStatus pk_phases(const struct PkMatrix *m,
                        bool use_theta,
                        double theta_in,
                        double *out,
                        uintptr_t *len,
                        double *theta);

// `C = T* D T` with `D` diagonal unitary.
//
// # Safety
// `m` must be a live handle; `t` and `d` writable.
enum PkStatus pk_sectorial_decomposition(const struct PkMatrix *m,
                                         struct PkMatrix **t,
                                         struct PkMatrix **d);

// Symmetric polar decomposition `C = P U P`.
//
// # Safety
// `m` must be a live handle; `p` and `u` writable.
enum PkStatus pk_spd(const struct PkMatrix *m, struct PkMatrix **p, struct PkMatrix **u);

// Generalized Cholesky factorization `C = R* W R`.
//
// # Safety
// `m` must be a live handle; `r` and `w` writable.
enum PkStatus pk_gcf(const struct PkMatrix *m, struct PkMatrix **r, struct PkMatrix **w);

// Phase and magnitude rank margins of order `k`.
//
// # Safety
// `m` must be a live handle and `out` writable.
enum PkStatus pk_rank_margin(const struct PkMatrix *m, uintptr_t k, struct PkMargin *out);

// Whether `x` is majorized by `y` (both of length `n`) in the given sense.
// `slack` (may be null) receives the smallest margin.
//
// # Safety
// `x` and `y` must hold `n` doubles; `holds` must be writable.
enum PkStatus pk_majorization(enum PkMajorizationKind kind,
                              const double *x,
                              const double *y,
                              uintptr_t n,
                              double tol,
                              bool *holds,
                              double *slack);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHASEKIT_H */
