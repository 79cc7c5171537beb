#ifndef ELLSUB_H
#define ELLSUB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum EllsubStatus {
  ELLSUB_STATUS_OK = 0,
  ELLSUB_STATUS_NULL_POINTER = 1,
  ELLSUB_STATUS_INVALID_UTF8 = 2,
  ELLSUB_STATUS_VALIDATION = 3,
  ELLSUB_STATUS_DIMENSION = 4,
  ELLSUB_STATUS_RANK_DEFICIENT = 5,
  ELLSUB_STATUS_PARSE = 6,
  ELLSUB_STATUS_DEGENERATE = 7,
  ELLSUB_STATUS_PRECISION = 8,
  ELLSUB_STATUS_BUDGET = 9,
  ELLSUB_STATUS_IO = 10,
  ELLSUB_STATUS_PANIC = 11,
} EllsubStatus;

// Elliptic curve `y^2 = x^3 + Ax + B` over the rationals.
typedef struct EllsubCurve EllsubCurve;

// Integer matrix acting on `E^g`.
typedef struct EllsubMorphism EllsubMorphism;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until the next call.
const char *ellsub_last_error(void);

// Library version as a static string.
const char *ellsub_version(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void ellsub_string_free(char *s);

// Builds the curve `y^2 = x^3 + Ax + B` from rational strings such as `"-2"` or `"3/4"`.
//
// # Safety
// `a` and `b` must be NUL-terminated strings; `out_curve` must be writable.
enum EllsubStatus ellsub_curve_new(const char *a, const char *b, struct EllsubCurve **out_curve);

// Releases a curve. NULL is ignored.
//
// # Safety
// `curve` must come from [`ellsub_curve_new`] and not be freed twice.
void ellsub_curve_free(struct EllsubCurve *curve);

// Certified canonical height of a point written as `"x,y"` or `"O"`.
//
// `value` receives the height and `err` a bound on its error; torsion gives exactly 0.
//
// # Safety
// Pointers must be valid; `curve` must be a live handle.
enum EllsubStatus ellsub_height(const struct EllsubCurve *curve,
                                const char *point,
                                double tol,
                                double *value,
                                double *err);

// Writes 1 to `out_torsion` if the point has finite order, else 0.
//
// # Safety
// Pointers must be valid; `curve` must be a live handle.
enum EllsubStatus ellsub_is_torsion(const struct EllsubCurve *curve,
                                    const char *point,
                                    int *out_torsion);

// Parses a morphism such as `"[2x3] 2 0 3 0 2 5"` or `"[[2,0,3],[0,2,5]]"`.
//
// # Safety
// `s` must be a NUL-terminated string; `out_morphism` must be writable.
enum EllsubStatus ellsub_morphism_parse(const char *s, struct EllsubMorphism **out_morphism);

// Releases a morphism. NULL is ignored.
//
// # Safety
// `m` must come from this library and not be freed twice.
void ellsub_morphism_free(struct EllsubMorphism *m);

// Row and column counts of a morphism.
//
// # Safety
// Pointers must be valid; `m` must be a live handle.
enum EllsubStatus ellsub_morphism_shape(const struct EllsubMorphism *m, size_t *rows, size_t *cols);

// Nested-list rendering of a morphism; release with [`ellsub_string_free`].
//
// # Safety
// Pointers must be valid; `m` must be a live handle.
enum EllsubStatus ellsub_morphism_to_string(const struct EllsubMorphism *m, char **out_text);

// Gauss-reduced morphism whose kernel contains the kernel of `m` up to torsion.
//
// The pivot `a` is written as a decimal string to `out_pivot` (release with
// [`ellsub_string_free`]); pass NULL to skip it.
//
// # Safety
// Pointers must be valid; `m` must be a live handle.
enum EllsubStatus ellsub_gauss_reduce(const struct EllsubMorphism *m,
                                      struct EllsubMorphism **out_reduced,
                                      char **out_pivot);

// Runs the bound chain for a TOML run configuration.
//
// The report (text, or JSON when `json` is non-zero) goes to `out_report`; the number of
// diagnostics raised goes to `out_diagnostics` when it is not NULL.
//
// # Safety
// `config_toml` must be a NUL-terminated string; `out_report` must be writable.
enum EllsubStatus ellsub_bounds(const char *config_toml,
                                int json,
                                char **out_report,
                                size_t *out_diagnostics);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ELLSUB_H */
