#ifndef SWALLOWTAIL_H
#define SWALLOWTAIL_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum StStatus {
  ST_STATUS_OK = 0,
  ST_STATUS_NULL_POINTER = 1,
  ST_STATUS_INVALID_ARGUMENT = 2,
  ST_STATUS_DEGREE_TOO_SMALL = 3,
  ST_STATUS_LEADING_COEFFICIENT_ZERO = 4,
  ST_STATUS_VERIFICATION_FAILED = 5,
  ST_STATUS_PARSE_ERROR = 6,
  ST_STATUS_OUT_OF_RANGE = 7,
  ST_STATUS_INTERNAL = 8,
  ST_STATUS_PANIC = 9,
} StStatus;

typedef enum StFormula {
  ST_FORMULA_SYLVESTER = 0,
  ST_FORMULA_BEZOUT = 1,
  ST_FORMULA_SWALLOWTAIL_FULL = 2,
  ST_FORMULA_SWALLOWTAIL_MINIMAL = 3,
  ST_FORMULA_SWALLOWTAIL_MONIC = 4,
} StFormula;

/**
 * Opaque formula matrix.
 */
typedef struct StMatrix StMatrix;

/**
 * Rank data of a polynomial specialized into the Bezout and minimal
 * swallowtail matrices.
 */
typedef struct StClassification {
  size_t n;
  size_t bezout_rank;
  size_t bezout_nullity;
  size_t swallowtail_nullity;
  size_t distinct_roots_detected;
  size_t multiplicity_excess;
  bool multi_double_pair;
} StClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *st_last_error(void);

/**
 * Builds formula `kind` for degree `n`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum StStatus st_formula_build(enum StFormula kind, size_t n, struct StMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle from [`st_formula_build`] not yet freed.
 */
void st_matrix_free(struct StMatrix *m);

/**
 * Row count; 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t st_matrix_rows(const struct StMatrix *m);

/**
 * Column count; 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t st_matrix_cols(const struct StMatrix *m);

/**
 * Entry `(row, col)` as text, e.g. `a1*a3 - 16*a0*a4`.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for one write.
 */
enum StStatus st_matrix_entry(const struct StMatrix *m, size_t row, size_t col, char **out);

/**
 * The matrix as JSON, in the same format as the command line tool.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for one write.
 */
enum StStatus st_matrix_to_json(const struct StMatrix *m, char **out);

/**
 * Checks `det M = c * a0^e * D_n`. `samples == 0` selects the symbolic
 * check, otherwise `samples` seeded random points are used. For the monic
 * formula `e` is reported as 0. `c` is written as a `p/q` string.
 *
 * # Safety
 * `m` must be a live handle; `c_out` and `e_out` valid for one write each.
 */
enum StStatus st_matrix_verify(const struct StMatrix *m,
                               size_t samples,
                               uint64_t seed,
                               char **c_out,
                               uint32_t *e_out);

/**
 * Classifies `a0 x^n + a1 x^(n-1) y + .. + an y^n` given as `len = n + 1`
 * rational strings (`"3"`, `"-2/5"`), leading coefficient first.
 *
 * # Safety
 * `coeffs` must point to `len` valid NUL-terminated strings; `out` must
 * be valid for one write.
 */
enum StStatus st_classify(const char *const *coeffs, size_t len, struct StClassification *out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void st_string_free(char *s);

/**
 * Library version, statically allocated.
 */
const char *st_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SWALLOWTAIL_H */
