#ifndef SING2EP_H
#define SING2EP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define SING2EP_ROTATE_AUTO 0

#define SING2EP_ROTATE_NONE 1

#define SING2EP_ROTATE_ANGLE 2

typedef enum Sing2epStatus {
  SING2EP_STATUS_OK = 0,
  /**
   * Malformed JSON or matrix data.
   */
  SING2EP_STATUS_PARSE = 1,
  /**
   * A rank decision could not be settled at the given tolerance.
   */
  SING2EP_STATUS_AMBIGUITY = 2,
  SING2EP_STATUS_NULL_POINTER = 3,
  /**
   * Well-formed input the solver cannot accept, such as a singular `W_i`.
   */
  SING2EP_STATUS_INVALID_INPUT = 4,
  SING2EP_STATUS_NUMERICAL = 5,
  SING2EP_STATUS_INDEX_OUT_OF_RANGE = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  SING2EP_STATUS_INTERNAL = 7,
} Sing2epStatus;

/**
 * A two-parameter problem `W_i = A_i + λB_i + μC_i`.
 */
typedef struct Sing2epProblem Sing2epProblem;

/**
 * The outcome of [`sing2ep_solve`].
 */
typedef struct Sing2epSolution Sing2epSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *sing2ep_last_error(void);

/**
 * Library version as a static string.
 */
const char *sing2ep_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void sing2ep_string_free(char *s);

/**
 * Parses a problem file's JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum Sing2epStatus sing2ep_problem_from_json(const char *json, struct Sing2epProblem **out);

/**
 * Builds a problem from raw data. `w1` holds `A₁, B₁, C₁` one after the
 * other, each `n1 × n1` row-major with interleaved `re, im`, so
 * `6·n1²` doubles; likewise `w2`.
 *
 * # Safety
 * `w1` and `w2` must point to that many readable doubles and `out` must be
 * a valid pointer.
 */
enum Sing2epStatus sing2ep_problem_new(size_t n1,
                                       const double *w1,
                                       size_t n2,
                                       const double *w2,
                                       struct Sing2epProblem **out);

/**
 * # Safety
 * `p` must be null or a handle from this library, not yet freed.
 */
void sing2ep_problem_free(struct Sing2epProblem *p);

/**
 * # Safety
 * All pointers must be valid.
 */
enum Sing2epStatus sing2ep_problem_dims(const struct Sing2epProblem *p, size_t *n1, size_t *n2);

/**
 * Solves `p`. `rotate` is one of the `SING2EP_ROTATE_*` constants; `angle`
 * is used only with `SING2EP_ROTATE_ANGLE`. A non-positive `tol` keeps the
 * default threshold for matrices evaluated at computed eigenvalues.
 *
 * # Safety
 * `p` must be a live problem handle and `out` a valid pointer.
 */
enum Sing2epStatus sing2ep_solve(const struct Sing2epProblem *p,
                                 uint64_t seed,
                                 int32_t rotate,
                                 double angle,
                                 double tol,
                                 struct Sing2epSolution **out);

/**
 * # Safety
 * `s` must be null or a handle from this library, not yet freed.
 */
void sing2ep_solution_free(struct Sing2epSolution *s);

/**
 * Number of eigenvalues, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live solution handle.
 */
size_t sing2ep_solution_count(const struct Sing2epSolution *s);

/**
 * Writes eigenvalue `i` as `[re λ, im λ, re μ, im μ]` into `out`, and its
 * flags into the two optional pointers.
 *
 * # Safety
 * `s` must be a live solution handle and `out` must have room for four
 * doubles. `on_common_factor` and `multiplicity_hint` may be null.
 */
enum Sing2epStatus sing2ep_solution_eigenvalue(const struct Sing2epSolution *s,
                                               size_t i,
                                               double *out,
                                               bool *on_common_factor,
                                               size_t *multiplicity_hint);

/**
 * The full report as JSON, in the same format as the command-line tool.
 * Free the result with [`sing2ep_string_free`].
 *
 * # Safety
 * `s` must be a live solution handle and `out` a valid pointer.
 */
enum Sing2epStatus sing2ep_solution_to_json(const struct Sing2epSolution *s, char **out);

/**
 * Kronecker structure string of the pencil in a `{A, B}` JSON document.
 * Free the result with [`sing2ep_string_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum Sing2epStatus sing2ep_kcf(const char *json, uint64_t seed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SING2EP_H */
