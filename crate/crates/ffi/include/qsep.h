#ifndef QSEP_H
#define QSEP_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QsepStatus {
  QSEP_STATUS_OK = 0,
  QSEP_STATUS_NULL_POINTER = 1,
  QSEP_STATUS_DOMAIN = 2,
  QSEP_STATUS_DIMENSION_MISMATCH = 3,
  QSEP_STATUS_NOT_HERMITIAN = 4,
  QSEP_STATUS_NON_SPANNING_FRAME = 5,
  QSEP_STATUS_INSUFFICIENT_QUADRATURE = 6,
  QSEP_STATUS_NOT_A_FRAME_VERTEX = 7,
  QSEP_STATUS_CERTIFICATE_INVALID = 8,
  QSEP_STATUS_IO = 9,
  QSEP_STATUS_PARSE = 10,
  QSEP_STATUS_PANIC = 11,
} QsepStatus;

typedef enum QsepFrameKind {
  QSEP_FRAME_KIND_CARDINAL6 = 0,
  QSEP_FRAME_KIND_TETRAHEDRON = 1,
  QSEP_FRAME_KIND_OCTAHEDRON = 2,
  QSEP_FRAME_KIND_CUBE = 3,
  QSEP_FRAME_KIND_ICOSAHEDRON = 4,
  QSEP_FRAME_KIND_DODECAHEDRON = 5,
} QsepFrameKind;

typedef struct QsepFrame QsepFrame;

typedef struct QsepOperator QsepOperator;

typedef struct QsepTable QsepTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *qsep_last_error_message(void);

/**
 * Builds a state from a JSON spec such as `{"family":"eps_ghz","epsilon":0.2}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum QsepStatus qsep_state_from_json(const char *json, struct QsepOperator **out);

/**
 * Builds an operator from row-major real and imaginary parts of a
 * `dim x dim` matrix; `im` may be null for a real matrix.
 *
 * # Safety
 * `re` (and `im` if non-null) must hold `dim * dim` values; `out` writable.
 */
enum QsepStatus qsep_operator_from_parts(size_t dim,
                                         const double *re,
                                         const double *im,
                                         struct QsepOperator **out);

/**
 * # Safety
 * `op` must come from this library and not be used afterwards; null is a no-op.
 */
void qsep_operator_free(struct QsepOperator *op);

/**
 * Number of qubits, or 0 for null.
 *
 * # Safety
 * `op` must be null or a live handle.
 */
size_t qsep_operator_qubits(const struct QsepOperator *op);

/**
 * Matrix dimension `2^N`, or 0 for null.
 *
 * # Safety
 * `op` must be null or a live handle.
 */
size_t qsep_operator_dim(const struct QsepOperator *op);

/**
 * # Safety
 * `op` must be a live handle; `re` and `im` writable.
 */
enum QsepStatus qsep_operator_entry(const struct QsepOperator *op,
                                    size_t row,
                                    size_t col,
                                    double *re,
                                    double *im);

/**
 * # Safety
 * `op` must be a live handle; `out` writable.
 */
enum QsepStatus qsep_operator_min_eigenvalue(const struct QsepOperator *op, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum QsepStatus qsep_frame_new(enum QsepFrameKind kind, struct QsepFrame **out);

/**
 * Frame from `count` unit vectors packed as `x, y, z` triples.
 *
 * # Safety
 * `xyz` must hold `3 * count` values; `out` writable.
 */
enum QsepStatus qsep_frame_from_vectors(const double *xyz, size_t count, struct QsepFrame **out);

/**
 * # Safety
 * `frame` must come from this library and not be used afterwards; null is a no-op.
 */
void qsep_frame_free(struct QsepFrame *frame);

/**
 * Number of vertices, or 0 for null.
 *
 * # Safety
 * `frame` must be null or a live handle.
 */
size_t qsep_frame_len(const struct QsepFrame *frame);

/**
 * # Safety
 * `frame` must be a live handle; `xyz` must have room for 3 values.
 */
enum QsepStatus qsep_frame_vector(const struct QsepFrame *frame, size_t index, double *xyz);

/**
 * Canonical discrete table of `op` over one frame per qubit.
 *
 * # Safety
 * `op` must be live, `frames` must hold `count` live frame handles, `out` writable.
 */
enum QsepStatus qsep_wcan_discrete(const struct QsepOperator *op,
                                   const struct QsepFrame *const *frames,
                                   size_t count,
                                   struct QsepTable **out);

/**
 * # Safety
 * `table` must come from this library and not be used afterwards; null is a no-op.
 */
void qsep_table_free(struct QsepTable *table);

/**
 * Number of entries, or 0 for null.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
size_t qsep_table_len(const struct QsepTable *table);

/**
 * Copies the weights, row-major with qubit 0's index most significant.
 *
 * # Safety
 * `table` must be live and `out` must have room for `len` values.
 */
enum QsepStatus qsep_table_weights(const struct QsepTable *table, double *out, size_t len);

/**
 * Certifies `op` with `table`: `separable` is set to 1 when every weight is
 * nonnegative.
 *
 * # Safety
 * Handles must be live; `separable` and `min_weight` writable.
 */
enum QsepStatus qsep_certify_table(const struct QsepOperator *op,
                                   const struct QsepTable *table,
                                   int32_t *separable,
                                   double *min_weight);

/**
 * Canonical continuous weight at one Bloch vector per qubit (`x, y, z` triples).
 *
 * # Safety
 * `op` live, `xyz` holds `3 * count` values, `out` writable.
 */
enum QsepStatus qsep_wcan_continuous(const struct QsepOperator *op,
                                     const double *xyz,
                                     size_t count,
                                     double *out);

/**
 * Minimum of the canonical continuous weight; the minimizer is written to
 * `argmin_xyz` (3 values per qubit) when it is non-null.
 *
 * # Safety
 * `op` live, `value` writable, `argmin_xyz` null or room for `3 N` values.
 */
enum QsepStatus qsep_minimize_wcan(const struct QsepOperator *op,
                                   size_t grid_per_sphere,
                                   size_t refine_iters,
                                   double *value,
                                   double *argmin_xyz);

/**
 * `num/den = 1/(1 + 2^(2N-1))`.
 *
 * # Safety
 * `num` and `den` writable.
 */
enum QsepStatus qsep_bound_general(size_t n, uint64_t *num, uint64_t *den);

/**
 * eps-cat threshold from the canonical representation, `N >= 2`.
 *
 * # Safety
 * `num` and `den` writable.
 */
enum QsepStatus qsep_bound_cat(size_t n, uint64_t *num, uint64_t *den);

/**
 * Exact eps-cat threshold `1/(1 + 2^(N-1))`, `N >= 2`.
 *
 * # Safety
 * `num` and `den` writable.
 */
enum QsepStatus qsep_bound_duer(size_t n, uint64_t *num, uint64_t *den);

/**
 * Two-qubit correlation witness; `nonseparable` is set to 1 when the value
 * exceeds 1.
 *
 * # Safety
 * `op` live; `value` and `nonseparable` writable.
 */
enum QsepStatus qsep_witness_werner(const struct QsepOperator *op,
                                    double *value,
                                    int32_t *nonseparable);

/**
 * Three-qubit GHZ correlation witness.
 *
 * # Safety
 * `op` live; `value` and `nonseparable` writable.
 */
enum QsepStatus qsep_witness_ghz(const struct QsepOperator *op,
                                 double *value,
                                 int32_t *nonseparable);

/**
 * Smallest eigenvalue of the two-qubit partial transpose on `side`.
 *
 * # Safety
 * `op` live; `out` writable.
 */
enum QsepStatus qsep_ppt_min_eigenvalue(const struct QsepOperator *op, size_t side, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSEP_H */
