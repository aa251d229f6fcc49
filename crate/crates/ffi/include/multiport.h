#ifndef MULTIPORT_H
#define MULTIPORT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MpStatus {
  MP_STATUS_OK = 0,
  MP_STATUS_NULL_POINTER = 1,
  MP_STATUS_INVALID_ARGUMENT = 2,
  MP_STATUS_DIMENSION_MISMATCH = 3,
  MP_STATUS_NOT_UNITARY = 4,
  MP_STATUS_NOT_NORMALIZED = 5,
  MP_STATUS_PARSE_ERROR = 6,
  MP_STATUS_BUFFER_TOO_SMALL = 7,
  MP_STATUS_NUMERIC_ERROR = 8,
  MP_STATUS_PANIC = 9,
} MpStatus;

typedef struct MpFactorization MpFactorization;

typedef struct MpMatrix MpMatrix;

typedef struct MpNetlist MpNetlist;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy of the last error message on this thread, or NULL if the last call succeeded.
 * Release with `mp_string_free`.
 */
char *mp_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library that was not yet freed.
 */
void mp_string_free(char *s);

/**
 * Builds a `rows x cols` matrix from `2 * rows * cols` interleaved doubles in row-major order.
 *
 * # Safety
 * `data` must point to `2 * rows * cols` readable doubles; `out` must be writable.
 */
enum MpStatus mp_matrix_new(uintptr_t rows,
                            uintptr_t cols,
                            const double *data,
                            struct MpMatrix **out);

/**
 * # Safety
 * `m` must be NULL or a live handle from this library.
 */
void mp_matrix_free(struct MpMatrix *m);

/**
 * # Safety
 * `m` must be a live handle.
 */
uintptr_t mp_matrix_rows(const struct MpMatrix *m);

/**
 * # Safety
 * `m` must be a live handle.
 */
uintptr_t mp_matrix_cols(const struct MpMatrix *m);

/**
 * Entry at 0-based `(row, col)`.
 *
 * # Safety
 * `m` must be a live handle; `re` and `im` must be writable.
 */
enum MpStatus mp_matrix_get(const struct MpMatrix *m,
                            uintptr_t row,
                            uintptr_t col,
                            double *re,
                            double *im);

/**
 * Copies all entries, row-major and interleaved, into `out` (room for `capacity` complex values).
 *
 * # Safety
 * `m` must be a live handle; `out` must hold `2 * capacity` doubles.
 */
enum MpStatus mp_matrix_entries(const struct MpMatrix *m, double *out, uintptr_t capacity);

/**
 * Parses `{"rows", "cols", "entries": [[re, im], ...]}`.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum MpStatus mp_matrix_from_json(const char *json, struct MpMatrix **out);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable. Free the result with `mp_string_free`.
 */
enum MpStatus mp_matrix_to_json(const struct MpMatrix *m, char **out);

/**
 * Haar-distributed `n x n` unitary, reproducible from `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MpStatus mp_random_unitary(uintptr_t n, uint64_t seed, struct MpMatrix **out);

/**
 * `max |M·M† − I|`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum MpStatus mp_unitarity_deviation(const struct MpMatrix *m, double *out);

/**
 * Unitary taking the 0-based `port` basis vector to the `dim`-entry interleaved `state`.
 *
 * # Safety
 * `state` must hold `2 * dim` doubles; `out` must be writable.
 */
enum MpStatus mp_preparation_unitary(const double *state,
                                     uintptr_t dim,
                                     uintptr_t port,
                                     struct MpMatrix **out);

/**
 * # Safety
 * `u` must be a live handle; `out` must be writable.
 */
enum MpStatus mp_decompose(const struct MpMatrix *u, struct MpFactorization **out);

/**
 * # Safety
 * `f` must be NULL or a live handle.
 */
void mp_factorization_free(struct MpFactorization *f);

/**
 * # Safety
 * `f` must be a live handle.
 */
uintptr_t mp_factorization_factor_count(const struct MpFactorization *f);

/**
 * # Safety
 * `f` must be a live handle; `out` must be writable. Free the result with `mp_string_free`.
 */
enum MpStatus mp_factorization_to_json(const struct MpFactorization *f, char **out);

/**
 * Multiplies the factors back into the unitary.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum MpStatus mp_reconstruct(const struct MpFactorization *f, struct MpMatrix **out);

/**
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum MpStatus mp_netlist_from_factorization(const struct MpFactorization *f,
                                            struct MpNetlist **out);

/**
 * # Safety
 * `n` must be NULL or a live handle.
 */
void mp_netlist_free(struct MpNetlist *n);

/**
 * # Safety
 * `n` must be a live handle.
 */
uintptr_t mp_netlist_dim(const struct MpNetlist *n);

/**
 * # Safety
 * `n` must be a live handle.
 */
uintptr_t mp_netlist_element_count(const struct MpNetlist *n);

/**
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum MpStatus mp_netlist_from_json(const char *json, struct MpNetlist **out);

/**
 * # Safety
 * `n` must be a live handle; `out` must be writable. Free the result with `mp_string_free`.
 */
enum MpStatus mp_netlist_to_json(const struct MpNetlist *n, char **out);

/**
 * Text schematic when `svg` is 0, SVG otherwise.
 *
 * # Safety
 * `n` must be a live handle; `out` must be writable. Free the result with `mp_string_free`.
 */
enum MpStatus mp_netlist_schematic(const struct MpNetlist *n, int svg, char **out);

/**
 * # Safety
 * `n` must be a live handle; `out` must be writable.
 */
enum MpStatus mp_netlist_transfer_matrix(const struct MpNetlist *n, struct MpMatrix **out);

/**
 * Propagates `dim` interleaved input amplitudes through the netlist into `output`.
 *
 * # Safety
 * `input` and `output` must each hold `2 * dim` doubles.
 */
enum MpStatus mp_simulate(const struct MpNetlist *n,
                          const double *input,
                          uintptr_t dim,
                          double *output);

/**
 * Writes the amplitudes of a named state and its dimension. With `out` NULL or too
 * small, only `dim` is written and `BufferTooSmall` is returned.
 *
 * # Safety
 * `name` must be a nul-terminated string; `dim` must be writable; `out` must be NULL
 * or hold `2 * capacity` doubles.
 */
enum MpStatus mp_named_state(const char *name, double *out, uintptr_t capacity, uintptr_t *dim);

/**
 * Port probabilities for `state` behind the analyzer of `observables`
 * (per-particle specs separated by `|`). `forward` selects forward row order.
 *
 * # Safety
 * `state` must hold `2 * dim` doubles; `observables` must be a nul-terminated string;
 * `probabilities` must hold `capacity` doubles.
 */
enum MpStatus mp_predict(const double *state,
                         uintptr_t dim,
                         const char *observables,
                         int forward,
                         double *probabilities,
                         uintptr_t capacity);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MULTIPORT_H */
