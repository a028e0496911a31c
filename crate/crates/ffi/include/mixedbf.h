#ifndef MIXEDBF_H
#define MIXEDBF_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define MBF_OK 0

#define MBF_NULL_POINTER 1

#define MBF_INVALID_UTF8 2

#define MBF_DOMAIN 3

#define MBF_DEGREE 4

#define MBF_NUMERIC 5

#define MBF_RESOURCE 6

#define MBF_PRECONDITION 7

#define MBF_CONSTRUCTION 8

#define MBF_FIT 9

#define MBF_PARSE 10

#define MBF_BUFFER_TOO_SMALL 11

#define MBF_PANIC 12

#define MBF_MODULE_TRIVIAL 0

#define MBF_MODULE_ADJOINT 1

#define MBF_MODULE_COADJOINT 2

#define MBF_CLASS_BETA_ROOTED_TREE 0

#define MBF_CLASS_ISOLATED_VERTEX 1

#define MBF_CLASS_ONE_LOOP_WHEEL 2

#define MBF_CLASS_INADMISSIBLE 3

/**
 * Opaque graph of chiral vertices.
 */
typedef struct MbfGraph MbfGraph;

/**
 * Opaque finite-dimensional Lie algebra with an invariant pairing.
 */
typedef struct MbfLieAlgebra MbfLieAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` as a
 * NUL-terminated string; `len_out` receives the length without the NUL.
 *
 * # Safety
 * `buf` must be valid for `cap` bytes or null with `cap == 0`.
 */
int32_t mbf_last_error_message(char *buf, size_t cap, size_t *len_out);

/**
 * The solved constants `(c1, c2)` of the operator taking the heat-kernel
 * Gaussian to the propagator integrand.
 *
 * # Safety
 * Out-pointers must be valid.
 */
int32_t mbf_lambda_constants(double *c1, double *c2);

/**
 * Runs the exact identity suite.
 *
 * # Safety
 * Out-pointers must be valid.
 */
int32_t mbf_identity_suite(size_t *total, size_t *failed);

/**
 * `int_{eps <= T0 <= T1 <= L} dT0 dT1 / (T0 + T1)`, half the square integral.
 * `int_{[eps,L]^2} dT0 dT1 / (T0 + T1)`.
 *
 * # Safety
 * `out` must be valid.
 */
int32_t mbf_boundary_t_integral(double eps, double l, double *out);

/**
 * Loads a shipped algebra: `sl2`, `sl2+sl2` or `abelian1`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` valid.
 */
int32_t mbf_lie_algebra_shipped(const char *name, struct MbfLieAlgebra **out);

/**
 * Parses an algebra from its TOML description.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` valid.
 */
int32_t mbf_lie_algebra_from_toml(const char *toml, struct MbfLieAlgebra **out);

/**
 * # Safety
 * `g` must come from this library and not be used afterwards; null is ignored.
 */
void mbf_lie_algebra_free(struct MbfLieAlgebra *g);

/**
 * # Safety
 * `g` must be a live handle and `out` valid.
 */
int32_t mbf_lie_algebra_dim(const struct MbfLieAlgebra *g, size_t *out);

/**
 * Dimensions of `H^k(g; M)` for `k = 0..=dim g` into `buf`. `module` is one
 * of the `MBF_MODULE_*` constants; `len_out` receives the count.
 *
 * # Safety
 * `g` must be a live handle, `buf` valid for `cap` elements.
 */
int32_t mbf_cohomology_dims(const struct MbfLieAlgebra *g,
                            int32_t module,
                            size_t *buf,
                            size_t cap,
                            size_t *len_out);

/**
 * Cohomology of the two-term complex, starting in degree -2.
 *
 * # Safety
 * As for [`mbf_cohomology_dims`].
 */
int32_t mbf_complex_a_dims(const struct MbfLieAlgebra *g, size_t *buf, size_t cap, size_t *len_out);

/**
 * Writes 1 if every adjoint cohomology group vanishes, else 0. Fails with
 * `MBF_PRECONDITION` for a non-semisimple algebra.
 *
 * # Safety
 * `g` must be a live handle and `out` valid.
 */
int32_t mbf_weight_one_trivial(const struct MbfLieAlgebra *g, int32_t *out);

/**
 * Parses a graph from its text description.
 *
 * # Safety
 * `desc` must be a NUL-terminated string and `out` valid.
 */
int32_t mbf_graph_parse(const char *desc, struct MbfGraph **out);

/**
 * A wheel of `n` cubic vertices.
 *
 * # Safety
 * `out` must be valid.
 */
int32_t mbf_graph_wheel(size_t n, struct MbfGraph **out);

/**
 * # Safety
 * `g` must come from this library and not be used afterwards; null is ignored.
 */
void mbf_graph_free(struct MbfGraph *g);

/**
 * First Betti number `E - V + components`.
 *
 * # Safety
 * `g` must be a live handle and `out` valid.
 */
int32_t mbf_graph_betti(const struct MbfGraph *g, int64_t *out);

/**
 * One of the `MBF_CLASS_*` constants.
 *
 * # Safety
 * `g` must be a live handle and `out` valid.
 */
int32_t mbf_graph_classify(const struct MbfGraph *g, int32_t *out);

/**
 * Bulk wheel weight with the standard test inputs, relative quadrature
 * tolerance `tol`.
 *
 * # Safety
 * `g` must be a live handle and the out-pointers valid.
 */
int32_t mbf_bulk_weight(const struct MbfGraph *g,
                        double eps,
                        double l,
                        double tol,
                        double *value,
                        double *error_estimate);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MIXEDBF_H */
