#ifndef REPGROWTH_H
#define REPGROWTH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of every fallible call.
 */
typedef enum RgStatus {
  RG_STATUS_OK = 0,
  RG_STATUS_NULL_POINTER = 1,
  RG_STATUS_INVALID_ARGUMENT = 2,
  RG_STATUS_BUDGET_EXCEEDED = 3,
  RG_STATUS_FAILED = 4,
  RG_STATUS_PANIC = 5,
} RgStatus;

/**
 * A finite group with its conjugacy classes and class constants.
 */
typedef struct RgGroup RgGroup;

/**
 * A finished degeneration pipeline run.
 */
typedef struct RgPipeline RgPipeline;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *rg_version(void);

/**
 * Message of the last failed call on this thread, or NULL after a success.
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *rg_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void rg_string_free(char *s);

/**
 * `SL_d` over a ring written `zmod:p^r`, `tpoly:p^r` or `gf:p^f`.
 *
 * # Safety
 * `ring` must be a NUL-terminated string; `out` must be writable.
 */
enum RgStatus rg_group_new_sl(uint32_t d, const char *ring, uint64_t budget, struct RgGroup **out);

/**
 * A named group: `trivial`, `s3`, `d4`, `q8`, `c5`, ...
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum RgStatus rg_group_new_named(const char *name, struct RgGroup **out);

/**
 * Reads a group written by the binary cache.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum RgStatus rg_group_load(const char *path, struct RgGroup **out);

/**
 * Writes the group and its classes to the binary cache format.
 *
 * # Safety
 * `group` must be a live handle and `path` a NUL-terminated string.
 */
enum RgStatus rg_group_save(const struct RgGroup *group, const char *path);

/**
 * # Safety
 * `group` must come from an `rg_group_new_*` call and not have been freed.
 */
void rg_group_free(struct RgGroup *group);

/**
 * # Safety
 * `group` must be a live handle; `out` must be writable.
 */
enum RgStatus rg_group_order(const struct RgGroup *group, uint64_t *out);

/**
 * # Safety
 * `group` must be a live handle; `out` must be writable.
 */
enum RgStatus rg_group_class_count(const struct RgGroup *group, size_t *out);

/**
 * `ζ_G(s)` for even `s >= 2`, as a fraction `"num/den"` (or an integer).
 *
 * # Safety
 * `group` must be a live handle; `out` must be writable.
 */
enum RgStatus rg_group_zeta(const struct RgGroup *group, uint32_t s, uint64_t seed, char **out);

/**
 * Number of `(x_1, y_1, ..., x_n, y_n)` with `Π [x_i, y_i]` equal to element
 * `element` (an index below the group order), as a decimal string.
 *
 * # Safety
 * `group` must be a live handle; `out` must be writable.
 */
enum RgStatus rg_group_fiber_count(const struct RgGroup *group,
                                   uint32_t n,
                                   uint32_t element,
                                   char **out);

/**
 * Runs the degeneration pipeline for `ty` in `sl`, `so`, `sp`.
 *
 * # Safety
 * `ty` must be a NUL-terminated string; `out` must be writable.
 */
enum RgStatus rg_pipeline_run(const char *ty, uint32_t d, struct RgPipeline **out);

/**
 * # Safety
 * `p` must come from `rg_pipeline_run` and not have been freed.
 */
void rg_pipeline_free(struct RgPipeline *p);

/**
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum RgStatus rg_pipeline_discrepancy_count(const struct RgPipeline *p, size_t *out);

/**
 * Whether every terminal graph is a forest of maximal degree at most `max_degree`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum RgStatus rg_pipeline_forests_ok(const struct RgPipeline *p, size_t max_degree, bool *out);

/**
 * The full report as JSON.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum RgStatus rg_pipeline_report_json(const struct RgPipeline *p, char **out);

/**
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum RgStatus rg_pipeline_dot_count(const struct RgPipeline *p, size_t *out);

/**
 * Name and DOT text of the `index`-th terminal graph.
 *
 * # Safety
 * `p` must be a live handle; both outputs must be writable.
 */
enum RgStatus rg_pipeline_dot(const struct RgPipeline *p,
                              size_t index,
                              char **out_name,
                              char **out_doc);

/**
 * `B` for one simple factor such as `sl:5`, `sp3` or `e8`.
 *
 * # Safety
 * `factor` must be a NUL-terminated string; `out` must be writable.
 */
enum RgStatus rg_bound_root(const char *factor, uint64_t *out);

/**
 * The genus threshold `⌈B/2⌉ + 1` and the smallest `n` with `n >= B/2 + 1`.
 *
 * # Safety
 * Both outputs must be writable.
 */
enum RgStatus rg_min_genus(uint64_t bound, uint64_t *out_headline, uint64_t *out_strict);

/**
 * Points on the symplectic graph variety, as a decimal string.
 *
 * # Safety
 * `graph` and `ring` must be NUL-terminated strings; `out` must be writable.
 */
enum RgStatus rg_pointcount(const char *graph,
                            uint32_t dimw,
                            const char *ring,
                            uint64_t budget,
                            char **out);

/**
 * Pushforward report of a monomial map as JSON; `a` and `b` are comma lists.
 *
 * # Safety
 * `a` and `b` must be NUL-terminated strings; `out` must be writable.
 */
enum RgStatus rg_pushforward_json(const char *a,
                                  const char *b,
                                  uint64_t q,
                                  uint32_t r_max,
                                  char **out);

/**
 * Runs one acceptance criterion (1 to 11).
 *
 * # Safety
 * `out_passed` must be writable; `out_detail` may be NULL.
 */
enum RgStatus rg_verify_criterion(uint8_t id,
                                  bool full,
                                  uint64_t seed,
                                  bool *out_passed,
                                  char **out_detail);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REPGROWTH_H */
