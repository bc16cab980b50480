#ifndef POLYSEP_H
#define POLYSEP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PsStatus {
  PS_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PS_STATUS_NULL = 1,
  PS_STATUS_UTF8 = 2,
  /**
   * The JSON document was malformed or violated the schema.
   */
  PS_STATUS_PARSE = 3,
  PS_STATUS_INVALID_INPUT = 4,
  /**
   * A tiling or certificate check ran and failed.
   */
  PS_STATUS_VERIFICATION = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  PS_STATUS_PANIC = 6,
} PsStatus;

/**
 * A validated packing.
 */
typedef struct PsPacking PsPacking;

/**
 * A tiling built from a packing.
 */
typedef struct PsTiling PsTiling;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *ps_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *ps_version(void);

/**
 * Parses and validates a packing document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PsStatus ps_packing_from_json(const char *json, struct PsPacking **out);

/**
 * # Safety
 * `p` must be null or a handle from [`ps_packing_from_json`] not yet freed.
 */
void ps_packing_free(struct PsPacking *p);

/**
 * Number of discs; 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live packing handle.
 */
size_t ps_packing_len(const struct PsPacking *p);

/**
 * Builds the least-potential tiling. `clip_radius` bounds the hyperbolic
 * domain; pass 0 for the default.
 *
 * # Safety
 * `p` must be a live packing handle and `out` a valid pointer.
 */
enum PsStatus ps_tiling_build(const struct PsPacking *p, double clip_radius, struct PsTiling **out);

/**
 * # Safety
 * `t` must be null or a handle from [`ps_tiling_build`] not yet freed.
 */
void ps_tiling_free(struct PsTiling *t);

/**
 * Number of cells; 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live tiling handle.
 */
size_t ps_tiling_cell_count(const struct PsTiling *t);

/**
 * Checks that every cell holds exactly its own disc and that the cells cover
 * the domain. Returns `PS_STATUS_VERIFICATION` with the first failure on error.
 *
 * # Safety
 * `p` and `t` must be live handles.
 */
enum PsStatus ps_tiling_verify(const struct PsPacking *p, const struct PsTiling *t, double tol);

/**
 * Serializes a tiling as JSON.
 *
 * # Safety
 * `t` must be a live tiling handle and `out` a valid pointer.
 */
enum PsStatus ps_tiling_to_json(const struct PsTiling *t, char **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void ps_string_free(char *s);

/**
 * Power `|AO|² − r²` of the point `(x, y)` with respect to the circle of
 * center `(cx, cy)` and radius `r`.
 */
double ps_euclid_power(double x, double y, double cx, double cy, double r);

/**
 * Builds a certified non-separable packing of copies of the convex polygon
 * `{"vertices": [[x, y], ...]}` and writes the packing document, certificate
 * included, to `out`. A failed certificate still writes the document and
 * returns `PS_STATUS_VERIFICATION`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PsStatus ps_counterexample_from_polygon(const char *json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYSEP_H */
