#ifndef REALBRAUER_H
#define REALBRAUER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The nonzero values agree with the command-line exit codes.
 */
typedef enum RbStatus {
  RB_STATUS_OK = 0,
  RB_STATUS_INVALID_INPUT = 1,
  RB_STATUS_BUDGET_EXCEEDED = 2,
  RB_STATUS_ORACLE_MISMATCH = 3,
  RB_STATUS_NULL_POINTER = 4,
  RB_STATUS_PANIC = 5,
} RbStatus;

/**
 * Opaque handle to a validated Real groupoid.
 */
typedef struct RbGroupoid RbGroupoid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into this library on the same thread.
 */
const char *rb_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void rb_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *rb_version(void);

/**
 * Parses and validates a groupoid description (JSON).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum RbStatus rb_groupoid_from_json(const char *json, struct RbGroupoid **out);

/**
 * Releases a groupoid handle. NULL is ignored.
 *
 * # Safety
 * `g` must come from [`rb_groupoid_from_json`] and not be freed twice.
 */
void rb_groupoid_free(struct RbGroupoid *g);

/**
 * Object and arrow counts.
 *
 * # Safety
 * `g` must be a live handle; `objects` and `arrows` must be writable.
 */
enum RbStatus rb_groupoid_size(const struct RbGroupoid *g, size_t *objects, size_t *arrows);

/**
 * `HR^degree(G, A)` as text, e.g. `"Z/2 + Z"`. `coefficient` is a literal
 * such as `"Z2"`, `"Zm(4,-1)"`, `"Z(0,1)"` or `"S1"`.
 *
 * # Safety
 * `g` must be a live handle, `coefficient` NUL-terminated, `out` writable.
 */
enum RbStatus rb_cohomology(const struct RbGroupoid *g,
                            const char *coefficient,
                            uint32_t degree,
                            char **out);

/**
 * Like [`rb_cohomology`] for finite coefficients, cross-checked against
 * cochain enumeration with at most `budget` steps.
 *
 * # Safety
 * As for [`rb_cohomology`].
 */
enum RbStatus rb_cohomology_checked(const struct RbGroupoid *g,
                                    const char *coefficient,
                                    uint32_t degree,
                                    uint64_t budget,
                                    char **out);

/**
 * Order of the Real graded Brauer group; 0 if it is infinite.
 *
 * # Safety
 * `g` must be a live handle; `order` must be writable.
 */
enum RbStatus rb_brauer_order(const struct RbGroupoid *g, uint64_t *order);

/**
 * Brauer group summary as a JSON object.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum RbStatus rb_brauer_json(const struct RbGroupoid *g, char **out);

/**
 * Type of the graded tensor product of the reference models of types `p`
 * and `q`, computed from the matrix model.
 *
 * # Safety
 * `out` must be writable.
 */
enum RbStatus rb_type_product(uint8_t p, uint8_t q, uint8_t *out);

/**
 * Type index in `0..8` of an algebra model given as JSON.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
enum RbStatus rb_classify_model_json(const char *json, uint8_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REALBRAUER_H */
