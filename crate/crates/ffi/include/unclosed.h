#ifndef UNCLOSED_H
#define UNCLOSED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes returned by every fallible entry point.
typedef enum UnclosedStatus {
  UNCLOSED_STATUS_OK = 0,
  UNCLOSED_STATUS_NULL_POINTER = 1,
  UNCLOSED_STATUS_INVALID_ARGUMENT = 2,
  UNCLOSED_STATUS_PRECISION_POLICY = 3,
  UNCLOSED_STATUS_OUT_OF_RANGE = 4,
  UNCLOSED_STATUS_INTERNAL = 5,
} UnclosedStatus;

// Exact expansion coefficients `b_0 … b_J` and `c_1 … c_J`.
typedef struct UnclosedExpansion UnclosedExpansion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Computes the expansion through order `max_order` (1 ≤ `max_order` ≤ 24),
// rendering floats with `precision` significant digits.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle pointer.
enum UnclosedStatus unclosed_expansion_new(uint32_t max_order,
                                           uint32_t precision,
                                           struct UnclosedExpansion **out);

// Releases a handle from [`unclosed_expansion_new`]. Null is ignored.
//
// # Safety
// `handle` must be null or a live handle not freed before.
void unclosed_expansion_free(struct UnclosedExpansion *handle);

// Order `J` of the expansion, or 0 for a null handle.
//
// # Safety
// `handle` must be null or a live handle.
size_t unclosed_expansion_max_order(const struct UnclosedExpansion *handle);

// `b_j` as a double, `0 ≤ j ≤ J`.
//
// # Safety
// `handle` must be a live handle and `out` writable.
enum UnclosedStatus unclosed_expansion_b(const struct UnclosedExpansion *handle,
                                         size_t j,
                                         double *out);

// `c_j` as a double, `1 ≤ j ≤ J`.
//
// # Safety
// `handle` must be a live handle and `out` writable.
enum UnclosedStatus unclosed_expansion_c(const struct UnclosedExpansion *handle,
                                         size_t j,
                                         double *out);

// The expansion as the same JSON document `unclosed coeffs` writes.
//
// # Safety
// `handle` must be a live handle and `out` writable. Free the string with
// [`unclosed_string_free`].
enum UnclosedStatus unclosed_expansion_json(const struct UnclosedExpansion *handle, char **out);

// `R(s) = F(e^{−s})·√(2π√5/s)·e^{−π²/(5s)}` rounded to a double, with the
// working precision chosen by the library's policy. `s` is read through its
// shortest decimal representation.
//
// # Safety
// `out` must be writable.
enum UnclosedStatus unclosed_r_numeric(double s, double *out);

// Exact `E_n` (0 ≤ `n` ≤ 200) as JSON: the field coordinates, the smallest
// subfield and a 30-digit float.
//
// # Safety
// `out` must be writable. Free the string with [`unclosed_string_free`].
enum UnclosedStatus unclosed_en_value_json(uint32_t n, char **out);

// Message for the last failed call on this thread, or null. The pointer stays
// valid until the next call into this library from the same thread.
const char *unclosed_last_error(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not freed before.
void unclosed_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNCLOSED_H */
