#ifndef SCHOLL_H
#define SCHOLL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SchollStatus {
  SCHOLL_STATUS_OK = 0,
  SCHOLL_STATUS_NOT_PRIME = 1,
  SCHOLL_STATUS_REDUCIBLE = 2,
  SCHOLL_STATUS_DOMAIN = 3,
  SCHOLL_STATUS_CAPACITY = 4,
  SCHOLL_STATUS_CONSISTENCY = 5,
  SCHOLL_STATUS_PRECISION = 6,
  SCHOLL_STATUS_AMBIGUITY = 7,
  SCHOLL_STATUS_INCONSISTENCY = 8,
  SCHOLL_STATUS_NULL_POINTER = 9,
  // The output buffer is too small; the needed length was still written.
  SCHOLL_STATUS_BUFFER_TOO_SMALL = 10,
  // An integer result does not fit in 64 bits.
  SCHOLL_STATUS_OVERFLOW = 11,
  SCHOLL_STATUS_PANIC = 12,
  SCHOLL_STATUS_UNAVAILABLE = 13,
} SchollStatus;

typedef enum SchollMethod {
  SCHOLL_METHOD_AUTO = 0,
  SCHOLL_METHOD_BRUTE = 1,
  SCHOLL_METHOD_GREENE = 2,
} SchollMethod;

// The places of Q(ζ_n) above p.
typedef struct SchollPlaces SchollPlaces;

// A solved Atkin–Swinnerton-Dyer quartic.
typedef struct SchollQuartic SchollQuartic;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread ("" after a success).
// Valid until the next call into this library on the same thread.
const char *scholl_last_error(void);

// Enumerates the places of Q(ζ_n) above the prime p.
//
// # Safety
// `out` must be a valid pointer; on success it receives a handle to free
// with [`scholl_places_free`].
enum SchollStatus scholl_places_new(uint64_t n, uint64_t p, struct SchollPlaces **out);

// Number of places in the handle (0 for null).
//
// # Safety
// `h` must be null or a live handle from [`scholl_places_new`].
uintptr_t scholl_places_count(const struct SchollPlaces *h);

// Size of the residue field at place `index`, or 0 if out of range.
//
// # Safety
// `h` must be null or a live handle from [`scholl_places_new`].
uint64_t scholl_places_norm(const struct SchollPlaces *h, uintptr_t index);

// # Safety
// `h` must be null or a handle from [`scholl_places_new`] not yet freed.
void scholl_places_free(struct SchollPlaces *h);

// S(n, i, 𝔭) at place `index` as φ(n) power-basis coefficients in ζ_n.
//
// # Safety
// `h` must be a live places handle, `out` must have room for `cap` values
// and `len` must be valid. `len` receives φ(n) even when `cap` is too small.
enum SchollStatus scholl_trace_sum(const struct SchollPlaces *h,
                                   uintptr_t index,
                                   uint64_t i,
                                   enum SchollMethod method,
                                   int64_t *out,
                                   uintptr_t cap,
                                   uintptr_t *len);

// Integer polynomial induced from the new part at (n, p), constant term
// first.
//
// # Safety
// `out` must have room for `cap` values and `len` must be valid.
enum SchollStatus scholl_induce(uint64_t n,
                                uint64_t p,
                                int64_t *out,
                                uintptr_t cap,
                                uintptr_t *len);

// Recovers the quartic at p from the computed weight-4 coefficients,
// using congruences up to `r_cap`.
//
// # Safety
// `out` must be valid; on success it receives a handle to free with
// [`scholl_quartic_free`].
enum SchollStatus scholl_asd_solve(uint64_t p, int64_t r_cap, struct SchollQuartic **out);

// Writes [A3, A2, A1, A0] to `out`.
//
// # Safety
// `h` must be a live quartic handle and `out` must have room for 4 values.
enum SchollStatus scholl_quartic_coeffs(const struct SchollQuartic *h, int64_t *out);

// Largest r whose congruences were needed, or -2 for null.
//
// # Safety
// `h` must be null or a live quartic handle.
int64_t scholl_quartic_r_used(const struct SchollQuartic *h);

// # Safety
// `h` must be null or a handle from [`scholl_asd_solve`] not yet freed.
void scholl_quartic_free(struct SchollQuartic *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHOLL_H */
