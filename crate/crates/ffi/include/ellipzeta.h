#ifndef ELLIPZETA_H
#define ELLIPZETA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ez_status {
  EZ_STATUS_OK = 0,
  // the argument is at or near a pole; no value was written
  EZ_STATUS_POLE = 1,
  EZ_STATUS_NULL_POINTER = 2,
  EZ_STATUS_INVALID_LATTICE = 3,
  EZ_STATUS_INVALID_ARGUMENT = 4,
  EZ_STATUS_UNKNOWN_FUNCTION = 5,
  // a series or branch computation failed
  EZ_STATUS_NUMERICAL = 6,
  // at least one identity failed; the report was still written
  EZ_STATUS_IDENTITY_FAILED = 7,
  EZ_STATUS_PANIC = 8,
} ez_status;

// Opaque lattice handle.
typedef struct ez_lattice ez_lattice;

typedef struct ez_complex {
  double re;
  double im;
} ez_complex;

// Lattice constants; index 0..2 of `e` and `eta` is half-period 1..3.
typedef struct ez_constants_t {
  struct ez_complex omega1;
  struct ez_complex omega3;
  struct ez_complex tau;
  struct ez_complex q;
  struct ez_complex e[3];
  struct ez_complex eta[3];
  struct ez_complex g2;
  struct ez_complex g3;
  struct ez_complex disc;
  struct ez_complex ksq;
  struct ez_complex kpsq;
} ez_constants_t;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a lattice from its half-periods.
//
// # Safety
// `out` must be valid for writing one pointer.
enum ez_status ez_lattice_new(struct ez_complex omega1,
                              struct ez_complex omega3,
                              struct ez_lattice **out);

// Creates a lattice from ω1 and τ = ω3/ω1.
//
// # Safety
// `out` must be valid for writing one pointer.
enum ez_status ez_lattice_from_tau(struct ez_complex omega1,
                                   struct ez_complex tau,
                                   struct ez_lattice **out);

// Releases a lattice. Null is ignored.
//
// # Safety
// `lat` must come from `ez_lattice_new`/`ez_lattice_from_tau` and not be used afterwards.
void ez_lattice_free(struct ez_lattice *lat);

// Writes the lattice constants to `out`.
//
// # Safety
// `lat` must be a live handle and `out` valid for writing.
enum ez_status ez_constants(const struct ez_lattice *lat, struct ez_constants_t *out);

// Evaluates the function `name` (as listed by `ellipzeta --list-fns`) at `u`.
//
// `a` is the second argument of `Pi` and must be null otherwise; `route`
// may be null for the default route. Returns `EZ_STATUS_POLE` without writing
// `out` when `u` is at or near a pole.
//
// # Safety
// `lat` must be a live handle, `name` a nul-terminated string, `a` and
// `route` null or valid, and `out` valid for writing.
enum ez_status ez_eval(const struct ez_lattice *lat,
                       const char *name,
                       struct ez_complex u,
                       const struct ez_complex *a,
                       const char *route,
                       struct ez_complex *out);

// Runs the identity suite on the lattice and returns the JSON report in
// `*out`, to be released with [`ez_string_free`]. `only` is an optional
// glob over identity names. Returns `EZ_STATUS_IDENTITY_FAILED` (with the report
// written) when an identity fails.
//
// # Safety
// `lat` must be a live handle, `only` null or a nul-terminated string,
// and `out` valid for writing one pointer.
enum ez_status ez_verify_json(const struct ez_lattice *lat,
                              size_t n,
                              uint64_t seed,
                              const char *only,
                              char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void ez_string_free(char *s);

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next call into this library on the same thread.
const char *ez_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ELLIPZETA_H */
