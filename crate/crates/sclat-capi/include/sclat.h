#ifndef SCLAT_H
#define SCLAT_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Sentinel for "minus infinity" in dimension results.
 */
#define SCLAT_DIM_NEG_INF INT32_MIN

/**
 * Status codes returned by every fallible entry point.
 */
enum SclatStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  SclatStatus_Ok = 0,
  SclatStatus_InvalidArgument = 1,
  SclatStatus_IllFormed = 2,
  SclatStatus_Refused = 3,
  SclatStatus_TooLarge = 4,
  SclatStatus_Internal = 5,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum SclatStatus SclatStatus;
#else
typedef int32_t SclatStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Opaque handle to a lattice base (with or without atom counts).
 */
typedef struct SclatBase SclatBase;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread; borrowed, valid until the next
 * failing call.
 */
const char *sclat_last_error(void);

/**
 * Parses a lattice document (the `sclat/1` JSON format) into a handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` a valid pointer.
 */
SclatStatus sclat_base_from_json(const char *json, struct SclatBase **out);

/**
 * # Safety
 * `base` must come from a constructor of this library and not be freed.
 */
SclatStatus sclat_base_to_json(const struct SclatBase *base, char **out);

/**
 * Releases a base handle. Null is ignored.
 *
 * # Safety
 * `base` must be a handle returned by this library, freed at most once.
 */
void sclat_base_free(struct SclatBase *base);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be a string returned by this library, freed at most once.
 */
void sclat_string_free(char *s);

/**
 * Canonical form as lowercase hex; equal strings mean isomorphic bases.
 *
 * # Safety
 * See `sclat_base_to_json`.
 */
SclatStatus sclat_base_canonical_hex(const struct SclatBase *base, char **out);

/**
 * 1 when the bases are isomorphic (label- and count-preserving), else 0.
 *
 * # Safety
 * Both handles must be live handles from this library.
 */
SclatStatus sclat_base_is_isomorphic(const struct SclatBase *a,
                                     const struct SclatBase *b,
                                     int32_t *out);

/**
 * Axiom verification report as JSON. `sample_tuples` 0 selects the
 * automatic mode (exhaustive up to 8 irreducibles).
 *
 * # Safety
 * See `sclat_base_to_json`.
 */
SclatStatus sclat_base_check_axioms_json(const struct SclatBase *base,
                                         uint32_t sample_tuples,
                                         uint64_t seed,
                                         char **out);

/**
 * Chain dimension of the top element (`SCLAT_DIM_NEG_INF` for the trivial
 * base).
 *
 * # Safety
 * See `sclat_base_to_json`.
 */
SclatStatus sclat_base_dim(const struct SclatBase *base, int32_t *out);

/**
 * sc-dimension of the top element.
 *
 * # Safety
 * See `sclat_base_to_json`.
 */
SclatStatus sclat_base_scdim(const struct SclatBase *base, int32_t *out);

/**
 * The substructure generated by the empty set, as a fresh handle.
 *
 * # Safety
 * See `sclat_base_to_json`.
 */
SclatStatus sclat_base_prime(const struct SclatBase *base, struct SclatBase **out);

/**
 * The irreducible-count bound as a decimal string.
 */
SclatStatus sclat_mu_decimal(uint64_t n, int64_t d, char **out);

/**
 * Signatures of the base as a JSON array.
 *
 * # Safety
 * See `sclat_base_to_json`.
 */
SclatStatus sclat_signatures_json(const struct SclatBase *base, char **out);

/**
 * Applies a signature (JSON, optionally with "K" counts on a counted base);
 * returns the extended base and writes the generator antichains as JSON
 * into `out_info`.
 *
 * # Safety
 * See `sclat_base_to_json`; `signature_json` must be NUL-terminated.
 */
SclatStatus sclat_apply_signature_json(const struct SclatBase *base,
                                       const char *signature_json,
                                       struct SclatBase **out,
                                       char **out_info);

/**
 * Linear representation as JSON `{"x": ..., "phi": ...}`. In counted mode
 * (`asc` nonzero) uncounted atoms receive at least `n_floor` points.
 *
 * # Safety
 * See `sclat_base_to_json`.
 */
SclatStatus sclat_represent_json(const struct SclatBase *base,
                                 int32_t asc,
                                 uint32_t n_floor,
                                 char **out);

/**
 * Bounded quantifier-free satisfiability; the outcome document of the CLI.
 *
 * # Safety
 * `formula` must be NUL-terminated.
 */
SclatStatus sclat_sat_json(const char *formula,
                           uint32_t d,
                           uint32_t max_irr,
                           int32_t asc,
                           char **out);

/**
 * Decides a single-block sentence over the completion the prime determines.
 *
 * # Safety
 * See `sclat_base_to_json`; `formula` must be NUL-terminated.
 */
SclatStatus sclat_decide_json(const struct SclatBase *prime,
                              const char *formula,
                              uint32_t d,
                              uint32_t max_irr,
                              char **out);

/**
 * 1 when the completions the two bases determine are elementarily
 * equivalent.
 *
 * # Safety
 * Both handles must be live handles from this library.
 */
SclatStatus sclat_theory_equal(const struct SclatBase *a, const struct SclatBase *b, int32_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCLAT_H */
