#ifndef SPECTRA_H
#define SPECTRA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every entry point.
 */
typedef enum {
  SPECTRA_STATUS_OK = 0,
  SPECTRA_STATUS_NULL_POINTER = 1,
  SPECTRA_STATUS_INVALID_UTF8 = 2,
  SPECTRA_STATUS_PARSE = 3,
  SPECTRA_STATUS_UNKNOWN_COMPONENT = 4,
  SPECTRA_STATUS_INVALID_ARGUMENT = 5,
  SPECTRA_STATUS_NUMERICAL = 6,
  SPECTRA_STATUS_BUFFER_TOO_SMALL = 7,
  SPECTRA_STATUS_PANIC = 8,
} SpectraStatus;

/**
 * Pooled or single estimation run.
 */
typedef struct SpectraRun SpectraRun;

/**
 * Harder-Narasimhan spectrum of a component.
 */
typedef struct SpectraWSpectrum SpectraWSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Owned by the library.
 */
const char *spectra_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *spectra_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 */
void spectra_string_free(char *s);

/**
 * Estimates a catalogued component such as `"H(4)^hyp"`.
 */
SpectraStatus spectra_estimate(const char *stratum,
                               uint64_t steps,
                               uint64_t seed,
                               uint32_t batches,
                               SpectraRun **out);

/**
 * Estimates for an explicit permutation such as `"A B C D / D C B A"`.
 */
SpectraStatus spectra_estimate_permutation(const char *permutation,
                                           uint64_t steps,
                                           uint64_t seed,
                                           uint32_t batches,
                                           SpectraRun **out);

/**
 * Pools `count` runs of the same permutation into a new handle.
 */
SpectraStatus spectra_run_merge(const SpectraRun *const *runs, size_t count, SpectraRun **out);

/**
 * Number of exponents `g` in the run.
 */
SpectraStatus spectra_run_genus(const SpectraRun *run, size_t *out);

/**
 * Copies `λ_1, ..., λ_g` into `out`, which must hold `len >= g` doubles.
 */
SpectraStatus spectra_run_estimates(const SpectraRun *run, double *out, size_t len);

/**
 * Copies the standard errors of `λ_1, ..., λ_g` into `out`.
 */
SpectraStatus spectra_run_stderr(const SpectraRun *run, double *out, size_t len);

/**
 * Sum of the exponents and its standard error.
 */
SpectraStatus spectra_run_sum(const SpectraRun *run, double *sum, double *stderr);

/**
 * Run document as JSON; release with [`spectra_string_free`].
 */
SpectraStatus spectra_run_to_json(const SpectraRun *run, char **out);

/**
 * Reads a run document written by [`spectra_run_to_json`] or the CLI.
 */
SpectraStatus spectra_run_from_json(const char *json, SpectraRun **out);

/**
 * Releases a run handle. Null is ignored.
 */
void spectra_run_free(SpectraRun *run);

/**
 * Harder-Narasimhan spectrum of a catalogued component.
 */
SpectraStatus spectra_wspec(const char *stratum, SpectraWSpectrum **out);

SpectraStatus spectra_wspec_len(const SpectraWSpectrum *w, size_t *out);

/**
 * Entry `index` (0-based) as `numerator / denominator`; `exact` is false
 * when the entry is only an upper bound.
 */
SpectraStatus spectra_wspec_entry(const SpectraWSpectrum *w,
                                  size_t index,
                                  int64_t *numerator,
                                  int64_t *denominator,
                                  bool *exact);

/**
 * Text form such as `"(1, 3/5, 1/5)"`; release with [`spectra_string_free`].
 */
SpectraStatus spectra_wspec_to_string(const SpectraWSpectrum *w, char **out);

/**
 * Releases a spectrum handle. Null is ignored.
 */
void spectra_wspec_free(SpectraWSpectrum *w);

/**
 * `L^- - L^+` for a quadratic stratum such as `"Q(1,2,-1,-1,-1)"`.
 */
SpectraStatus spectra_cover_deficit(const char *q, int64_t *numerator, int64_t *denominator);

/**
 * Whether `lambda` dominates `mu` (both of length `len`) with slack `tol`.
 */
SpectraStatus spectra_dominates(const double *lambda,
                                const double *mu,
                                size_t len,
                                double tol,
                                bool *out);

/**
 * Runs the dominance check for one component over `count` seeds. `holds`
 * receives whether the verdict is positive; `json`, when not null, receives
 * the verdict document (release with [`spectra_string_free`]).
 */
SpectraStatus spectra_verify(const char *stratum,
                             uint64_t steps,
                             const uint64_t *seeds,
                             size_t count,
                             uint32_t batches,
                             bool *holds,
                             char **json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECTRA_H */
