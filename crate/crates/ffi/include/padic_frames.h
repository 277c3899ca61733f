#ifndef PADIC_FRAMES_H
#define PADIC_FRAMES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the first five agree with the command-line exit codes.
 */
typedef enum PfStatus {
  PF_STATUS_OK = 0,
  PF_STATUS_VERIFY_FAILED = 1,
  PF_STATUS_INFEASIBLE = 2,
  PF_STATUS_BAD_INPUT = 3,
  PF_STATUS_IO = 4,
  PF_STATUS_NULL_POINTER = 5,
  PF_STATUS_PANIC = 6,
} PfStatus;

/**
 * Opaque frame handle.
 */
typedef struct PfFrame PfFrame;

/**
 * Summary of [`pf_frame_verify`].
 */
typedef struct PfReport {
  bool passed;
  double parseval_max;
  double lemma31_max;
  double system_residual;
  double refinement_error;
  double min_nonzero_ratio;
} PfReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a frame for `p`, `N = M = n`.
 *
 * `transforms` is null or a comma-separated list such as `"i:0,ii:4"`.
 * On success `*out` receives a new handle.
 *
 * # Safety
 * `transforms` must be null or a NUL-terminated string; `out` must be valid for writes.
 */
enum PfStatus pf_frame_build(uint32_t p, uint32_t n, const char *transforms, struct PfFrame **out);

/**
 * Loads a frame from a JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum PfStatus pf_frame_from_json(const char *json, struct PfFrame **out);

/**
 * Serializes a frame; the result is released with [`pf_string_free`].
 * Returns null if `frame` is null.
 *
 * # Safety
 * `frame` must be null or a live handle.
 */
char *pf_frame_to_json(const struct PfFrame *frame);

/**
 * Number of wavelets, or 0 for a null handle.
 *
 * # Safety
 * `frame` must be null or a live handle.
 */
size_t pf_frame_wavelet_count(const struct PfFrame *frame);

/**
 * `true` when the frame degenerates to an orthogonal scaling function.
 *
 * # Safety
 * `frame` must be null or a live handle.
 */
bool pf_frame_is_orthogonal(const struct PfFrame *frame);

/**
 * Number of mask tree nodes (`p^{2N+1}`), or 0 for a null handle.
 *
 * # Safety
 * `frame` must be null or a live handle.
 */
size_t pf_frame_mask_len(const struct PfFrame *frame);

/**
 * Copies the mask values into `re` and `im`, each of length `len`, which must
 * equal [`pf_frame_mask_len`].
 *
 * # Safety
 * `re` and `im` must be valid for `len` writes.
 */
enum PfStatus pf_frame_mask_values(const struct PfFrame *frame, double *re, double *im, size_t len);

/**
 * Runs the verification suite with `tests` random functions.
 * Returns [`PfStatus::VerifyFailed`] when a check exceeds `tol`; `*report`
 * is filled either way.
 *
 * # Safety
 * `frame` must be a live handle; `report` must be null or valid for writes.
 */
enum PfStatus pf_frame_verify(const struct PfFrame *frame,
                              size_t tests,
                              double tol,
                              uint64_t seed,
                              struct PfReport *report);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `frame` must be null or a handle not yet freed.
 */
void pf_frame_free(struct PfFrame *frame);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void pf_string_free(char *s);

/**
 * Message of the last failure on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *pf_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PADIC_FRAMES_H */
