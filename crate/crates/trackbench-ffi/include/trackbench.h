/* C interface to the trackbench tracker evaluation engine. Generated by cbindgen; do not edit. */

#ifndef TRACKBENCH_H
#define TRACKBENCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define TB_ANGLE_RAW 0

#define TB_ANGLE_WRAP 1

#define TB_CURVE_PRECISION 0

#define TB_CURVE_SUCCESS 1

#define TB_CURVE_MATCHING 2

#define TB_COMPARISON_STRICT 0

#define TB_COMPARISON_INCLUSIVE 1

/**
 * Result of every fallible call. Zero is success; everything else names
 * the first check that failed.
 */
enum TbStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  TbStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  TbStatus_NullPointer = 1,
  /**
   * Box dimensions were not positive finite numbers.
   */
  TbStatus_InvalidBox = 2,
  /**
   * A numeric or selector argument was outside its domain.
   */
  TbStatus_InvalidArgument = 3,
  /**
   * The accumulator holds no frames yet.
   */
  TbStatus_Empty = 4,
  /**
   * A region line did not parse.
   */
  TbStatus_ParseError = 5,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum TbStatus TbStatus;
#else
typedef int32_t TbStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Opaque per-sequence accumulator: an angle convention fixed at creation
 * plus the frames pushed so far.
 */
typedef struct TbSequence TbSequence;

/**
 * A rotated rectangle: center, side lengths, orientation in degrees.
 */
typedef struct TbBox {
  double cx;
  double cy;
  double w;
  double h;
  double theta;
} TbBox;

/**
 * Per-frame measures. On a failure frame `valid` is false, the overlap
 * and matching score are zero, and the remaining errors are NaN.
 */
typedef struct TbFrameMeasures {
  bool valid;
  double e_c;
  double e_a;
  double e_h;
  double e_w;
  double e_theta;
  double e_ms;
} TbFrameMeasures;

/**
 * Sequence summary. The four geometric averages cover valid frames only
 * and are NaN (with `has_geometry` false) when every frame failed;
 * overlap and matching score average zeros in for failures.
 */
typedef struct TbSummary {
  size_t n_frames;
  size_t n_failures;
  bool has_geometry;
  double avg_c;
  double avg_h;
  double avg_w;
  double avg_theta;
  double avg_a;
  double avg_ms;
} TbSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * IoU of two rotated boxes, in [0, 1].
 *
 * # Safety
 *
 * `a`, `b`, and `out` must be valid pointers; `out` must be writable.
 */
TbStatus tb_box_iou(const struct TbBox *a, const struct TbBox *b, double *out);

/**
 * Composite matching score from the four errors and the overlap.
 * Errors must be non-negative and finite, the overlap in [0, 1].
 *
 * # Safety
 *
 * `out` must be a valid writable pointer.
 */
TbStatus tb_matching_score(double e_c,
                           double e_h,
                           double e_w,
                           double e_theta,
                           double e_a,
                           double *out);

/**
 * All measures for one frame. A null `tracked` marks a failure frame.
 * `angle_mode` is `TB_ANGLE_RAW` or `TB_ANGLE_WRAP`.
 *
 * # Safety
 *
 * `gt` and `out` must be valid pointers; `tracked` may be null but must
 * otherwise be valid; `out` must be writable.
 */
TbStatus tb_frame_measures(const struct TbBox *gt,
                           const struct TbBox *tracked,
                           int32_t angle_mode_raw,
                           struct TbFrameMeasures *out);

/**
 * Parses one annotation line (8-number corners, 4-number axis-aligned
 * box, or a single-number failure marker). On a failure marker
 * `out_is_failure` is set and `out_box` is left untouched.
 *
 * # Safety
 *
 * `line` must be a valid NUL-terminated string; `out_box` and
 * `out_is_failure` must be valid writable pointers.
 */
TbStatus tb_parse_region(const char *line, struct TbBox *out_box, bool *out_is_failure);

/**
 * Creates an accumulator; returns null if `angle_mode` is not one of the
 * `TB_ANGLE_*` values. Release with [`tb_sequence_free`].
 */
struct TbSequence *tb_sequence_new(int32_t angle_mode_raw);

/**
 * Scores one frame and appends it. A null `tracked` records a failure.
 *
 * # Safety
 *
 * `seq` must come from [`tb_sequence_new`] and not be freed; `gt` must be
 * valid; `tracked` may be null but must otherwise be valid.
 */
TbStatus tb_sequence_push(struct TbSequence *seq,
                          const struct TbBox *gt,
                          const struct TbBox *tracked);

/**
 * Number of frames pushed so far; zero for a null handle.
 *
 * # Safety
 *
 * `seq` must be null or a live handle from [`tb_sequence_new`].
 */
size_t tb_sequence_len(const struct TbSequence *seq);

/**
 * Averages over the accumulated frames.
 *
 * # Safety
 *
 * `seq` must be a live handle; `out` must be a valid writable pointer.
 */
TbStatus tb_sequence_summary(const struct TbSequence *seq, struct TbSummary *out);

/**
 * Area under the selected curve on the standard grids (pixel thresholds
 * 0..=50 for precision, 101 steps over [0, 1] otherwise). `comparison`
 * picks strict or inclusive thresholding and is ignored for precision.
 *
 * # Safety
 *
 * `seq` must be a live handle; `out` must be a valid writable pointer.
 */
TbStatus tb_sequence_auc(const struct TbSequence *seq,
                         int32_t kind,
                         int32_t comparison_raw,
                         double *out);

/**
 * Fraction of accumulated frames passing at one threshold: center error
 * within `threshold` pixels for precision, overlap or matching score
 * beating `threshold` for the other kinds.
 *
 * # Safety
 *
 * `seq` must be a live handle; `out` must be a valid writable pointer.
 */
TbStatus tb_sequence_pass_rate(const struct TbSequence *seq,
                               int32_t kind,
                               int32_t comparison_raw,
                               double threshold,
                               double *out);

/**
 * Releases a handle. Null is a no-op.
 *
 * # Safety
 *
 * `seq` must be null or a handle from [`tb_sequence_new`] that has not
 * already been freed; it must not be used afterwards.
 */
void tb_sequence_free(struct TbSequence *seq);

/**
 * Static name for a status code; unknown codes map to "unknown".
 */
const char *tb_status_name(int32_t status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRACKBENCH_H */
