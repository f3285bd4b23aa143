#ifndef STAINFORGE_H
#define STAINFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_ARGUMENT = 2,
  SF_STATUS_INVALID_IMAGE = 3,
  SF_STATUS_STATS_FORMAT = 4,
  SF_STATUS_VERSION_MISMATCH = 5,
  SF_STATUS_MISSING_DISTRIBUTION = 6,
  SF_STATUS_INSUFFICIENT_SAMPLES = 7,
  SF_STATUS_BUFFER_TOO_SMALL = 8,
  SF_STATUS_INTERNAL = 9,
} SfStatus;

typedef enum SfColorSpace {
  SF_COLOR_SPACE_LAB = 0,
  SF_COLOR_SPACE_HSV = 1,
  SF_COLOR_SPACE_HED = 2,
} SfColorSpace;

typedef enum SfMode {
  SF_MODE_PASS_THROUGH = 0,
  SF_MODE_RAND_STAIN_NA = 1,
  /**
   * RandStainNA restricted to the given space.
   */
  SF_MODE_FIXED = 2,
  /**
   * Normalization to the mean template, or to a template image.
   */
  SF_MODE_SN = 3,
  SF_MODE_SA1 = 4,
  SF_MODE_SA2 = 5,
} SfMode;

typedef enum SfStrength {
  SF_STRENGTH_LIGHT = 0,
  SF_STRENGTH_STRONG = 1,
} SfStrength;

typedef struct SfPipeline SfPipeline;

/**
 * Fitted statistics, at most one distribution per color space.
 */
typedef struct SfStats SfStats;

/**
 * Per-channel mean and standard deviation of one image.
 */
typedef struct SfChannelStats {
  double avg[3];
  double std[3];
} SfChannelStats;

/**
 * Fitted moments for one color space; `sd_*` are standard deviations.
 */
typedef struct SfDistribution {
  double mean_of_avg[3];
  double sd_of_avg[3];
  double mean_of_std[3];
  double sd_of_std[3];
  size_t n_samples;
} SfDistribution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sf_version(void);

/**
 * Static description of a status code.
 */
const char *sf_status_message(enum SfStatus status);

/**
 * Detail message of the last failed call on this thread, empty after a
 * success. Valid until the next call into the library on this thread.
 */
const char *sf_last_error(void);

/**
 * Frees a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sf_string_free(char *s);

/**
 * Per-channel statistics of one image in `space`.
 *
 * # Safety
 * `pixels` must point to `width * height * 3` readable bytes.
 */
enum SfStatus sf_channel_stats(const uint8_t *pixels,
                               uint32_t width,
                               uint32_t height,
                               enum SfColorSpace space,
                               struct SfChannelStats *out);

/**
 * Fits one distribution per space in `spaces` over `count` images.
 * `family` may be null for Gaussian; otherwise e.g. "laplace" or "t:7".
 *
 * # Safety
 * `pixels`, `widths` and `heights` must each hold `count` entries, every
 * image buffer sized as described in the module docs; `spaces` must hold
 * `n_spaces` entries.
 */
enum SfStatus sf_stats_fit(const uint8_t *const *pixels,
                           const uint32_t *widths,
                           const uint32_t *heights,
                           size_t count,
                           const enum SfColorSpace *spaces,
                           size_t n_spaces,
                           const char *family,
                           struct SfStats **out);

/**
 * Parses the text form written by `stainforge fit`.
 *
 * # Safety
 * `text` must be a NUL-terminated string.
 */
enum SfStatus sf_stats_parse(const char *text, struct SfStats **out);

/**
 * Serializes to the text form; free the result with [`sf_string_free`].
 *
 * # Safety
 * `stats` must be a live handle.
 */
enum SfStatus sf_stats_to_string(const struct SfStats *stats, char **out);

/**
 * Copies the fitted moments for `space`.
 *
 * # Safety
 * `stats` must be a live handle.
 */
enum SfStatus sf_stats_get(const struct SfStats *stats,
                           enum SfColorSpace space,
                           struct SfDistribution *out);

/**
 * # Safety
 * `stats` must be null or a handle not yet freed.
 */
void sf_stats_free(struct SfStats *stats);

/**
 * Creates a pipeline. `space` is used by the fixed, SN and SA modes and
 * ignored otherwise; `strength` only by the SA modes. `stats` may be null
 * for modes that do not sample templates; it is copied, not retained.
 *
 * # Safety
 * `stats` must be null or a live handle.
 */
enum SfStatus sf_pipeline_new(enum SfMode mode,
                              enum SfColorSpace space,
                              enum SfStrength strength,
                              const struct SfStats *stats,
                              uint64_t seed,
                              struct SfPipeline **out);

/**
 * Color-space probabilities for RandStainNA; must be non-negative and sum to 1.
 *
 * # Safety
 * `p` must be a live handle.
 */
enum SfStatus sf_pipeline_set_space_probs(struct SfPipeline *p, double lab, double hsv, double hed);

/**
 * Overrides the sampling family of every distribution; null restores the
 * fitted families.
 *
 * # Safety
 * `p` must be a live handle; `family` null or NUL-terminated.
 */
enum SfStatus sf_pipeline_set_family(struct SfPipeline *p, const char *family);

/**
 * Draw one template for all items instead of one per item.
 *
 * # Safety
 * `p` must be a live handle.
 */
enum SfStatus sf_pipeline_set_shared_template(struct SfPipeline *p, bool shared);

/**
 * SN mode only: normalize to the statistics of a physical template image
 * instead of the mean template.
 *
 * # Safety
 * `p` must be a live handle; `pixels` as in the module docs.
 */
enum SfStatus sf_pipeline_set_template_image(struct SfPipeline *p,
                                             const uint8_t *pixels,
                                             uint32_t width,
                                             uint32_t height);

/**
 * Transforms batch item `index`. Output equals what `stainforge apply`
 * writes for the image at position `index` of its sorted input listing
 * under the same settings. `out_pixels` must hold `width * height * 3`
 * bytes; `out_clamped` may be null.
 *
 * # Safety
 * `p` must be a live handle; buffers as documented.
 */
enum SfStatus sf_transform(const struct SfPipeline *p,
                           const uint8_t *pixels,
                           uint32_t width,
                           uint32_t height,
                           uint64_t index,
                           uint8_t *out_pixels,
                           size_t out_len,
                           double *out_clamped);

/**
 * # Safety
 * `p` must be null or a handle not yet freed.
 */
void sf_pipeline_free(struct SfPipeline *p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STAINFORGE_H */
