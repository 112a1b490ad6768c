#ifndef STATECAST_H
#define STATECAST_H

/* Generated by cbindgen from statecast-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which classifier a cross-validation run trains.
 */
typedef enum ScClassifier {
  ScClassifier_Logistic = 0,
  ScClassifier_Forest = 1,
} ScClassifier;

/**
 * Result of every API call.
 */
typedef enum ScStatus {
  ScStatus_Ok = 0,
  /**
   * Model or runtime failure (mirrors CLI exit code 1).
   */
  ScStatus_ModelError = 1,
  /**
   * Invalid input: files, arguments, or validation (CLI exit code 2).
   */
  ScStatus_InputError = 2,
  ScStatus_NullPointer = 3,
  ScStatus_InvalidUtf8 = 4,
  /**
   * An internal panic was caught at the boundary.
   */
  ScStatus_Panic = 5,
} ScStatus;

/**
 * Opaque corpus handle.
 */
typedef struct ScCorpus ScCorpus;

/**
 * Opaque forecast-ensemble handle.
 */
typedef struct ScEnsemble ScEnsemble;

/**
 * Opaque evaluation-report handle.
 */
typedef struct ScReport ScReport;

/**
 * Counting summary of a forecast ensemble. `modal_year` and `median_year`
 * are meaningful only when the matching `has_*` flag is true.
 */
typedef struct ScForecastSummary {
  uint64_t trials;
  double censored_fraction;
  bool has_modal_year;
  int32_t modal_year;
  double modal_density;
  double density_within_2y;
  bool has_median_year;
  int32_t median_year;
  double density_10y_or_later;
} ScForecastSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread; never free it.
 */
const char *sc_last_error_message(void);

/**
 * Static library version string; never free it.
 */
const char *sc_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned by a `sc_*` function that
 * documents `sc_string_free` ownership, not yet freed; NULL is a no-op.
 */
void sc_string_free(char *s);

/**
 * Loads and validates a corpus from the policies and traits files.
 * `filter_top_down` excludes top-down policies instead of failing.
 * On success `*out` owns the corpus; release it with `sc_corpus_free`.
 *
 * # Safety
 * `policies_path` and `traits_path` must be NUL-terminated strings; `out`
 * must point to writable storage for one pointer.
 */
enum ScStatus sc_corpus_load(const char *policies_path,
                             const char *traits_path,
                             bool filter_top_down,
                             struct ScCorpus **out);

/**
 * # Safety
 * `corpus` must come from `sc_corpus_load` and not be freed twice.
 */
void sc_corpus_free(struct ScCorpus *corpus);

/**
 * Number of policies in the corpus.
 *
 * # Safety
 * `corpus` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_corpus_policy_count(const struct ScCorpus *corpus, uint64_t *out);

/**
 * Canonical structured-text form of the corpus. Free with
 * `sc_string_free`.
 *
 * # Safety
 * `corpus` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_corpus_canonical_text(const struct ScCorpus *corpus, char **out);

/**
 * Cross-validates a classifier of the national-action outcome and returns
 * a report handle; release it with `sc_report_free`.
 *
 * # Safety
 * `corpus` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_classify(const struct ScCorpus *corpus,
                          enum ScClassifier model,
                          uint32_t folds,
                          uint32_t trials,
                          uint64_t seed,
                          struct ScReport **out);

/**
 * Mean, 5th-, and 95th-percentile score of a report.
 *
 * # Safety
 * `report` must be a live handle; the three outputs must be writable.
 */
enum ScStatus sc_report_scores(const struct ScReport *report,
                               double *mean,
                               double *p05,
                               double *p95);

/**
 * Full structured-text report document. Free with `sc_string_free`.
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_report_text(const struct ScReport *report, char **out);

/**
 * # Safety
 * `report` must come from `sc_classify` and not be freed twice.
 */
void sc_report_free(struct ScReport *report);

/**
 * Runs the bootstrap-ensemble forecast for one policy. The threshold pool
 * comes from the corpus; `leave_one_out` removes the policy's own
 * threshold. On success `*out` owns the ensemble; release it with
 * `sc_ensemble_free`.
 *
 * # Safety
 * `corpus` must be a live handle, `policy_id` a NUL-terminated string, and
 * `out` writable.
 */
enum ScStatus sc_forecast(const struct ScCorpus *corpus,
                          const char *policy_id,
                          uint32_t train_n,
                          uint32_t trials,
                          uint64_t seed,
                          double noise_sigma,
                          double horizon_years,
                          bool leave_one_out,
                          struct ScEnsemble **out);

/**
 * Copies the ensemble summary into `out`.
 *
 * # Safety
 * `ensemble` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_ensemble_summary(const struct ScEnsemble *ensemble, struct ScForecastSummary *out);

/**
 * Serialized ensemble document (summary plus per-trial records). Free with
 * `sc_string_free`.
 *
 * # Safety
 * `ensemble` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_ensemble_text(const struct ScEnsemble *ensemble, char **out);

/**
 * # Safety
 * `ensemble` must come from `sc_forecast` and not be freed twice.
 */
void sc_ensemble_free(struct ScEnsemble *ensemble);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* STATECAST_H */
