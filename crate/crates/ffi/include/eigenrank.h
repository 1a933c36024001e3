#ifndef EIGENRANK_H
#define EIGENRANK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ErStatus {
  ER_STATUS_OK = 0,
  ER_STATUS_NULL_ARGUMENT = 1,
  ER_STATUS_INVALID_UTF8 = 2,
  ER_STATUS_FORMAT = 3,
  ER_STATUS_VALIDATION = 4,
  ER_STATUS_INCONSISTENT = 5,
  ER_STATUS_DEGENERATE = 6,
  ER_STATUS_CONVERGENCE = 7,
  ER_STATUS_DOMAIN = 8,
  ER_STATUS_UNDEFINED_CORRELATION = 9,
  ER_STATUS_IO = 10,
  ER_STATUS_OUT_OF_RANGE = 11,
  ER_STATUS_BUFFER_TOO_SMALL = 12,
  ER_STATUS_PANIC = 13,
} ErStatus;

/**
 * Journal table plus citation ledger.
 */
typedef struct ErCorpus ErCorpus;

/**
 * Computed scores with journal ids kept as C strings.
 */
typedef struct ErScores ErScores;

typedef struct ErMetricsOptions {
  uint32_t window;
  double alpha;
  double tolerance;
  size_t max_iter;
  bool exclude_self_influence;
  bool exclude_self_counts;
} ErMetricsOptions;

/**
 * One journal's scores. `ai` and `impact_factor` are NaN when undefined.
 */
typedef struct ErJournalScore {
  double ef;
  double ai;
  double impact_factor;
  uint64_t total_citations;
  uint64_t n5;
  uint64_t n2;
} ErJournalScore;

typedef struct ErUTest {
  double u;
  double z;
  double p;
  double log10_p;
  size_t n1;
  size_t n2;
  size_t tie_groups;
} ErUTest;

typedef struct ErSimulationSummary {
  double mean_rho;
  double sd_rho;
  double fraction_positive;
} ErSimulationSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *er_version(void);

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *er_last_error_message(void);

struct ErMetricsOptions er_metrics_options_default(void);

/**
 * Parses journals.csv and citations.csv contents into a corpus handle.
 *
 * # Safety
 * Both strings must be valid NUL-terminated strings; `out` must be writable.
 */
enum ErStatus er_corpus_from_csv(const char *journals_csv,
                                 const char *citations_csv,
                                 struct ErCorpus **out);

/**
 * Number of journals; 0 for a null handle.
 *
 * # Safety
 * `corpus` must be null or a live handle.
 */
size_t er_corpus_journal_count(const struct ErCorpus *corpus);

/**
 * # Safety
 * `corpus` must be null or a handle not yet freed.
 */
void er_corpus_free(struct ErCorpus *corpus);

/**
 * Computes all journal metrics. `options` may be null for defaults.
 *
 * # Safety
 * `corpus` must be a live handle, `options` null or readable, `out` writable.
 */
enum ErStatus er_compute(const struct ErCorpus *corpus,
                         int32_t census_year,
                         const struct ErMetricsOptions *options,
                         struct ErScores **out);

/**
 * # Safety
 * `scores` must be null or a live handle.
 */
size_t er_scores_len(const struct ErScores *scores);

/**
 * Journal id at `index`, owned by the handle; null when out of range.
 *
 * # Safety
 * `scores` must be null or a live handle.
 */
const char *er_scores_journal_id(const struct ErScores *scores, size_t index);

/**
 * # Safety
 * `scores` must be a live handle and `out` writable.
 */
enum ErStatus er_scores_get(const struct ErScores *scores,
                            size_t index,
                            struct ErJournalScore *out);

/**
 * Writes scores.csv into `buf` with a trailing NUL. `needed` receives the
 * required size including the NUL; pass a null `buf` to query it.
 *
 * # Safety
 * `scores` must be a live handle, `buf` null or writable for `capacity`
 * bytes, `needed` writable.
 */
enum ErStatus er_scores_to_csv(const struct ErScores *scores,
                               char *buf,
                               size_t capacity,
                               size_t *needed);

/**
 * # Safety
 * `scores` must be null or a handle not yet freed.
 */
void er_scores_free(struct ErScores *scores);

/**
 * # Safety
 * `x` and `y` must hold `n` doubles; `rho` must be writable.
 */
enum ErStatus er_pearson(const double *x, const double *y, size_t n, double *rho);

/**
 * # Safety
 * As [`er_pearson`].
 */
enum ErStatus er_spearman(const double *x, const double *y, size_t n, double *rho);

/**
 * Pearson correlation of the logged series; every value must be positive.
 *
 * # Safety
 * As [`er_pearson`].
 */
enum ErStatus er_log_pearson(const double *x, const double *y, size_t n, double *rho);

/**
 * Two-sided Mann-Whitney U test.
 *
 * # Safety
 * `a` must hold `n1` doubles, `b` `n2` doubles; `out` must be writable.
 */
enum ErStatus er_mann_whitney_u(const double *a,
                                size_t n1,
                                const double *b,
                                size_t n2,
                                struct ErUTest *out);

/**
 * Journal-size simulation. When `rhos` is non-null it receives one
 * correlation per trial.
 *
 * # Safety
 * `rhos` must be null or writable for `trials` doubles; `out` writable.
 */
enum ErStatus er_simulate_journal_sizes(double ai_cv,
                                        double if_cv,
                                        double n5_cv,
                                        size_t n_journals,
                                        size_t trials,
                                        uint64_t seed,
                                        double *rhos,
                                        struct ErSimulationSummary *out);

/**
 * Lag-one correlation of the logistic map.
 *
 * # Safety
 * `rho` must be writable.
 */
enum ErStatus er_logistic_map_correlation(double r,
                                          double x0,
                                          size_t n,
                                          size_t burn_in,
                                          double *rho);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EIGENRANK_H */
