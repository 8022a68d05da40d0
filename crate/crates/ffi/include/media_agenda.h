#ifndef MEDIA_AGENDA_H
#define MEDIA_AGENDA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MaPolarity {
  MA_POLARITY_NEGATIVE = -1,
  MA_POLARITY_NEUTRAL = 0,
  MA_POLARITY_POSITIVE = 1,
} MaPolarity;

typedef enum MaSide {
  MA_SIDE_A = 0,
  MA_SIDE_B = 1,
} MaSide;

// Result codes. Zero is success.
typedef enum MaStatus {
  MA_STATUS_OK = 0,
  MA_STATUS_NULL_POINTER = 1,
  MA_STATUS_INVALID_ARGUMENT = 2,
  // The statistic is undefined for this input (e.g. constant series).
  MA_STATUS_UNDEFINED = 3,
  MA_STATUS_DIMENSION = 4,
  MA_STATUS_SINGULAR = 5,
  MA_STATUS_NON_FINITE = 6,
  MA_STATUS_IO = 7,
  MA_STATUS_PARSE = 8,
  MA_STATUS_CONFIG = 9,
  // The output buffer is too small; the required length was written.
  MA_STATUS_BUFFER_TOO_SMALL = 10,
  MA_STATUS_PANIC = 11,
} MaStatus;

// A growing list of labelled entity mentions.
typedef struct MaMentions MaMentions;

// Factors `H` (documents × topics) and `W` (topics × terms, unit rows).
typedef struct MaNmf MaNmf;

// A daily series starting at a calendar date.
typedef struct MaSeries MaSeries;

// A calendar date.
typedef struct MaDate {
  int32_t year;
  uint32_t month;
  uint32_t day;
} MaDate;

typedef struct MaAdfResult {
  double statistic;
  size_t lag_order;
  size_t n_obs;
  bool reject_1pct;
  bool reject_5pct;
  bool reject_10pct;
} MaAdfResult;

typedef struct MaBetaFit {
  size_t tau;
  double beta;
  double intercept;
  // Standard error (`stderr` would clash with the stdio macro).
  double std_error;
  double t_stat;
  double p_value;
  size_t n;
} MaBetaFit;

typedef struct MaBootstrapResult {
  double point;
  double ci_low;
  double ci_high;
  double gamma;
  // Share of resamples with SB ≤ 0.
  double p_sign;
  // Standard error (`stderr` would clash with the stdio macro).
  double std_error;
  double ci_half_width;
  size_t resamples;
} MaBootstrapResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread; valid until the next call
// into this library from the same thread. Never NULL.
const char *ma_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *ma_version(void);

// Creates a series of `len` daily values starting at `start`.
//
// # Safety
// `values` must point to `len` doubles (may be NULL when `len` is 0);
// `out` must be a valid pointer.
enum MaStatus ma_series_new(struct MaDate start,
                            const double *values,
                            size_t len,
                            struct MaSeries **out_series);

// # Safety
// `series` must be NULL or a handle from this library, not yet freed.
void ma_series_free(struct MaSeries *series);

// Number of values; 0 for NULL.
//
// # Safety
// `series` must be NULL or a live handle.
size_t ma_series_len(const struct MaSeries *series);

// # Safety
// `series` must be a live handle and `out_date` valid.
enum MaStatus ma_series_start(const struct MaSeries *series, struct MaDate *out_date);

// Copies the values into `buffer` (capacity `cap`). `written`, when not
// NULL, receives the series length even if the buffer is too small.
//
// # Safety
// `series` must be a live handle; `buffer` must hold `cap` doubles.
enum MaStatus ma_series_values(const struct MaSeries *series,
                               double *buffer,
                               size_t cap,
                               size_t *written);

// Trailing mean over `window_days` days.
//
// # Safety
// `series` must be a live handle; `out_series` valid.
enum MaStatus ma_sliding_mean(const struct MaSeries *series,
                              size_t window_days,
                              struct MaSeries **out_series);

// Residuals of an OLS line fitted against the day index.
//
// # Safety
// `series` must be a live handle; `out_series` valid.
enum MaStatus ma_linear_detrend(const struct MaSeries *series, struct MaSeries **out_series);

// `x(t) − x(t−1)`; the result starts one day later.
//
// # Safety
// `series` must be a live handle; `out_series` valid.
enum MaStatus ma_first_difference(const struct MaSeries *series, struct MaSeries **out_series);

// Spearman's ρ of two equal-length series, paired by position.
//
// # Safety
// `a`, `b` must be live handles; `out_rho` valid.
enum MaStatus ma_spearman(const struct MaSeries *a, const struct MaSeries *b, double *out_rho);

// Augmented Dickey-Fuller test with a constant; the lag order is chosen by
// AIC from 0..=`max_lag_order`.
//
// # Safety
// `series` must be a live handle; `out_result` valid.
enum MaStatus ma_adf_test(const struct MaSeries *series,
                          size_t max_lag_order,
                          struct MaAdfResult *out_result);

// Regresses `dct(d + tau)` on `dt(d)` over shared dates.
//
// # Safety
// `dct`, `dt` must be live handles; `out_fit` valid.
enum MaStatus ma_granger_beta(const struct MaSeries *dct,
                              const struct MaSeries *dt,
                              size_t tau,
                              struct MaBetaFit *out_fit);

// Never returns NULL.
struct MaMentions *ma_mentions_new(void);

// # Safety
// `mentions` must be NULL or a live handle.
void ma_mentions_free(struct MaMentions *mentions);

// Appends one mention. `side` is an `MaSide` value and `polarity` an
// `MaPolarity` value; anything else is `MA_STATUS_INVALID_ARGUMENT`.
//
// # Safety
// `mentions` must be a live handle.
enum MaStatus ma_mentions_push(struct MaMentions *mentions, int32_t side, int32_t polarity);

// # Safety
// `mentions` must be NULL or a live handle.
size_t ma_mentions_len(const struct MaMentions *mentions);

// `(pos_A − neg_A − pos_B + neg_B) / total`.
//
// # Safety
// `mentions` must be a live handle; `out_sb` valid.
enum MaStatus ma_sentiment_bias(const struct MaMentions *mentions, double *out_sb);

// Percentile bootstrap of SB; identical for a fixed seed regardless of
// thread count.
//
// # Safety
// `mentions` must be a live handle; `out_result` valid.
enum MaStatus ma_bootstrap_sb(const struct MaMentions *mentions,
                              size_t resamples,
                              double gamma,
                              uint64_t seed,
                              struct MaBootstrapResult *out_result);

// Factorizes a dense nonnegative row-major `rows × cols` matrix.
// `tol <= 0` or `max_iter == 0` select the defaults (1e-5, 500).
//
// # Safety
// `data` must point to `rows * cols` doubles; `out_nmf` valid.
enum MaStatus ma_nmf_factorize(const double *data,
                               size_t rows,
                               size_t cols,
                               size_t n_topics,
                               uint64_t seed,
                               double tol,
                               size_t max_iter,
                               struct MaNmf **out_nmf);

// # Safety
// `nmf` must be NULL or a live handle.
void ma_nmf_free(struct MaNmf *nmf);

// # Safety
// `nmf` must be NULL or a live handle.
size_t ma_nmf_n_topics(const struct MaNmf *nmf);

// # Safety
// `nmf` must be NULL or a live handle.
size_t ma_nmf_iterations(const struct MaNmf *nmf);

// Frobenius norm of the residual; NaN for NULL.
//
// # Safety
// `nmf` must be NULL or a live handle.
double ma_nmf_final_error(const struct MaNmf *nmf);

// Copies `H` row-major (documents × topics).
//
// # Safety
// `nmf` must be a live handle; `buffer` must hold `cap` doubles.
enum MaStatus ma_nmf_h(const struct MaNmf *nmf, double *buffer, size_t cap, size_t *written);

// Copies `W` row-major (topics × terms).
//
// # Safety
// `nmf` must be a live handle; `buffer` must hold `cap` doubles.
enum MaStatus ma_nmf_w(const struct MaNmf *nmf, double *buffer, size_t cap, size_t *written);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEDIA_AGENDA_H */
