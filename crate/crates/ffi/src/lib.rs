//! C ABI over `media-agenda`.
//!
//! Conventions:
//! * every fallible function returns an [`MaStatus`]; results come back
//!   through out-pointers;
//! * objects are opaque handles created by `ma_*_new` (or an operation) and
//!   released with the matching `ma_*_free`, which accepts NULL;
//! * after a non-OK status, [`ma_last_error_message`] describes the failure
//!   on the calling thread;
//! * panics never cross the boundary; they surface as `MA_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chrono::NaiveDate;
use media_agenda::bootstrap::bootstrap_sb;
use media_agenda::nmf::{nmf_factorize, NmfFactors, NmfParams};
use media_agenda::sentiment::{sentiment_bias, LabeledMention, Polarity, SentimentTally, Side};
use media_agenda::series::{sliding_mean, DatedSeries};
use media_agenda::stats::{adf_test, first_difference, granger_beta, linear_detrend, spearman};
use media_agenda::vectorizer::DocTermMatrix;
use media_agenda::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The statistic is undefined for this input (e.g. constant series).
    Undefined = 3,
    Dimension = 4,
    Singular = 5,
    NonFinite = 6,
    Io = 7,
    Parse = 8,
    Config = 9,
    /// The output buffer is too small; the required length was written.
    BufferTooSmall = 10,
    Panic = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(err: &Error) -> MaStatus {
    match err {
        Error::Io { .. } => MaStatus::Io,
        Error::Parse { .. } => MaStatus::Parse,
        Error::InvalidArgument(_) | Error::DuplicateId(_) => MaStatus::InvalidArgument,
        Error::EmptyCorpus | Error::EmptyVocabulary | Error::Undefined(_) => MaStatus::Undefined,
        Error::Dimension(_) => MaStatus::Dimension,
        Error::NonFinite { .. } => MaStatus::NonFinite,
        Error::Singular(_) => MaStatus::Singular,
        Error::Config(_) => MaStatus::Config,
        Error::Stage { source, .. } => status_of(source),
    }
}

fn fail(status: MaStatus, msg: impl Into<String>) -> MaStatus {
    set_error(msg);
    status
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), MaStatus>) -> MaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MaStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(MaStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, MaStatus>;
}

impl<T> OrStatus<T> for media_agenda::Result<T> {
    fn or_status(self) -> Result<T, MaStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, MaStatus> {
    p.as_ref().ok_or_else(|| fail(MaStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, MaStatus> {
    p.as_mut().ok_or_else(|| fail(MaStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], MaStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(MaStatus::NullPointer, format!("{what} is NULL")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Copies `src` into `dst[..cap]`, always reporting the full length.
unsafe fn copy_out(src: &[f64], dst: *mut f64, cap: usize, written: *mut usize) -> Result<(), MaStatus> {
    if let Some(w) = written.as_mut() {
        *w = src.len();
    }
    if src.is_empty() {
        return Ok(());
    }
    if cap < src.len() {
        return Err(fail(
            MaStatus::BufferTooSmall,
            format!("buffer holds {cap} values, {} needed", src.len()),
        ));
    }
    if dst.is_null() {
        return Err(fail(MaStatus::NullPointer, "output buffer is NULL"));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    Ok(())
}

/// Message for the last failure on this thread; valid until the next call
/// into this library from the same thread. Never NULL.
#[no_mangle]
pub extern "C" fn ma_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ma_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains NUL"),
    };
    VERSION.as_ptr()
}

// ---------------------------------------------------------------- series

/// A daily series starting at a calendar date.
pub struct MaSeries(DatedSeries);

/// A calendar date.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaDate {
    pub year: i32,
    pub month: u32,
    pub day: u32,
}

fn boxed(s: DatedSeries) -> *mut MaSeries {
    Box::into_raw(Box::new(MaSeries(s)))
}

/// Creates a series of `len` daily values starting at `start`.
///
/// # Safety
/// `values` must point to `len` doubles (may be NULL when `len` is 0);
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ma_series_new(
    start: MaDate,
    values: *const f64,
    len: usize,
    out_series: *mut *mut MaSeries,
) -> MaStatus {
    guard(|| {
        let out_series = out(out_series, "out_series")?;
        let date = NaiveDate::from_ymd_opt(start.year, start.month, start.day).ok_or_else(|| {
            fail(
                MaStatus::InvalidArgument,
                format!("{}-{}-{} is not a date", start.year, start.month, start.day),
            )
        })?;
        let values = slice(values, len, "values")?.to_vec();
        *out_series = boxed(DatedSeries::new(date, values, "series").or_status()?);
        Ok(())
    })
}

/// # Safety
/// `series` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ma_series_free(series: *mut MaSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Number of values; 0 for NULL.
///
/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ma_series_len(series: *const MaSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `series` must be a live handle and `out_date` valid.
#[no_mangle]
pub unsafe extern "C" fn ma_series_start(series: *const MaSeries, out_date: *mut MaDate) -> MaStatus {
    guard(|| {
        use chrono::Datelike;
        let s = deref(series, "series")?;
        let d = s.0.start_date;
        *out(out_date, "out_date")? = MaDate {
            year: d.year(),
            month: d.month(),
            day: d.day(),
        };
        Ok(())
    })
}

/// Copies the values into `buffer` (capacity `cap`). `written`, when not
/// NULL, receives the series length even if the buffer is too small.
///
/// # Safety
/// `series` must be a live handle; `buffer` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn ma_series_values(
    series: *const MaSeries,
    buffer: *mut f64,
    cap: usize,
    written: *mut usize,
) -> MaStatus {
    guard(|| copy_out(&deref(series, "series")?.0.values, buffer, cap, written))
}

unsafe fn transform(
    series: *const MaSeries,
    out_series: *mut *mut MaSeries,
    f: impl FnOnce(&DatedSeries) -> media_agenda::Result<DatedSeries>,
) -> MaStatus {
    guard(|| {
        let s = deref(series, "series")?;
        let o = out(out_series, "out_series")?;
        *o = boxed(f(&s.0).or_status()?);
        Ok(())
    })
}

/// Trailing mean over `window_days` days.
///
/// # Safety
/// `series` must be a live handle; `out_series` valid.
#[no_mangle]
pub unsafe extern "C" fn ma_sliding_mean(
    series: *const MaSeries,
    window_days: usize,
    out_series: *mut *mut MaSeries,
) -> MaStatus {
    transform(series, out_series, |s| sliding_mean(s, window_days))
}

/// Residuals of an OLS line fitted against the day index.
///
/// # Safety
/// `series` must be a live handle; `out_series` valid.
#[no_mangle]
pub unsafe extern "C" fn ma_linear_detrend(series: *const MaSeries, out_series: *mut *mut MaSeries) -> MaStatus {
    transform(series, out_series, linear_detrend)
}

/// `x(t) − x(t−1)`; the result starts one day later.
///
/// # Safety
/// `series` must be a live handle; `out_series` valid.
#[no_mangle]
pub unsafe extern "C" fn ma_first_difference(series: *const MaSeries, out_series: *mut *mut MaSeries) -> MaStatus {
    transform(series, out_series, first_difference)
}

/// Spearman's ρ of two equal-length series, paired by position.
///
/// # Safety
/// `a`, `b` must be live handles; `out_rho` valid.
#[no_mangle]
pub unsafe extern "C" fn ma_spearman(a: *const MaSeries, b: *const MaSeries, out_rho: *mut f64) -> MaStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        let o = out(out_rho, "out_rho")?;
        *o = spearman(&a.0, &b.0).or_status()?;
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaAdfResult {
    pub statistic: f64,
    pub lag_order: usize,
    pub n_obs: usize,
    pub reject_1pct: bool,
    pub reject_5pct: bool,
    pub reject_10pct: bool,
}

/// Augmented Dickey-Fuller test with a constant; the lag order is chosen by
/// AIC from 0..=`max_lag_order`.
///
/// # Safety
/// `series` must be a live handle; `out_result` valid.
#[no_mangle]
pub unsafe extern "C" fn ma_adf_test(
    series: *const MaSeries,
    max_lag_order: usize,
    out_result: *mut MaAdfResult,
) -> MaStatus {
    guard(|| {
        let s = deref(series, "series")?;
        let o = out(out_result, "out_result")?;
        let r = adf_test(&s.0, max_lag_order).or_status()?;
        *o = MaAdfResult {
            statistic: r.statistic,
            lag_order: r.lag_order,
            n_obs: r.n_obs,
            reject_1pct: r.reject_1pct,
            reject_5pct: r.reject_5pct,
            reject_10pct: r.reject_10pct,
        };
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaBetaFit {
    pub tau: usize,
    pub beta: f64,
    pub intercept: f64,
    /// Standard error (`stderr` would clash with the stdio macro).
    pub std_error: f64,
    pub t_stat: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Regresses `dct(d + tau)` on `dt(d)` over shared dates.
///
/// # Safety
/// `dct`, `dt` must be live handles; `out_fit` valid.
#[no_mangle]
pub unsafe extern "C" fn ma_granger_beta(
    dct: *const MaSeries,
    dt: *const MaSeries,
    tau: usize,
    out_fit: *mut MaBetaFit,
) -> MaStatus {
    guard(|| {
        let (dct, dt) = (deref(dct, "dct")?, deref(dt, "dt")?);
        let o = out(out_fit, "out_fit")?;
        let f = granger_beta(&dct.0, &dt.0, tau).or_status()?;
        *o = MaBetaFit {
            tau: f.tau,
            beta: f.beta,
            intercept: f.intercept,
            std_error: f.stderr,
            t_stat: f.t_stat,
            p_value: f.p_value,
            n: f.n,
        };
        Ok(())
    })
}

// ------------------------------------------------------------- sentiment

/// A growing list of labelled entity mentions.
pub struct MaMentions(Vec<LabeledMention>);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaSide {
    A = 0,
    B = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaPolarity {
    Negative = -1,
    Neutral = 0,
    Positive = 1,
}

/// Never returns NULL.
#[no_mangle]
pub extern "C" fn ma_mentions_new() -> *mut MaMentions {
    Box::into_raw(Box::new(MaMentions(Vec::new())))
}

/// # Safety
/// `mentions` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ma_mentions_free(mentions: *mut MaMentions) {
    if !mentions.is_null() {
        drop(Box::from_raw(mentions));
    }
}

/// Appends one mention. `side` is an `MaSide` value and `polarity` an
/// `MaPolarity` value; anything else is `MA_STATUS_INVALID_ARGUMENT`.
///
/// # Safety
/// `mentions` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ma_mentions_push(mentions: *mut MaMentions, side: i32, polarity: i32) -> MaStatus {
    guard(|| {
        let m = out(mentions, "mentions")?;
        let side = match side {
            s if s == MaSide::A as i32 => Side::A,
            s if s == MaSide::B as i32 => Side::B,
            s => return Err(fail(MaStatus::InvalidArgument, format!("side {s} is not MA_SIDE_A or MA_SIDE_B"))),
        };
        let polarity = match polarity {
            p if p == MaPolarity::Negative as i32 => Polarity::Negative,
            p if p == MaPolarity::Neutral as i32 => Polarity::Neutral,
            p if p == MaPolarity::Positive as i32 => Polarity::Positive,
            p => return Err(fail(MaStatus::InvalidArgument, format!("polarity {p} is not an MaPolarity"))),
        };
        m.0.push(LabeledMention::new(side, polarity));
        Ok(())
    })
}

/// # Safety
/// `mentions` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ma_mentions_len(mentions: *const MaMentions) -> usize {
    mentions.as_ref().map_or(0, |m| m.0.len())
}

/// `(pos_A − neg_A − pos_B + neg_B) / total`.
///
/// # Safety
/// `mentions` must be a live handle; `out_sb` valid.
#[no_mangle]
pub unsafe extern "C" fn ma_sentiment_bias(mentions: *const MaMentions, out_sb: *mut f64) -> MaStatus {
    guard(|| {
        let m = deref(mentions, "mentions")?;
        let o = out(out_sb, "out_sb")?;
        *o = sentiment_bias(&SentimentTally::from_labels(&m.0)).or_status()?.value;
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaBootstrapResult {
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub gamma: f64,
    /// Share of resamples with SB ≤ 0.
    pub p_sign: f64,
    /// Standard error (`stderr` would clash with the stdio macro).
    pub std_error: f64,
    pub ci_half_width: f64,
    pub resamples: usize,
}

/// Percentile bootstrap of SB; identical for a fixed seed regardless of
/// thread count.
///
/// # Safety
/// `mentions` must be a live handle; `out_result` valid.
#[no_mangle]
pub unsafe extern "C" fn ma_bootstrap_sb(
    mentions: *const MaMentions,
    resamples: usize,
    gamma: f64,
    seed: u64,
    out_result: *mut MaBootstrapResult,
) -> MaStatus {
    guard(|| {
        let m = deref(mentions, "mentions")?;
        let o = out(out_result, "out_result")?;
        let r = bootstrap_sb(&m.0, resamples, gamma, seed).or_status()?;
        *o = MaBootstrapResult {
            point: r.point,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            gamma: r.gamma,
            p_sign: r.p_sign,
            std_error: r.stderr,
            ci_half_width: r.ci_half_width,
            resamples: r.resamples,
        };
        Ok(())
    })
}

// ------------------------------------------------------------------- NMF

/// Factors `H` (documents × topics) and `W` (topics × terms, unit rows).
pub struct MaNmf(NmfFactors);

/// Factorizes a dense nonnegative row-major `rows × cols` matrix.
/// `tol <= 0` or `max_iter == 0` select the defaults (1e-5, 500).
///
/// # Safety
/// `data` must point to `rows * cols` doubles; `out_nmf` valid.
#[no_mangle]
pub unsafe extern "C" fn ma_nmf_factorize(
    data: *const f64,
    rows: usize,
    cols: usize,
    n_topics: usize,
    seed: u64,
    tol: f64,
    max_iter: usize,
    out_nmf: *mut *mut MaNmf,
) -> MaStatus {
    guard(|| {
        let o = out(out_nmf, "out_nmf")?;
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| fail(MaStatus::Dimension, "rows * cols overflows"))?;
        let flat = slice(data, len, "data")?;
        let dense: Vec<Vec<f64>> = if cols == 0 {
            Vec::new()
        } else {
            flat.chunks(cols).map(<[f64]>::to_vec).collect()
        };
        let m = DocTermMatrix::from_dense(&dense).or_status()?;
        let mut params = NmfParams::new(n_topics, seed);
        if tol > 0.0 {
            params.tol = tol;
        }
        if max_iter > 0 {
            params.max_iter = max_iter;
        }
        *o = Box::into_raw(Box::new(MaNmf(nmf_factorize(&m, &params).or_status()?)));
        Ok(())
    })
}

/// # Safety
/// `nmf` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ma_nmf_free(nmf: *mut MaNmf) {
    if !nmf.is_null() {
        drop(Box::from_raw(nmf));
    }
}

/// # Safety
/// `nmf` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ma_nmf_n_topics(nmf: *const MaNmf) -> usize {
    nmf.as_ref().map_or(0, |f| f.0.n_topics())
}

/// # Safety
/// `nmf` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ma_nmf_iterations(nmf: *const MaNmf) -> usize {
    nmf.as_ref().map_or(0, |f| f.0.iterations)
}

/// Frobenius norm of the residual; NaN for NULL.
///
/// # Safety
/// `nmf` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ma_nmf_final_error(nmf: *const MaNmf) -> f64 {
    nmf.as_ref().map_or(f64::NAN, |f| f.0.final_error)
}

/// Copies `H` row-major (documents × topics).
///
/// # Safety
/// `nmf` must be a live handle; `buffer` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn ma_nmf_h(nmf: *const MaNmf, buffer: *mut f64, cap: usize, written: *mut usize) -> MaStatus {
    guard(|| {
        let f = &deref(nmf, "nmf")?.0;
        let h: Vec<f64> = (0..f.doc_ids.len()).flat_map(|j| f.h_row(j).to_vec()).collect();
        copy_out(&h, buffer, cap, written)
    })
}

/// Copies `W` row-major (topics × terms).
///
/// # Safety
/// `nmf` must be a live handle; `buffer` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn ma_nmf_w(nmf: *const MaNmf, buffer: *mut f64, cap: usize, written: *mut usize) -> MaStatus {
    guard(|| {
        let f = &deref(nmf, "nmf")?.0;
        let w: Vec<f64> = (0..f.n_topics()).flat_map(|i| f.w_row(i).to_vec()).collect();
        copy_out(&w, buffer, cap, written)
    })
}
