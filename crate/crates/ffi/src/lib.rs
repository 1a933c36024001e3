//! C ABI over `eigenrank`.
//!
//! Fallible calls return an [`ErStatus`]; on failure the message is available
//! from [`er_last_error_message`] on the same thread until the next failing
//! call. Handles are opaque and released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use eigenrank::corpus::{
    parse_citation_edges, parse_journal_metadata, CitationLedger, JournalTable, PairedObservations,
};
use eigenrank::metrics::{compute_scores, MetricScores, MetricsConfig, SolverConfig};
use eigenrank::spurious::{logistic_map_correlation, simulate_journal_sizes};
use eigenrank::stats::{log_pearson, mann_whitney_u, pearson, spearman, CorrelationResult};
use eigenrank::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Format = 3,
    Validation = 4,
    Inconsistent = 5,
    Degenerate = 6,
    Convergence = 7,
    Domain = 8,
    UndefinedCorrelation = 9,
    Io = 10,
    OutOfRange = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

impl From<&Error> for ErStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Format { .. } => ErStatus::Format,
            Error::Validation(_) => ErStatus::Validation,
            Error::Inconsistent(_) => ErStatus::Inconsistent,
            Error::Degenerate(_) => ErStatus::Degenerate,
            Error::Convergence { .. } => ErStatus::Convergence,
            Error::Domain(_) => ErStatus::Domain,
            Error::UndefinedCorrelation(_) => ErStatus::UndefinedCorrelation,
            Error::Io(_) => ErStatus::Io,
        }
    }
}

/// Journal table plus citation ledger.
pub struct ErCorpus {
    table: JournalTable,
    ledger: CitationLedger,
}

/// Computed scores with journal ids kept as C strings.
pub struct ErScores {
    scores: MetricScores,
    ids: Vec<CString>,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErMetricsOptions {
    pub window: u32,
    pub alpha: f64,
    pub tolerance: f64,
    pub max_iter: usize,
    pub exclude_self_influence: bool,
    pub exclude_self_counts: bool,
}

/// One journal's scores. `ai` and `impact_factor` are NaN when undefined.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErJournalScore {
    pub ef: f64,
    pub ai: f64,
    pub impact_factor: f64,
    pub total_citations: u64,
    pub n5: u64,
    pub n2: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErUTest {
    pub u: f64,
    pub z: f64,
    pub p: f64,
    pub log10_p: f64,
    pub n1: usize,
    pub n2: usize,
    pub tie_groups: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErSimulationSummary {
    pub mean_rho: f64,
    pub sd_rho: f64,
    pub fraction_positive: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: ErStatus, msg: impl Into<String>) -> ErStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> ErStatus {
    let status = ErStatus::from(&e);
    fail(status, e.to_string())
}

/// Runs `f`, turning library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), ErStatus>) -> ErStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ErStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(ErStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, ErStatus>;
}

impl<T> OrStatus<T> for eigenrank::Result<T> {
    fn or_status(self) -> Result<T, ErStatus> {
        self.map_err(from_error)
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), ErStatus> {
    if p.is_null() {
        return Err(fail(ErStatus::NullArgument, format!("{name} is null")));
    }
    Ok(())
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, ErStatus> {
    non_null(p, name)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(ErStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

/// # Safety
/// `p` must be null with `len == 0`, or point to `len` readable doubles.
unsafe fn doubles<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], ErStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(p, name)?;
    Ok(slice::from_raw_parts(p, len))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn er_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn er_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn er_metrics_options_default() -> ErMetricsOptions {
    let s = SolverConfig::default();
    ErMetricsOptions {
        window: eigenrank::metrics::DEFAULT_WINDOW,
        alpha: s.alpha,
        tolerance: s.tolerance,
        max_iter: s.max_iter,
        exclude_self_influence: true,
        exclude_self_counts: false,
    }
}

/// Parses journals.csv and citations.csv contents into a corpus handle.
///
/// # Safety
/// Both strings must be valid NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn er_corpus_from_csv(
    journals_csv: *const c_char,
    citations_csv: *const c_char,
    out: *mut *mut ErCorpus,
) -> ErStatus {
    guard(|| {
        non_null(out, "out")?;
        let table = parse_journal_metadata(text(journals_csv, "journals_csv")?.as_bytes()).or_status()?;
        let ledger = parse_citation_edges(text(citations_csv, "citations_csv")?.as_bytes()).or_status()?;
        ledger.validate(&table).or_status()?;
        *out = Box::into_raw(Box::new(ErCorpus { table, ledger }));
        Ok(())
    })
}

/// Number of journals; 0 for a null handle.
///
/// # Safety
/// `corpus` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn er_corpus_journal_count(corpus: *const ErCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.table.len())
}

/// # Safety
/// `corpus` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn er_corpus_free(corpus: *mut ErCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Computes all journal metrics. `options` may be null for defaults.
///
/// # Safety
/// `corpus` must be a live handle, `options` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn er_compute(
    corpus: *const ErCorpus,
    census_year: i32,
    options: *const ErMetricsOptions,
    out: *mut *mut ErScores,
) -> ErStatus {
    guard(|| {
        non_null(corpus, "corpus")?;
        non_null(out, "out")?;
        let c = &*corpus;
        let o = options.as_ref().copied().unwrap_or_else(|| er_metrics_options_default());
        let cfg = MetricsConfig {
            census_year,
            window: o.window,
            solver: SolverConfig {
                alpha: o.alpha,
                tolerance: o.tolerance,
                max_iter: o.max_iter,
            },
            exclude_self_influence: o.exclude_self_influence,
            exclude_self_counts: o.exclude_self_counts,
        };
        let (scores, _) = compute_scores(&c.ledger, &c.table, &cfg).or_status()?;
        let ids = scores
            .records
            .iter()
            .map(|r| CString::new(r.journal_id.as_str()).expect("ids contain no NUL"))
            .collect();
        *out = Box::into_raw(Box::new(ErScores { scores, ids }));
        Ok(())
    })
}

/// # Safety
/// `scores` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn er_scores_len(scores: *const ErScores) -> usize {
    scores.as_ref().map_or(0, |s| s.ids.len())
}

/// Journal id at `index`, owned by the handle; null when out of range.
///
/// # Safety
/// `scores` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn er_scores_journal_id(scores: *const ErScores, index: usize) -> *const c_char {
    scores
        .as_ref()
        .and_then(|s| s.ids.get(index))
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// # Safety
/// `scores` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn er_scores_get(scores: *const ErScores, index: usize, out: *mut ErJournalScore) -> ErStatus {
    guard(|| {
        non_null(scores, "scores")?;
        non_null(out, "out")?;
        let s = &*scores;
        let r = s.scores.records.get(index).ok_or_else(|| {
            fail(ErStatus::OutOfRange, format!("index {index} out of range for {} journals", s.ids.len()))
        })?;
        *out = ErJournalScore {
            ef: r.ef,
            ai: r.ai.unwrap_or(f64::NAN),
            impact_factor: r.impact_factor.unwrap_or(f64::NAN),
            total_citations: r.total_citations,
            n5: r.n5,
            n2: r.n2,
        };
        Ok(())
    })
}

/// Writes scores.csv into `buf` with a trailing NUL. `needed` receives the
/// required size including the NUL; pass a null `buf` to query it.
///
/// # Safety
/// `scores` must be a live handle, `buf` null or writable for `capacity`
/// bytes, `needed` writable.
#[no_mangle]
pub unsafe extern "C" fn er_scores_to_csv(
    scores: *const ErScores,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> ErStatus {
    guard(|| {
        non_null(scores, "scores")?;
        non_null(needed, "needed")?;
        let csv = (*scores).scores.to_csv();
        *needed = csv.len() + 1;
        if buf.is_null() {
            return Ok(());
        }
        if capacity < csv.len() + 1 {
            return Err(fail(
                ErStatus::BufferTooSmall,
                format!("need {} bytes, have {capacity}", csv.len() + 1),
            ));
        }
        ptr::copy_nonoverlapping(csv.as_ptr(), buf.cast::<u8>(), csv.len());
        *buf.add(csv.len()) = 0;
        Ok(())
    })
}

/// # Safety
/// `scores` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn er_scores_free(scores: *mut ErScores) {
    if !scores.is_null() {
        drop(Box::from_raw(scores));
    }
}

unsafe fn correlation(
    x: *const f64,
    y: *const f64,
    n: usize,
    rho: *mut f64,
    f: fn(&PairedObservations) -> eigenrank::Result<CorrelationResult>,
) -> ErStatus {
    guard(|| {
        non_null(rho, "rho")?;
        let obs = PairedObservations::from_series(doubles(x, n, "x")?.to_vec(), doubles(y, n, "y")?.to_vec())
            .or_status()?;
        *rho = f(&obs).or_status()?.rho;
        Ok(())
    })
}

/// # Safety
/// `x` and `y` must hold `n` doubles; `rho` must be writable.
#[no_mangle]
pub unsafe extern "C" fn er_pearson(x: *const f64, y: *const f64, n: usize, rho: *mut f64) -> ErStatus {
    correlation(x, y, n, rho, pearson)
}

/// # Safety
/// As [`er_pearson`].
#[no_mangle]
pub unsafe extern "C" fn er_spearman(x: *const f64, y: *const f64, n: usize, rho: *mut f64) -> ErStatus {
    correlation(x, y, n, rho, spearman)
}

/// Pearson correlation of the logged series; every value must be positive.
///
/// # Safety
/// As [`er_pearson`].
#[no_mangle]
pub unsafe extern "C" fn er_log_pearson(x: *const f64, y: *const f64, n: usize, rho: *mut f64) -> ErStatus {
    correlation(x, y, n, rho, log_pearson)
}

/// Two-sided Mann-Whitney U test.
///
/// # Safety
/// `a` must hold `n1` doubles, `b` `n2` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn er_mann_whitney_u(
    a: *const f64,
    n1: usize,
    b: *const f64,
    n2: usize,
    out: *mut ErUTest,
) -> ErStatus {
    guard(|| {
        non_null(out, "out")?;
        let t = mann_whitney_u(doubles(a, n1, "a")?, doubles(b, n2, "b")?).or_status()?;
        *out = ErUTest {
            u: t.u,
            z: t.z,
            p: t.p,
            log10_p: t.log10_p,
            n1: t.n1,
            n2: t.n2,
            tie_groups: t.tie_groups,
        };
        Ok(())
    })
}

/// Journal-size simulation. When `rhos` is non-null it receives one
/// correlation per trial.
///
/// # Safety
/// `rhos` must be null or writable for `trials` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn er_simulate_journal_sizes(
    ai_cv: f64,
    if_cv: f64,
    n5_cv: f64,
    n_journals: usize,
    trials: usize,
    seed: u64,
    rhos: *mut f64,
    out: *mut ErSimulationSummary,
) -> ErStatus {
    guard(|| {
        non_null(out, "out")?;
        let r = simulate_journal_sizes(ai_cv, if_cv, n5_cv, n_journals, trials, seed).or_status()?;
        if !rhos.is_null() {
            ptr::copy_nonoverlapping(r.rhos.as_ptr(), rhos, r.rhos.len());
        }
        *out = ErSimulationSummary {
            mean_rho: r.mean_rho,
            sd_rho: r.sd_rho,
            fraction_positive: r.fraction_positive(),
        };
        Ok(())
    })
}

/// Lag-one correlation of the logistic map.
///
/// # Safety
/// `rho` must be writable.
#[no_mangle]
pub unsafe extern "C" fn er_logistic_map_correlation(
    r: f64,
    x0: f64,
    n: usize,
    burn_in: usize,
    rho: *mut f64,
) -> ErStatus {
    guard(|| {
        non_null(rho, "rho")?;
        *rho = logistic_map_correlation(r, x0, n, burn_in).or_status()?;
        Ok(())
    })
}
