//! C ABI for the statecast forecaster.
//!
//! Handles are opaque pointers created and released by this library. Every
//! function returns an [`ScStatus`]; on any failure the per-thread message
//! from [`sc_last_error_message`] describes what went wrong. Strings
//! returned as `char*` are owned by the caller and must be released with
//! [`sc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use statecast::corpus::{national_threshold, Corpus};
use statecast::growth::{forecast, FitConfig, ForecastEnsemble, ThresholdPool};
use statecast::learn::{
    classification_dataset, cross_validate, EvalReport, ForestConfig, LogisticConfig, ModelSpec,
};
use statecast::Error;

/// Result of every API call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScStatus {
    Ok = 0,
    /// Model or runtime failure (mirrors CLI exit code 1).
    ModelError = 1,
    /// Invalid input: files, arguments, or validation (CLI exit code 2).
    InputError = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
}

/// Which classifier a cross-validation run trains.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScClassifier {
    Logistic = 0,
    Forest = 1,
}

/// Counting summary of a forecast ensemble. `modal_year` and `median_year`
/// are meaningful only when the matching `has_*` flag is true.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct ScForecastSummary {
    pub trials: u64,
    pub censored_fraction: f64,
    pub has_modal_year: bool,
    pub modal_year: i32,
    pub modal_density: f64,
    pub density_within_2y: f64,
    pub has_median_year: bool,
    pub median_year: i32,
    pub density_10y_or_later: f64,
}

/// Opaque corpus handle.
pub struct ScCorpus {
    inner: Corpus,
}

/// Opaque forecast-ensemble handle.
pub struct ScEnsemble {
    inner: ForecastEnsemble,
}

/// Opaque evaluation-report handle.
pub struct ScReport {
    inner: EvalReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NUL stripped");
    });
}

fn status_of(err: &Error) -> ScStatus {
    match err.exit_code() {
        1 => ScStatus::ModelError,
        _ => ScStatus::InputError,
    }
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; never free it.
#[no_mangle]
pub extern "C" fn sc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Static library version string; never free it.
#[no_mangle]
pub extern "C" fn sc_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by a `sc_*` function that
/// documents `sc_string_free` ownership, not yet freed; NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, ScStatus> {
    if ptr.is_null() {
        set_error(&format!("{what} is NULL"));
        return Err(ScStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        ScStatus::InvalidUtf8
    })
}

fn guard<T>(body: impl FnOnce() -> Result<T, ScStatus>, out: *mut T) -> ScStatus {
    if out.is_null() {
        set_error("output pointer is NULL");
        return ScStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(value)) => {
            unsafe { out.write(value) };
            ScStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            ScStatus::Panic
        }
    }
}

/// Loads and validates a corpus from the policies and traits files.
/// `filter_top_down` excludes top-down policies instead of failing.
/// On success `*out` owns the corpus; release it with `sc_corpus_free`.
///
/// # Safety
/// `policies_path` and `traits_path` must be NUL-terminated strings; `out`
/// must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_corpus_load(
    policies_path: *const c_char,
    traits_path: *const c_char,
    filter_top_down: bool,
    out: *mut *mut ScCorpus,
) -> ScStatus {
    guard(
        || {
            let policies = read_str(policies_path, "policies path")?;
            let traits = read_str(traits_path, "traits path")?;
            let corpus = if filter_top_down {
                statecast::corpus::load_corpus_filtered(Path::new(policies), Path::new(traits))
                    .map(|(corpus, _)| corpus)
            } else {
                statecast::corpus::load_corpus(Path::new(policies), Path::new(traits))
            }
            .map_err(|e| {
                set_error(&e.to_string());
                status_of(&e)
            })?;
            Ok(Box::into_raw(Box::new(ScCorpus { inner: corpus })))
        },
        out,
    )
}

/// # Safety
/// `corpus` must come from `sc_corpus_load` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sc_corpus_free(corpus: *mut ScCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Number of policies in the corpus.
///
/// # Safety
/// `corpus` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_corpus_policy_count(
    corpus: *const ScCorpus,
    out: *mut u64,
) -> ScStatus {
    guard(
        || {
            if corpus.is_null() {
                set_error("corpus handle is NULL");
                return Err(ScStatus::NullPointer);
            }
            Ok((*corpus).inner.len() as u64)
        },
        out,
    )
}

/// Canonical structured-text form of the corpus. Free with
/// `sc_string_free`.
///
/// # Safety
/// `corpus` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_corpus_canonical_text(
    corpus: *const ScCorpus,
    out: *mut *mut c_char,
) -> ScStatus {
    guard(
        || {
            if corpus.is_null() {
                set_error("corpus handle is NULL");
                return Err(ScStatus::NullPointer);
            }
            let text = (*corpus).inner.to_canonical_text();
            Ok(CString::new(text).expect("no NUL in canonical text").into_raw())
        },
        out,
    )
}

/// Cross-validates a classifier of the national-action outcome and returns
/// a report handle; release it with `sc_report_free`.
///
/// # Safety
/// `corpus` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_classify(
    corpus: *const ScCorpus,
    model: ScClassifier,
    folds: u32,
    trials: u32,
    seed: u64,
    out: *mut *mut ScReport,
) -> ScStatus {
    guard(
        || {
            if corpus.is_null() {
                set_error("corpus handle is NULL");
                return Err(ScStatus::NullPointer);
            }
            let spec = match model {
                ScClassifier::Logistic => ModelSpec::Logistic(LogisticConfig::default()),
                ScClassifier::Forest => ModelSpec::ForestClassifier(ForestConfig::default()),
            };
            let run = || -> statecast::Result<EvalReport> {
                let data = classification_dataset(&(*corpus).inner)?;
                cross_validate(&spec, &data, folds as usize, trials as usize, seed)
            };
            let report = run().map_err(|e| {
                set_error(&e.to_string());
                status_of(&e)
            })?;
            Ok(Box::into_raw(Box::new(ScReport { inner: report })))
        },
        out,
    )
}

/// Mean, 5th-, and 95th-percentile score of a report.
///
/// # Safety
/// `report` must be a live handle; the three outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_report_scores(
    report: *const ScReport,
    mean: *mut f64,
    p05: *mut f64,
    p95: *mut f64,
) -> ScStatus {
    if report.is_null() {
        set_error("report handle is NULL");
        return ScStatus::NullPointer;
    }
    if mean.is_null() || p05.is_null() || p95.is_null() {
        set_error("output pointer is NULL");
        return ScStatus::NullPointer;
    }
    let r = &(*report).inner;
    mean.write(r.mean);
    p05.write(r.p05);
    p95.write(r.p95);
    ScStatus::Ok
}

/// Full structured-text report document. Free with `sc_string_free`.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_report_text(
    report: *const ScReport,
    out: *mut *mut c_char,
) -> ScStatus {
    guard(
        || {
            if report.is_null() {
                set_error("report handle is NULL");
                return Err(ScStatus::NullPointer);
            }
            let text = (*report).inner.to_text();
            Ok(CString::new(text).expect("no NUL in report text").into_raw())
        },
        out,
    )
}

/// # Safety
/// `report` must come from `sc_classify` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sc_report_free(report: *mut ScReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Runs the bootstrap-ensemble forecast for one policy. The threshold pool
/// comes from the corpus; `leave_one_out` removes the policy's own
/// threshold. On success `*out` owns the ensemble; release it with
/// `sc_ensemble_free`.
///
/// # Safety
/// `corpus` must be a live handle, `policy_id` a NUL-terminated string, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sc_forecast(
    corpus: *const ScCorpus,
    policy_id: *const c_char,
    train_n: u32,
    trials: u32,
    seed: u64,
    noise_sigma: f64,
    horizon_years: f64,
    leave_one_out: bool,
    out: *mut *mut ScEnsemble,
) -> ScStatus {
    guard(
        || {
            if corpus.is_null() {
                set_error("corpus handle is NULL");
                return Err(ScStatus::NullPointer);
            }
            let id = read_str(policy_id, "policy id")?;
            let corpus = &(*corpus).inner;
            let run = || -> statecast::Result<ForecastEnsemble> {
                let record = corpus.policy(id).ok_or_else(|| {
                    Error::InvalidArgument(format!("unknown policy id {id:?}"))
                })?;
                let mut pool = ThresholdPool::from_corpus(corpus)?;
                if leave_one_out && record.national_year().is_some() {
                    pool = pool.without_one(national_threshold(record)?)?;
                }
                let config = FitConfig::default()
                    .with_trials(trials as usize)
                    .with_seed(seed)
                    .with_noise_sigma(noise_sigma)
                    .with_horizon_years(horizon_years);
                forecast(record, train_n as usize, &pool, &config)
            };
            let ensemble = run().map_err(|e| {
                set_error(&e.to_string());
                status_of(&e)
            })?;
            Ok(Box::into_raw(Box::new(ScEnsemble { inner: ensemble })))
        },
        out,
    )
}

/// Copies the ensemble summary into `out`.
///
/// # Safety
/// `ensemble` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_ensemble_summary(
    ensemble: *const ScEnsemble,
    out: *mut ScForecastSummary,
) -> ScStatus {
    guard(
        || {
            if ensemble.is_null() {
                set_error("ensemble handle is NULL");
                return Err(ScStatus::NullPointer);
            }
            let s = (*ensemble).inner.summary();
            Ok(ScForecastSummary {
                trials: s.trials as u64,
                censored_fraction: s.censored_fraction,
                has_modal_year: s.modal_year.is_some(),
                modal_year: s.modal_year.unwrap_or(0),
                modal_density: s.modal_density,
                density_within_2y: s.density_within_2y,
                has_median_year: s.median_year_from_cdf.is_some(),
                median_year: s.median_year_from_cdf.unwrap_or(0),
                density_10y_or_later: s.density_10y_or_later,
            })
        },
        out,
    )
}

/// Serialized ensemble document (summary plus per-trial records). Free with
/// `sc_string_free`.
///
/// # Safety
/// `ensemble` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_ensemble_text(
    ensemble: *const ScEnsemble,
    out: *mut *mut c_char,
) -> ScStatus {
    guard(
        || {
            if ensemble.is_null() {
                set_error("ensemble handle is NULL");
                return Err(ScStatus::NullPointer);
            }
            let text = (*ensemble).inner.to_text();
            Ok(CString::new(text).expect("no NUL in ensemble text").into_raw())
        },
        out,
    )
}

/// # Safety
/// `ensemble` must come from `sc_forecast` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sc_ensemble_free(ensemble: *mut ScEnsemble) {
    if !ensemble.is_null() {
        drop(Box::from_raw(ensemble));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statecast::corpus::{policies_to_csv, traits_to_text};
    use statecast::testkit::{synth_corpus, SynthCorpusConfig};

    fn fixture(tag: &str) -> (CString, CString) {
        // one directory per test: parallel tests must not share files
        let dir = std::env::temp_dir().join(format!(
            "statecast_ffi_{tag}_{}",
            std::process::id()
        ));
        std::fs::create_dir_all(&dir).unwrap();
        let (corpus, _) = synth_corpus(&SynthCorpusConfig {
            n: 50,
            signal_strength: 0.8,
            r_range: (0.3, 0.3),
            seed: 77,
            ..SynthCorpusConfig::default()
        })
        .unwrap();
        let policies = dir.join("policies.csv");
        let traits = dir.join("traits.txt");
        std::fs::write(&policies, policies_to_csv(corpus.policies())).unwrap();
        std::fs::write(&traits, traits_to_text(corpus.trait_tables())).unwrap();
        (
            CString::new(policies.to_str().unwrap()).unwrap(),
            CString::new(traits.to_str().unwrap()).unwrap(),
        )
    }

    fn load(tag: &str) -> *mut ScCorpus {
        let (policies, traits) = fixture(tag);
        let mut corpus: *mut ScCorpus = std::ptr::null_mut();
        let status =
            unsafe { sc_corpus_load(policies.as_ptr(), traits.as_ptr(), false, &mut corpus) };
        assert_eq!(status, ScStatus::Ok);
        assert!(!corpus.is_null());
        corpus
    }

    #[test]
    fn load_count_and_free() {
        let corpus = load("count");
        let mut count = 0u64;
        assert_eq!(
            unsafe { sc_corpus_policy_count(corpus, &mut count) },
            ScStatus::Ok
        );
        assert_eq!(count, 50);
        unsafe { sc_corpus_free(corpus) };
    }

    #[test]
    fn missing_file_reports_input_error() {
        let bogus = CString::new("/nonexistent/policies.csv").unwrap();
        let traits = CString::new("/nonexistent/traits.txt").unwrap();
        let mut corpus: *mut ScCorpus = std::ptr::null_mut();
        let status =
            unsafe { sc_corpus_load(bogus.as_ptr(), traits.as_ptr(), false, &mut corpus) };
        assert_eq!(status, ScStatus::InputError);
        let msg = unsafe { CStr::from_ptr(sc_last_error_message()) };
        assert!(!msg.to_bytes().is_empty());
    }

    #[test]
    fn null_arguments_are_rejected() {
        let mut corpus: *mut ScCorpus = std::ptr::null_mut();
        assert_eq!(
            unsafe { sc_corpus_load(std::ptr::null(), std::ptr::null(), false, &mut corpus) },
            ScStatus::NullPointer
        );
        let mut count = 0u64;
        assert_eq!(
            unsafe { sc_corpus_policy_count(std::ptr::null(), &mut count) },
            ScStatus::NullPointer
        );
    }

    #[test]
    fn classify_and_report_round_trip() {
        let corpus = load("classify");
        let mut report: *mut ScReport = std::ptr::null_mut();
        let status =
            unsafe { sc_classify(corpus, ScClassifier::Forest, 4, 5, 11, &mut report) };
        assert_eq!(status, ScStatus::Ok);
        let (mut mean, mut p05, mut p95) = (0.0, 0.0, 0.0);
        assert_eq!(
            unsafe { sc_report_scores(report, &mut mean, &mut p05, &mut p95) },
            ScStatus::Ok
        );
        assert!(p05 <= mean && mean <= p95);
        assert!((0.0..=1.0).contains(&mean));
        let mut text: *mut c_char = std::ptr::null_mut();
        assert_eq!(unsafe { sc_report_text(report, &mut text) }, ScStatus::Ok);
        let s = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_string();
        assert!(s.starts_with("statecast-eval v1\n"));
        unsafe { sc_string_free(text) };
        unsafe { sc_report_free(report) };
        unsafe { sc_corpus_free(corpus) };
    }

    #[test]
    fn forecast_summary_and_text() {
        let corpus = load("forecast");
        let id = CString::new("synth_0000").unwrap();
        let mut ensemble: *mut ScEnsemble = std::ptr::null_mut();
        let status = unsafe {
            sc_forecast(corpus, id.as_ptr(), 8, 60, 21, 1.0, 200.0, false, &mut ensemble)
        };
        assert_eq!(status, ScStatus::Ok, "err: {:?}", unsafe {
            CStr::from_ptr(sc_last_error_message())
        });
        let mut summary = ScForecastSummary {
            trials: 0,
            censored_fraction: 0.0,
            has_modal_year: false,
            modal_year: 0,
            modal_density: 0.0,
            density_within_2y: 0.0,
            has_median_year: false,
            median_year: 0,
            density_10y_or_later: 0.0,
        };
        assert_eq!(
            unsafe { sc_ensemble_summary(ensemble, &mut summary) },
            ScStatus::Ok
        );
        assert_eq!(summary.trials, 60);
        assert!(summary.has_modal_year);
        assert!(summary.modal_density <= summary.density_within_2y);

        let mut text: *mut c_char = std::ptr::null_mut();
        assert_eq!(unsafe { sc_ensemble_text(ensemble, &mut text) }, ScStatus::Ok);
        let s = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_string();
        assert!(s.starts_with("statecast-ensemble v1\n"));
        unsafe { sc_string_free(text) };
        unsafe { sc_ensemble_free(ensemble) };

        // unknown policy id
        let bogus = CString::new("nope").unwrap();
        let mut e2: *mut ScEnsemble = std::ptr::null_mut();
        let status = unsafe {
            sc_forecast(corpus, bogus.as_ptr(), 8, 10, 21, 1.0, 200.0, false, &mut e2)
        };
        assert_eq!(status, ScStatus::InputError);
        unsafe { sc_corpus_free(corpus) };
    }

    #[test]
    fn version_is_a_c_string() {
        let v = unsafe { CStr::from_ptr(sc_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
