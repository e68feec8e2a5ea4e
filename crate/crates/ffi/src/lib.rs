//! C ABI for the aeroqa engine.
//!
//! Every function returns an [`AeroqaStatus`]. On failure the message is
//! available from [`aeroqa_last_error`] on the same thread. Strings handed
//! out through `out_json` are owned by the caller and must be released with
//! [`aeroqa_string_free`]. Engines are opaque and must be released with
//! [`aeroqa_engine_free`]. An engine may be shared across threads.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use aeroqa::app::{cmd_build, AppConfig, Engine, ProviderSpec, ReaderSpec, SystemMode};
use aeroqa::fusion_eval::{evaluate, load_testset};
use aeroqa::reader::{ReaderMode, RetrieverKind};
use serde_json::{json, Value};

/// Result of every call. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AeroqaStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Config = 5,
    NoMention = 6,
    Remote = 7,
    Io = 8,
    Json = 9,
    Panic = 10,
}

/// Which modules answer a question.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AeroqaSystem {
    Kg = 0,
    Dl = 1,
    Hybrid = 2,
}

impl From<AeroqaSystem> for SystemMode {
    fn from(s: AeroqaSystem) -> Self {
        match s {
            AeroqaSystem::Kg => SystemMode::Kg,
            AeroqaSystem::Dl => SystemMode::Dl,
            AeroqaSystem::Hybrid => SystemMode::Hybrid,
        }
    }
}

/// Opaque engine handle.
pub struct AeroqaEngine {
    engine: Engine,
    tau: f64,
}

struct Failure {
    status: AeroqaStatus,
    message: String,
}

impl From<aeroqa::Error> for Failure {
    fn from(e: aeroqa::Error) -> Self {
        use aeroqa::Error as E;
        let status = match &e {
            E::Parse { .. } => AeroqaStatus::Parse,
            E::Validation(_) => AeroqaStatus::Validation,
            E::Config(_) => AeroqaStatus::Config,
            E::NoMention(_) => AeroqaStatus::NoMention,
            E::Remote(_) => AeroqaStatus::Remote,
            E::Io(_) => AeroqaStatus::Io,
            E::Json(_) => AeroqaStatus::Json,
        };
        Failure { status, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { status: AeroqaStatus::Json, message: e.to_string() }
    }
}

fn fail(status: AeroqaStatus, message: impl Into<String>) -> Failure {
    Failure { status, message: message.into() }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure or panic, and converts the outcome to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AeroqaStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AeroqaStatus::Ok,
        Ok(Err(f)) => {
            set_last_error(&f.message);
            f.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            AeroqaStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(AeroqaStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(AeroqaStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, name).map(Some)
    }
}

unsafe fn engine_arg<'a>(p: *const AeroqaEngine) -> Result<&'a AeroqaEngine, Failure> {
    p.as_ref().ok_or_else(|| fail(AeroqaStatus::NullArgument, "engine is null"))
}

unsafe fn write_json(out: *mut *mut c_char, value: &impl serde::Serialize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(AeroqaStatus::NullArgument, "out_json is null"));
    }
    let text = serde_json::to_string(value)?;
    *out = CString::new(text).expect("JSON output has no NUL bytes").into_raw();
    Ok(())
}

fn apply_options(config: &mut AppConfig, options: &str) -> Result<(), Failure> {
    let v: Value = serde_json::from_str(options)?;
    let obj = v.as_object().ok_or_else(|| fail(AeroqaStatus::Config, "options must be a JSON object"))?;
    for (key, value) in obj {
        let text = || value.as_str().ok_or_else(|| fail(AeroqaStatus::Config, format!("option {key} must be a string")));
        let number = || value.as_f64().ok_or_else(|| fail(AeroqaStatus::Config, format!("option {key} must be a number")));
        match key.as_str() {
            "provider" => config.provider = text()?.parse::<ProviderSpec>()?,
            "reader" => config.reader = text()?.parse::<ReaderSpec>()?,
            "reader_mode" => config.reader_mode = text()?.parse::<ReaderMode>()?,
            "retriever" => config.dlqa.retriever = text()?.parse::<RetrieverKind>()?,
            "k" => {
                config.dlqa.k = value
                    .as_u64()
                    .ok_or_else(|| fail(AeroqaStatus::Config, "option k must be a non-negative integer"))?
                    as usize
            }
            "tau" => config.tau = number()?,
            "theta_link" => config.kgqa.theta_link = number()?,
            other => return Err(fail(AeroqaStatus::Config, format!("unknown option {other:?}"))),
        }
    }
    Ok(())
}

/// Message for the last failed call on this thread, or null after a
/// success. Valid until the next aeroqa call on the same thread.
#[no_mangle]
pub extern "C" fn aeroqa_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn aeroqa_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned through an `out_json` parameter. Null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn aeroqa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the graph and passage files from a report directory into `out_dir`.
/// `taxonomy_path` may be null. On success `out_json` receives
/// `{"reports", "passages", "stats", "failures"}`. Per-report failures do not
/// make the call fail; inspect `failures`.
///
/// # Safety
/// Path arguments must be null or NUL-terminated strings; `out_json` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aeroqa_build(
    reports_dir: *const c_char,
    patterns_path: *const c_char,
    taxonomy_path: *const c_char,
    out_dir: *const c_char,
    out_json: *mut *mut c_char,
) -> AeroqaStatus {
    guard(|| {
        let reports = PathBuf::from(str_arg(reports_dir, "reports_dir")?);
        let patterns = PathBuf::from(str_arg(patterns_path, "patterns_path")?);
        let taxonomy = opt_str_arg(taxonomy_path, "taxonomy_path")?.map(PathBuf::from);
        let out = PathBuf::from(str_arg(out_dir, "out_dir")?);
        let outcome = cmd_build(&reports, &patterns, taxonomy.as_deref(), &out)?;
        write_json(out_json, &outcome)
    })
}

/// Loads an engine from a directory written by `aeroqa_build`.
/// `options_json` may be null or an object with any of `provider`, `reader`,
/// `reader_mode`, `retriever` (strings) and `k`, `tau`, `theta_link`
/// (numbers).
///
/// # Safety
/// `data_dir` and `options_json` must be null or NUL-terminated strings;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aeroqa_engine_open(
    data_dir: *const c_char,
    options_json: *const c_char,
    out: *mut *mut AeroqaEngine,
) -> AeroqaStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(AeroqaStatus::NullArgument, "out is null"));
        }
        let mut config = AppConfig::new(str_arg(data_dir, "data_dir")?);
        if let Some(options) = opt_str_arg(options_json, "options_json")? {
            apply_options(&mut config, options)?;
        }
        config.validate()?;
        let engine = Engine::load(&config)?;
        *out = Box::into_raw(Box::new(AeroqaEngine { engine, tau: config.tau }));
        Ok(())
    })
}

/// Releases an engine. Null is ignored.
///
/// # Safety
/// `engine` must come from `aeroqa_engine_open` and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn aeroqa_engine_free(engine: *mut AeroqaEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Answers a question. `out_json` receives `{"items": [...]}` with up to ten
/// items, each carrying `text`, `source` and, for passage answers, `passage`
/// and `score`.
///
/// # Safety
/// `engine` must be a live handle; `question` a NUL-terminated string;
/// `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aeroqa_ask(
    engine: *const AeroqaEngine,
    question: *const c_char,
    system: AeroqaSystem,
    out_json: *mut *mut c_char,
) -> AeroqaStatus {
    guard(|| {
        let e = engine_arg(engine)?;
        let resp = e.engine.respond(str_arg(question, "question")?, system.into())?;
        write_json(out_json, &resp)
    })
}

/// Translates a question to SPARQL without fusing passage answers.
/// `out_json` receives `{"qtype", "query", "answers"}`; `query` is null when
/// the question cannot be grounded in the graph.
///
/// # Safety
/// As for `aeroqa_ask`.
#[no_mangle]
pub unsafe extern "C" fn aeroqa_sparql(
    engine: *const AeroqaEngine,
    question: *const c_char,
    out_json: *mut *mut c_char,
) -> AeroqaStatus {
    guard(|| {
        let e = engine_arg(engine)?;
        let t = e.engine.kgqa().translate(str_arg(question, "question")?, e.engine.graph())?;
        write_json(out_json, &json!({ "qtype": t.qtype.to_string(), "query": t.query_text, "answers": t.answers }))
    })
}

/// Scores one system on a test-set file. `out_json` receives the evaluation
/// report with per-question and mean scores.
///
/// # Safety
/// `engine` must be a live handle; `testset_path` a NUL-terminated string;
/// `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aeroqa_evaluate(
    engine: *const AeroqaEngine,
    testset_path: *const c_char,
    system: AeroqaSystem,
    out_json: *mut *mut c_char,
) -> AeroqaStatus {
    guard(|| {
        let e = engine_arg(engine)?;
        let tests = load_testset(&PathBuf::from(str_arg(testset_path, "testset_path")?))?;
        let report = evaluate(&e.engine.system(system.into()), &tests, e.engine.provider(), e.tau)?;
        write_json(out_json, &report)
    })
}
