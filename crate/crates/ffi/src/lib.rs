//! C interface. A session is an opaque handle owning a prelude-loaded
//! registry; every entry point returns one of the `UPTRANS_*` codes and
//! leaves a message in the calling thread's last-error slot on failure.
//!
//! Strings handed out by the library are owned by the caller and must be
//! released with `uptrans_string_free`. Sessions are not thread-safe.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use uptrans::cli::{emit_report, exit_code, parse_module, run_in, Command, Format, Report, Status};
use uptrans::eval::normalize;
use uptrans::kernel::pretty::print;
use uptrans::kernel::syntax::parse_term;
use uptrans::registry::Session;
use uptrans::stdlib;

pub const UPTRANS_OK: c_int = 0;
/// At least one declaration or goal failed.
pub const UPTRANS_FAIL: c_int = 1;
pub const UPTRANS_ERR_PARSE: c_int = 2;
pub const UPTRANS_ERR_NULL: c_int = 3;
pub const UPTRANS_ERR_UTF8: c_int = 4;
pub const UPTRANS_ERR_PANIC: c_int = 5;
/// Normalization ran out of steps; the partial result is still returned.
pub const UPTRANS_ERR_BUDGET: c_int = 6;

pub struct UptransSession {
    inner: Session,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> c_int) -> c_int {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("panic: {}", msg));
            UPTRANS_ERR_PANIC
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, c_int> {
    if p.is_null() {
        set_error("null string argument");
        return Err(UPTRANS_ERR_NULL);
    }
    CStr::from_ptr(p).to_str().map_err(|e| {
        set_error(format!("invalid utf-8: {}", e));
        UPTRANS_ERR_UTF8
    })
}

unsafe fn session<'a>(s: *mut UptransSession) -> Result<&'a mut Session, c_int> {
    match s.as_mut() {
        Some(s) => Ok(&mut s.inner),
        None => {
            set_error("null session");
            Err(UPTRANS_ERR_NULL)
        }
    }
}

unsafe fn hand_out(out: *mut *mut c_char, s: String) {
    *out = CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw();
}

fn code_of(reports: &[Report]) -> c_int {
    if exit_code(reports) == 0 {
        UPTRANS_OK
    } else {
        UPTRANS_FAIL
    }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(code) => return code,
        }
    };
}

/// Creates a session with the prelude loaded and stores it in `*out`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uptrans_session_new(out: *mut *mut UptransSession) -> c_int {
    guard(|| {
        if out.is_null() {
            set_error("null out pointer");
            return UPTRANS_ERR_NULL;
        }
        *out = ptr::null_mut();
        match stdlib::load_session() {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(UptransSession { inner }));
                UPTRANS_OK
            }
            Err(e) => {
                set_error(e.to_string());
                UPTRANS_FAIL
            }
        }
    })
}

/// # Safety
/// `s` must come from `uptrans_session_new` and not be used afterwards.
/// Null is accepted.
#[no_mangle]
pub unsafe extern "C" fn uptrans_session_free(s: *mut UptransSession) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Sets the reduction step budget used by later calls.
///
/// # Safety
/// `s` must be a live session or null.
#[no_mangle]
pub unsafe extern "C" fn uptrans_session_set_budget(s: *mut UptransSession, budget: u64) -> c_int {
    guard(|| {
        tri!(session(s)).budget = budget;
        UPTRANS_OK
    })
}

/// Processes a module (definitions, relations, transports, goals) in the
/// session. When `out_json` is non-null it receives one json line per
/// reported item. Returns `UPTRANS_FAIL` if any item failed; earlier items
/// stay in the session.
///
/// # Safety
/// `s` must be a live session, `module` a NUL-terminated string, and
/// `out_json` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uptrans_session_load(
    s: *mut UptransSession,
    module: *const c_char,
    out_json: *mut *mut c_char,
) -> c_int {
    guard(|| {
        let s = tri!(session(s));
        let src = tri!(text(module));
        let decls = match parse_module(src) {
            Ok(d) => d,
            Err(e) => {
                set_error(e.to_string());
                return UPTRANS_ERR_PARSE;
            }
        };
        let reports = run_in(s, Command::Transport, &decls);
        finish(reports, out_json)
    })
}

/// Runs the embedded replay script in the session.
///
/// # Safety
/// As for `uptrans_session_load`.
#[no_mangle]
pub unsafe extern "C" fn uptrans_session_replay(s: *mut UptransSession, out_json: *mut *mut c_char) -> c_int {
    guard(|| {
        let s = tri!(session(s));
        let decls = match stdlib::replay_decls() {
            Ok(d) => d,
            Err(e) => {
                set_error(e.to_string());
                return UPTRANS_FAIL;
            }
        };
        let reports = run_in(s, Command::Replay, &decls);
        finish(reports, out_json)
    })
}

unsafe fn finish(reports: Vec<Report>, out_json: *mut *mut c_char) -> c_int {
    let code = code_of(&reports);
    if code != UPTRANS_OK {
        if let Some(r) = reports.iter().find(|r| r.status == Status::Fail) {
            set_error(format!("{}: {}", r.name, r.derived.join("; ")));
        }
    }
    if !out_json.is_null() {
        hand_out(out_json, emit_report(&reports, Format::JsonLines));
    }
    code
}

/// Normalizes a closed term and stores its printed normal form in `*out`.
///
/// # Safety
/// `s` must be a live session, `term` a NUL-terminated string and `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uptrans_session_normalize(
    s: *mut UptransSession,
    term: *const c_char,
    out: *mut *mut c_char,
) -> c_int {
    guard(|| {
        let s = tri!(session(s));
        let src = tri!(text(term));
        if out.is_null() {
            set_error("null out pointer");
            return UPTRANS_ERR_NULL;
        }
        *out = ptr::null_mut();
        let t = match parse_term(src).and_then(|r| s.elab(&r)) {
            Ok(t) => t,
            Err(e) => {
                set_error(e.to_string());
                return UPTRANS_ERR_PARSE;
            }
        };
        let n = normalize(&s.env, &t, s.budget);
        hand_out(out, print(&n.normal_form));
        if n.budget_hit {
            set_error(format!("step budget of {} exhausted", s.budget));
            UPTRANS_ERR_BUDGET
        } else {
            UPTRANS_OK
        }
    })
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn uptrans_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `p` must come from this library and not be freed twice. Null is accepted.
#[no_mangle]
pub unsafe extern "C" fn uptrans_string_free(p: *mut c_char) {
    if !p.is_null() {
        drop(CString::from_raw(p));
    }
}

#[no_mangle]
pub extern "C" fn uptrans_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
