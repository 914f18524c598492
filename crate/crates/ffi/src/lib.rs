//! C ABI over `sds-core`.
//!
//! Every object crosses the boundary as an opaque pointer that must be
//! released with its matching `*_free`. Functions return an [`SdsStatus`];
//! on failure `sds_last_error()` describes the problem for the calling
//! thread. Strings handed out by the library are freed with
//! `sds_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sds_core::polyring::{parse_form, parse_system, serialize_form};
use sds_core::sdsengine::{
    replay_certificate, sds_search, Certificate, Goal, SdsConfig, Verdict,
};
use sds_core::zerodetect::{
    detect_zero_with, replay_zero_report, SystemInput, ZeroConfig, ZeroReport, ZeroVerdict,
};
use sds_core::{sign_classify, Error, Form, SignClass};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdsSignClass {
    AllPositive = 0,
    AllNonnegative = 1,
    AllNegative = 2,
    AllNonpositive = 3,
    Mixed = 4,
    ZeroForm = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdsGoal {
    ProveStrictPositive = 0,
    ProveNonnegative = 1,
    Decide = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdsVerdict {
    Positive = 0,
    Nonnegative = 1,
    NegativeWitness = 2,
    Undecided = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdsZeroVerdict {
    ZeroFound = 0,
    NoZero = 1,
    Undecided = 2,
}

/// Parsed homogeneous form.
pub struct SdsForm {
    inner: Form,
}

/// Parsed system of forms.
pub struct SdsSystem {
    inner: SystemInput,
}

pub struct SdsCertificate {
    inner: Certificate,
}

pub struct SdsZeroReport {
    inner: ZeroReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: SdsStatus, msg: impl Into<String>) -> SdsStatus {
    set_error(msg.into());
    status
}

fn from_core(e: Error) -> SdsStatus {
    let status = if e.is_parse() {
        SdsStatus::Parse
    } else {
        SdsStatus::InvalidInput
    };
    fail(status, e.to_string())
}

/// Runs `body`, turning panics into `SdsStatus::Panic`.
fn guard(body: impl FnOnce() -> SdsStatus) -> SdsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => fail(SdsStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, SdsStatus> {
    if text.is_null() {
        return Err(fail(SdsStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| fail(SdsStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> SdsStatus {
    *out = Box::into_raw(Box::new(value));
    SdsStatus::Ok
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> SdsStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            SdsStatus::Ok
        }
        Err(_) => fail(SdsStatus::InvalidInput, "text contains a nul byte"),
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(SdsStatus::NullPointer, concat!("null argument: ", stringify!($p)));
        })+
    };
}

/// Message for the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sds_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sds_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sds_form_parse(text: *const c_char, out: *mut *mut SdsForm) -> SdsStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_form(text) {
            Ok(f) => put(out, SdsForm { inner: f }),
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `form` must be null or come from `sds_form_parse`.
#[no_mangle]
pub unsafe extern "C" fn sds_form_free(form: *mut SdsForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Canonical text of the form; free with `sds_string_free`.
///
/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sds_form_serialize(form: *const SdsForm, out: *mut *mut c_char) -> SdsStatus {
    guard(|| {
        non_null!(form, out);
        put_string(out, serialize_form(&(*form).inner))
    })
}

/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sds_form_classify(form: *const SdsForm, out: *mut SdsSignClass) -> SdsStatus {
    guard(|| {
        non_null!(form, out);
        *out = match sign_classify(&(*form).inner) {
            SignClass::AllPositive => SdsSignClass::AllPositive,
            SignClass::AllNonnegative => SdsSignClass::AllNonnegative,
            SignClass::AllNegative => SdsSignClass::AllNegative,
            SignClass::AllNonpositive => SdsSignClass::AllNonpositive,
            SignClass::Mixed => SdsSignClass::Mixed,
            SignClass::ZeroForm => SdsSignClass::ZeroForm,
        };
        SdsStatus::Ok
    })
}

/// Runs the subdivision search breadth-first. `workers` of 0 means 1.
///
/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sds_prove(
    form: *const SdsForm,
    goal: SdsGoal,
    max_depth: u32,
    workers: u32,
    out: *mut *mut SdsCertificate,
) -> SdsStatus {
    guard(|| {
        non_null!(form, out);
        let config = SdsConfig {
            max_depth: max_depth as usize,
            goal: match goal {
                SdsGoal::ProveStrictPositive => Goal::ProveStrictPositive,
                SdsGoal::ProveNonnegative => Goal::ProveNonnegative,
                SdsGoal::Decide => Goal::Decide,
            },
            workers: workers.max(1) as usize,
            ..SdsConfig::default()
        };
        match sds_search(&(*form).inner, &config) {
            Ok(c) => put(out, SdsCertificate { inner: c }),
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sds_certificate_parse(
    text: *const c_char,
    out: *mut *mut SdsCertificate,
) -> SdsStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Certificate::parse(text) {
            Ok(c) => put(out, SdsCertificate { inner: c }),
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `cert` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn sds_certificate_free(cert: *mut SdsCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sds_certificate_verdict(
    cert: *const SdsCertificate,
    out: *mut SdsVerdict,
) -> SdsStatus {
    guard(|| {
        non_null!(cert, out);
        *out = match (*cert).inner.verdict {
            Verdict::Positive => SdsVerdict::Positive,
            Verdict::Nonnegative => SdsVerdict::Nonnegative,
            Verdict::NegativeWitness => SdsVerdict::NegativeWitness,
            Verdict::Undecided => SdsVerdict::Undecided,
        };
        SdsStatus::Ok
    })
}

/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sds_certificate_text(
    cert: *const SdsCertificate,
    out: *mut *mut c_char,
) -> SdsStatus {
    guard(|| {
        non_null!(cert, out);
        put_string(out, (*cert).inner.to_text())
    })
}

/// Writes whether `cert` holds for `form`.
///
/// # Safety
/// Both handles must be live; `valid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sds_certificate_replay(
    form: *const SdsForm,
    cert: *const SdsCertificate,
    valid: *mut bool,
) -> SdsStatus {
    guard(|| {
        non_null!(form, cert, valid);
        match replay_certificate(&(*form).inner, &(*cert).inner) {
            Ok(v) => {
                *valid = v;
                SdsStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Parses a `---`-separated system with integer coefficients.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sds_system_parse(text: *const c_char, out: *mut *mut SdsSystem) -> SdsStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_system(text).and_then(SystemInput::new) {
            Ok(s) => put(out, SdsSystem { inner: s }),
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `sys` must be null or come from `sds_system_parse`.
#[no_mangle]
pub unsafe extern "C" fn sds_system_free(sys: *mut SdsSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sds_find_zero(
    sys: *const SdsSystem,
    budget: u32,
    workers: u32,
    out: *mut *mut SdsZeroReport,
) -> SdsStatus {
    guard(|| {
        non_null!(sys, out);
        let config = ZeroConfig {
            budget_depth: budget as usize,
            workers: workers.max(1) as usize,
            ..ZeroConfig::default()
        };
        match detect_zero_with(&(*sys).inner, &config) {
            Ok(r) => put(out, SdsZeroReport { inner: r }),
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `report` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn sds_zero_report_free(report: *mut SdsZeroReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sds_zero_report_verdict(
    report: *const SdsZeroReport,
    out: *mut SdsZeroVerdict,
) -> SdsStatus {
    guard(|| {
        non_null!(report, out);
        *out = match (*report).inner.verdict {
            ZeroVerdict::ZeroFound => SdsZeroVerdict::ZeroFound,
            ZeroVerdict::NoZero => SdsZeroVerdict::NoZero,
            ZeroVerdict::Undecided => SdsZeroVerdict::Undecided,
        };
        SdsStatus::Ok
    })
}

/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sds_zero_report_text(
    report: *const SdsZeroReport,
    out: *mut *mut c_char,
) -> SdsStatus {
    guard(|| {
        non_null!(report, out);
        put_string(out, (*report).inner.to_text())
    })
}

/// # Safety
/// Both handles must be live; `valid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sds_zero_report_replay(
    sys: *const SdsSystem,
    report: *const SdsZeroReport,
    valid: *mut bool,
) -> SdsStatus {
    guard(|| {
        non_null!(sys, report, valid);
        match replay_zero_report(&(*sys).inner, &(*report).inner) {
            Ok(v) => {
                *valid = v;
                SdsStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}
