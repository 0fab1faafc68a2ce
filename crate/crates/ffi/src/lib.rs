//! C interface to smash-core.
//!
//! Documents and reports are opaque handles owned by the caller and released
//! with their `_free` functions. Every fallible call returns a `SmashStatus`;
//! on anything but `SMASH_STATUS_OK` a message is available from
//! `smash_last_error` until the next call on the same thread. Pointer
//! arguments must be null or valid for the access their name implies.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use smash_core::document::{self, Document, Structure};
use smash_core::error::Error;
use smash_core::prestack::{coinvariants, recovery_iso, smash};
use smash_core::report::Report;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmashStatus {
    Ok = 0,
    /// A verification ran and some diagram failed to commute.
    CheckFailed = 1,
    /// Malformed JSON, a bad reference, or an unreadable file.
    InputError = 2,
    NullArgument = 3,
    InvalidUtf8 = 4,
    /// The input was well formed but a construction step had no solution.
    ConstructionError = 5,
    Panic = 6,
}

pub struct SmashDocument {
    doc: Document,
}

pub struct SmashReport {
    report: Report,
    matched: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Fail(SmashStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let status = match &e {
            Error::Check(_) => SmashStatus::CheckFailed,
            e if e.is_input() => SmashStatus::InputError,
            _ => SmashStatus::ConstructionError,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(SmashStatus::NullArgument, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SmashStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SmashStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            SmashStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(SmashStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn doc_arg<'a>(p: *const SmashDocument) -> Result<&'a Document, Fail> {
    p.as_ref().map(|d| &d.doc).ok_or_else(|| null("document"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    *out = CString::new(s).map_err(|e| Fail(SmashStatus::ConstructionError, e.to_string()))?.into_raw();
    Ok(())
}

fn failed(what: &str, r: &Report) -> Fail {
    Fail(SmashStatus::CheckFailed, format!("{what} failed: {}", r.failure_names().join(", ")))
}

/// Parses a document from a NUL-terminated JSON string.
#[no_mangle]
pub unsafe extern "C" fn smash_document_parse(json: *const c_char, out: *mut *mut SmashDocument) -> SmashStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = str_arg(json, "json")?;
        put(out, SmashDocument { doc: document::parse(text)? })
    })
}

#[no_mangle]
pub unsafe extern "C" fn smash_document_load(path: *const c_char, out: *mut *mut SmashDocument) -> SmashStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = str_arg(path, "path")?;
        put(out, SmashDocument { doc: document::load(Path::new(path))? })
    })
}

/// `doc` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn smash_document_free(doc: *mut SmashDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Serializes a document; free the string with `smash_string_free`.
#[no_mangle]
pub unsafe extern "C" fn smash_document_to_json(doc: *const SmashDocument, out: *mut *mut c_char) -> SmashStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let doc = doc_arg(doc)?;
        put_string(out, doc.to_pretty())
    })
}

/// Verifies every section. Returns `SMASH_STATUS_CHECK_FAILED` when a
/// diagram fails; the report is written in either case.
#[no_mangle]
pub unsafe extern "C" fn smash_document_check(doc: *const SmashDocument, out: *mut *mut SmashReport) -> SmashStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let doc = doc_arg(doc)?;
        let report = document::check_document(doc);
        let matched = document::meets_expectation(doc, &report);
        let fail = (!report.pass()).then(|| failed("check", &report));
        put(out, SmashReport { report, matched })?;
        fail.map_or(Ok(()), Err)
    })
}

/// Builds the smash product of the document's prestack as a new comodule
/// category document.
#[no_mangle]
pub unsafe extern "C" fn smash_document_smash(doc: *const SmashDocument, out: *mut *mut SmashDocument) -> SmashStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let sm = smash(&doc_arg(doc)?.prestack()?)?;
        if !sm.report.pass() {
            return Err(failed("smash product", &sm.report));
        }
        let doc = Document::Structure(Structure::from_comodule_category("smash", &sm.comodcat)?);
        put(out, SmashDocument { doc })
    })
}

/// Coinvariants of the document's comodule category, or of its prestack's
/// smash product (in which case recovery is verified too).
#[no_mangle]
pub unsafe extern "C" fn smash_document_coinvariants(doc: *const SmashDocument, out: *mut *mut SmashDocument) -> SmashStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let doc = doc_arg(doc)?;
        let comodule = match doc {
            Document::Structure(s) => s.sections_of("comodule-category").first().map(|n| s.comodule_category(n)).transpose()?,
            _ => None,
        };
        let co = match comodule {
            Some(x) => coinvariants(&x)?,
            None => {
                let ps = doc.prestack()?;
                let sm = smash(&ps)?;
                let co = coinvariants(&sm.comodcat)?;
                let rec = recovery_iso(&ps, &sm, &co)?;
                if !rec.report.pass() {
                    return Err(failed("recovery", &rec.report));
                }
                co
            }
        };
        if !co.report.pass() {
            return Err(failed("coinvariants", &co.report));
        }
        let doc = Document::Structure(Structure::from_comodule_category("coinvariants", &co.comodcat)?);
        put(out, SmashDocument { doc })
    })
}

/// Dimensions of the objects of objects and of morphisms of the document's
/// first comodule category, or else of its prestack's category.
#[no_mangle]
pub unsafe extern "C" fn smash_document_dims(doc: *const SmashDocument, objects: *mut usize, morphisms: *mut usize) -> SmashStatus {
    guard(|| {
        if objects.is_null() || morphisms.is_null() {
            return Err(null("out"));
        }
        let doc = doc_arg(doc)?;
        let cat = match doc {
            Document::Structure(s) if !s.sections_of("comodule-category").is_empty() => {
                s.comodule_category(s.sections_of("comodule-category")[0])?.cat
            }
            _ => doc.prestack()?.cat,
        };
        *objects = cat.c.carrier.dim();
        *morphisms = cat.a.dim();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn smash_report_passed(report: *const SmashReport) -> bool {
    report.as_ref().is_some_and(|r| r.report.pass())
}

/// True when the failures are exactly those the document lists as expected.
#[no_mangle]
pub unsafe extern "C" fn smash_report_matches_expectation(report: *const SmashReport) -> bool {
    report.as_ref().is_some_and(|r| r.matched)
}

#[no_mangle]
pub unsafe extern "C" fn smash_report_checked_count(report: *const SmashReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.checked.len())
}

#[no_mangle]
pub unsafe extern "C" fn smash_report_failure_count(report: *const SmashReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.failures.len())
}

/// Name of the `index`th failing diagram; free with `smash_string_free`.
#[no_mangle]
pub unsafe extern "C" fn smash_report_failure_name(report: *const SmashReport, index: usize, out: *mut *mut c_char) -> SmashStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = r.report.failures.get(index).ok_or_else(|| {
            Fail(SmashStatus::InputError, format!("failure index {index} out of range ({})", r.report.failures.len()))
        })?;
        put_string(out, f.diagram.clone())
    })
}

#[no_mangle]
pub unsafe extern "C" fn smash_report_to_json(report: *const SmashReport, out: *mut *mut c_char) -> SmashStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        put_string(out, r.report.to_json().to_string())
    })
}

/// `report` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn smash_report_free(report: *mut SmashReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn smash_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failing call on this thread, or null. Owned by the
/// library and valid until the next call.
#[no_mangle]
pub extern "C" fn smash_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
