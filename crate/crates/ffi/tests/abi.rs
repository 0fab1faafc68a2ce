use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use smash_ffi::*;

fn fixture(name: &str) -> CString {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name);
    CString::new(p.to_str().unwrap()).unwrap()
}

fn load(name: &str) -> *mut SmashDocument {
    let mut doc = ptr::null_mut();
    assert_eq!(unsafe { smash_document_load(fixture(name).as_ptr(), &mut doc) }, SmashStatus::Ok);
    doc
}

fn last_error() -> String {
    let p = smash_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    smash_string_free(s);
    out
}

fn dims(doc: *const SmashDocument) -> (usize, usize) {
    let (mut o, mut m) = (0, 0);
    assert_eq!(unsafe { smash_document_dims(doc, &mut o, &mut m) }, SmashStatus::Ok);
    (o, m)
}

#[test]
fn smash_then_coinvariants_through_the_abi() {
    let doc = load("kz2-sign.json");
    assert_eq!(dims(doc), (1, 2));
    let mut sm = ptr::null_mut();
    assert_eq!(unsafe { smash_document_smash(doc, &mut sm) }, SmashStatus::Ok);
    assert_eq!(dims(sm).1, 4);
    let mut co = ptr::null_mut();
    assert_eq!(unsafe { smash_document_coinvariants(sm, &mut co) }, SmashStatus::Ok);
    assert_eq!(dims(co).1, 2);
    let mut direct = ptr::null_mut();
    assert_eq!(unsafe { smash_document_coinvariants(doc, &mut direct) }, SmashStatus::Ok);
    assert_eq!(dims(direct), dims(co));
    unsafe {
        let mut report = ptr::null_mut();
        assert_eq!(smash_document_check(co, &mut report), SmashStatus::Ok);
        assert!(smash_report_passed(report));
        assert!(smash_report_checked_count(report) > 0);
        smash_report_free(report);
        for d in [doc, sm, co, direct] {
            smash_document_free(d);
        }
    }
    assert!(smash_last_error().is_null());
}

#[test]
fn check_reports_failures_by_name() {
    let doc = load("negative/broken-measuring.json");
    unsafe {
        let mut report = ptr::null_mut();
        assert_eq!(smash_document_check(doc, &mut report), SmashStatus::CheckFailed);
        assert!(last_error().contains("affine/module-algebra.measuring"));
        assert!(!smash_report_passed(report));
        assert!(smash_report_matches_expectation(report));
        let n = smash_report_failure_count(report);
        let mut names = Vec::new();
        for i in 0..n {
            let mut s = ptr::null_mut();
            assert_eq!(smash_report_failure_name(report, i, &mut s), SmashStatus::Ok);
            names.push(take(s));
        }
        assert_eq!(names, ["affine/module-algebra.measuring"]);
        let mut s = ptr::null_mut();
        assert_eq!(smash_report_failure_name(report, n, &mut s), SmashStatus::InputError);
        assert_eq!(smash_report_to_json(report, &mut s), SmashStatus::Ok);
        let json: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(json["pass"], false);
        smash_report_free(report);
        smash_document_free(doc);
    }
}

#[test]
fn json_round_trips_through_strings() {
    let doc = load("split-collapsing-arrow.json");
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(smash_document_to_json(doc, &mut s), SmashStatus::Ok);
        let text = CString::new(take(s)).unwrap();
        let mut again = ptr::null_mut();
        assert_eq!(smash_document_parse(text.as_ptr(), &mut again), SmashStatus::Ok);
        assert_eq!(dims(again), dims(doc));
        assert_eq!(smash_document_to_json(again, &mut s), SmashStatus::Ok);
        assert_eq!(take(s), text.to_str().unwrap());
        smash_document_free(again);
        smash_document_free(doc);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut doc = ptr::null_mut();
    unsafe {
        let bad = CString::new("{\"kind\": \"structure\",\n \"backend\": 3}").unwrap();
        assert_eq!(smash_document_parse(bad.as_ptr(), &mut doc), SmashStatus::InputError);
        assert!(last_error().contains("line 2"));
        assert!(doc.is_null());
        assert_eq!(smash_document_load(fixture("missing.json").as_ptr(), &mut doc), SmashStatus::InputError);
        assert_eq!(smash_document_parse(ptr::null(), &mut doc), SmashStatus::NullArgument);
        assert_eq!(smash_document_parse(bad.as_ptr(), ptr::null_mut()), SmashStatus::NullArgument);
        let invalid = [0xffu8, 0];
        assert_eq!(smash_document_parse(invalid.as_ptr().cast(), &mut doc), SmashStatus::InvalidUtf8);

        let phi = load("negative/non-equivariant-phi.json");
        let mut sm = ptr::null_mut();
        assert_eq!(smash_document_smash(phi, &mut sm), SmashStatus::CheckFailed);
        assert!(last_error().contains("prestack.phi.source"));
        assert!(sm.is_null());
        smash_document_free(phi);

        let cat = load("category-z2.json");
        assert_eq!(smash_document_smash(cat, &mut sm), SmashStatus::InputError);
        smash_document_free(cat);

        assert!(!smash_report_passed(ptr::null()));
        smash_document_free(ptr::null_mut());
        smash_report_free(ptr::null_mut());
        smash_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/smash.h")).unwrap();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|l| l.split('(').next().unwrap())
        .collect();
    assert_eq!(exports.len(), 17);
    for f in exports {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct SmashDocument SmashDocument;"));
    assert!(header.contains("SMASH_STATUS_INPUT_ERROR = 2"));
}
