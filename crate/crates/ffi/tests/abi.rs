use std::ffi::{CStr, CString};
use std::ptr;

use sds_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    sds_string_free(p);
    s
}

unsafe fn form(text: &str) -> *mut SdsForm {
    let mut f = ptr::null_mut();
    assert_eq!(sds_form_parse(c(text).as_ptr(), &mut f), SdsStatus::Ok);
    f
}

#[test]
fn parse_serialize_classify() {
    unsafe {
        let f = form("2 2\n1 1 1\n1 2 0\n");
        let mut text = ptr::null_mut();
        assert_eq!(sds_form_serialize(f, &mut text), SdsStatus::Ok);
        assert_eq!(take_string(text), "2 2\n1 2 0\n1 1 1\n");
        let mut class = SdsSignClass::Mixed;
        assert_eq!(sds_form_classify(f, &mut class), SdsStatus::Ok);
        assert_eq!(class, SdsSignClass::AllNonnegative);
        sds_form_free(f);
    }
}

#[test]
fn parse_error_sets_message() {
    unsafe {
        let mut f = ptr::null_mut();
        let s = sds_form_parse(c("2 2\n1 2 0\nfoo 1 1\n").as_ptr(), &mut f);
        assert_eq!(s, SdsStatus::Parse);
        assert!(f.is_null());
        let msg = CStr::from_ptr(sds_last_error()).to_str().unwrap();
        assert!(msg.contains("line 3"), "{msg}");
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(sds_form_parse(ptr::null(), &mut f), SdsStatus::NullPointer);
        let mut class = SdsSignClass::Mixed;
        assert_eq!(sds_form_classify(ptr::null(), &mut class), SdsStatus::NullPointer);
        sds_form_free(ptr::null_mut());
        sds_string_free(ptr::null_mut());
    }
}

#[test]
fn prove_and_replay() {
    unsafe {
        let f = form("2 2\n1 2 0\n-1 1 1\n1 0 2\n");
        let mut cert = ptr::null_mut();
        assert_eq!(sds_prove(f, SdsGoal::ProveStrictPositive, 3, 2, &mut cert), SdsStatus::Ok);
        let mut verdict = SdsVerdict::Undecided;
        assert_eq!(sds_certificate_verdict(cert, &mut verdict), SdsStatus::Ok);
        assert_eq!(verdict, SdsVerdict::Positive);

        let mut text = ptr::null_mut();
        assert_eq!(sds_certificate_text(cert, &mut text), SdsStatus::Ok);
        let text = take_string(text);
        let mut back = ptr::null_mut();
        assert_eq!(sds_certificate_parse(c(&text).as_ptr(), &mut back), SdsStatus::Ok);
        let mut valid = false;
        assert_eq!(sds_certificate_replay(f, back, &mut valid), SdsStatus::Ok);
        assert!(valid);

        let other = form("2 2\n1 2 0\n1 0 2\n");
        assert_eq!(sds_certificate_replay(other, back, &mut valid), SdsStatus::Ok);
        assert!(!valid);

        sds_certificate_free(back);
        sds_certificate_free(cert);
        sds_form_free(other);
        sds_form_free(f);
    }
}

#[test]
fn find_zero() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(sds_system_parse(c("2 1\n1 1 0\n-1 0 1\n").as_ptr(), &mut sys), SdsStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(sds_find_zero(sys, 1, 1, &mut report), SdsStatus::Ok);
        let mut verdict = SdsZeroVerdict::Undecided;
        assert_eq!(sds_zero_report_verdict(report, &mut verdict), SdsStatus::Ok);
        assert_eq!(verdict, SdsZeroVerdict::ZeroFound);
        let mut text = ptr::null_mut();
        assert_eq!(sds_zero_report_text(report, &mut text), SdsStatus::Ok);
        assert!(take_string(text).contains("witness_point=1/2,1/2"));
        let mut valid = false;
        assert_eq!(sds_zero_report_replay(sys, report, &mut valid), SdsStatus::Ok);
        assert!(valid);
        sds_zero_report_free(report);
        sds_system_free(sys);

        let mut bad = ptr::null_mut();
        let s = sds_system_parse(c("2 1\n1/2 1 0\n").as_ptr(), &mut bad);
        assert_eq!(s, SdsStatus::InvalidInput);
    }
}

#[test]
fn header_lists_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/sds.h")).unwrap();
    for name in [
        "sds_form_parse",
        "sds_prove",
        "sds_certificate_replay",
        "sds_find_zero",
        "sds_last_error",
        "typedef struct SdsForm SdsForm",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
