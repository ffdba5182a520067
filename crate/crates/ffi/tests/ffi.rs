use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use uptrans_ffi::*;

fn new_session() -> *mut UptransSession {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { uptrans_session_new(&mut s) }, UPTRANS_OK);
    assert!(!s.is_null());
    s
}

fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { uptrans_string_free(p) };
    s
}

fn last_error() -> Option<String> {
    let p = uptrans_last_error();
    if p.is_null() {
        None
    } else {
        Some(unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
    }
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(uptrans_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn normalize_square() {
    let s = new_session();
    let t = CString::new("mult (3 : nat) (4 : nat)").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { uptrans_session_normalize(s, t.as_ptr(), &mut out) }, UPTRANS_OK);
    assert_eq!(take(out), "(12 : nat)");
    unsafe { uptrans_session_free(s) };
}

#[test]
fn budget_exhaustion_is_reported() {
    let s = new_session();
    assert_eq!(unsafe { uptrans_session_set_budget(s, 10) }, UPTRANS_OK);
    let t = CString::new("pow (3 : nat) (5 : nat)").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { uptrans_session_normalize(s, t.as_ptr(), &mut out) }, UPTRANS_ERR_BUDGET);
    take(out);
    assert!(last_error().unwrap().contains("budget"));
    unsafe { uptrans_session_free(s) };
}

#[test]
fn load_relates_and_transports() {
    let s = new_session();
    let m = CString::new(
        "relate type nat N via equiv_nat_N rel R_nat_N coh coh_nat_N\n\
         relate term O N0 by RO\n\
         relate term S succ_N by RS\n\
         relate term mult mult_N by univrel_mult\n\
         transport sq_N from square whitebox\n",
    )
    .unwrap();
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { uptrans_session_load(s, m.as_ptr(), &mut json) }, UPTRANS_OK);
    let json = take(json);
    let last = json.lines().last().unwrap();
    assert!(last.contains("\"name\":\"sq_N\""), "{}", last);
    assert!(last.contains("\"status\":\"ok\""), "{}", last);

    let t = CString::new("sq_N (7 : N)").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { uptrans_session_normalize(s, t.as_ptr(), &mut out) }, UPTRANS_OK);
    assert_eq!(take(out), "(49 : N)");
    unsafe { uptrans_session_free(s) };
}

#[test]
fn failing_item_sets_fail_and_error() {
    let s = new_session();
    let m = CString::new("transport x_N from no_such_def whitebox\n").unwrap();
    assert_eq!(unsafe { uptrans_session_load(s, m.as_ptr(), ptr::null_mut()) }, UPTRANS_FAIL);
    assert!(last_error().unwrap().starts_with("x_N"));
    unsafe { uptrans_session_free(s) };
}

#[test]
fn parse_errors() {
    let s = new_session();
    let m = CString::new("relate type nat").unwrap();
    assert_eq!(unsafe { uptrans_session_load(s, m.as_ptr(), ptr::null_mut()) }, UPTRANS_ERR_PARSE);
    let t = CString::new("fun (x : nat) =>").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { uptrans_session_normalize(s, t.as_ptr(), &mut out) }, UPTRANS_ERR_PARSE);
    assert!(out.is_null());
    assert!(last_error().is_some());
    unsafe { uptrans_session_free(s) };
}

#[test]
fn null_and_utf8_arguments() {
    let mut out = ptr::null_mut();
    let t = CString::new("O").unwrap();
    assert_eq!(unsafe { uptrans_session_normalize(ptr::null_mut(), t.as_ptr(), &mut out) }, UPTRANS_ERR_NULL);
    assert_eq!(unsafe { uptrans_session_new(ptr::null_mut()) }, UPTRANS_ERR_NULL);
    let s = new_session();
    assert_eq!(unsafe { uptrans_session_load(s, ptr::null(), ptr::null_mut()) }, UPTRANS_ERR_NULL);
    let bad = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { uptrans_session_load(s, bad.as_ptr() as *const c_char, ptr::null_mut()) },
        UPTRANS_ERR_UTF8
    );
    unsafe {
        uptrans_session_free(s);
        uptrans_session_free(ptr::null_mut());
        uptrans_string_free(ptr::null_mut());
    }
}

#[test]
fn successful_call_clears_error() {
    let s = new_session();
    let m = CString::new("relate type nat").unwrap();
    unsafe { uptrans_session_load(s, m.as_ptr(), ptr::null_mut()) };
    assert!(last_error().is_some());
    assert_eq!(unsafe { uptrans_session_set_budget(s, 1000) }, UPTRANS_OK);
    assert!(last_error().is_none());
    unsafe { uptrans_session_free(s) };
}

#[test]
fn header_declares_every_entry_point() {
    let h = include_str!("../include/uptrans.h");
    for f in [
        "uptrans_session_new",
        "uptrans_session_free",
        "uptrans_session_set_budget",
        "uptrans_session_load",
        "uptrans_session_replay",
        "uptrans_session_normalize",
        "uptrans_last_error",
        "uptrans_string_free",
        "uptrans_version",
        "typedef struct UptransSession UptransSession",
    ] {
        assert!(h.contains(f), "{}", f);
    }
}
