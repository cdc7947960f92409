use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use dgalois_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn last_error() -> String {
    let p = dg_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn weyl_report_for_e6() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(dg_weyl_report_new(c("E6").as_ptr(), 6, 0, &mut r), DgStatus::Ok);
        assert_eq!(dg_weyl_report_group_order(r), 51_840);
        assert_eq!(dg_weyl_report_orbit_size(r), 27);
        assert!(dg_weyl_report_cycle_type_count(r) > 0);
        let j = dg_weyl_report_to_json(r);
        assert!(CStr::from_ptr(j).to_str().unwrap().contains("\"group_order\": 51840"));
        dg_string_free(j);
        dg_weyl_report_free(r);
    }
}

#[test]
fn weyl_errors_map_to_status() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(dg_weyl_report_new(c("G").as_ptr(), 2, 0, &mut r), DgStatus::BadInput);
        assert!(last_error().contains("G"));
        assert_eq!(dg_weyl_report_new(c("E7").as_ptr(), 7, 10, &mut r), DgStatus::ResourceCap);
        assert_eq!(dg_weyl_report_new(ptr::null(), 7, 0, &mut r), DgStatus::NullPointer);
        assert!(r.is_null());
    }
}

#[test]
fn strict_transitivity_toy_cases() {
    unsafe {
        let mut out = false;
        let parts = [3usize, 3, 4, 2];
        let lengths = [2usize, 2];
        assert_eq!(dg_is_strictly_transitive(parts.as_ptr(), lengths.as_ptr(), 2, 6, &mut out), DgStatus::Ok);
        assert!(out);
        let parts = [3usize, 3, 3, 2, 1];
        let lengths = [2usize, 3];
        assert_eq!(dg_is_strictly_transitive(parts.as_ptr(), lengths.as_ptr(), 2, 6, &mut out), DgStatus::Ok);
        assert!(!out);
        assert_eq!(dg_is_strictly_transitive(parts.as_ptr(), lengths.as_ptr(), 2, 7, &mut out), DgStatus::BadInput);
    }
}

#[test]
fn build_verify_and_mutate() {
    unsafe {
        let mut s = ptr::null_mut();
        let st = dg_system_build(c("sl2").as_ptr(), c("transpose-inverse").as_ptr(), 2, c("4,9,16").as_ptr(), &mut s);
        assert_eq!(st, DgStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(dg_system_verify(s, &mut r), DgStatus::Ok);
        assert!(dg_report_passed(r));
        assert_eq!(dg_report_failed_count(r), 0);
        assert!(dg_report_check_count(r) >= 10);
        dg_report_free(r);

        // JSON round trip through C strings
        let j = dg_system_to_json(s);
        let mut s2 = ptr::null_mut();
        assert_eq!(dg_system_from_json(j, &mut s2), DgStatus::Ok);
        dg_string_free(j);

        let mut bad = ptr::null_mut();
        assert_eq!(dg_system_mutate(s2, c("zero-nilpotent").as_ptr(), &mut bad), DgStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(dg_system_verify(bad, &mut r), DgStatus::VerificationFailed);
        assert_eq!(dg_report_failed_count(r), 1);
        let rj = dg_report_to_json(r);
        assert!(CStr::from_ptr(rj).to_str().unwrap().contains("nilpotent-kernel:16"));
        dg_string_free(rj);
        dg_report_free(r);
        dg_system_free(bad);
        dg_system_free(s2);
        dg_system_free(s);
    }
}

#[test]
fn bad_build_inputs() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(dg_system_build(c("sl2").as_ptr(), c("trivial").as_ptr(), 1, c("1,2").as_ptr(), &mut s), DgStatus::BadInput);
        assert!(last_error().contains("3 points"));
        assert_eq!(dg_system_build(c("sl2").as_ptr(), c("sideways").as_ptr(), 1, c("1,2,3").as_ptr(), &mut s), DgStatus::BadInput);
        assert_eq!(dg_system_from_json(c("{").as_ptr(), &mut s), DgStatus::BadInput);
        assert!(s.is_null());
        let mut r = ptr::null_mut();
        assert_eq!(dg_system_verify(ptr::null(), &mut r), DgStatus::NullPointer);
        dg_system_free(ptr::null_mut());
        dg_report_free(ptr::null_mut());
    }
}

#[test]
fn reproduce_fixture_json() {
    unsafe {
        let mut j = ptr::null_mut();
        assert_eq!(dg_reproduce(c("sl2-toric").as_ptr(), &mut j), DgStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(j).to_str().unwrap()).unwrap();
        assert_eq!(v["passed"], true);
        dg_string_free(j);
        assert_eq!(dg_reproduce(c("nope").as_ptr(), &mut j), DgStatus::BadInput);
    }
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/dgalois.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["dg_system_build", "dg_system_verify", "dg_weyl_report_new", "DG_STATUS_RESOURCE_CAP", "typedef struct DgSystem DgSystem"] {
        assert!(text.contains(name), "{name}");
    }
    let Ok(out) = Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"]).arg(&header).output() else {
        eprintln!("no C compiler; skipped the syntax check");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
